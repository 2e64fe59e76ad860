//! Fourier–Motzkin elimination over small systems of linear inequalities.
//!
//! Rows are kept in the form `Σ_k a_k x_k ≤ b`. Eliminating `x` combines
//! every row with a positive `x` coefficient with every row with a negative
//! one, after scaling both so the `x` coefficients are `±1`. Afterwards rows
//! are scaled by their largest coefficient magnitude, exact duplicates and
//! rows dominated by a row with the same left-hand side and a smaller
//! right-hand side are dropped, and rows with no variables that hold are
//! discarded. Only this syntactic redundancy removal is done; the systems
//! handled here have a handful of rows.
//!
//! Arithmetic is plain `f64`. With unit coefficients, as in the coding
//! scheme's rate conditions, every step is a single addition of right-hand
//! sides, so the projected bounds come out bit-identical to the closed forms
//! evaluated in the same order.

use std::fmt;

use crate::error::{Error, Result};

/// Comparison slack for coefficients and trivially-true rows.
pub const FME_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Le,
    Ge,
}

/// `Σ_k coeffs[k]·x_k (sense) constant`.
#[derive(Debug, Clone, PartialEq)]
pub struct Inequality {
    pub coeffs: Vec<f64>,
    pub sense: Sense,
    pub constant: f64,
}

impl Inequality {
    fn to_le(&self) -> (Vec<f64>, f64) {
        match self.sense {
            Sense::Le => (self.coeffs.clone(), self.constant),
            Sense::Ge => (self.coeffs.iter().map(|c| -c).collect(), -self.constant),
        }
    }

    pub fn holds(&self, x: &[f64], tol: f64) -> bool {
        let lhs: f64 = self.coeffs.iter().zip(x).map(|(a, v)| a * v).sum();
        match self.sense {
            Sense::Le => lhs <= self.constant + tol,
            Sense::Ge => lhs >= self.constant - tol,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinIneqSystem {
    vars: Vec<String>,
    rows: Vec<Inequality>,
}

impl LinIneqSystem {
    pub fn new<S: Into<String>>(vars: impl IntoIterator<Item = S>) -> Result<Self> {
        let vars: Vec<String> = vars.into_iter().map(Into::into).collect();
        for (i, v) in vars.iter().enumerate() {
            if vars[..i].contains(v) {
                return Err(Error::DuplicateName(v.clone()));
            }
        }
        Ok(Self { vars, rows: Vec::new() })
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn rows(&self) -> &[Inequality] {
        &self.rows
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    /// Adds `Σ terms (sense) constant`; repeated names accumulate.
    pub fn push(&mut self, terms: &[(&str, f64)], sense: Sense, constant: f64) -> Result<()> {
        let mut coeffs = vec![0.0; self.vars.len()];
        for &(name, c) in terms {
            coeffs[self.index_of(name)?] += c;
        }
        self.push_row(Inequality { coeffs, sense, constant })
    }

    pub fn push_row(&mut self, row: Inequality) -> Result<()> {
        if row.coeffs.len() != self.vars.len() {
            return Err(Error::CoefficientLength {
                got: row.coeffs.len(),
                expected: self.vars.len(),
            });
        }
        if !row.constant.is_finite() || row.coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidParameter("inequality has non-finite entries".into()));
        }
        self.rows.push(row);
        Ok(())
    }

    /// Whether the point satisfies every row within `tol`.
    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        self.rows.iter().all(|r| r.holds(x, tol))
    }

    /// Upper bounds `c` from rows of the form `x_k ≤ c` (after scaling).
    pub fn upper_bounds(&self, var: &str) -> Result<Vec<f64>> {
        let k = self.index_of(var)?;
        Ok(self
            .rows
            .iter()
            .filter_map(|r| {
                let (a, b) = r.to_le();
                let only_k = a.iter().enumerate().all(|(i, &c)| i == k || c.abs() <= FME_TOL);
                (only_k && a[k] > FME_TOL).then(|| b / a[k])
            })
            .collect())
    }

    /// A row with no variables and a violated constant.
    pub fn is_trivially_infeasible(&self) -> bool {
        self.rows.iter().any(|r| {
            let (a, b) = r.to_le();
            a.iter().all(|c| c.abs() <= FME_TOL) && b < -FME_TOL
        })
    }
}

/// Projects `sys` onto the variables other than `var`.
pub fn eliminate(sys: &LinIneqSystem, var: &str) -> Result<LinIneqSystem> {
    let k = sys.index_of(var)?;
    let mut upper = Vec::new();
    let mut lower = Vec::new();
    let mut rest: Vec<(Vec<f64>, f64)> = Vec::new();
    for row in &sys.rows {
        let (mut a, mut b) = row.to_le();
        let c = a[k];
        if c.abs() <= FME_TOL {
            a.remove(k);
            rest.push((a, b));
            continue;
        }
        let scale = c.abs();
        if scale != 1.0 {
            for x in a.iter_mut() {
                *x /= scale;
            }
            b /= scale;
        }
        if c > 0.0 {
            upper.push((a, b));
        } else {
            lower.push((a, b));
        }
    }
    for (pa, pb) in &upper {
        for (na, nb) in &lower {
            let mut a: Vec<f64> = pa.iter().zip(na).map(|(x, y)| x + y).collect();
            a.remove(k);
            rest.push((a, pb + nb));
        }
    }
    let mut vars = sys.vars.clone();
    vars.remove(k);
    Ok(LinIneqSystem {
        vars,
        rows: prune(rest),
    })
}

/// Eliminates `order` in sequence.
pub fn eliminate_all(sys: &LinIneqSystem, order: &[&str]) -> Result<LinIneqSystem> {
    order.iter().try_fold(sys.clone(), |s, v| eliminate(&s, v))
}

fn prune(rows: Vec<(Vec<f64>, f64)>) -> Vec<Inequality> {
    let mut kept: Vec<(Vec<f64>, f64)> = Vec::new();
    for (mut a, mut b) in rows {
        for c in a.iter_mut() {
            if c.abs() <= FME_TOL {
                *c = 0.0;
            }
        }
        let m = a.iter().fold(0.0f64, |m, c| m.max(c.abs()));
        if m == 0.0 {
            if b >= -FME_TOL {
                continue;
            }
        } else if m != 1.0 {
            for c in a.iter_mut() {
                *c /= m;
            }
            b /= m;
        }
        match kept.iter_mut().find(|(ka, _)| *ka == a) {
            Some(existing) => existing.1 = existing.1.min(b),
            None => kept.push((a, b)),
        }
    }
    kept.into_iter()
        .map(|(coeffs, constant)| Inequality {
            coeffs,
            sense: Sense::Le,
            constant,
        })
        .collect()
}

impl fmt::Display for LinIneqSystem {
    /// One row per line. Rows whose coefficients are all nonpositive print as
    /// `≥` rows with the signs flipped.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.rows {
            let (mut a, mut b) = row.to_le();
            let mut op = "<=";
            if a.iter().all(|&c| c <= 0.0) && a.iter().any(|&c| c < 0.0) {
                a.iter_mut().for_each(|c| *c = -*c);
                b = -b;
                op = ">=";
            }
            let mut first = true;
            for (name, &c) in self.vars.iter().zip(&a) {
                if c == 0.0 {
                    continue;
                }
                let sign = if c < 0.0 { "-" } else { "+" };
                let mag = c.abs();
                match (first, c < 0.0) {
                    (true, false) => {}
                    (true, true) => write!(f, "-")?,
                    (false, _) => write!(f, " {sign} ")?,
                }
                if mag != 1.0 {
                    write!(f, "{mag} ")?;
                }
                write!(f, "{name}")?;
                first = false;
            }
            if first {
                write!(f, "0")?;
            }
            writeln!(f, " {op} {b}")?;
        }
        Ok(())
    }
}

/// Parses one inequality per line: `2 R_I + 1 R_J <= 0.5`, with `>=`, `=`
/// (two rows), `≤`/`≥` accepted. `#` starts a comment. An optional
/// `vars NAME...` line (before any inequality) declares the variables;
/// without it the scheme's `R_I R_J R_M` are assumed.
pub fn parse_system(text: &str) -> Result<LinIneqSystem> {
    let mut sys = LinIneqSystem::new(["R_I", "R_J", "R_M"])?;
    let mut seen_row = false;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let at = |msg: String| Error::InvalidParameter(format!("line {}: {msg}", lineno + 1));
        if let Some(names) = line
            .strip_prefix("vars")
            .filter(|r| r.is_empty() || r.starts_with(char::is_whitespace))
        {
            if seen_row {
                return Err(at("`vars` must come before the inequalities".into()));
            }
            sys = LinIneqSystem::new(names.split_whitespace())?;
            continue;
        }
        let line = line.replace('≤', "<=").replace('≥', ">=");
        let (lhs, op, rhs) = ["<=", ">=", "="]
            .iter()
            .find_map(|op| line.split_once(op).map(|(l, r)| (l, *op, r)))
            .ok_or_else(|| at(format!("no comparison operator in `{line}`")))?;
        let constant: f64 = rhs
            .trim()
            .parse()
            .map_err(|_| at(format!("right-hand side `{}` is not a number", rhs.trim())))?;
        let terms = parse_terms(lhs).map_err(|e| match e {
            Error::UnknownVariable(t) => Error::UnknownVariable(format!("{t} (line {})", lineno + 1)),
            Error::InvalidParameter(m) => at(m),
            other => other,
        })?;
        let mut coeffs = vec![0.0; sys.vars.len()];
        for (name, c) in terms {
            let k = sys
                .index_of(&name)
                .map_err(|_| Error::UnknownVariable(format!("{name} (line {})", lineno + 1)))?;
            coeffs[k] += c;
        }
        let senses: &[Sense] = match op {
            "<=" => &[Sense::Le],
            ">=" => &[Sense::Ge],
            _ => &[Sense::Le, Sense::Ge],
        };
        for &sense in senses {
            sys.push_row(Inequality {
                coeffs: coeffs.clone(),
                sense,
                constant,
            })
            .map_err(|e| at(e.to_string()))?;
        }
        seen_row = true;
    }
    Ok(sys)
}

fn parse_terms(lhs: &str) -> Result<Vec<(String, f64)>> {
    // split on signs, except the sign of an exponent such as `1e-3`
    let mut spaced = String::with_capacity(lhs.len() * 2);
    let mut prev: Option<char> = None;
    let mut prev2: Option<char> = None;
    for ch in lhs.chars() {
        let exponent = matches!(prev, Some('e' | 'E')) && prev2.is_some_and(|c| c.is_ascii_digit() || c == '.');
        match ch {
            '+' | '-' if !exponent => {
                spaced.push(' ');
                spaced.push(ch);
                spaced.push(' ');
            }
            '*' => spaced.push(' '),
            _ => spaced.push(ch),
        }
        prev2 = prev;
        prev = Some(ch);
    }
    let mut out = Vec::new();
    let mut sign = 1.0;
    let mut coef: Option<f64> = None;
    let mut expect_term = true;
    for tok in spaced.split_whitespace() {
        match tok {
            "+" | "-" => {
                if coef.is_some() {
                    return Err(Error::InvalidParameter(format!("dangling coefficient before `{tok}`")));
                }
                if !expect_term && !out.is_empty() {
                    expect_term = true;
                    sign = 1.0;
                }
                if tok == "-" {
                    sign = -sign;
                }
            }
            t if t.parse::<f64>().is_ok() => {
                if coef.is_some() {
                    return Err(Error::InvalidParameter(format!("two coefficients in a row at `{t}`")));
                }
                coef = Some(t.parse().unwrap());
            }
            t if t.chars().next().is_some_and(|c| c.is_alphabetic() || c == '_')
                && t.chars().all(|c| c.is_alphanumeric() || c == '_') =>
            {
                if !expect_term {
                    return Err(Error::InvalidParameter(format!("missing `+` or `-` before `{t}`")));
                }
                out.push((t.to_string(), sign * coef.take().unwrap_or(1.0)));
                sign = 1.0;
                expect_term = false;
            }
            t => return Err(Error::UnknownVariable(t.to_string())),
        }
    }
    if coef.is_some() {
        return Err(Error::InvalidParameter(
            "constant terms belong on the right-hand side".into(),
        ));
    }
    Ok(out)
}

/// The five information terms the scheme's rate conditions depend on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchemeInfo {
    /// `I(U;S)`
    pub i_u_s: f64,
    /// `I(U,V;S)`
    pub i_uv_s: f64,
    /// `I(V;Ξ,Z|U)`
    pub i_v_xiz_given_u: f64,
    /// `I(U,V;Y)`
    pub i_uv_y: f64,
    /// `I(V;Y|U)`
    pub i_v_y_given_u: f64,
}

impl SchemeInfo {
    /// In the order `I(U;S), I(U,V;S), I(V;Ξ,Z|U), I(U,V;Y), I(V;Y|U)`.
    pub fn from_array(v: [f64; 5]) -> Self {
        Self {
            i_u_s: v[0],
            i_uv_s: v[1],
            i_v_xiz_given_u: v[2],
            i_uv_y: v[3],
            i_v_y_given_u: v[4],
        }
    }

    pub fn validate(&self) -> Result<()> {
        let v = [
            self.i_u_s,
            self.i_uv_s,
            self.i_v_xiz_given_u,
            self.i_uv_y,
            self.i_v_y_given_u,
        ];
        if v.iter().any(|x| !(x.is_finite() && *x >= 0.0)) {
            return Err(Error::InconsistentInformation(format!(
                "all values must be finite and >= 0, got {v:?}"
            )));
        }
        if self.i_uv_y < self.i_v_y_given_u {
            return Err(Error::InconsistentInformation(format!(
                "I(U,V;Y) = {} < I(V;Y|U) = {}",
                self.i_uv_y, self.i_v_y_given_u
            )));
        }
        if self.i_uv_s < self.i_u_s {
            return Err(Error::InconsistentInformation(format!(
                "I(U,V;S) = {} < I(U;S) = {}",
                self.i_uv_s, self.i_u_s
            )));
        }
        Ok(())
    }

    /// `I(U,V;Y) − I(U,V;S)`, `I(V;Y|U) − I(V;Ξ,Z|U)`,
    /// `I(U,V;Y) − I(U;S) − I(V;Ξ,Z|U)`.
    pub fn closed_forms(&self) -> [f64; 3] {
        [
            self.i_uv_y - self.i_uv_s,
            self.i_v_y_given_u - self.i_v_xiz_given_u,
            self.i_uv_y - self.i_u_s - self.i_v_xiz_given_u,
        ]
    }

    /// The scheme's rate conditions over `(R_I, R_J, R_M)`, including
    /// nonnegativity.
    pub fn scheme_system(&self) -> LinIneqSystem {
        let mut sys = LinIneqSystem::new(["R_I", "R_J", "R_M"]).expect("distinct names");
        let rows: [(&[(&str, f64)], Sense, f64); 8] = [
            (&[("R_I", 1.0)], Sense::Ge, self.i_u_s),
            (&[("R_I", 1.0), ("R_J", 1.0)], Sense::Ge, self.i_uv_s),
            (&[("R_J", 1.0)], Sense::Ge, self.i_v_xiz_given_u),
            (&[("R_I", 1.0), ("R_J", 1.0), ("R_M", 1.0)], Sense::Le, self.i_uv_y),
            (&[("R_J", 1.0), ("R_M", 1.0)], Sense::Le, self.i_v_y_given_u),
            (&[("R_I", 1.0)], Sense::Ge, 0.0),
            (&[("R_J", 1.0)], Sense::Ge, 0.0),
            (&[("R_M", 1.0)], Sense::Ge, 0.0),
        ];
        for (terms, sense, c) in rows {
            sys.push(terms, sense, c).expect("declared variables");
        }
        sys
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProjectedRates {
    /// Smallest upper bound on `R_M` in the projected system.
    pub bound: f64,
    pub closed_forms: [f64; 3],
    /// The system over `R_M` alone.
    pub system: LinIneqSystem,
    /// False when no nonnegative `R_M` satisfies the projection.
    pub feasible: bool,
}

/// Builds the scheme's rate conditions, eliminates `R_I` and then `R_J`, and
/// reads off the bound on `R_M`.
pub fn project_scheme_rates(mi: &SchemeInfo) -> Result<ProjectedRates> {
    project_scheme_rates_in_order(mi, &["R_I", "R_J"])
}

/// As [`project_scheme_rates`] with an explicit elimination order.
pub fn project_scheme_rates_in_order(mi: &SchemeInfo, order: &[&str]) -> Result<ProjectedRates> {
    mi.validate()?;
    let system = eliminate_all(&mi.scheme_system(), order)?;
    let bounds = system.upper_bounds("R_M")?;
    let bound = bounds.iter().copied().fold(f64::INFINITY, f64::min);
    let closed_forms = mi.closed_forms();
    let want = closed_forms.iter().copied().fold(f64::INFINITY, f64::min);
    assert!(
        (bound - want).abs() <= FME_TOL,
        "projected bound {bound} differs from closed forms {closed_forms:?}"
    );
    let feasible = bound >= 0.0 && !system.is_trivially_infeasible();
    Ok(ProjectedRates {
        bound,
        closed_forms,
        system,
        feasible,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn unused_variable_is_just_dropped() {
        let mut sys = LinIneqSystem::new(["x", "y"]).unwrap();
        sys.push(&[("x", 1.0)], Sense::Le, 3.0).unwrap();
        let out = eliminate(&sys, "y").unwrap();
        assert_eq!(out.vars(), ["x"]);
        assert_eq!(out.rows().len(), 1);
        assert_eq!(out.upper_bounds("x").unwrap(), vec![3.0]);
    }

    #[test]
    fn interval_collapses_to_nothing() {
        let mut sys = LinIneqSystem::new(["x"]).unwrap();
        sys.push(&[("x", 1.0)], Sense::Le, 3.0).unwrap();
        sys.push(&[("x", 1.0)], Sense::Ge, 1.0).unwrap();
        let out = eliminate(&sys, "x").unwrap();
        assert!(out.rows().is_empty() && out.vars().is_empty());

        let mut bad = LinIneqSystem::new(["x"]).unwrap();
        bad.push(&[("x", 1.0)], Sense::Le, 1.0).unwrap();
        bad.push(&[("x", 1.0)], Sense::Ge, 3.0).unwrap();
        assert!(eliminate(&bad, "x").unwrap().is_trivially_infeasible());
    }

    #[test]
    fn duplicates_and_dominated_rows_are_removed() {
        let mut sys = LinIneqSystem::new(["x", "y"]).unwrap();
        sys.push(&[("x", 1.0), ("y", 1.0)], Sense::Le, 2.0).unwrap();
        sys.push(&[("x", 2.0), ("y", 2.0)], Sense::Le, 4.0).unwrap();
        sys.push(&[("x", 1.0), ("y", 1.0)], Sense::Le, 1.0).unwrap();
        sys.push(&[("y", 1.0)], Sense::Ge, 0.0).unwrap();
        let out = eliminate(&sys, "y").unwrap();
        assert_eq!(out.upper_bounds("x").unwrap(), vec![1.0]);
    }

    #[test]
    fn scheme_example_gives_one_half() {
        let mi = SchemeInfo::from_array([0.2, 0.5, 0.3, 1.0, 0.8]);
        let p = project_scheme_rates(&mi).unwrap();
        assert!((p.bound - 0.5).abs() < 1e-15);
        for c in p.closed_forms {
            assert!((c - 0.5).abs() < 1e-15);
        }
        assert!(p.feasible);
    }

    #[test]
    fn zero_leak_and_zero_cloud_information() {
        let mi = SchemeInfo::from_array([0.0, 0.4, 0.0, 1.0, 0.5]);
        let p = project_scheme_rates(&mi).unwrap();
        assert_eq!(p.bound, (1.0f64 - 0.4).min(0.5));
        let zero = project_scheme_rates(&SchemeInfo::from_array([0.0; 5])).unwrap();
        assert_eq!(zero.bound, 0.0);
    }

    #[test]
    fn inconsistent_information_is_rejected() {
        for v in [[0.1, 0.0, 0.0, 1.0, 0.5], [0.0, 0.1, 0.0, 0.4, 0.5], [-0.1, 0.0, 0.0, 1.0, 0.5]] {
            assert!(matches!(
                project_scheme_rates(&SchemeInfo::from_array(v)),
                Err(Error::InconsistentInformation(_))
            ));
        }
    }

    #[test]
    fn parser_reads_the_documented_grammar() {
        let sys = parse_system(
            "# scheme fragment\n2 R_I + 1 R_J <= 0.5\nR_J - R_M >= -1\n-R_M<=0\nR_I = 0.25\n",
        )
        .unwrap();
        assert_eq!(sys.rows().len(), 5);
        assert_eq!(sys.rows()[0].coeffs, vec![2.0, 1.0, 0.0]);
        assert_eq!(sys.rows()[1].coeffs, vec![0.0, 1.0, -1.0]);
        assert_eq!(sys.rows()[1].sense, Sense::Ge);
        assert_eq!(sys.rows()[2].coeffs, vec![0.0, 0.0, -1.0]);
        assert!(parse_system("").unwrap().rows().is_empty());
        let custom = parse_system("vars x y\n3*x - 1e-3 y <= 1").unwrap();
        assert_eq!(custom.rows()[0].coeffs, vec![3.0, -1e-3]);
    }

    #[test]
    fn parser_names_unknown_tokens() {
        let err = parse_system("R_I + R_Q <= 1").unwrap_err();
        assert!(matches!(&err, Error::UnknownVariable(t) if t.starts_with("R_Q")), "{err}");
        let err = parse_system("R_I + $ <= 1").unwrap_err();
        assert!(matches!(&err, Error::UnknownVariable(t) if t.starts_with("$")), "{err}");
        assert!(parse_system("R_I + 1 <= 1").is_err());
        assert!(parse_system("R_I 1").is_err());
    }

    #[test]
    fn display_round_trips() {
        let mi = SchemeInfo::from_array([0.2, 0.5, 0.3, 1.0, 0.8]);
        let sys = mi.scheme_system();
        let again = parse_system(&sys.to_string()).unwrap();
        for (a, b) in sys.rows().iter().zip(again.rows()) {
            assert_eq!(a.to_le(), b.to_le());
        }
    }

    /// Random systems over `(x, y, z)` inside the box `[-1, 1]^3`.
    fn random_system(rng: &mut ChaCha8Rng) -> LinIneqSystem {
        let mut sys = LinIneqSystem::new(["x", "y", "z"]).unwrap();
        for v in ["x", "y", "z"] {
            sys.push(&[(v, 1.0)], Sense::Le, 1.0).unwrap();
            sys.push(&[(v, 1.0)], Sense::Ge, -1.0).unwrap();
        }
        for _ in 0..rng.random_range(2..6) {
            let c: Vec<f64> = (0..3).map(|_| rng.random_range(-1.0..1.0)).collect();
            sys.push(
                &[("x", c[0]), ("y", c[1]), ("z", c[2])],
                Sense::Le,
                rng.random_range(-0.3..0.8),
            )
            .unwrap();
        }
        sys
    }

    /// Exact interval of feasible `z` at `(x, y)`, straight from the rows.
    fn z_interval(sys: &LinIneqSystem, x: f64, y: f64) -> (f64, f64) {
        let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
        for r in sys.rows() {
            let (a, b) = r.to_le();
            let rest = b - a[0] * x - a[1] * y;
            if a[2] > 0.0 {
                hi = hi.min(rest / a[2]);
            } else if a[2] < 0.0 {
                lo = lo.max(rest / a[2]);
            } else if rest < 0.0 {
                return (1.0, -1.0);
            }
        }
        (lo, hi)
    }

    #[test]
    fn projection_matches_grid_membership() {
        const N: usize = 50;
        let grid = |k: usize| -1.0 + 2.0 * k as f64 / (N - 1) as f64;
        let step = 2.0 / (N - 1) as f64;
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let mut compared = 0;
        for _ in 0..40 {
            let sys = random_system(&mut rng);
            let proj = eliminate(&sys, "z").unwrap();
            for i in 0..N {
                for j in 0..N {
                    let (x, y) = (grid(i), grid(j));
                    let on_grid = (0..N).any(|k| sys.contains(&[x, y, grid(k)], 1e-12));
                    let projected = proj.contains(&[x, y], 1e-9);
                    if on_grid {
                        assert!(projected, "grid witness at ({x}, {y}) but projection rejects");
                    } else if projected {
                        // only a sliver thinner than the grid may be missed
                        let (lo, hi) = z_interval(&sys, x, y);
                        assert!(hi - lo < step + 1e-9, "missed interval [{lo}, {hi}]");
                    }
                    compared += 1;
                }
            }
        }
        assert_eq!(compared, 40 * N * N);
    }

    fn random_info(rng: &mut ChaCha8Rng) -> SchemeInfo {
        let i_u_s = rng.random_range(0.0..1.0);
        let i_uv_s = i_u_s + rng.random_range(0.0..1.0);
        let i_v_y_given_u = rng.random_range(0.0..2.0);
        let i_uv_y = i_v_y_given_u + rng.random_range(0.0..1.0);
        SchemeInfo {
            i_u_s,
            i_uv_s,
            i_v_xiz_given_u: rng.random_range(0.0..1.5),
            i_uv_y,
            i_v_y_given_u,
        }
    }

    #[test]
    fn elimination_order_does_not_matter() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..500 {
            let mi = random_info(&mut rng);
            let a = project_scheme_rates_in_order(&mi, &["R_I", "R_J"]).unwrap();
            let b = project_scheme_rates_in_order(&mi, &["R_J", "R_I"]).unwrap();
            assert!((a.bound - b.bound).abs() <= 1e-12);
            assert_eq!(a.feasible, b.feasible);
        }
    }

    #[test]
    fn projected_rates_have_witnesses() {
        // on the 0.01 lattice: every R_M up to the bound extends to (R_I, R_J)
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..30 {
            let raw = random_info(&mut rng);
            let snap = |v: f64| (v * 100.0).round() as i64;
            let [a, b, e, c, d] = [raw.i_u_s, raw.i_uv_s, raw.i_v_xiz_given_u, raw.i_uv_y, raw.i_v_y_given_u].map(snap);
            let mi = SchemeInfo::from_array([a, b, e, c, d].map(|v| v as f64 / 100.0));
            let p = project_scheme_rates(&mi).unwrap();
            let top = (p.bound * 100.0).round() as i64;
            let witness = |m: i64| {
                (0..=c).any(|rj| {
                    let lo = a.max(b - rj).max(0);
                    rj >= e && rj + m <= d && lo <= c - rj - m
                })
            };
            for m in 0..=top.max(-1) {
                assert!(witness(m), "no witness for R_M = {m}/100 under {mi:?}");
            }
            if top >= -1 {
                assert!(!witness(top + 1));
            }
        }
    }

    proptest! {
        #[test]
        fn projection_is_min_of_closed_forms(
            a in 0.0f64..1.0, db in 0.0f64..1.0, e in 0.0f64..1.5, d in 0.0f64..2.0, dc in 0.0f64..1.0
        ) {
            let mi = SchemeInfo { i_u_s: a, i_uv_s: a + db, i_v_xiz_given_u: e, i_uv_y: d + dc, i_v_y_given_u: d };
            let p = project_scheme_rates(&mi).unwrap();
            let [x, y, z] = mi.closed_forms();
            prop_assert_eq!(p.bound, x.min(y).min(z));
        }
    }
}
