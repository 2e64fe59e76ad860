//! Jointly Gaussian systems built as linear maps of independent base sources.
//!
//! Every named variable is a [`LinearExpr`] over a fixed set of independent
//! zero-mean sources, so any covariance block is `L · diag(var) · Lᵀ` and is
//! exact up to floating point. Information quantities are in nats.
//!
//! Singular blocks are common here (a constant `Ξ`, an auxiliary that is an
//! exact multiple of the state), so log-determinants are taken over the
//! eigenvalues above `REL_EIG_TOL` times the largest eigenvalue of the joint
//! block. When the joint rank falls short of the sum of the marginal ranks the
//! two sets share a noiseless linear component and the mutual information is
//! `+∞`.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};

/// Relative eigenvalue floor used for ranks, pseudo-determinants and
/// pseudo-inverses.
pub const REL_EIG_TOL: f64 = 1e-12;

/// Default absolute tolerance on cross-covariances for independence checks.
pub const INDEPENDENCE_TOL: f64 = 1e-9;

/// Named independent zero-mean Gaussian sources.
#[derive(Debug, Clone, PartialEq)]
pub struct BaseSources {
    names: Vec<String>,
    variances: Vec<f64>,
}

impl BaseSources {
    pub fn new<I, S>(sources: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, f64)>,
        S: Into<String>,
    {
        let mut names: Vec<String> = Vec::new();
        let mut variances = Vec::new();
        for (name, var) in sources {
            let name = name.into();
            if !(var >= 0.0) || !var.is_finite() {
                return Err(Error::NegativeVariance { name, value: var });
            }
            if names.contains(&name) {
                return Err(Error::DuplicateName(name));
            }
            names.push(name);
            variances.push(var);
        }
        Ok(Self { names, variances })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn variances(&self) -> &[f64] {
        &self.variances
    }
}

/// Coefficients of a variable on each base source.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearExpr(Vec<f64>);

impl LinearExpr {
    pub fn zeros(len: usize) -> Self {
        Self(vec![0.0; len])
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.0
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self(self.0.iter().map(|c| c * factor).collect())
    }
}

impl From<Vec<f64>> for LinearExpr {
    fn from(v: Vec<f64>) -> Self {
        Self(v)
    }
}

/// Outcome of [`GaussianSystem::check_independence`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Independence {
    pub independent: bool,
    pub max_abs_cross_cov: f64,
}

/// Named variables that are linear combinations of [`BaseSources`].
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianSystem {
    sources: BaseSources,
    vars: Vec<(String, LinearExpr)>,
}

impl GaussianSystem {
    pub fn new(sources: BaseSources) -> Self {
        Self {
            sources,
            vars: Vec::new(),
        }
    }

    pub fn sources(&self) -> &BaseSources {
        &self.sources
    }

    pub fn variable_names(&self) -> impl Iterator<Item = &str> {
        self.vars.iter().map(|(n, _)| n.as_str())
    }

    /// Adds (or replaces) a variable given by its full coefficient vector.
    pub fn set_var(&mut self, name: &str, expr: LinearExpr) -> Result<()> {
        if expr.0.len() != self.sources.len() {
            return Err(Error::CoefficientLength {
                got: expr.0.len(),
                expected: self.sources.len(),
            });
        }
        match self.vars.iter_mut().find(|(n, _)| n == name) {
            Some(slot) => slot.1 = expr,
            None => self.vars.push((name.to_string(), expr)),
        }
        Ok(())
    }

    /// Adds a variable as a sparse combination `Σ coef · source`.
    pub fn define(&mut self, name: &str, terms: &[(&str, f64)]) -> Result<()> {
        let mut expr = LinearExpr::zeros(self.sources.len());
        for &(src, coef) in terms {
            let k = self
                .sources
                .index_of(src)
                .ok_or_else(|| Error::UnknownVariable(src.to_string()))?;
            expr.0[k] += coef;
        }
        self.set_var(name, expr)
    }

    pub fn expr(&self, name: &str) -> Result<&LinearExpr> {
        self.vars
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, e)| e)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    /// Cross-covariance matrix between two lists of variables.
    pub fn cov(&self, rows: &[&str], cols: &[&str]) -> Result<DMatrix<f64>> {
        let r: Vec<&LinearExpr> = rows.iter().map(|n| self.expr(n)).collect::<Result<_>>()?;
        let c: Vec<&LinearExpr> = cols.iter().map(|n| self.expr(n)).collect::<Result<_>>()?;
        let var = self.sources.variances();
        Ok(DMatrix::from_fn(r.len(), c.len(), |i, j| {
            r[i].0
                .iter()
                .zip(&c[j].0)
                .zip(var)
                .map(|((a, b), v)| a * b * v)
                .sum()
        }))
    }

    pub fn variance(&self, name: &str) -> Result<f64> {
        Ok(self.cov(&[name], &[name])?[(0, 0)])
    }

    /// `I(A;B)` in nats; `+∞` when the sets share a noiseless component.
    pub fn mutual_info(&self, a: &[&str], b: &[&str]) -> Result<f64> {
        disjoint(a, b)?;
        if a.is_empty() || b.is_empty() {
            // still resolve the names
            self.cov(a, a)?;
            self.cov(b, b)?;
            return Ok(0.0);
        }
        let all: Vec<&str> = a.iter().chain(b).copied().collect();
        let joint = self.cov(&all, &all)?;
        let floor = REL_EIG_TOL * largest_eigenvalue(&joint);
        Ok(mi_from_joint(&joint, a.len(), floor))
    }

    /// `I(A;B|C)` in nats, clamped at zero.
    ///
    /// Computed from the conditional covariance of `(A,B)` given `C` (Schur
    /// complement with a pseudo-inverse), which stays finite-valued when
    /// `I(A;C)` is infinite. For finite terms it agrees with
    /// `I(A;B∪C) − I(A;C)`.
    pub fn cond_mutual_info(&self, a: &[&str], b: &[&str], c: &[&str]) -> Result<f64> {
        disjoint(a, b)?;
        disjoint(a, c)?;
        disjoint(b, c)?;
        if c.is_empty() {
            return self.mutual_info(a, b);
        }
        if a.is_empty() || b.is_empty() {
            self.cov(a, a)?;
            self.cov(b, b)?;
            self.cov(c, c)?;
            return Ok(0.0);
        }
        let ab: Vec<&str> = a.iter().chain(b).copied().collect();
        let all: Vec<&str> = ab.iter().chain(c).copied().collect();
        let joint = self.cov(&all, &all)?;
        let floor = REL_EIG_TOL * largest_eigenvalue(&joint);
        let k = ab.len();
        let s_ab = joint.view((0, 0), (k, k)).into_owned();
        let s_abc = joint.view((0, k), (k, c.len())).into_owned();
        let s_c = joint.view((k, k), (c.len(), c.len())).into_owned();
        let mut cond = s_ab - &s_abc * pseudo_inverse(&s_c, floor) * s_abc.transpose();
        symmetrize(&mut cond);
        Ok(mi_from_joint(&cond, a.len(), floor))
    }

    /// Linear MMSE (the conditional mean, optimal for jointly Gaussian
    /// variables) of `target` from `observed`.
    pub fn mmse_distortion(&self, target: &str, observed: &[&str]) -> Result<f64> {
        if observed.contains(&target) {
            return Err(Error::OverlappingSets(target.to_string()));
        }
        let var_t = self.variance(target)?;
        if observed.is_empty() {
            return Ok(var_t);
        }
        let mut all: Vec<&str> = vec![target];
        all.extend_from_slice(observed);
        let joint = self.cov(&all, &all)?;
        let floor = REL_EIG_TOL * largest_eigenvalue(&joint);
        let m = observed.len();
        let c = joint.view((1, 0), (m, 1)).into_owned();
        let s_o = joint.view((1, 1), (m, m)).into_owned();
        let explained = (c.transpose() * pseudo_inverse(&s_o, floor) * &c)[(0, 0)];
        Ok((var_t - explained).clamp(0.0, var_t))
    }

    /// For jointly Gaussian zero-mean variables, independence is equivalent
    /// to vanishing cross-covariance.
    pub fn check_independence(&self, a: &str, b: &[&str], tol: f64) -> Result<Independence> {
        let cross = self.cov(&[a], b)?;
        let max_abs = cross.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        Ok(Independence {
            independent: max_abs <= tol,
            max_abs_cross_cov: max_abs,
        })
    }

    /// PSD guard: the smallest eigenvalue of the covariance of `names` is at
    /// least `-1e-9` times the largest in magnitude.
    pub fn is_psd(&self, names: &[&str]) -> Result<bool> {
        let m = self.cov(names, names)?;
        if m.is_empty() {
            return Ok(true);
        }
        let eig = SymmetricEigen::new(m).eigenvalues;
        let max = eig.iter().fold(0.0_f64, |a, &v| a.max(v.abs()));
        let min = eig.iter().fold(f64::INFINITY, |a, &v| a.min(v));
        Ok(min >= -1e-9 * max.max(f64::MIN_POSITIVE))
    }
}

fn disjoint(a: &[&str], b: &[&str]) -> Result<()> {
    match a.iter().find(|n| b.contains(n)) {
        Some(n) => Err(Error::OverlappingSets(n.to_string())),
        None => Ok(()),
    }
}

fn symmetrize(m: &mut DMatrix<f64>) {
    let t = m.transpose();
    *m += t;
    *m *= 0.5;
}

fn largest_eigenvalue(m: &DMatrix<f64>) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    SymmetricEigen::new(m.clone())
        .eigenvalues
        .iter()
        .fold(0.0_f64, |a, &v| a.max(v))
}

/// Rank and log-pseudo-determinant over eigenvalues above `floor`.
#[derive(Debug, Clone, Copy)]
struct Spectrum {
    rank: usize,
    log_pdet: f64,
}

fn spectrum(m: DMatrix<f64>, floor: f64) -> Spectrum {
    if m.is_empty() {
        return Spectrum {
            rank: 0,
            log_pdet: 0.0,
        };
    }
    let eig = SymmetricEigen::new(m).eigenvalues;
    eig.iter()
        .filter(|&&v| v > floor)
        .fold(Spectrum { rank: 0, log_pdet: 0.0 }, |s, &v| Spectrum {
            rank: s.rank + 1,
            log_pdet: s.log_pdet + v.ln(),
        })
}

/// MI between the first `k` coordinates and the rest of a joint covariance.
fn mi_from_joint(joint: &DMatrix<f64>, k: usize, floor: f64) -> f64 {
    let n = joint.nrows();
    let sa = spectrum(joint.view((0, 0), (k, k)).into_owned(), floor);
    let sb = spectrum(joint.view((k, k), (n - k, n - k)).into_owned(), floor);
    let sab = spectrum(joint.clone(), floor);
    if sab.rank < sa.rank + sb.rank {
        return f64::INFINITY;
    }
    (0.5 * (sa.log_pdet + sb.log_pdet - sab.log_pdet)).max(0.0)
}

fn pseudo_inverse(m: &DMatrix<f64>, floor: f64) -> DMatrix<f64> {
    let n = m.nrows();
    if n == 0 {
        return DMatrix::zeros(0, 0);
    }
    let eig = SymmetricEigen::new(m.clone());
    let mut out = DMatrix::zeros(n, n);
    for (k, &lambda) in eig.eigenvalues.iter().enumerate() {
        if lambda > floor {
            let v = eig.eigenvectors.column(k);
            out += (v * v.transpose()) / lambda;
        }
    }
    out
}
