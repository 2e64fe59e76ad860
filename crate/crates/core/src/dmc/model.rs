//! Finite-alphabet scenario and auxiliary-channel tables.
//!
//! Tables are nested `Vec`s in the index order used by the file format:
//! `p_xi_given_s[s][xi]`, `p_yz_given_xs[x][s][y][z]`, `distortion[s][s_hat]`
//! and `p_uvx_given_s[s][u][v][x]`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Row-sum tolerance for probability tables.
pub const SIMPLEX_TOL: f64 = 1e-12;

/// Checks that `row` is a probability vector; `id` names the row in errors.
pub fn check_simplex(table: &str, id: &str, row: &[f64]) -> Result<()> {
    if row.is_empty() {
        return Err(Error::InvalidTable {
            table: table.into(),
            detail: format!("{id} is empty"),
        });
    }
    if let Some(k) = row.iter().position(|p| !(p.is_finite() && *p >= 0.0)) {
        return Err(Error::InvalidTable {
            table: table.into(),
            detail: format!("{id}[{k}] = {} is not a probability", row[k]),
        });
    }
    let sum: f64 = row.iter().sum();
    if (sum - 1.0).abs() > SIMPLEX_TOL * row.len() as f64 {
        return Err(Error::InvalidTable {
            table: table.into(),
            detail: format!("{id} sums to {sum}, expected 1"),
        });
    }
    Ok(())
}

fn shape_err(table: &str, id: &str, got: usize, expected: usize) -> Error {
    Error::AlphabetMismatch(format!("{table}{id} has {got} entries, expected {expected}"))
}

fn check_len<T>(table: &str, id: &str, v: &[T], expected: usize) -> Result<()> {
    if v.len() != expected {
        return Err(shape_err(table, id, v.len(), expected));
    }
    Ok(())
}

/// Alphabet sizes of a scenario.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Alphabets {
    #[serde(rename = "S")]
    pub s: usize,
    #[serde(rename = "Xi")]
    pub xi: usize,
    #[serde(rename = "X")]
    pub x: usize,
    #[serde(rename = "Y")]
    pub y: usize,
    #[serde(rename = "Z")]
    pub z: usize,
    #[serde(rename = "S_hat")]
    pub s_hat: usize,
}

/// Channel, masking channel and distortion measure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DmcScenario {
    pub alphabets: Alphabets,
    pub p_s: Vec<f64>,
    pub p_xi_given_s: Vec<Vec<f64>>,
    pub p_yz_given_xs: Vec<Vec<Vec<Vec<f64>>>>,
    pub distortion: Vec<Vec<f64>>,
}

impl DmcScenario {
    /// Checks shapes against `alphabets` and every simplex / distortion
    /// invariant. Error messages name the offending row.
    pub fn validate(&self) -> Result<()> {
        let a = &self.alphabets;
        for (name, n) in [
            ("S", a.s),
            ("Xi", a.xi),
            ("X", a.x),
            ("Y", a.y),
            ("Z", a.z),
            ("S_hat", a.s_hat),
        ] {
            if n == 0 {
                return Err(Error::AlphabetMismatch(format!("alphabet {name} is empty")));
            }
        }
        check_len("p_s", "", &self.p_s, a.s)?;
        check_simplex("p_s", "p_s", &self.p_s)?;
        check_len("p_xi_given_s", "", &self.p_xi_given_s, a.s)?;
        for (s, row) in self.p_xi_given_s.iter().enumerate() {
            let id = format!("[{s}]");
            check_len("p_xi_given_s", &id, row, a.xi)?;
            check_simplex("p_xi_given_s", &format!("p_xi_given_s{id}"), row)?;
        }
        check_len("p_yz_given_xs", "", &self.p_yz_given_xs, a.x)?;
        for (x, by_s) in self.p_yz_given_xs.iter().enumerate() {
            check_len("p_yz_given_xs", &format!("[{x}]"), by_s, a.s)?;
            for (s, by_y) in by_s.iter().enumerate() {
                let id = format!("[{x}][{s}]");
                check_len("p_yz_given_xs", &id, by_y, a.y)?;
                for (y, row) in by_y.iter().enumerate() {
                    check_len("p_yz_given_xs", &format!("{id}[{y}]"), row, a.z)?;
                }
                let flat: Vec<f64> = by_y.iter().flatten().copied().collect();
                check_simplex("p_yz_given_xs", &format!("p_yz_given_xs{id}"), &flat)?;
            }
        }
        check_len("distortion", "", &self.distortion, a.s)?;
        for (s, row) in self.distortion.iter().enumerate() {
            check_len("distortion", &format!("[{s}]"), row, a.s_hat)?;
            if let Some(k) = row.iter().position(|d| !(d.is_finite() && *d >= 0.0)) {
                return Err(Error::InvalidTable {
                    table: "distortion".into(),
                    detail: format!("distortion[{s}][{k}] = {} must be finite and >= 0", row[k]),
                });
            }
        }
        Ok(())
    }

    /// `d(s, ŝ) = [s ≠ ŝ]` on a common alphabet.
    pub fn hamming(n: usize) -> Vec<Vec<f64>> {
        (0..n)
            .map(|s| (0..n).map(|t| if s == t { 0.0 } else { 1.0 }).collect())
            .collect()
    }

    /// Largest entry of the distortion table.
    pub fn max_distortion(&self) -> f64 {
        self.distortion.iter().flatten().fold(0.0, |m, &d| m.max(d))
    }
}

/// The designer's channel `P_{UVX|S}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AuxChannel {
    #[serde(rename = "U")]
    pub u: usize,
    #[serde(rename = "V")]
    pub v: usize,
    pub p_uvx_given_s: Vec<Vec<Vec<Vec<f64>>>>,
}

impl AuxChannel {
    /// Builds a channel from one flat row per state, laid out `[u][v][x]`.
    pub fn from_rows(u: usize, v: usize, x: usize, rows: &[Vec<f64>]) -> Self {
        let p_uvx_given_s = rows
            .iter()
            .map(|row| {
                (0..u)
                    .map(|ui| {
                        (0..v)
                            .map(|vi| row[(ui * v + vi) * x..(ui * v + vi + 1) * x].to_vec())
                            .collect()
                    })
                    .collect()
            })
            .collect();
        Self { u, v, p_uvx_given_s }
    }

    /// Flat `[u][v][x]` row for state `s`.
    pub fn row(&self, s: usize) -> Vec<f64> {
        self.p_uvx_given_s[s].iter().flatten().flatten().copied().collect()
    }

    pub fn validate(&self, sc: &DmcScenario) -> Result<()> {
        if self.u == 0 || self.v == 0 {
            return Err(Error::AlphabetMismatch("alphabets U and V must be nonempty".into()));
        }
        let nx = sc.alphabets.x;
        check_len("p_uvx_given_s", "", &self.p_uvx_given_s, sc.alphabets.s)?;
        for (s, by_u) in self.p_uvx_given_s.iter().enumerate() {
            check_len("p_uvx_given_s", &format!("[{s}]"), by_u, self.u)?;
            for (u, by_v) in by_u.iter().enumerate() {
                check_len("p_uvx_given_s", &format!("[{s}][{u}]"), by_v, self.v)?;
                for (v, row) in by_v.iter().enumerate() {
                    check_len("p_uvx_given_s", &format!("[{s}][{u}][{v}]"), row, nx)?;
                }
            }
            check_simplex("p_uvx_given_s", &format!("p_uvx_given_s[{s}]"), &self.row(s))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn bsc_scenario() -> DmcScenario {
        // Y = X xor S-flip, Z = X; tiny but exercises every table
        let mut yz = vec![vec![vec![vec![0.0; 2]; 2]; 2]; 2];
        for x in 0..2 {
            for s in 0..2 {
                yz[x][s][x ^ s][x] = 1.0;
            }
        }
        DmcScenario {
            alphabets: Alphabets { s: 2, xi: 1, x: 2, y: 2, z: 2, s_hat: 2 },
            p_s: vec![0.5, 0.5],
            p_xi_given_s: vec![vec![1.0], vec![1.0]],
            p_yz_given_xs: yz,
            distortion: DmcScenario::hamming(2),
        }
    }

    #[test]
    fn valid_scenario_passes() {
        bsc_scenario().validate().unwrap();
    }

    #[test]
    fn bad_row_is_named() {
        let mut sc = bsc_scenario();
        sc.p_yz_given_xs[1][0][0][0] = 0.0;
        sc.p_yz_given_xs[1][0][1][1] = 0.9;
        sc.p_yz_given_xs[1][0][1][0] = 0.0;
        let err = sc.validate().unwrap_err().to_string();
        assert!(err.contains("p_yz_given_xs[1][0]") && err.contains("0.9"), "{err}");
    }

    #[test]
    fn shape_mismatch_is_reported() {
        let mut sc = bsc_scenario();
        sc.p_s.push(0.0);
        assert!(matches!(sc.validate(), Err(Error::AlphabetMismatch(_))));
    }

    #[test]
    fn aux_round_trips_through_rows() {
        let rows = vec![vec![0.25; 4], vec![0.0, 1.0, 0.0, 0.0]];
        let aux = AuxChannel::from_rows(1, 2, 2, &rows);
        assert_eq!(aux.p_uvx_given_s[1][0][0], vec![0.0, 1.0]);
        assert_eq!(aux.row(1), rows[1]);
        aux.validate(&bsc_scenario()).unwrap();
    }
}
