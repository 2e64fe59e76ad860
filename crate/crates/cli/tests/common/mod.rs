//! Helpers and independent oracles shared by the integration tests. Nothing
//! here calls the library's information-measure code.

#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

pub fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_secure-isac"))
}

pub fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

pub fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

pub fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

pub fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

/// Header and rows of a CSV without quoting.
pub fn parse_csv(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = text.lines();
    let header = lines.next().unwrap_or("").split(',').map(str::to_string).collect();
    let rows = lines.map(|l| l.split(',').map(str::to_string).collect()).collect();
    (header, rows)
}

pub fn column(header: &[String], name: &str) -> usize {
    header.iter().position(|h| h == name).unwrap_or_else(|| panic!("no column {name}"))
}

/// First number after `key`, padding and `=` on the first line that starts
/// with `key`.
pub fn report_value(text: &str, key: &str) -> f64 {
    let rest = text
        .lines()
        .filter_map(|l| l.trim_start().strip_prefix(key))
        .find_map(|r| r.trim_start().strip_prefix('='))
        .unwrap_or_else(|| panic!("no `{key} =` in report:\n{text}"));
    rest.split_whitespace().next().unwrap().parse().unwrap()
}

/// `H(p)` in nats.
pub fn entropy(p: &[f64]) -> f64 {
    p.iter().filter(|&&q| q > 0.0).map(|&q| -q * q.ln()).sum()
}

/// `I(A;B)` from a joint laid out `[a][b]`, via `H(A) + H(B) − H(A,B)`.
pub fn mutual_info(joint: &[f64], na: usize, nb: usize) -> f64 {
    let mut pa = vec![0.0; na];
    let mut pb = vec![0.0; nb];
    for a in 0..na {
        for b in 0..nb {
            pa[a] += joint[a * nb + b];
            pb[b] += joint[a * nb + b];
        }
    }
    entropy(&pa) + entropy(&pb) - entropy(joint)
}

/// MMSE of `S` (variance `q`) from `Y = c·S + N` (noise variance `n`).
pub fn scalar_mmse(q: f64, c: f64, n: f64) -> f64 {
    q * n / (c * c * q + n)
}

/// Largest `R_M` on a `step` lattice for which lattice points `(R_I, R_J)`
/// satisfy the scheme's rate conditions:
///
/// ```text
/// R_I ≥ a, R_I + R_J ≥ b, R_J ≥ c, R_I + R_J + R_M ≤ d, R_J + R_M ≤ e,
/// all rates ≥ 0
/// ```
///
/// with `(a, b, c, d, e) = (I(U;S), I(U,V;S), I(V;Ξ,Z|U), I(U,V;Y), I(V;Y|U))`.
/// `None` when no lattice point is feasible.
pub fn grid_max_rate(mi: [f64; 5], step: f64) -> Option<f64> {
    let [a, b, c, d, e] = mi;
    let tol = 1e-9;
    let top = (d.min(e) / step + tol).floor() as i64;
    let jmax = |rm: f64| ((e - rm) / step + tol).floor() as i64;
    for k in (0..=top).rev() {
        let rm = k as f64 * step;
        let j_lo = ((c.max(0.0)) / step - tol).ceil() as i64;
        for jj in j_lo..=jmax(rm) {
            let rj = jj as f64 * step;
            let lo = a.max(b - rj).max(0.0);
            let hi = d - rm - rj;
            let ii = (lo / step - tol).ceil() as i64;
            if ii as f64 * step <= hi + tol {
                return Some(rm);
            }
        }
    }
    None
}
