//! Exact leakage `I(M, Ξ^n; Z^n)` of a fixed codebook.
//!
//! `P(m, ξ^n, z^n)` is computed by summing over every state sequence and
//! every encoder choice, so the cost grows like `|S|^n · |Z|^n` times the
//! codebook size. Only desk-scale blocklengths are feasible.

use crate::error::{Error, Result};
use crate::sim::codebook::Codebook;
use crate::sim::model::SchemeModel;
use crate::sim::scheme::{encoder_distribution, encoder_log_weights};

/// Default cap on `|M| · |Ξ|^n · |Z|^n`.
pub const LEAKAGE_CAP: f64 = 1e7;
/// Cap on the number of multiply-adds, so an accepted table is also
/// computable in reasonable time.
pub const LEAKAGE_WORK_CAP: f64 = 2e10;

/// Product distribution over sequences, `[x_0][x_1]…` row-major.
fn product_table(n: usize, k: usize, p_at: impl Fn(usize, usize) -> f64) -> Vec<f64> {
    let mut table = vec![1.0];
    for t in 0..n {
        let mut next = Vec::with_capacity(table.len() * k);
        for &w in &table {
            for sym in 0..k {
                next.push(w * p_at(t, sym));
            }
        }
        table = next;
    }
    table
}

/// Checks the size caps for leakage at this codebook size.
pub fn check_leakage_caps(model: &SchemeModel, cb: &Codebook, cap: f64) -> Result<()> {
    let sz = cb.sizes;
    let n = sz.n as i32;
    let table = sz.n_m as f64 * (model.nxi as f64).powi(n) * (model.nz as f64).powi(n);
    if table > cap {
        return Err(Error::CapExceeded {
            dimension: format!("leakage table |M|*|Xi|^n*|Z|^n at n={}", sz.n),
            size: table,
            cap,
        });
    }
    let work = sz.n_m as f64
        * (model.ns as f64).powi(n)
        * (sz.n_i * sz.n_j) as f64
        * ((model.nz as f64).powi(n) + (model.nxi as f64).powi(n) * (model.nz as f64).powi(n) / (sz.n_i * sz.n_j) as f64);
    if work > LEAKAGE_WORK_CAP {
        return Err(Error::CapExceeded {
            dimension: format!("leakage work at n={}", sz.n),
            size: work,
            cap: LEAKAGE_WORK_CAP,
        });
    }
    Ok(())
}

/// `I(M, Ξ^n; Z^n) / n` in nats for a uniform message and the likelihood
/// encoder (uniform over `(i, j)` when every likelihood vanishes).
pub fn estimate_leakage_exact(model: &SchemeModel, cb: &Codebook, cap: f64) -> Result<f64> {
    check_leakage_caps(model, cb, cap)?;
    let sz = cb.sizes;
    let n = sz.n;
    let nzn = model.nz.pow(n as u32);
    let nxin = model.nxi.pow(n as u32);
    let n_states = model.ns.pow(n as u32);
    let mut joint = vec![0.0; sz.n_m * nxin * nzn];
    let mut s = vec![0usize; n];
    let pairs = sz.n_i * sz.n_j;
    for m in 0..sz.n_m {
        for code in 0..n_states {
            let mut c = code;
            for t in (0..n).rev() {
                s[t] = c % model.ns;
                c /= model.ns;
            }
            let ps: f64 = s.iter().map(|&st| model.p_s[st]).product();
            if ps == 0.0 {
                continue;
            }
            let enc = encoder_distribution(&encoder_log_weights(model, cb, m, &s))
                .unwrap_or_else(|| vec![1.0 / pairs as f64; pairs]);
            let mut pz = vec![0.0; nzn];
            for (k, &w) in enc.iter().enumerate() {
                if w == 0.0 {
                    continue;
                }
                let (i, j) = (k / sz.n_j, k % sz.n_j);
                let (u, v) = (cb.u(i), cb.v(i, m, j));
                let table = product_table(n, model.nz, |t, z| {
                    model.p_z_given_uvs[u[t] as usize][v[t] as usize][s[t]][z]
                });
                for (acc, p) in pz.iter_mut().zip(table) {
                    *acc += w * p;
                }
            }
            let pxi = product_table(n, model.nxi, |t, xi| model.p_xi_given_s[s[t]][xi]);
            let weight = ps / sz.n_m as f64;
            let base = m * nxin * nzn;
            for (xi, &px) in pxi.iter().enumerate() {
                if px == 0.0 {
                    continue;
                }
                let row = &mut joint[base + xi * nzn..base + (xi + 1) * nzn];
                for (acc, &p) in row.iter_mut().zip(&pz) {
                    *acc += weight * px * p;
                }
            }
        }
    }
    Ok(mutual_information(&joint, sz.n_m * nxin, nzn) / n as f64)
}

/// `I(A;B)` of a joint laid out `[a][b]`.
fn mutual_information(joint: &[f64], na: usize, nb: usize) -> f64 {
    let mut pa = vec![0.0; na];
    let mut pb = vec![0.0; nb];
    for a in 0..na {
        for b in 0..nb {
            let p = joint[a * nb + b];
            pa[a] += p;
            pb[b] += p;
        }
    }
    let mut i = 0.0;
    for a in 0..na {
        for b in 0..nb {
            let p = joint[a * nb + b];
            if p > 0.0 {
                i += p * (p / (pa[a] * pb[b])).ln();
            }
        }
    }
    i.max(0.0)
}
