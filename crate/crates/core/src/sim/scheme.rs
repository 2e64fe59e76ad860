//! Encoder, channel, decoder and reconstruction for one block.

use rand::Rng;

use crate::sim::codebook::Codebook;
use crate::sim::model::{draw, SchemeModel};

/// Log-likelihoods `Σ_t ln P_{S|UV}(s_t | u_t(i), v_t(m, j | i))` over all
/// `(i, j)` for message `m`, flat in `[i][j]` order.
pub fn encoder_log_weights(model: &SchemeModel, cb: &Codebook, m: usize, s: &[usize]) -> Vec<f64> {
    let sz = cb.sizes;
    let mut out = Vec::with_capacity(sz.n_i * sz.n_j);
    for i in 0..sz.n_i {
        let u = cb.u(i);
        for j in 0..sz.n_j {
            let v = cb.v(i, m, j);
            let mut w = 0.0;
            for t in 0..sz.n {
                w += model.log_p_s_given_uv[u[t] as usize][v[t] as usize][s[t]];
                if w == f64::NEG_INFINITY {
                    break;
                }
            }
            out.push(w);
        }
    }
    out
}

/// Normalized encoder distribution from log-weights (max subtracted before
/// exponentiating). `None` when every weight is zero.
pub fn encoder_distribution(log_w: &[f64]) -> Option<Vec<f64>> {
    let max = log_w.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return None;
    }
    let w: Vec<f64> = log_w.iter().map(|&l| (l - max).exp()).collect();
    let total: f64 = w.iter().sum();
    Some(w.into_iter().map(|x| x / total).collect())
}

/// Likelihood encoder: samples `(i, j)` with probability proportional to
/// `P_{S|UV}^{⊗n}(s^n | u^n(i), v^n(m, j | i))`. `None` if all weights vanish.
pub fn likelihood_encode<R: Rng + ?Sized>(
    model: &SchemeModel,
    cb: &Codebook,
    m: usize,
    s: &[usize],
    rng: &mut R,
) -> Option<(usize, usize)> {
    let p = encoder_distribution(&encoder_log_weights(model, cb, m, s))?;
    let k = draw(&p, rng);
    Some((k / cb.sizes.n_j, k % cb.sizes.n_j))
}

/// One block of channel outputs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transmission {
    pub x: Vec<usize>,
    pub y: Vec<usize>,
    pub z: Vec<usize>,
}

/// Draws `x_t ~ P_{X|UVS}` and then `(y_t, z_t) ~ P_{YZ|XS}`, independently
/// per position.
pub fn transmit<R: Rng + ?Sized>(
    model: &SchemeModel,
    cb: &Codebook,
    (i, m, j): (usize, usize, usize),
    s: &[usize],
    rng: &mut R,
) -> Transmission {
    let u = cb.u(i);
    let v = cb.v(i, m, j);
    let n = cb.sizes.n;
    let mut out = Transmission {
        x: Vec::with_capacity(n),
        y: Vec::with_capacity(n),
        z: Vec::with_capacity(n),
    };
    for t in 0..n {
        let x = draw(&model.p_x_given_uvs[u[t] as usize][v[t] as usize][s[t]], rng);
        let yz = draw(&model.p_yz_given_xs[x][s[t]], rng);
        out.x.push(x);
        out.y.push(yz / model.nz);
        out.z.push(yz % model.nz);
    }
    out
}

/// Robust typicality of `(u^n, v^n, y^n)`: cells with zero probability must
/// be absent and every other cell's frequency must be within `ε·P` of `P`.
pub fn is_typical(model: &SchemeModel, u: &[u16], v: &[u16], y: &[usize], eps: f64, counts: &mut [u32]) -> bool {
    counts.iter_mut().for_each(|c| *c = 0);
    for t in 0..y.len() {
        let cell = (u[t] as usize * model.nv + v[t] as usize) * model.ny + y[t];
        if model.p_uvy[cell] <= 0.0 {
            return false;
        }
        counts[cell] += 1;
    }
    let n = y.len() as f64;
    counts
        .iter()
        .zip(&model.p_uvy)
        .all(|(&c, &p)| p <= 0.0 || (c as f64 / n - p).abs() <= eps * p)
}

/// Every typical `(i, m, j)` for `y^n`.
pub fn typical_triples(model: &SchemeModel, cb: &Codebook, y: &[usize], eps: f64) -> Vec<(usize, usize, usize)> {
    let sz = cb.sizes;
    let mut counts = vec![0u32; model.p_uvy.len()];
    let mut out = Vec::new();
    for i in 0..sz.n_i {
        let u = cb.u(i);
        for m in 0..sz.n_m {
            for j in 0..sz.n_j {
                if is_typical(model, u, cb.v(i, m, j), y, eps, &mut counts) {
                    out.push((i, m, j));
                }
            }
        }
    }
    out
}

/// Picks one typical triple uniformly at random; `None` when there is none.
pub fn decode<R: Rng + ?Sized>(
    model: &SchemeModel,
    cb: &Codebook,
    y: &[usize],
    eps: f64,
    rng: &mut R,
) -> Option<(usize, usize, usize)> {
    let cands = typical_triples(model, cb, y, eps);
    if cands.is_empty() {
        None
    } else {
        Some(cands[rng.random_range(0..cands.len())])
    }
}

/// `ŝ_t = g(u_t, v_t, y_t)` from the decoded words, or the `y`-only
/// estimate when decoding failed. Returns `ŝ^n` and the per-symbol
/// distortion against `s`.
pub fn reconstruct(
    model: &SchemeModel,
    cb: &Codebook,
    decoded: Option<(usize, usize, usize)>,
    y: &[usize],
    s: &[usize],
) -> (Vec<usize>, f64) {
    let s_hat: Vec<usize> = match decoded {
        Some((i, m, j)) => {
            let (u, v) = (cb.u(i), cb.v(i, m, j));
            (0..y.len())
                .map(|t| model.g.at(u[t] as usize, v[t] as usize, y[t]))
                .collect()
        }
        None => y.iter().map(|&yt| model.g_y[yt]).collect(),
    };
    let d = s
        .iter()
        .zip(&s_hat)
        .map(|(&a, &b)| model.distortion[a][b])
        .sum::<f64>()
        / s.len().max(1) as f64;
    (s_hat, d)
}
