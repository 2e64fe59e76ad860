//! Superposition codebooks.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sim::model::{draw, SchemeModel};

/// Default cap on the total number of codebook symbols.
pub const SYMBOL_CAP: usize = 1 << 20;

/// `⌈e^{nR}⌉`, at least 1.
pub fn codeword_count(n: usize, rate: f64) -> f64 {
    (n as f64 * rate).exp().ceil().max(1.0)
}

/// Sizes of the three index sets at blocklength `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeSizes {
    pub n: usize,
    pub n_i: usize,
    pub n_m: usize,
    pub n_j: usize,
}

impl CodeSizes {
    /// Checks `n · (n_i + n_i·n_m·n_j) ≤ cap`.
    pub fn new(n: usize, r_i: f64, r_m: f64, r_j: f64, cap: usize) -> Result<Self> {
        let (ci, cm, cj) = (codeword_count(n, r_i), codeword_count(n, r_m), codeword_count(n, r_j));
        let symbols = n as f64 * (ci + ci * cm * cj);
        if symbols > cap as f64 {
            return Err(Error::CapExceeded {
                dimension: format!("codebook symbols (n={n}, {ci}x{cm}x{cj} codewords)"),
                size: symbols,
                cap: cap as f64,
            });
        }
        Ok(Self {
            n,
            n_i: ci as usize,
            n_m: cm as usize,
            n_j: cj as usize,
        })
    }
}

/// Lower-level words `u^n(i)` and upper-level words `v^n(m, j | i)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Codebook {
    pub sizes: CodeSizes,
    pub seed: u64,
    /// `[i][t]`
    u: Vec<u16>,
    /// `[i][m][j][t]`
    v: Vec<u16>,
}

impl Codebook {
    /// Builds a codebook from explicit words, `u` as `[i][t]` and `v` as
    /// `[i][m][j][t]`.
    pub fn from_words(sizes: CodeSizes, u: Vec<u16>, v: Vec<u16>) -> Result<Self> {
        let n = sizes.n;
        if u.len() != sizes.n_i * n || v.len() != sizes.n_i * sizes.n_m * sizes.n_j * n {
            return Err(Error::InvalidParameter(format!(
                "codebook words have lengths {} and {} for sizes {sizes:?}",
                u.len(),
                v.len()
            )));
        }
        Ok(Self { sizes, seed: 0, u, v })
    }

    pub fn u(&self, i: usize) -> &[u16] {
        let n = self.sizes.n;
        &self.u[i * n..(i + 1) * n]
    }

    pub fn v(&self, i: usize, m: usize, j: usize) -> &[u16] {
        let s = &self.sizes;
        let k = (i * s.n_m + m) * s.n_j + j;
        &self.v[k * s.n..(k + 1) * s.n]
    }
}

/// Draws `u`-entries i.i.d. from `P_U` and each `v`-entry from
/// `P_{V|U}(·|u_t(i))`. Deterministic in `seed`.
pub fn gen_codebooks(model: &SchemeModel, sizes: CodeSizes, seed: u64) -> Codebook {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = sizes.n;
    let mut u = Vec::with_capacity(sizes.n_i * n);
    for _ in 0..sizes.n_i * n {
        u.push(draw(&model.p_u, &mut rng) as u16);
    }
    let per_cloud = sizes.n_m * sizes.n_j;
    let mut v = Vec::with_capacity(sizes.n_i * per_cloud * n);
    for i in 0..sizes.n_i {
        let cloud = &u[i * n..(i + 1) * n];
        for _ in 0..per_cloud {
            for &ut in cloud {
                v.push(draw(&model.p_v_given_u[ut as usize], &mut rng) as u16);
            }
        }
    }
    Codebook { sizes, seed, u, v }
}
