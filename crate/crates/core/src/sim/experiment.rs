//! Monte-Carlo trials of the scheme at one blocklength.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dmc::model::{AuxChannel, DmcScenario};
use crate::error::{Error, Result};
use crate::rng::derive_seed;
use crate::sim::codebook::{gen_codebooks, CodeSizes, SYMBOL_CAP};
use crate::sim::leakage::{estimate_leakage_exact, LEAKAGE_CAP};
use crate::sim::model::SchemeModel;
use crate::sim::scheme::{decode, likelihood_encode, reconstruct, transmit};

const Z95: f64 = 1.959_963_984_540_054;

const STREAM_CODEBOOK: u64 = 20;
const STREAM_TRIAL: u64 = 21;
const STREAM_LEAKAGE: u64 = 22;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum LeakageMethod {
    #[default]
    Exact,
    Off,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SimConfig {
    pub n: usize,
    /// Rates in nats per channel use.
    pub r_m: f64,
    pub r_i: f64,
    pub r_j: f64,
    /// Relative typicality slack.
    pub epsilon: f64,
    pub trials: usize,
    pub seed: u64,
    pub leakage: LeakageMethod,
    pub symbol_cap: usize,
    pub leakage_cap: f64,
    /// Leakage is averaged over this many independently drawn codebooks.
    pub leakage_codebooks: usize,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            n: 4,
            r_m: 0.0,
            r_i: 0.0,
            r_j: 0.0,
            epsilon: 0.15,
            trials: 1000,
            seed: 0,
            leakage: LeakageMethod::Exact,
            symbol_cap: SYMBOL_CAP,
            leakage_cap: LEAKAGE_CAP,
            leakage_codebooks: 8,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if self.n == 0 {
            return bad("n must be at least 1".into());
        }
        if self.trials == 0 {
            return bad("trials must be at least 1".into());
        }
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return bad(format!("epsilon must be positive, got {}", self.epsilon));
        }
        for (name, r) in [("r_m", self.r_m), ("r_i", self.r_i), ("r_j", self.r_j)] {
            if !(r >= 0.0 && r.is_finite()) {
                return bad(format!("{name} must be a nonnegative finite rate, got {r}"));
            }
        }
        if self.leakage == LeakageMethod::Exact && self.leakage_codebooks == 0 {
            return bad("leakage_codebooks must be at least 1".into());
        }
        Ok(())
    }
}

/// Wilson score interval for `k` successes out of `n`.
pub fn wilson_interval(k: usize, n: usize, z: f64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let nf = n as f64;
    let p = k as f64 / nf;
    let z2 = z * z;
    let denom = 1.0 + z2 / nf;
    let centre = (p + z2 / (2.0 * nf)) / denom;
    let half = z * (p * (1.0 - p) / nf + z2 / (4.0 * nf * nf)).sqrt() / denom;
    let lo = if k == 0 { 0.0 } else { (centre - half).max(0.0) };
    let hi = if k == n { 1.0 } else { (centre + half).min(1.0) };
    (lo, hi)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimResult {
    pub n: usize,
    pub trials: usize,
    pub sizes: CodeSizes,
    /// Fraction of trials with `M̂ ≠ M` (including encoder and decoder failures).
    pub pe: f64,
    pub pe_ci: (f64, f64),
    pub pe_half_width: f64,
    /// Fraction of trials with `(Î, M̂, Ĵ) ≠ (I, M, J)`.
    pub index_error_rate: f64,
    pub encoder_failures: usize,
    pub decode_failures: usize,
    pub distortion: f64,
    pub distortion_half_width: f64,
    /// Single-letter `E[d(S, g(U,V,Y))]` for comparison.
    pub single_letter_distortion: f64,
    /// Nats per symbol; `None` when off or unavailable.
    pub leakage: Option<f64>,
    pub leakage_half_width: Option<f64>,
    /// `exact`, `off` or `unavailable`.
    pub leakage_method: String,
    pub leakage_note: Option<String>,
}

#[derive(Debug, Clone, Copy, Default)]
struct Tally {
    msg_errors: usize,
    index_errors: usize,
    encoder_failures: usize,
    decode_failures: usize,
    distortion: f64,
    distortion_sq: f64,
}

impl Tally {
    fn merge(mut self, o: Tally) -> Tally {
        self.msg_errors += o.msg_errors;
        self.index_errors += o.index_errors;
        self.encoder_failures += o.encoder_failures;
        self.decode_failures += o.decode_failures;
        self.distortion += o.distortion;
        self.distortion_sq += o.distortion_sq;
        self
    }
}

fn one_trial(model: &SchemeModel, sizes: CodeSizes, cfg: &SimConfig, t: u64) -> Tally {
    let cb = gen_codebooks(model, sizes, derive_seed(cfg.seed, STREAM_CODEBOOK, t));
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(cfg.seed, STREAM_TRIAL, t));
    let m = rng.random_range(0..sizes.n_m);
    let s = model.draw_state(sizes.n, &mut rng);
    let mut tally = Tally::default();
    let (i, j) = match likelihood_encode(model, &cb, m, &s, &mut rng) {
        Some(ij) => ij,
        None => {
            tally.encoder_failures = 1;
            (rng.random_range(0..sizes.n_i), rng.random_range(0..sizes.n_j))
        }
    };
    let tx = transmit(model, &cb, (i, m, j), &s, &mut rng);
    let decoded = decode(model, &cb, &tx.y, cfg.epsilon, &mut rng);
    if decoded.is_none() {
        tally.decode_failures = 1;
    }
    let msg_ok = tally.encoder_failures == 0 && decoded.is_some_and(|(_, mh, _)| mh == m);
    let idx_ok = tally.encoder_failures == 0 && decoded == Some((i, m, j));
    tally.msg_errors = usize::from(!msg_ok);
    tally.index_errors = usize::from(!idx_ok);
    let (_, d) = reconstruct(model, &cb, decoded, &tx.y, &s);
    tally.distortion = d;
    tally.distortion_sq = d * d;
    tally
}

/// Leakage averaged over independent codebooks: mean, 95% half-width.
fn leakage(model: &SchemeModel, sizes: CodeSizes, cfg: &SimConfig) -> Result<(f64, f64)> {
    let k = cfg.leakage_codebooks;
    let values: Vec<f64> = (0..k as u64)
        .into_par_iter()
        .map(|c| {
            let cb = gen_codebooks(model, sizes, derive_seed(cfg.seed, STREAM_LEAKAGE, c));
            estimate_leakage_exact(model, &cb, cfg.leakage_cap)
        })
        .collect::<Result<_>>()?;
    let mean = values.iter().sum::<f64>() / k as f64;
    let half = if k > 1 {
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (k - 1) as f64;
        Z95 * (var / k as f64).sqrt()
    } else {
        0.0
    };
    Ok((mean, half))
}

/// Runs `cfg.trials` independent trials, each with a fresh codebook.
/// Deterministic in `cfg.seed` regardless of thread count.
pub fn run_experiment(sc: &DmcScenario, aux: &AuxChannel, cfg: &SimConfig) -> Result<SimResult> {
    cfg.validate()?;
    let model = SchemeModel::new(sc, aux)?;
    run_with_model(&model, cfg)
}

pub fn run_with_model(model: &SchemeModel, cfg: &SimConfig) -> Result<SimResult> {
    cfg.validate()?;
    let sizes = CodeSizes::new(cfg.n, cfg.r_i, cfg.r_m, cfg.r_j, cfg.symbol_cap)?;
    // Collected and summed in trial order so float sums do not depend on
    // how rayon splits the work.
    let tallies: Vec<Tally> = (0..cfg.trials as u64)
        .into_par_iter()
        .map(|t| one_trial(model, sizes, cfg, t))
        .collect();
    let tally = tallies.into_iter().fold(Tally::default(), Tally::merge);
    let trials = cfg.trials;
    let nf = trials as f64;
    let pe = tally.msg_errors as f64 / nf;
    let pe_ci = wilson_interval(tally.msg_errors, trials, Z95);
    let distortion = tally.distortion / nf;
    let distortion_half_width = if trials > 1 {
        let var = ((tally.distortion_sq - nf * distortion * distortion) / (nf - 1.0)).max(0.0);
        Z95 * (var / nf).sqrt()
    } else {
        0.0
    };
    let (leakage, leakage_half_width, leakage_method, leakage_note) = match cfg.leakage {
        LeakageMethod::Off => (None, None, "off".to_string(), None),
        LeakageMethod::Exact => match leakage(model, sizes, cfg) {
            Ok((l, h)) => (Some(l), Some(h), "exact".to_string(), None),
            Err(e @ Error::CapExceeded { .. }) => (None, None, "unavailable".to_string(), Some(e.to_string())),
            Err(e) => return Err(e),
        },
    };
    Ok(SimResult {
        n: cfg.n,
        trials,
        sizes,
        pe,
        pe_ci,
        pe_half_width: (pe_ci.1 - pe_ci.0) / 2.0,
        index_error_rate: tally.index_errors as f64 / nf,
        encoder_failures: tally.encoder_failures,
        decode_failures: tally.decode_failures,
        distortion,
        distortion_half_width,
        single_letter_distortion: model.expected_distortion,
        leakage,
        leakage_half_width,
        leakage_method,
        leakage_note,
    })
}
