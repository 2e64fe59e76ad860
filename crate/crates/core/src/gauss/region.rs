//! The scalar Gaussian example: `Y = X + S + N`, `Z = aX + bS + N_e`,
//! `Ξ = S + A`, with auxiliaries
//!
//! ```text
//! U = F + δS + G
//! V = T + αS + G
//! X = T + F + εG + γS,      σ_T² + σ_F² + ε²σ_G² + γ²Q ≤ P
//! ```

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::frontier::Tradeoff;
use crate::gauss::system::{BaseSources, GaussianSystem, Independence, INDEPENDENCE_TOL};
use crate::region::{rate_bound, Constraint, RateBound, RateTerms, SecrecyMode};

/// Relative slack on the power budget.
const POWER_TOL: f64 = 1e-9;

/// Variance of the masking noise `A` in `Ξ = S + A`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MaskingVariance {
    /// `Ξ = S + A`; zero means the whole state is secret.
    Finite(f64),
    /// The limit `σ_A² → ∞`, i.e. `Ξ` constant.
    Unbounded,
}

impl Serialize for MaskingVariance {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            MaskingVariance::Finite(v) => s.serialize_f64(*v),
            MaskingVariance::Unbounded => s.serialize_str("unbounded"),
        }
    }
}

impl<'de> Deserialize<'de> for MaskingVariance {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Word(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) => Ok(MaskingVariance::Finite(v)),
            Raw::Word(w) if w == "unbounded" => Ok(MaskingVariance::Unbounded),
            Raw::Word(w) => Err(serde::de::Error::custom(format!(
                "sigma_A2 must be a number or \"unbounded\", got \"{w}\""
            ))),
        }
    }
}

/// Channel and secrecy parameters of the Gaussian example.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioConfig {
    #[serde(rename = "P")]
    pub power: f64,
    #[serde(rename = "Q")]
    pub state_power: f64,
    #[serde(rename = "sigma2")]
    pub noise_var: f64,
    #[serde(rename = "sigma_e2")]
    pub eve_noise_var: f64,
    pub a: f64,
    pub b: f64,
    pub mode: SecrecyMode,
    #[serde(rename = "sigma_A2")]
    pub masking: MaskingVariance,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            power: 30.0,
            state_power: 3.0,
            noise_var: 1.0,
            eve_noise_var: 4.0,
            a: 0.7,
            b: 0.3,
            mode: SecrecyMode::None,
            masking: MaskingVariance::Finite(0.0),
        }
    }
}

impl ScenarioConfig {
    pub fn with_mode(mut self, mode: SecrecyMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("P", self.power),
            ("Q", self.state_power),
            ("sigma2", self.noise_var),
            ("sigma_e2", self.eve_noise_var),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidParameter(format!("{name} must be positive, got {v}")));
            }
        }
        if !self.a.is_finite() || !self.b.is_finite() {
            return Err(Error::InvalidParameter("a and b must be finite".into()));
        }
        if let MaskingVariance::Finite(v) = self.masking {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::InvalidParameter(format!("sigma_A2 must be >= 0, got {v}")));
            }
        }
        Ok(())
    }

    /// Whether `Ξ` is a nonconstant variable under this configuration.
    pub fn secret_state(&self) -> bool {
        self.mode == SecrecyMode::MessageAndState
            && matches!(self.masking, MaskingVariance::Finite(_))
    }
}

/// Parameters of the Gaussian auxiliaries.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AuxParams {
    #[serde(rename = "sigma_T2")]
    pub sigma_t2: f64,
    #[serde(rename = "sigma_F2")]
    pub sigma_f2: f64,
    #[serde(rename = "sigma_G2")]
    pub sigma_g2: f64,
    pub delta: f64,
    pub alpha: f64,
    pub epsilon: f64,
    pub gamma: f64,
}

impl AuxParams {
    /// `E[X²] = σ_T² + σ_F² + ε²σ_G² + γ²Q`.
    pub fn power_used(&self, state_power: f64) -> f64 {
        self.sigma_t2
            + self.sigma_f2
            + self.epsilon * self.epsilon * self.sigma_g2
            + self.gamma * self.gamma * state_power
    }
}

/// Substitutions forced on `(γ, δ)` by `Ξ ⊥ (U,Z)`; `None` means free.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecrecySubstitution {
    pub gamma: Option<f64>,
    pub delta: Option<f64>,
}

impl SecrecySubstitution {
    pub fn free() -> Self {
        Self {
            gamma: None,
            delta: None,
        }
    }

    pub fn apply(&self, p: &mut AuxParams) {
        if let Some(g) = self.gamma {
            p.gamma = g;
        }
        if let Some(d) = self.delta {
            p.delta = d;
        }
    }
}

/// With `Ξ = S + A` and any finite `σ_A²`, `Cov(Ξ,Z) = (aγ + b)Q` and
/// `Cov(Ξ,U) = δQ` must both vanish, which pins `γ = −b/a` and `δ = 0`.
pub fn secrecy_feasible_params(cfg: &ScenarioConfig) -> Result<SecrecySubstitution> {
    if !cfg.secret_state() {
        return Ok(SecrecySubstitution::free());
    }
    let gamma = if cfg.a != 0.0 {
        Some(-cfg.b / cfg.a)
    } else if cfg.b == 0.0 {
        None
    } else {
        return Err(Error::Infeasible(format!(
            "a = 0 and b = {}: no input can cancel the state seen by the eavesdropper",
            cfg.b
        )));
    };
    Ok(SecrecySubstitution {
        gamma,
        delta: Some(0.0),
    })
}

/// Builds `S, Ξ, U, V, X, Y, Z` over the sources `S, A, T, F, G, N, Ne`.
pub fn build_system(cfg: &ScenarioConfig, p: &AuxParams) -> Result<GaussianSystem> {
    let used = p.power_used(cfg.state_power);
    if used > cfg.power * (1.0 + POWER_TOL) {
        return Err(Error::PowerViolation {
            used,
            budget: cfg.power,
        });
    }
    let masking = match cfg.masking {
        MaskingVariance::Finite(v) => v,
        MaskingVariance::Unbounded => 0.0,
    };
    let sources = BaseSources::new([
        ("S", cfg.state_power),
        ("A", masking),
        ("T", p.sigma_t2),
        ("F", p.sigma_f2),
        ("G", p.sigma_g2),
        ("N", cfg.noise_var),
        ("Ne", cfg.eve_noise_var),
    ])?;
    let mut sys = GaussianSystem::new(sources);
    sys.define("S", &[("S", 1.0)])?;
    if cfg.secret_state() {
        sys.define("Xi", &[("S", 1.0), ("A", 1.0)])?;
    } else {
        sys.define("Xi", &[])?;
    }
    sys.define("U", &[("F", 1.0), ("S", p.delta), ("G", 1.0)])?;
    sys.define("V", &[("T", 1.0), ("S", p.alpha), ("G", 1.0)])?;
    let x = [("T", 1.0), ("F", 1.0), ("G", p.epsilon), ("S", p.gamma)];
    sys.define("X", &x)?;
    let mut y = x.to_vec();
    y.extend([("S", 1.0), ("N", 1.0)]);
    sys.define("Y", &y)?;
    let mut z: Vec<(&str, f64)> = x.iter().map(|&(n, c)| (n, cfg.a * c)).collect();
    z.extend([("S", cfg.b), ("Ne", 1.0)]);
    sys.define("Z", &z)?;
    Ok(sys)
}

/// The six information terms for a built system.
pub fn rate_terms(sys: &GaussianSystem) -> Result<RateTerms> {
    Ok(RateTerms {
        i_uv_y: sys.mutual_info(&["U", "V"], &["Y"])?,
        i_uv_s: sys.mutual_info(&["U", "V"], &["S"])?,
        i_v_y_given_u: sys.cond_mutual_info(&["V"], &["Y"], &["U"])?,
        i_v_xiz_given_u: sys.cond_mutual_info(&["V"], &["Xi", "Z"], &["U"])?,
        i_u_y: sys.mutual_info(&["U"], &["Y"])?,
        i_u_s: sys.mutual_info(&["U"], &["S"])?,
    })
}

/// Everything known about one auxiliary choice.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussEvaluation {
    pub mode: SecrecyMode,
    pub params: AuxParams,
    pub terms: RateTerms,
    pub bound: RateBound,
    pub distortion: f64,
    pub power_used: f64,
    /// `Ξ ⊥ (U,Z)` check, present when `Ξ` is nonconstant.
    pub independence: Option<Independence>,
    pub feasible: bool,
    pub infeasibility: Option<String>,
}

impl GaussEvaluation {
    pub fn rate(&self) -> f64 {
        self.bound.rate
    }

    pub fn to_point(&self) -> RegionPoint {
        RegionPoint {
            mode: self.mode,
            rate: self.bound.rate,
            distortion: self.distortion,
            params: self.params,
            slacks: self.bound.constraints.clone(),
            power_used: self.power_used,
        }
    }
}

/// Evaluates rate bound, distortion and feasibility of `p` under `cfg.mode`.
pub fn evaluate(cfg: &ScenarioConfig, p: &AuxParams) -> Result<GaussEvaluation> {
    let sys = build_system(cfg, p)?;
    let terms = rate_terms(&sys)?;
    let bound = rate_bound(cfg.mode, &terms);
    let distortion = sys.mmse_distortion("S", &["U", "V", "Y"])?;
    let independence = if cfg.secret_state() {
        Some(sys.check_independence("Xi", &["U", "Z"], INDEPENDENCE_TOL)?)
    } else {
        None
    };
    let infeasibility = if let Some(ind) = independence.filter(|i| !i.independent) {
        Some(format!(
            "Xi is correlated with (U,Z): max |cov| = {:.3e}",
            ind.max_abs_cross_cov
        ))
    } else if !bound.filter_ok {
        Some(format!(
            "I(U;Y) = {:.6} < I(U;S) = {:.6}",
            terms.i_u_y, terms.i_u_s
        ))
    } else if !bound.supports_nonnegative_rate() {
        Some(format!("rate bound {:.6} is negative", bound.bound))
    } else {
        None
    };
    Ok(GaussEvaluation {
        mode: cfg.mode,
        params: *p,
        terms,
        bound,
        distortion,
        power_used: p.power_used(cfg.state_power),
        independence,
        feasible: infeasibility.is_none(),
        infeasibility,
    })
}

/// Mode-appropriate rate bound clamped at zero.
pub fn eval_rate(cfg: &ScenarioConfig, p: &AuxParams) -> Result<f64> {
    Ok(evaluate(cfg, p)?.bound.rate)
}

/// MMSE of `S` from `(U, V, Y)`.
pub fn eval_distortion(cfg: &ScenarioConfig, p: &AuxParams) -> Result<f64> {
    build_system(cfg, p)?.mmse_distortion("S", &["U", "V", "Y"])
}

/// One achievable (rate, distortion) pair with the parameters behind it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionPoint {
    pub mode: SecrecyMode,
    pub rate: f64,
    pub distortion: f64,
    pub params: AuxParams,
    pub slacks: Vec<Constraint>,
    pub power_used: f64,
}

impl Tradeoff for RegionPoint {
    fn rate(&self) -> f64 {
        self.rate
    }
    fn distortion(&self) -> f64 {
        self.distortion
    }
}
