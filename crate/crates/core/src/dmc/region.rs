//! Rate bounds and distortion of one auxiliary channel.

use serde::Serialize;

use crate::dmc::joint::{assemble_joint, expected_distortion, optimal_g, Estimator, Joint, Var};
use crate::dmc::model::{AuxChannel, DmcScenario};
use crate::error::Result;
use crate::frontier::Tradeoff;
use crate::region::{rate_bound, RateBound, RateTerms, SecrecyMode};

/// Largest `I(Ξ; U, Z)` accepted as independence.
pub const RESIDUAL_TOL: f64 = 1e-9;

/// Bounds after eliminating both auxiliary rates from the scheme's rate
/// conditions: `I(U,V;Y) − I(U,V;S)`, `I(V;Y|U) − I(V;Ξ,Z|U)` and
/// `I(U,V;Y) − I(U;S) − I(V;Ξ,Z|U)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EliminatedBounds {
    pub gp: f64,
    pub secrecy: f64,
    pub joint: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DmcRegionPoint {
    pub mode: SecrecyMode,
    pub rate: f64,
    pub distortion: f64,
    pub aux: AuxChannel,
    pub g: Estimator,
    pub terms: RateTerms,
    pub bound: RateBound,
    pub eliminated: EliminatedBounds,
    /// `I(Ξ; U, Z)`; only constrains the point in `message_and_state`.
    pub residual: f64,
    pub feasible: bool,
    pub infeasibility: Option<String>,
}

impl Tradeoff for DmcRegionPoint {
    fn rate(&self) -> f64 {
        self.rate
    }
    fn distortion(&self) -> f64 {
        self.distortion
    }
}

fn info(j: &Joint, a: &[Var], b: &[Var], c: &[Var]) -> f64 {
    j.info(a, b, c).expect("disjoint by construction")
}

/// The six terms, with `Ξ` included in the leakage term only when
/// `with_xi` is set.
pub fn rate_terms(j: &Joint, with_xi: bool) -> RateTerms {
    use Var::*;
    let leak: &[Var] = if with_xi { &[Xi, Z] } else { &[Z] };
    RateTerms {
        i_uv_y: info(j, &[U, V], &[Y], &[]),
        i_uv_s: info(j, &[U, V], &[S], &[]),
        i_v_y_given_u: info(j, &[V], &[Y], &[U]),
        i_v_xiz_given_u: info(j, &[V], leak, &[U]),
        i_u_y: info(j, &[U], &[Y], &[]),
        i_u_s: info(j, &[U], &[S], &[]),
    }
}

/// Evaluates `aux` on `sc` under `mode`. Infeasibility (dependence between
/// `Ξ` and `(U, Z)`, a failed filter or a negative bound) is reported in the
/// point, not as an error.
///
/// `message_only` treats `Ξ` as constant whatever the scenario's masking
/// table says; `message_and_state` uses the scenario's `P_{Ξ|S}`.
pub fn eval_region(sc: &DmcScenario, aux: &AuxChannel, mode: SecrecyMode) -> Result<DmcRegionPoint> {
    let joint = assemble_joint(sc, aux)?;
    Ok(eval_joint(sc, aux, &joint, mode))
}

pub(crate) fn eval_joint(
    sc: &DmcScenario,
    aux: &AuxChannel,
    joint: &Joint,
    mode: SecrecyMode,
) -> DmcRegionPoint {
    let with_xi = mode == SecrecyMode::MessageAndState;
    let terms = rate_terms(joint, with_xi);
    let (a, b) = terms.eliminated_pair();
    let eliminated = EliminatedBounds {
        gp: terms.gp_bound(),
        secrecy: a,
        joint: b,
    };
    let min_form = terms.secrecy_min_form();
    assert!(
        (min_form - a.min(b)).abs() <= 1e-9,
        "min-form {min_form} differs from eliminated pair ({a}, {b})"
    );
    let bound = rate_bound(mode, &terms);
    let residual = joint.independence_residual();
    let g = optimal_g(joint, &sc.distortion);
    let distortion = expected_distortion(joint, &sc.distortion, &g);

    let infeasibility = if with_xi && residual > RESIDUAL_TOL {
        Some(format!("I(Xi;U,Z) = {residual:.3e} exceeds {RESIDUAL_TOL:e}"))
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
    let feasible = infeasibility.is_none();
    DmcRegionPoint {
        mode,
        rate: if feasible { bound.rate } else { 0.0 },
        distortion,
        aux: aux.clone(),
        g,
        terms,
        bound,
        eliminated,
        residual,
        feasible,
        infeasibility,
    }
}
