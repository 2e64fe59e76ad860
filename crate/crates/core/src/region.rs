//! Secrecy modes and the rate constraints they impose.
//!
//! Both evaluators (Gaussian and finite-alphabet) reduce an auxiliary choice
//! to the same six information terms, collected in [`RateTerms`]. The mode
//! then decides which upper bounds on the message rate apply:
//!
//! | mode                | bounds                                                             |
//! |---------------------|--------------------------------------------------------------------|
//! | `none`              | `I(U,V;Y) − I(U,V;S)`                                              |
//! | `message_only`      | that, and `I(V;Y|U) − I(V;Z|U)`; requires `I(U;Y) ≥ I(U;S)`         |
//! | `message_and_state` | that, and `I(V;Y|U) − I(V;Ξ,Z|U) + min{0, I(U;Y) − I(U;S)}`; requires `Ξ ⊥ (U,Z)` |
//!
//! A negative bound means no nonnegative rate is supported by the auxiliary
//! choice, so the point is infeasible; otherwise the rate is the bound.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Slack below which a bound is treated as zero rather than negative.
pub const BOUND_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, PartialOrd, Ord)]
#[serde(rename_all = "snake_case")]
pub enum SecrecyMode {
    /// No eavesdropper constraint.
    None,
    /// Message secret, state public (`Ξ` constant).
    MessageOnly,
    /// Message and `Ξ` secret.
    MessageAndState,
}

impl SecrecyMode {
    pub const ALL: [SecrecyMode; 3] = [
        SecrecyMode::None,
        SecrecyMode::MessageOnly,
        SecrecyMode::MessageAndState,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SecrecyMode::None => "none",
            SecrecyMode::MessageOnly => "message_only",
            SecrecyMode::MessageAndState => "message_and_state",
        }
    }
}

impl fmt::Display for SecrecyMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SecrecyMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "none" => Ok(SecrecyMode::None),
            "message_only" => Ok(SecrecyMode::MessageOnly),
            "message_and_state" => Ok(SecrecyMode::MessageAndState),
            other => Err(format!(
                "unknown secrecy mode `{other}` (expected none, message_only or message_and_state)"
            )),
        }
    }
}

/// The information terms every bound is built from, in nats.
///
/// `i_v_xiz_given_u` is `I(V;Ξ,Z|U)` for whatever `Ξ` the system carries; with
/// a constant `Ξ` it is `I(V;Z|U)`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct RateTerms {
    pub i_uv_y: f64,
    pub i_uv_s: f64,
    pub i_v_y_given_u: f64,
    pub i_v_xiz_given_u: f64,
    pub i_u_y: f64,
    pub i_u_s: f64,
}

impl RateTerms {
    pub fn named(&self) -> [(&'static str, f64); 6] {
        [
            ("I(U,V;Y)", self.i_uv_y),
            ("I(U,V;S)", self.i_uv_s),
            ("I(V;Y|U)", self.i_v_y_given_u),
            ("I(V;Xi,Z|U)", self.i_v_xiz_given_u),
            ("I(U;Y)", self.i_u_y),
            ("I(U;S)", self.i_u_s),
        ]
    }

    /// `I(U,V;Y) − I(U,V;S)`.
    pub fn gp_bound(&self) -> f64 {
        self.i_uv_y - self.i_uv_s
    }

    /// `I(V;Y|U) − I(V;Ξ,Z|U) + min{0, I(U;Y) − I(U;S)}`.
    pub fn secrecy_min_form(&self) -> f64 {
        self.i_v_y_given_u - self.i_v_xiz_given_u + (self.i_u_y - self.i_u_s).min(0.0)
    }

    /// The pair that replaces [`Self::secrecy_min_form`] after eliminating the
    /// auxiliary rates: `I(V;Y|U) − I(V;Ξ,Z|U)` and
    /// `I(U,V;Y) − I(U;S) − I(V;Ξ,Z|U)`.
    pub fn eliminated_pair(&self) -> (f64, f64) {
        (
            self.i_v_y_given_u - self.i_v_xiz_given_u,
            self.i_uv_y - self.i_u_s - self.i_v_xiz_given_u,
        )
    }

    /// `min` of the three bounds that survive eliminating both auxiliary rates.
    pub fn eliminated_min(&self) -> f64 {
        let (a, b) = self.eliminated_pair();
        self.gp_bound().min(a).min(b)
    }

    /// `I(U;Y) ≥ I(U;S)`, the restriction that lets the third eliminated bound
    /// be dropped when `Ξ` is constant.
    pub fn passes_u_filter(&self) -> bool {
        self.i_u_y - self.i_u_s >= -BOUND_TOL
    }
}

/// A named rate upper bound and its margin over the reported rate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Constraint {
    pub name: String,
    pub bound: f64,
    pub slack: f64,
}

/// Mode-specific reduction of [`RateTerms`] to a rate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateBound {
    pub mode: SecrecyMode,
    /// Minimum of the active bounds; may be negative or `-∞`.
    pub bound: f64,
    /// `max(bound, 0)`.
    pub rate: f64,
    pub constraints: Vec<Constraint>,
    /// False when the mode's admissibility filter rejects the terms.
    pub filter_ok: bool,
}

impl RateBound {
    pub fn supports_nonnegative_rate(&self) -> bool {
        self.bound >= -BOUND_TOL
    }
}

/// Evaluates the mode's bounds. Independence of `Ξ` and `(U,Z)` is checked by
/// the caller, which knows how to test it for its distribution family.
pub fn rate_bound(mode: SecrecyMode, terms: &RateTerms) -> RateBound {
    let mut named: Vec<(&str, f64)> = vec![("I(U,V;Y)-I(U,V;S)", terms.gp_bound())];
    let mut filter_ok = true;
    match mode {
        SecrecyMode::None => {}
        SecrecyMode::MessageOnly => {
            named.push((
                "I(V;Y|U)-I(V;Z|U)",
                terms.i_v_y_given_u - terms.i_v_xiz_given_u,
            ));
            filter_ok = terms.passes_u_filter();
        }
        SecrecyMode::MessageAndState => {
            named.push((
                "I(V;Y|U)-I(V;Xi,Z|U)+min{0,I(U;Y)-I(U;S)}",
                terms.secrecy_min_form(),
            ));
        }
    }
    let bound = named.iter().fold(f64::INFINITY, |m, &(_, v)| m.min(v));
    let rate = if bound > 0.0 { bound } else { 0.0 };
    RateBound {
        mode,
        bound,
        rate,
        constraints: named
            .into_iter()
            .map(|(name, b)| Constraint {
                name: name.to_string(),
                bound: b,
                slack: b - rate,
            })
            .collect(),
        filter_ok,
    }
}

pub fn nats_to_bits(nats: f64) -> f64 {
    nats / std::f64::consts::LN_2
}

#[cfg(test)]
mod tests {
    use super::*;

    fn terms(v: [f64; 6]) -> RateTerms {
        RateTerms {
            i_uv_y: v[0],
            i_uv_s: v[1],
            i_v_y_given_u: v[2],
            i_v_xiz_given_u: v[3],
            i_u_y: v[4],
            i_u_s: v[5],
        }
    }

    #[test]
    fn mode_round_trips_through_strings() {
        for m in SecrecyMode::ALL {
            assert_eq!(m.as_str().parse::<SecrecyMode>().unwrap(), m);
        }
        assert!("both".parse::<SecrecyMode>().is_err());
    }

    #[test]
    fn negative_bound_is_clamped_and_flagged() {
        let t = terms([0.2, 0.5, 0.1, 0.0, 0.1, 0.0]);
        let b = rate_bound(SecrecyMode::None, &t);
        assert_eq!(b.rate, 0.0);
        assert!(!b.supports_nonnegative_rate());
    }

    #[test]
    fn infinite_leak_term_gives_minus_infinity() {
        let t = terms([1.0, 0.2, 0.8, f64::INFINITY, 0.2, 0.0]);
        let b = rate_bound(SecrecyMode::MessageAndState, &t);
        assert_eq!(b.bound, f64::NEG_INFINITY);
        assert_eq!(b.rate, 0.0);
    }

    #[test]
    fn min_form_matches_eliminated_pair() {
        // I(U;Y) < I(U;S) makes the min term active
        let t = terms([1.0, 0.6, 0.7, 0.2, 0.3, 0.4]);
        let (a, b) = t.eliminated_pair();
        assert!((t.secrecy_min_form() - a.min(b)).abs() < 1e-15);
        assert!(!t.passes_u_filter());
        assert!(!rate_bound(SecrecyMode::MessageOnly, &t).filter_ok);
    }

    #[test]
    fn slacks_are_nonnegative_for_feasible_points() {
        let t = terms([1.0, 0.5, 0.8, 0.3, 0.4, 0.2]);
        for m in SecrecyMode::ALL {
            let b = rate_bound(m, &t);
            assert!(b.supports_nonnegative_rate());
            assert!(b.constraints.iter().all(|c| c.slack >= 0.0));
        }
    }
}
