//! Gaussian covariance algebra and the scalar Gaussian example.

pub mod region;
pub mod search;
pub mod system;

pub use region::{
    build_system, eval_distortion, eval_rate, evaluate, rate_terms, secrecy_feasible_params,
    AuxParams, GaussEvaluation, MaskingVariance, RegionPoint, ScenarioConfig,
    SecrecySubstitution,
};
pub use search::{frontier, frontier_seeded, nested_frontiers, FrontierResult, SearchConfig};
pub use system::{BaseSources, GaussianSystem, Independence, LinearExpr};
