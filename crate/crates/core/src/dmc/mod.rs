//! Finite-alphabet evaluation from exact joint tables.

pub mod joint;
pub mod model;
pub mod region;
pub mod search;

pub use joint::{assemble_joint, expected_distortion, optimal_g, Estimator, Joint, Var, JOINT_CAP};
pub use model::{Alphabets, AuxChannel, DmcScenario};
pub use region::{eval_region, rate_terms, DmcRegionPoint, EliminatedBounds, RESIDUAL_TOL};
pub use search::{nested_search, search_aux, search_aux_seeded, DmcFrontier, DmcSearchConfig};
