//! Empirical regularity monitor: contraction and decay traces, the `k0`,
//! `r0`, `α` formulas, Campanato fits, singular candidates and covers.

mod campanato;
mod config;
mod contraction;
mod cover;
mod formulas;
mod singular;

pub use campanato::{campanato_estimate, CampanatoEstimate, CampanatoRow, HolderFit};
pub use config::{resolvable, RegularityConfig, EMPIRICAL_STAMP};
pub use contraction::{contraction_check, decay_trace, ContractionOutcome, ContractionReport, DecayRow, DecayTrace};
pub use cover::{
    biparabolic_cover, box_dimension_estimate, cover_count, BoxDimension, CoverCylinder, CoverEstimate, LADDER_DEPTH,
};
pub use formulas::{alpha_from_lambda, k0_and_r0};
pub use singular::{detect_singular_candidates, CenterVerdict, Criterion, SingularReport};
