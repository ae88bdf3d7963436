//! Scale-invariant quantities on biparabolic cylinders.

mod compute;
mod profile;
mod transforms;

pub use compute::{ball_deviation, check_p, compute_quantities, ScaleQuantities, QUANTITY_NAMES};
pub use profile::{multiscale_profile, radius_ladder, CenterSummary, Profile, ProfileRow, PROFILE_HEADER};
pub use transforms::{
    relative_gap, scaling_identity_residual, translation_invariance_residual, ScalingResidual, TranslationResidual,
    RELATIVE_FLOOR,
};
