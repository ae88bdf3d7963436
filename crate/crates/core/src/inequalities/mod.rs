//! Numerical checks of the energy, Poincaré, interpolation and decay
//! inequalities on computed or closed-form fields.

mod cutoff;
mod decay;
mod energy;
mod poincare;
mod report;
pub mod tolerances;

pub use cutoff::{bump, CutoffSpec};
pub use decay::{eta_p, f_decay_check};
pub use energy::{
    l103_bounds_check, local_energy_check, local_energy_estimate_check, weak_form_report, weak_form_residual,
};
pub use poincare::{
    interpolation_checks, interpolation_reports, linf_estimate_check, mean_deviation_check, parabolic_poincare_check,
};
pub use report::{safe_ratio, InequalityReport, PassRule, NON_SOLUTION_TAG};
