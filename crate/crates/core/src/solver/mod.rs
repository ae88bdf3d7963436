//! Pseudospectral time integration on the torus.

mod config;
mod forcing;
mod manufactured;
mod stepper;

pub use config::{Scheme, SolverConfig};
pub use forcing::{manufactured_forcing, ForcingSpec};
pub use manufactured::ManufacturedSolution;
pub use stepper::{
    integrate_biharmonic, integrate_sgm, integrate_sgm_traced, phi_functions, product_spectrum, StepStats, Trajectory,
};
