//! Space-time fields, grids, and the quadrature used by every diagnostic.

mod analytic;
mod cylinder;
mod grid;
pub mod io;
pub mod quadrature;
mod rescale;
mod sampled;
mod source;
pub mod spectral;

pub use analytic::{AnalyticField, ScalarFn};
pub use cylinder::{Cylinder, Window};
pub use grid::{TimeGrid, TorusGrid};
pub use quadrature::{ball_integral, cylinder_average, cylinder_average_of, cylinder_mean_map, sup_over_times};
pub use rescale::{rescale_field, RescaleTarget};
pub use sampled::SpaceTimeField;
pub use source::{FieldSource, Resolution, ZeroField};
