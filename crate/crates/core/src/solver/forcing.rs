use std::sync::Arc;

use super::manufactured::ManufacturedSolution;
use crate::error::{invalid, Error, Result};
use crate::field::spectral::Spectral;
use crate::field::{FieldSource, ScalarFn, SpaceTimeField, TimeGrid, TorusGrid};

/// Right-hand side `f` of the growth equation.
#[derive(Clone)]
pub enum ForcingSpec {
    Zero,
    Analytic(ScalarFn),
    /// Forcing that makes the carried solution exact.
    Manufactured(ManufacturedSolution),
    Sampled(SpaceTimeField),
}

impl std::fmt::Debug for ForcingSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ForcingSpec::Zero => write!(f, "Zero"),
            ForcingSpec::Analytic(_) => write!(f, "Analytic(<closure>)"),
            ForcingSpec::Manufactured(m) => f.debug_tuple("Manufactured").field(m).finish(),
            ForcingSpec::Sampled(s) => f.debug_tuple("Sampled").field(s).finish(),
        }
    }
}

/// Forcing manufactured from an exact solution.
///
/// Uses `2(u_xx² + u_x u_xxx)` for the quadratic term when `u_xxx` is
/// supplied, otherwise differentiates the sampled `u_x²` spectrally.
pub fn manufactured_forcing(u_exact: &ManufacturedSolution) -> Result<ForcingSpec> {
    u_exact.check_forcing_ready()?;
    Ok(ForcingSpec::Manufactured(u_exact.clone()))
}

impl ForcingSpec {
    pub fn analytic(f: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        ForcingSpec::Analytic(Arc::new(f))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            ForcingSpec::Zero => true,
            ForcingSpec::Sampled(s) => s.is_identically_zero(),
            _ => false,
        }
    }

    pub fn exact_solution(&self) -> Option<&ManufacturedSolution> {
        match self {
            ForcingSpec::Manufactured(m) => Some(m),
            _ => None,
        }
    }

    /// Writes `f(x_j, t)` at the grid points.
    pub fn eval_on_grid(&self, spectral: &Spectral, t: f64, out: &mut [f64]) -> Result<()> {
        let grid = spectral.grid();
        match self {
            ForcingSpec::Zero => out.iter_mut().for_each(|v| *v = 0.0),
            ForcingSpec::Analytic(f) => {
                for (j, o) in out.iter_mut().enumerate() {
                    *o = f(grid.x(j), t);
                }
            }
            ForcingSpec::Manufactured(m) if m.has(3) => {
                for (j, o) in out.iter_mut().enumerate() {
                    *o = m.forcing_at(grid.x(j), t)?;
                }
            }
            ForcingSpec::Manufactured(m) => {
                let q: Vec<f64> = (0..grid.n_points())
                    .map(|j| m.spatial_derivative(1, grid.x(j), t).map(|v| v * v))
                    .collect::<Result<_>>()?;
                let qxx = spectral.differentiate(&q, 2);
                for (j, o) in out.iter_mut().enumerate() {
                    let x = grid.x(j);
                    *o = m.time_derivative(x, t) + m.spatial_derivative(4, x, t)? + qxx[j];
                }
            }
            ForcingSpec::Sampled(s) => {
                if s.grid() == grid {
                    let (start, end) = s.time_span();
                    let (i, w) = s.times().locate(t).ok_or(Error::TimeOutOfRange { t, start, end })?;
                    let lo = s.slice(i);
                    if w == 0.0 {
                        out.copy_from_slice(lo);
                    } else {
                        let hi = s.slice(i + 1);
                        for (o, (a, b)) in out.iter_mut().zip(lo.iter().zip(hi)) {
                            *o = (1.0 - w) * a + w * b;
                        }
                    }
                } else {
                    if (s.grid().period() - grid.period()).abs() > 1e-12 * grid.period() {
                        return invalid("sampled forcing lives on a torus of a different period");
                    }
                    s.eval(0, t, &grid.points(), out)?;
                }
            }
        }
        Ok(())
    }

    /// The forcing sampled on the given grids (for diagnostics).
    pub fn sample(&self, grid: TorusGrid, times: TimeGrid) -> Result<SpaceTimeField> {
        let sp = Spectral::new(grid);
        let mut samples = vec![0.0; grid.n_points() * times.n_slices()];
        for (n, row) in samples.chunks_mut(grid.n_points()).enumerate() {
            self.eval_on_grid(&sp, times.time(n), row)?;
        }
        SpaceTimeField::new(grid, times, samples)
    }
}
