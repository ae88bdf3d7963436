use super::grid::{TimeGrid, TorusGrid};
use super::sampled::SpaceTimeField;
use super::source::FieldSource;
use crate::error::{invalid, Error, Result};

/// Grids on which a rescaled field is sampled.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RescaleTarget {
    pub grid: TorusGrid,
    pub times: TimeGrid,
}

impl RescaleTarget {
    /// Target grids whose nodes map exactly onto the source nodes:
    /// period `P/r`, same point count, `dt/r⁴`, shifted start.
    pub fn aligned(field: &SpaceTimeField, r: f64, center: (f64, f64)) -> Result<Self> {
        if !(r.is_finite() && r > 0.0) {
            return invalid(format!("rescale factor must be positive (got {r})"));
        }
        let src_t = field.times();
        let r4 = r.powi(4);
        Ok(Self {
            grid: TorusGrid::new(field.grid().n_points(), field.grid().period() / r)?,
            times: TimeGrid::new((src_t.t_start() - center.1) / r4, src_t.dt() / r4, src_t.n_steps())?,
        })
    }
}

/// Samples `u^r(x, t) = u(r·x + x0, r⁴·t + t0)` on the target grids:
/// trigonometric interpolation in space, linear in time.
pub fn rescale_field(
    field: &SpaceTimeField,
    r: f64,
    center: (f64, f64),
    target: &RescaleTarget,
) -> Result<SpaceTimeField> {
    if !(r.is_finite() && r > 0.0) {
        return invalid(format!("rescale factor must be positive (got {r})"));
    }
    let (x0, t0) = center;
    let r4 = r.powi(4);
    let (start, end) = field.time_span();
    let tol = 0.5 * field.times().dt();
    let xs: Vec<f64> = target.grid.points().iter().map(|&x| r * x + x0).collect();
    let mut samples = Vec::with_capacity(target.times.n_slices() * xs.len());
    let mut row = vec![0.0; xs.len()];
    for n in 0..target.times.n_slices() {
        let s = r4 * target.times.time(n) + t0;
        if s < start - tol || s > end + tol {
            return Err(Error::TimeOutOfRange { t: s, start, end });
        }
        field.eval(0, s.clamp(start, end), &xs, &mut row)?;
        samples.extend_from_slice(&row);
    }
    SpaceTimeField::new(target.grid, target.times, samples)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_and_half_scale() {
        let g = TorusGrid::standard(32).unwrap();
        let tg = TimeGrid::new(-1.0, 0.01, 200).unwrap();
        let u = SpaceTimeField::from_fn(g, tg, |x, t| (-t).exp() * x.sin() + 0.2 * (3.0 * x).cos()).unwrap();
        let same = rescale_field(
            &u,
            1.0,
            (0.0, 0.0),
            &RescaleTarget::aligned(&u, 1.0, (0.0, 0.0)).unwrap(),
        )
        .unwrap();
        let dev = u
            .samples()
            .iter()
            .zip(same.samples())
            .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()));
        assert!(dev <= 1e-10, "{dev}");

        let s = SpaceTimeField::from_fn(g, tg, |x, _| x.sin()).unwrap();
        let target = RescaleTarget::aligned(&s, 0.5, (0.0, 0.0)).unwrap();
        let half = rescale_field(&s, 0.5, (0.0, 0.0), &target).unwrap();
        for (j, x) in target.grid.points().iter().enumerate() {
            assert!((half.slice(7)[j] - (0.5 * x).sin()).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_windows_outside_the_source() {
        let g = TorusGrid::standard(16).unwrap();
        let tg = TimeGrid::new(0.0, 0.1, 10).unwrap();
        let u = SpaceTimeField::constant(g, tg, 1.0).unwrap();
        let target = RescaleTarget {
            grid: g,
            times: TimeGrid::new(0.0, 1.0, 10).unwrap(),
        };
        assert!(rescale_field(&u, 1.0, (0.0, 0.0), &target).is_err());
    }
}
