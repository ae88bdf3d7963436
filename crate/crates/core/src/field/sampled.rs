use std::sync::OnceLock;

use rustfft::num_complex::Complex64;

use super::grid::{TimeGrid, TorusGrid};
use super::source::{FieldSource, Resolution};
use super::spectral::{self, Spectral};
use crate::error::{invalid, Error, Result};

/// Scalar field sampled on a periodic space grid times a uniform time grid.
///
/// Samples are row-major `(time, space)`. Immutable once built; the per-slice
/// spectra used for off-grid evaluation are computed lazily and shared.
pub struct SpaceTimeField {
    grid: TorusGrid,
    times: TimeGrid,
    samples: Vec<f64>,
    spectral: OnceLock<Spectral>,
    spectra: OnceLock<Vec<Vec<Complex64>>>,
}

impl Clone for SpaceTimeField {
    fn clone(&self) -> Self {
        Self {
            grid: self.grid,
            times: self.times,
            samples: self.samples.clone(),
            spectral: OnceLock::new(),
            spectra: OnceLock::new(),
        }
    }
}

impl std::fmt::Debug for SpaceTimeField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SpaceTimeField")
            .field("grid", &self.grid)
            .field("times", &self.times)
            .finish_non_exhaustive()
    }
}

impl PartialEq for SpaceTimeField {
    fn eq(&self, other: &Self) -> bool {
        self.grid == other.grid && self.times == other.times && self.samples == other.samples
    }
}

impl SpaceTimeField {
    pub fn new(grid: TorusGrid, times: TimeGrid, samples: Vec<f64>) -> Result<Self> {
        let expected = times.n_slices() * grid.n_points();
        if samples.len() != expected {
            return invalid(format!(
                "sample count {} does not match shape ({}, {})",
                samples.len(),
                times.n_slices(),
                grid.n_points()
            ));
        }
        if let Some(pos) = samples.iter().position(|v| !v.is_finite()) {
            let n = grid.n_points();
            return Err(Error::NonFinite(format!(
                "sample at slice {}, point {}",
                pos / n,
                pos % n
            )));
        }
        Ok(Self {
            grid,
            times,
            samples,
            spectral: OnceLock::new(),
            spectra: OnceLock::new(),
        })
    }

    /// Samples `f(x_j, t_n)` on the grids.
    pub fn from_fn(grid: TorusGrid, times: TimeGrid, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        let xs = grid.points();
        let mut samples = Vec::with_capacity(times.n_slices() * xs.len());
        for n in 0..times.n_slices() {
            let t = times.time(n);
            samples.extend(xs.iter().map(|&x| f(x, t)));
        }
        Self::new(grid, times, samples)
    }

    pub fn constant(grid: TorusGrid, times: TimeGrid, value: f64) -> Result<Self> {
        Self::from_fn(grid, times, |_, _| value)
    }

    /// Builds a field from per-slice rows.
    pub fn from_slices(grid: TorusGrid, times: TimeGrid, rows: Vec<Vec<f64>>) -> Result<Self> {
        if rows.iter().any(|r| r.len() != grid.n_points()) {
            return invalid("row length does not match n_points");
        }
        Self::new(grid, times, rows.into_iter().flatten().collect())
    }

    pub fn grid(&self) -> &TorusGrid {
        &self.grid
    }

    pub fn times(&self) -> &TimeGrid {
        &self.times
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn slice(&self, n: usize) -> &[f64] {
        let np = self.grid.n_points();
        &self.samples[n * np..(n + 1) * np]
    }

    pub fn max_abs(&self) -> f64 {
        self.samples.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    /// Pointwise map of the samples onto a new field on the same grids.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(self.grid, self.times, self.samples.iter().map(|&v| f(v)).collect())
    }

    /// `u - a`.
    pub fn shifted(&self, a: f64) -> Result<Self> {
        self.map(|v| v - a)
    }

    /// `c · u`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        self.map(|v| c * v)
    }

    pub(crate) fn spectral(&self) -> &Spectral {
        self.spectral.get_or_init(|| Spectral::new(self.grid))
    }

    fn spectra(&self) -> &[Vec<Complex64>] {
        self.spectra.get_or_init(|| {
            let sp = self.spectral();
            (0..self.times.n_slices())
                .map(|n| sp.half_spectrum(self.slice(n)))
                .collect()
        })
    }

    /// Per-slice spectral derivative of the given order (1 to 4).
    pub fn spectral_derivative(&self, order: usize) -> Result<Self> {
        if !(1..=4).contains(&order) {
            return invalid(format!("derivative order must be in 1..=4 (got {order})"));
        }
        let sp = self.spectral();
        let mult = sp.derivative_multiplier(order);
        let mut out = Vec::with_capacity(self.samples.len());
        for half in self.spectra() {
            let scaled: Vec<Complex64> = half.iter().zip(&mult).map(|(c, m)| c * m).collect();
            out.extend(sp.synthesize(&scaled));
        }
        Self::new(self.grid, self.times, out)
    }

    fn eval_slice(&self, n: usize, order: usize, xs: &[f64], out: &mut [f64]) {
        let mult = self.spectral().derivative_multiplier(order);
        let coeffs = spectral::weighted_coefficients(&self.spectra()[n], &mult);
        spectral::evaluate(&coeffs, &self.grid, xs, out);
    }
}

const SLICE_SNAP: f64 = 1e-12;

impl FieldSource for SpaceTimeField {
    fn period(&self) -> f64 {
        self.grid.period()
    }

    fn time_span(&self) -> (f64, f64) {
        (self.times.t_start(), self.times.t_end())
    }

    fn resolution(&self) -> Resolution {
        Resolution::Sampled {
            dx: self.grid.dx(),
            dt: self.times.dt(),
        }
    }

    /// Composite trapezoid over the stored slices strictly inside `(a, b)`
    /// plus the two (interpolated) end slices.
    fn time_rule(&self, a: f64, b: f64) -> Vec<(f64, f64)> {
        let mut nodes = vec![a];
        nodes.extend(self.times.interior_slices(a, b).map(|n| self.times.time(n)));
        nodes.push(b);
        let mut rule: Vec<(f64, f64)> = nodes.iter().map(|&t| (t, 0.0)).collect();
        for i in 0..nodes.len() - 1 {
            let h = 0.5 * (nodes[i + 1] - nodes[i]);
            rule[i].1 += h;
            rule[i + 1].1 += h;
        }
        rule
    }

    fn eval(&self, order: usize, t: f64, xs: &[f64], out: &mut [f64]) -> Result<()> {
        let (start, end) = self.time_span();
        let (i, w) = self.times.locate(t).ok_or(Error::TimeOutOfRange { t, start, end })?;
        if w <= SLICE_SNAP {
            self.eval_slice(i, order, xs, out);
        } else if w >= 1.0 - SLICE_SNAP {
            self.eval_slice(i + 1, order, xs, out);
        } else {
            let mut upper = vec![0.0; xs.len()];
            self.eval_slice(i, order, xs, out);
            self.eval_slice(i + 1, order, xs, &mut upper);
            for (o, u) in out.iter_mut().zip(upper) {
                *o = (1.0 - w) * *o + w * u;
            }
        }
        Ok(())
    }

    fn is_identically_zero(&self) -> bool {
        self.samples.iter().all(|&v| v == 0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grids() -> (TorusGrid, TimeGrid) {
        (TorusGrid::standard(32).unwrap(), TimeGrid::new(0.0, 0.1, 10).unwrap())
    }

    #[test]
    fn rejects_bad_shape_and_non_finite() {
        let (g, tg) = grids();
        assert!(SpaceTimeField::new(g, tg, vec![0.0; 10]).is_err());
        let mut s = vec![0.0; 11 * 32];
        s[40] = f64::NAN;
        assert!(matches!(SpaceTimeField::new(g, tg, s), Err(Error::NonFinite(_))));
    }

    #[test]
    fn derivative_orders() {
        let (g, tg) = grids();
        let u = SpaceTimeField::from_fn(g, tg, |x, _| x.sin()).unwrap();
        let du = u.spectral_derivative(1).unwrap();
        for (j, x) in g.points().iter().enumerate() {
            assert!((du.slice(3)[j] - x.cos()).abs() <= 1e-12);
        }
        assert!(u.spectral_derivative(0).is_err());
        assert!(u.spectral_derivative(5).is_err());
        let c = SpaceTimeField::constant(g, tg, 4.2).unwrap();
        for order in 1..=4 {
            assert!(c.spectral_derivative(order).unwrap().max_abs() < 1e-12);
        }
    }

    #[test]
    fn eval_interpolates_linearly_in_time() {
        let (g, tg) = grids();
        let u = SpaceTimeField::from_fn(g, tg, |x, t| t * x.cos()).unwrap();
        let mut out = [0.0];
        u.eval(0, 0.25, &[0.3], &mut out).unwrap();
        assert!((out[0] - 0.25 * 0.3_f64.cos()).abs() < 1e-12);
        assert!(u.eval(0, 1.2, &[0.3], &mut out).is_err());
    }

    #[test]
    fn trapezoid_time_rule_integrates_linear_exactly() {
        let (g, tg) = grids();
        let u = SpaceTimeField::constant(g, tg, 0.0).unwrap();
        let rule = u.time_rule(0.05, 0.72);
        let total: f64 = rule.iter().map(|(_, w)| w).sum();
        assert!((total - 0.67).abs() < 1e-14);
        let lin: f64 = rule.iter().map(|(t, w)| w * t).sum();
        assert!((lin - 0.5 * (0.72f64.powi(2) - 0.05f64.powi(2))).abs() < 1e-14);
    }
}
