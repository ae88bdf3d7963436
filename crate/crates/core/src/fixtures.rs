//! Reproducible test fields and point sets shared by the tests, the CLI and
//! the FFI layer.

use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Result};
use crate::field::{AnalyticField, SpaceTimeField, TimeGrid, TorusGrid};

/// One Fourier mode `(1 + c t)(a cos kx + b sin kx)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mode {
    pub k: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

/// Random trigonometric polynomial on the standard torus, linear in time.
#[derive(Debug, Clone, PartialEq)]
pub struct BandLimited {
    pub mean: f64,
    pub modes: Vec<Mode>,
}

impl BandLimited {
    /// Modes `1..=k_max` with amplitudes decaying like `1/k²`.
    pub fn random(seed: u64, k_max: usize) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mean = rng.gen_range(-1.0..1.0);
        let modes = (1..=k_max)
            .map(|k| {
                let s = 1.0 / (k * k) as f64;
                Mode {
                    k: k as f64,
                    a: s * rng.gen_range(-1.0..1.0),
                    b: s * rng.gen_range(-1.0..1.0),
                    c: rng.gen_range(-0.5..0.5),
                }
            })
            .collect();
        Self { mean, modes }
    }

    /// `∂_x^order u(x, t)`.
    pub fn value(&self, order: usize, x: f64, t: f64) -> f64 {
        let shift = order as f64 * FRAC_PI_2;
        let osc: f64 = self
            .modes
            .iter()
            .map(|m| {
                let ph = m.k * x + shift;
                (1.0 + m.c * t) * m.k.powi(order as i32) * (m.a * ph.cos() + m.b * ph.sin())
            })
            .sum();
        if order == 0 {
            self.mean + osc
        } else {
            osc
        }
    }

    pub fn sampled(&self, grid: TorusGrid, times: TimeGrid) -> Result<SpaceTimeField> {
        if self.modes.iter().any(|m| m.k as usize > grid.dealias_cutoff()) {
            return invalid("grid does not resolve the fixture's modes");
        }
        SpaceTimeField::from_fn(grid, times, |x, t| self.value(0, x, t))
    }

    pub fn analytic(&self, span: (f64, f64), dx: f64) -> AnalyticField {
        let me = Arc::new(self.clone());
        (0..=4).fold(AnalyticField::new(2.0 * PI, span, dx), |f, order| {
            let me = me.clone();
            f.with(order, move |x, t| me.value(order, x, t))
        })
    }
}

/// `u = x` (with `u_x = 1`, higher derivatives zero); valid away from the seam.
pub fn linear_chart(span: (f64, f64), dx: f64) -> AnalyticField {
    AnalyticField::new(2.0 * PI, span, dx)
        .with(0, |x, _| x)
        .with(1, |_, _| 1.0)
        .with(2, |_, _| 0.0)
        .with(3, |_, _| 0.0)
        .with(4, |_, _| 0.0)
}

/// Steady `u = sin x`.
pub fn steady_sine(span: (f64, f64), dx: f64) -> AnalyticField {
    (0..=4).fold(AnalyticField::new(2.0 * PI, span, dx), |f, order| {
        f.with(order, move |x, _| (x + order as f64 * FRAC_PI_2).sin())
    })
}

pub fn constant(value: f64, span: (f64, f64), dx: f64) -> AnalyticField {
    (0..=4).fold(AnalyticField::new(2.0 * PI, span, dx), |f, order| {
        f.with(order, move |_, _| if order == 0 { value } else { 0.0 })
    })
}

/// Steady `|sin x|^{1/2}`, Hölder-1/2 at the origin. Values only.
pub fn sqrt_abs_sine(span: (f64, f64), dx: f64) -> AnalyticField {
    AnalyticField::new(2.0 * PI, span, dx).with(0, |x, _| x.sin().abs().sqrt())
}

/// Steady `(sin²x + ε²)^{1/6} − ε^{1/3}`: periodic, smooth, and close to
/// `|x|^{1/3}` near the origin for small `ε`.
pub fn rough_power(eps: f64, span: (f64, f64), dx: f64) -> Result<AnalyticField> {
    if !(eps > 0.0 && eps.is_finite()) {
        return invalid(format!("smoothing length must be positive (got {eps})"));
    }
    let e2 = eps * eps;
    let floor = eps.cbrt();
    // w = sin²x + ε², w' = sin 2x, w'' = 2 cos 2x
    Ok(AnalyticField::new(2.0 * PI, span, dx)
        .with(0, move |x, _| (x.sin().powi(2) + e2).powf(1.0 / 6.0) - floor)
        .with(1, move |x, _| {
            let w = x.sin().powi(2) + e2;
            w.powf(-5.0 / 6.0) * (2.0 * x).sin() / 6.0
        })
        .with(2, move |x, _| {
            let w = x.sin().powi(2) + e2;
            let w1 = (2.0 * x).sin();
            let w2 = 2.0 * (2.0 * x).cos();
            (w.powf(-5.0 / 6.0) * w2 - 5.0 / 6.0 * w.powf(-11.0 / 6.0) * w1 * w1) / 6.0
        }))
}

/// `n` evenly spaced points `(x, t0)` with `x ∈ [a, b]`.
pub fn spatial_segment(a: f64, b: f64, t0: f64, n: usize) -> Vec<(f64, f64)> {
    linspace(a, b, n).map(|x| (x, t0)).collect()
}

/// `n` evenly spaced points `(x0, t)` with `t ∈ [a, b]`.
pub fn time_segment(x0: f64, a: f64, b: f64, n: usize) -> Vec<(f64, f64)> {
    linspace(a, b, n).map(|t| (x0, t)).collect()
}

fn linspace(a: f64, b: f64, n: usize) -> impl Iterator<Item = f64> {
    let step = if n > 1 { (b - a) / (n - 1) as f64 } else { 0.0 };
    (0..n).map(move |i| if i + 1 == n && n > 1 { b } else { a + step * i as f64 })
}
