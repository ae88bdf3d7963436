use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{AnalyticField, ScalarFn, SpaceTimeField, TimeGrid, TorusGrid};

/// Closed-form `u(x, t)` with its time derivative and (some of) its spatial
/// derivatives, used to manufacture an exact forcing.
#[derive(Clone)]
pub struct ManufacturedSolution {
    name: String,
    u: ScalarFn,
    u_t: ScalarFn,
    spatial: [Option<ScalarFn>; 4],
}

impl std::fmt::Debug for ManufacturedSolution {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let orders: Vec<usize> = (1..=4).filter(|&k| self.has(k)).collect();
        f.debug_struct("ManufacturedSolution")
            .field("name", &self.name)
            .field("spatial_orders", &orders)
            .finish()
    }
}

impl ManufacturedSolution {
    pub fn new(
        name: impl Into<String>,
        u: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
        u_t: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            u: Arc::new(u),
            u_t: Arc::new(u_t),
            spatial: Default::default(),
        }
    }

    /// Adds `∂_x^order u` for `order` in 1..=4.
    pub fn with(mut self, order: usize, f: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        assert!((1..=4).contains(&order), "spatial order must be in 1..=4");
        self.spatial[order - 1] = Some(Arc::new(f));
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn has(&self, order: usize) -> bool {
        order == 0 || (1..=4).contains(&order) && self.spatial[order - 1].is_some()
    }

    fn derivative(&self, order: usize) -> Result<&ScalarFn> {
        if order == 0 {
            return Ok(&self.u);
        }
        self.spatial
            .get(order.wrapping_sub(1))
            .and_then(|d| d.as_ref())
            .ok_or(Error::MissingDerivative(order))
    }

    pub fn value(&self, x: f64, t: f64) -> f64 {
        (self.u)(x, t)
    }

    pub fn time_derivative(&self, x: f64, t: f64) -> f64 {
        (self.u_t)(x, t)
    }

    pub fn spatial_derivative(&self, order: usize, x: f64, t: f64) -> Result<f64> {
        Ok(self.derivative(order)?(x, t))
    }

    /// Orders needed by every forcing route.
    pub(crate) fn check_forcing_ready(&self) -> Result<()> {
        for order in [1, 2, 4] {
            self.derivative(order)?;
        }
        Ok(())
    }

    /// Pointwise `u_t + u_xxxx + 2(u_xx² + u_x u_xxx)`; needs `u_xxx`.
    pub fn forcing_at(&self, x: f64, t: f64) -> Result<f64> {
        let d1 = self.derivative(1)?(x, t);
        let d2 = self.derivative(2)?(x, t);
        let d3 = self.derivative(3)?(x, t);
        let d4 = self.derivative(4)?(x, t);
        Ok((self.u_t)(x, t) + d4 + 2.0 * (d2 * d2 + d1 * d3))
    }

    pub fn exact_field(&self, grid: TorusGrid, times: TimeGrid) -> Result<SpaceTimeField> {
        let u = self.u.clone();
        SpaceTimeField::from_fn(grid, times, move |x, t| u(x, t))
    }

    /// The solution as a closed-form field with every available derivative.
    pub fn analytic_field(&self, period: f64, span: (f64, f64), dx: f64) -> AnalyticField {
        let mut field = AnalyticField::new(period, span, dx).with_arc(0, self.u.clone());
        for order in 1..=4 {
            if let Some(d) = &self.spatial[order - 1] {
                field = field.with_arc(order, d.clone());
            }
        }
        field
    }

    /// `u = A e^{-t} sin x`.
    pub fn decaying_sine(amplitude: f64) -> Self {
        let a = amplitude;
        Self::new(
            format!("decaying_sine(A={a})"),
            move |x, t| a * (-t).exp() * x.sin(),
            move |x, t| -a * (-t).exp() * x.sin(),
        )
        .with(1, move |x, t| a * (-t).exp() * x.cos())
        .with(2, move |x, t| -a * (-t).exp() * x.sin())
        .with(3, move |x, t| -a * (-t).exp() * x.cos())
        .with(4, move |x, t| a * (-t).exp() * x.sin())
    }

    /// `u = A cos(t) sin x`; its forcing does not cancel the nonlinearity,
    /// so it exercises the full time discretization.
    pub fn oscillating(amplitude: f64) -> Self {
        let a = amplitude;
        Self::new(
            format!("oscillating(A={a})"),
            move |x, t| a * t.cos() * x.sin(),
            move |x, t| -a * t.sin() * x.sin(),
        )
        .with(1, move |x, t| a * t.cos() * x.cos())
        .with(2, move |x, t| -a * t.cos() * x.sin())
        .with(3, move |x, t| -a * t.cos() * x.cos())
        .with(4, move |x, t| a * t.cos() * x.sin())
    }

    pub fn constant(c: f64) -> Self {
        let mut s = Self::new(format!("constant(c={c})"), move |_, _| c, |_, _| 0.0);
        for order in 1..=4 {
            s = s.with(order, |_, _| 0.0);
        }
        s
    }

    /// `u = c(t)`, independent of `x`.
    pub fn spatially_uniform(
        c: impl Fn(f64) -> f64 + Send + Sync + 'static,
        dc: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        let mut s = Self::new("spatially_uniform", move |_, t| c(t), move |_, t| dc(t));
        for order in 1..=4 {
            s = s.with(order, |_, _| 0.0);
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // finite-difference oracle for u_t + u_xxxx + (u_x^2)_xx built from u alone
    fn fd_forcing(u: &dyn Fn(f64, f64) -> f64, x: f64, t: f64) -> f64 {
        let h = 1e-2;
        let ut = (u(x, t + h) - u(x, t - h)) / (2.0 * h);
        let d4 =
            (u(x + 2.0 * h, t) - 4.0 * u(x + h, t) + 6.0 * u(x, t) - 4.0 * u(x - h, t) + u(x - 2.0 * h, t)) / h.powi(4);
        let ux = |y: f64| (u(y + h, t) - u(y - h, t)) / (2.0 * h);
        let q = |y: f64| ux(y).powi(2);
        let qxx = (q(x + h) - 2.0 * q(x) + q(x - h)) / (h * h);
        ut + d4 + qxx
    }

    #[test]
    fn decaying_sine_forcing_matches_closed_form_and_fd() {
        let m = ManufacturedSolution::decaying_sine(1.0);
        let u = |x: f64, t: f64| (-t).exp() * x.sin();
        for &(x, t) in &[(0.3, 0.0), (1.7, 0.5), (-2.0, 1.0), (4.0, -0.7)] {
            let f = m.forcing_at(x, t).unwrap();
            let closed = -2.0 * (-2.0 * t).exp() * (2.0 * x).cos();
            assert!((f - closed).abs() < 1e-14, "{f} vs {closed}");
            assert!((f - fd_forcing(&u, x, t)).abs() < 1e-3);
        }
    }

    #[test]
    fn oscillating_forcing_matches_fd() {
        let m = ManufacturedSolution::oscillating(0.7);
        let u = |x: f64, t: f64| 0.7 * t.cos() * x.sin();
        for &(x, t) in &[(0.3, 0.2), (2.5, 1.1)] {
            assert!((m.forcing_at(x, t).unwrap() - fd_forcing(&u, x, t)).abs() < 1e-3);
        }
    }

    #[test]
    fn degenerate_profiles() {
        assert_eq!(ManufacturedSolution::constant(3.0).forcing_at(1.0, 2.0).unwrap(), 0.0);
        let s = ManufacturedSolution::spatially_uniform(|t| t * t, |t| 2.0 * t);
        assert_eq!(s.forcing_at(0.4, 1.5).unwrap(), 3.0);
        let partial = ManufacturedSolution::new("p", |x, _| x, |_, _| 0.0);
        assert_eq!(partial.check_forcing_ready(), Err(Error::MissingDerivative(1)));
    }
}
