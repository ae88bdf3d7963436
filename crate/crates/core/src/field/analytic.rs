use std::sync::Arc;

use super::quadrature::gauss_legendre_panels;
use super::source::{FieldSource, Resolution};
use crate::error::{Error, Result};

/// Closure `(x, t) -> value`.
pub type ScalarFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// Field given in closed form, with optional closures for its spatial
/// derivatives up to fourth order.
///
/// Closures receive unwrapped coordinates; periodicity (if any) is the
/// closure's responsibility. Fixtures such as the linear chart `u = x` are
/// only meaningful on cylinders away from the seam.
#[derive(Clone)]
pub struct AnalyticField {
    period: f64,
    span: (f64, f64),
    dx: f64,
    time_panels: usize,
    derivatives: [Option<ScalarFn>; 5],
}

impl std::fmt::Debug for AnalyticField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let orders: Vec<usize> = (0..5).filter(|&k| self.derivatives[k].is_some()).collect();
        f.debug_struct("AnalyticField")
            .field("period", &self.period)
            .field("span", &self.span)
            .field("dx", &self.dx)
            .field("orders", &orders)
            .finish()
    }
}

impl AnalyticField {
    /// `dx` is the nominal spacing that drives spatial quadrature density.
    pub fn new(period: f64, span: (f64, f64), dx: f64) -> Self {
        Self {
            period,
            span,
            dx,
            time_panels: 16,
            derivatives: Default::default(),
        }
    }

    pub fn with(mut self, order: usize, f: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        assert!(order <= 4, "derivative order must be at most 4");
        self.derivatives[order] = Some(Arc::new(f));
        self
    }

    pub fn with_arc(mut self, order: usize, f: ScalarFn) -> Self {
        assert!(order <= 4, "derivative order must be at most 4");
        self.derivatives[order] = Some(f);
        self
    }

    pub fn with_time_panels(mut self, panels: usize) -> Self {
        self.time_panels = panels.max(1);
        self
    }

    /// `c · u`, derivatives included.
    pub fn scaled(&self, c: f64) -> Self {
        let mut out = self.clone();
        for d in out.derivatives.iter_mut() {
            if let Some(f) = d.take() {
                *d = Some(Arc::new(move |x, t| c * f(x, t)));
            }
        }
        out
    }

    pub fn has(&self, order: usize) -> bool {
        self.derivatives.get(order).is_some_and(|d| d.is_some())
    }

    pub fn value(&self, order: usize, x: f64, t: f64) -> Result<f64> {
        let f = self
            .derivatives
            .get(order)
            .and_then(|d| d.as_ref())
            .ok_or(Error::MissingDerivative(order))?;
        Ok(f(x, t))
    }

    /// Steady field `value(x)` with derivatives, on the standard span.
    pub fn steady(
        period: f64,
        span: (f64, f64),
        dx: f64,
        derivatives: Vec<Box<dyn Fn(f64) -> f64 + Send + Sync>>,
    ) -> Self {
        let mut field = Self::new(period, span, dx);
        for (order, d) in derivatives.into_iter().enumerate().take(5) {
            field = field.with(order, move |x, _| d(x));
        }
        field
    }
}

impl FieldSource for AnalyticField {
    fn period(&self) -> f64 {
        self.period
    }

    fn time_span(&self) -> (f64, f64) {
        self.span
    }

    fn resolution(&self) -> Resolution {
        Resolution::Continuous { dx: self.dx }
    }

    fn time_rule(&self, a: f64, b: f64) -> Vec<(f64, f64)> {
        if b <= a {
            return vec![(a, 0.0)];
        }
        gauss_legendre_panels(a, b, self.time_panels)
    }

    fn sup_times(&self, a: f64, b: f64) -> Vec<f64> {
        let m = 4 * self.time_panels;
        (0..=m).map(|i| a + (b - a) * i as f64 / m as f64).collect()
    }

    fn eval(&self, order: usize, t: f64, xs: &[f64], out: &mut [f64]) -> Result<()> {
        let (start, end) = self.span;
        let tol = 1e-12 * (1.0 + end.abs().max(start.abs()));
        if t < start - tol || t > end + tol {
            return Err(Error::TimeOutOfRange { t, start, end });
        }
        let f = self
            .derivatives
            .get(order)
            .and_then(|d| d.as_ref())
            .ok_or(Error::MissingDerivative(order))?;
        for (x, o) in xs.iter().zip(out.iter_mut()) {
            *o = f(*x, t);
        }
        Ok(())
    }
}
