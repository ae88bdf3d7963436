use crate::error::Result;

/// Sampling resolution of a field, used for refinement and for deciding
/// which scales a diagnostic may resolve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Resolution {
    /// Stored on a grid with spacing `dx` and stored-slice spacing `dt`.
    Sampled { dx: f64, dt: f64 },
    /// Closed-form field; `dx` only sets the quadrature density.
    Continuous { dx: f64 },
}

impl Resolution {
    pub fn dx(&self) -> f64 {
        match *self {
            Resolution::Sampled { dx, .. } | Resolution::Continuous { dx } => dx,
        }
    }
}

/// Anything that can be evaluated (with spatial derivatives) at arbitrary
/// points of its space-time domain.
///
/// Implementations decide their own temporal quadrature: sampled fields use
/// the stored slices, closed-form fields use Gauss rules.
pub trait FieldSource: Send + Sync {
    fn period(&self) -> f64;

    /// Closed time range `(start, end)` on which the field is defined.
    fn time_span(&self) -> (f64, f64);

    fn resolution(&self) -> Resolution;

    /// Quadrature nodes and weights for `∫_a^b · dt`, `a <= b` inside the span.
    fn time_rule(&self, a: f64, b: f64) -> Vec<(f64, f64)>;

    /// Times examined when taking a supremum over `[a, b]`.
    fn sup_times(&self, a: f64, b: f64) -> Vec<f64> {
        self.time_rule(a, b).into_iter().map(|(t, _)| t).collect()
    }

    /// Writes `∂_x^order u(x, t)` for every `x` in `xs` into `out`.
    fn eval(&self, order: usize, t: f64, xs: &[f64], out: &mut [f64]) -> Result<()>;

    /// True only when the field is known to vanish everywhere.
    fn is_identically_zero(&self) -> bool {
        false
    }
}

/// The zero field on a given domain.
#[derive(Debug, Clone, Copy)]
pub struct ZeroField {
    pub period: f64,
    pub span: (f64, f64),
    pub dx: f64,
}

impl FieldSource for ZeroField {
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
        vec![(a, 0.5 * (b - a)), (b, 0.5 * (b - a))]
    }

    fn eval(&self, _order: usize, _t: f64, _xs: &[f64], out: &mut [f64]) -> Result<()> {
        out.iter_mut().for_each(|v| *v = 0.0);
        Ok(())
    }

    fn is_identically_zero(&self) -> bool {
        true
    }
}
