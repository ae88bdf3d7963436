//! Space-time quadrature over balls and biparabolic cylinders.
//!
//! Spatial integrals use composite 4-point Gauss–Legendre panels on
//! `[x0 − r, x0 + r]`, with an even number of panels so the center is always
//! a panel edge. Temporal integrals use the rule supplied by the leading
//! field (trapezoid over stored slices for sampled data).

use super::cylinder::{Cylinder, Window};
use super::source::FieldSource;
use crate::error::{invalid, Result};

/// Evaluation points per grid cell.
pub const DEFAULT_REFINEMENT: usize = 8;

const GL4_NODES: [f64; 4] = [
    -0.861_136_311_594_052_6,
    -0.339_981_043_584_856_3,
    0.339_981_043_584_856_3,
    0.861_136_311_594_052_6,
];
const GL4_WEIGHTS: [f64; 4] = [
    0.347_854_845_137_453_85,
    0.652_145_154_862_546_2,
    0.652_145_154_862_546_2,
    0.347_854_845_137_453_85,
];

/// Composite 4-point Gauss–Legendre rule on `[a, b]`.
pub fn gauss_legendre_panels(a: f64, b: f64, panels: usize) -> Vec<(f64, f64)> {
    let h = (b - a) / panels as f64;
    let mut rule = Vec::with_capacity(4 * panels);
    for p in 0..panels {
        let mid = a + (p as f64 + 0.5) * h;
        for (s, w) in GL4_NODES.iter().zip(GL4_WEIGHTS) {
            rule.push((mid + 0.5 * h * s, 0.5 * h * w));
        }
    }
    rule
}

/// Nodes and weights on a ball `B_r(x0)`.
#[derive(Debug, Clone)]
pub struct SpatialRule {
    pub xs: Vec<f64>,
    pub ws: Vec<f64>,
}

impl SpatialRule {
    pub fn ball(x0: f64, r: f64, dx: f64, refinement: usize) -> Self {
        let cells = 2.0 * r / dx;
        let mut panels = ((cells * refinement as f64 / 4.0).ceil() as usize).max(2);
        if panels % 2 == 1 {
            panels += 1;
        }
        let (xs, ws) = gauss_legendre_panels(x0 - r, x0 + r, panels).into_iter().unzip();
        Self { xs, ws }
    }
}

/// One field evaluated at one derivative order.
#[derive(Clone, Copy)]
pub struct Probe<'a> {
    pub field: &'a dyn FieldSource,
    pub order: usize,
}

impl<'a> Probe<'a> {
    pub fn new(field: &'a dyn FieldSource, order: usize) -> Self {
        Self { field, order }
    }
}

/// All probes evaluated on the spatial nodes of one time slice.
pub struct Slice<'s> {
    pub t: f64,
    pub xs: &'s [f64],
    pub ws: &'s [f64],
    pub values: &'s [Vec<f64>],
}

impl Slice<'_> {
    /// `Σ_i w_i · g(i)` over the spatial nodes.
    pub fn integrate(&self, g: impl Fn(usize) -> f64) -> f64 {
        self.ws.iter().enumerate().map(|(i, w)| w * g(i)).sum()
    }

    /// Value of probe `p` at node `i`.
    pub fn v(&self, p: usize, i: usize) -> f64 {
        self.values[p][i]
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    /// Ball length `Σ w_i`.
    pub fn measure(&self) -> f64 {
        self.ws.iter().sum()
    }
}

/// Evaluates slice functionals of a set of probes over a ball.
pub struct BallSampler<'a> {
    probes: Vec<Probe<'a>>,
    rule: SpatialRule,
}

impl<'a> BallSampler<'a> {
    pub fn new(probes: Vec<Probe<'a>>, x0: f64, r: f64, refinement: usize) -> Result<Self> {
        if probes.is_empty() {
            return invalid("at least one probe is required");
        }
        let dx = probes
            .iter()
            .map(|p| p.field.resolution().dx())
            .fold(f64::INFINITY, f64::min);
        Ok(Self {
            rule: SpatialRule::ball(x0, r, dx, refinement.max(1)),
            probes,
        })
    }

    pub fn lead(&self) -> &dyn FieldSource {
        self.probes[0].field
    }

    /// Applies `g` to the slice at time `t`.
    pub fn at<T>(&self, t: f64, g: impl Fn(&Slice) -> T) -> Result<T> {
        let n = self.rule.xs.len();
        let mut values = Vec::with_capacity(self.probes.len());
        for p in &self.probes {
            let mut buf = vec![0.0; n];
            p.field.eval(p.order, t, &self.rule.xs, &mut buf)?;
            values.push(buf);
        }
        Ok(g(&Slice {
            t,
            xs: &self.rule.xs,
            ws: &self.rule.ws,
            values: &values,
        }))
    }

    /// `∫_a^b g(slice(t)) dt` with the lead field's time rule.
    pub fn time_integral(&self, a: f64, b: f64, g: impl Fn(&Slice) -> f64) -> Result<f64> {
        let mut total = 0.0;
        for (t, w) in self.lead().time_rule(a, b) {
            if w != 0.0 {
                total += w * self.at(t, &g)?;
            }
        }
        Ok(total)
    }

    /// `max_{t} g(slice(t))` over the lead field's supremum times.
    pub fn sup(&self, a: f64, b: f64, g: impl Fn(&Slice) -> f64) -> Result<f64> {
        let mut best = f64::NEG_INFINITY;
        for t in self.lead().sup_times(a, b) {
            best = best.max(self.at(t, &g)?);
        }
        Ok(best)
    }
}

/// Time window of `cyl` inside `field`, after checking the ball embeds.
pub fn window_of(field: &dyn FieldSource, cyl: &Cylinder) -> Result<Window> {
    cyl.check_embeds(field.period())?;
    cyl.window(field.time_span())
}

/// `(1/|Q_r|) ∫_{Q_r} |g|^exponent` (or the signed mean of `g` when
/// `absolute` is off, which requires `exponent == 1`). `|Q_r|` is always the
/// unclipped volume.
pub fn cylinder_average(field: &dyn FieldSource, cyl: &Cylinder, exponent: f64, absolute: bool) -> Result<f64> {
    cylinder_average_of(field, 0, cyl, exponent, absolute)
}

/// [`cylinder_average`] applied to `∂_x^order g`.
pub fn cylinder_average_of(
    field: &dyn FieldSource,
    order: usize,
    cyl: &Cylinder,
    exponent: f64,
    absolute: bool,
) -> Result<f64> {
    if !(exponent >= 1.0) {
        return invalid(format!("exponent must be >= 1 (got {exponent})"));
    }
    if !absolute && exponent != 1.0 {
        return invalid("signed averages require exponent 1");
    }
    let w = window_of(field, cyl)?;
    let s = BallSampler::new(vec![Probe::new(field, order)], cyl.x0, cyl.r, DEFAULT_REFINEMENT)?;
    let total = s.time_integral(w.a, w.b, |sl| {
        if absolute {
            sl.integrate(|i| sl.v(0, i).abs().powf(exponent))
        } else {
            sl.integrate(|i| sl.v(0, i))
        }
    })?;
    Ok(total / cyl.volume())
}

/// `(1/|Q_r|) ∫_{Q_r} h(∂_x^order g)` for an arbitrary pointwise map `h`.
pub fn cylinder_mean_map(field: &dyn FieldSource, order: usize, cyl: &Cylinder, h: impl Fn(f64) -> f64) -> Result<f64> {
    let w = window_of(field, cyl)?;
    let s = BallSampler::new(vec![Probe::new(field, order)], cyl.x0, cyl.r, DEFAULT_REFINEMENT)?;
    let total = s.time_integral(w.a, w.b, |sl| sl.integrate(|i| h(sl.v(0, i))))?;
    Ok(total / cyl.volume())
}

/// `∫_{B_r(x0)} |g(·, t)|^exponent dx` (no prefactor).
pub fn ball_integral(field: &dyn FieldSource, x0: f64, r: f64, t: f64, exponent: f64) -> Result<f64> {
    if !(exponent >= 1.0) {
        return invalid(format!("exponent must be >= 1 (got {exponent})"));
    }
    Cylinder::new(x0, t, r)?.check_embeds(field.period())?;
    let s = BallSampler::new(vec![Probe::new(field, 0)], x0, r, DEFAULT_REFINEMENT)?;
    s.at(t, |sl| sl.integrate(|i| sl.v(0, i).abs().powf(exponent)))
}

/// Maximum of `inner(t)` over the (clipped) cylinder interval: interior
/// stored slices plus both end points.
pub fn sup_over_times(field: &dyn FieldSource, cyl: &Cylinder, inner: impl Fn(f64) -> Result<f64>) -> Result<f64> {
    let w = window_of(field, cyl)?;
    let mut best = f64::NEG_INFINITY;
    for t in field.sup_times(w.a, w.b) {
        best = best.max(inner(t)?);
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_panels_integrate_polynomials() {
        let rule = gauss_legendre_panels(-0.3, 0.9, 3);
        let v: f64 = rule.iter().map(|(x, w)| w * x.powi(7)).sum();
        let exact = (0.9f64.powi(8) - 0.3f64.powi(8)) / 8.0;
        assert!((v - exact).abs() < 1e-15);
    }

    #[test]
    fn ball_rule_has_even_panels() {
        let rule = SpatialRule::ball(0.0, 0.01, 0.1, 8);
        assert_eq!(rule.xs.len(), 8);
        assert!(rule.xs.iter().all(|x| x.abs() > 0.0));
        let total: f64 = rule.ws.iter().sum();
        assert!((total - 0.02).abs() < 1e-16);
    }
}
