use crate::error::{invalid, Result};
use crate::field::quadrature::{window_of, BallSampler, Probe, DEFAULT_REFINEMENT};
use crate::field::{cylinder_average, Cylinder, FieldSource};

/// `G, U, O, L, F` on one cylinder.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaleQuantities {
    pub cyl: Cylinder,
    pub p: f64,
    /// `r · (avg_Q |u_x|³)^{1/3}`
    pub g: f64,
    /// `sup_t (1/r) ∫_B u²`
    pub u: f64,
    /// `sup_t (1/r) ∫_B (u − u_B(t))²`
    pub o: f64,
    /// `(1/r) ∫_Q u_xx²`
    pub l: f64,
    /// `r⁴ (avg_Q |f|^p)^{1/p}`
    pub f: f64,
    pub clipped: bool,
}

impl ScaleQuantities {
    pub fn values(&self) -> [f64; 5] {
        [self.g, self.u, self.o, self.l, self.f]
    }
}

pub const QUANTITY_NAMES: [&str; 5] = ["G", "U", "O", "L", "F"];

pub fn check_p(p: f64) -> Result<()> {
    if !(p.is_finite() && p > 1.5) {
        return invalid(format!("forcing exponent p must exceed 3/2 (got {p})"));
    }
    Ok(())
}

/// Computes all five quantities of `u` (and forcing `f`, `None` meaning zero)
/// on `cyl`.
pub fn compute_quantities(
    u: &dyn FieldSource,
    f: Option<&dyn FieldSource>,
    cyl: &Cylinder,
    p: f64,
) -> Result<ScaleQuantities> {
    check_p(p)?;
    let w = window_of(u, cyl)?;
    let r = cyl.r;
    let s = BallSampler::new(
        vec![Probe::new(u, 0), Probe::new(u, 1), Probe::new(u, 2)],
        cyl.x0,
        r,
        DEFAULT_REFINEMENT,
    )?;

    let (mut g3, mut l) = (0.0, 0.0);
    for (t, wt) in u.time_rule(w.a, w.b) {
        if wt == 0.0 {
            continue;
        }
        let (a, b) = s.at(t, |sl| {
            (
                sl.integrate(|i| sl.v(1, i).abs().powi(3)),
                sl.integrate(|i| sl.v(2, i).powi(2)),
            )
        })?;
        g3 += wt * a;
        l += wt * b;
    }

    let (mut u_sup, mut o_sup) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    for t in u.sup_times(w.a, w.b) {
        let (a, b) = s.at(t, |sl| {
            let mean = sl.integrate(|i| sl.v(0, i)) / sl.measure();
            (
                sl.integrate(|i| sl.v(0, i).powi(2)),
                sl.integrate(|i| (sl.v(0, i) - mean).powi(2)),
            )
        })?;
        u_sup = u_sup.max(a);
        o_sup = o_sup.max(b);
    }

    let f_val = match f {
        Some(f) if !f.is_identically_zero() => r.powi(4) * cylinder_average(f, cyl, p, true)?.powf(1.0 / p),
        _ => 0.0,
    };

    Ok(ScaleQuantities {
        cyl: *cyl,
        p,
        g: r * (g3 / cyl.volume()).max(0.0).cbrt(),
        u: u_sup / r,
        o: o_sup.max(0.0) / r,
        l: l / r,
        f: f_val,
        clipped: w.clipped,
    })
}

/// `(1/r) ∫_{B_r(x0)} (u(·, t) − c)²`, with `c = None` meaning the ball mean.
pub fn ball_deviation(u: &dyn FieldSource, x0: f64, r: f64, t: f64, c: Option<f64>) -> Result<f64> {
    Cylinder::new(x0, t, r)?.check_embeds(u.period())?;
    let s = BallSampler::new(vec![Probe::new(u, 0)], x0, r, DEFAULT_REFINEMENT)?;
    s.at(t, |sl| {
        let c = c.unwrap_or_else(|| sl.integrate(|i| sl.v(0, i)) / sl.measure());
        sl.integrate(|i| (sl.v(0, i) - c).powi(2)) / r
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{AnalyticField, SpaceTimeField, TimeGrid, TorusGrid};
    use std::f64::consts::PI;

    fn steady_sine() -> SpaceTimeField {
        let g = TorusGrid::standard(64).unwrap();
        let tg = TimeGrid::new(-0.25, 0.01, 50).unwrap();
        SpaceTimeField::from_fn(g, tg, |x, _| x.sin()).unwrap()
    }

    // independent oracle: closed-form antiderivatives
    fn sine_oracle(r: f64) -> (f64, f64, f64) {
        let cube = |x: f64| x.sin() - x.sin().powi(3) / 3.0; // ∫cos³
        let sq = |x: f64| x / 2.0 - (2.0 * x).sin() / 4.0; // ∫sin²
        let avg = (cube(r) - cube(-r)) / (2.0 * r);
        let ball = sq(r) - sq(-r);
        (r * avg.cbrt(), ball / r, 2.0 * r.powi(4) * ball / r)
    }

    #[test]
    fn steady_sine_matches_closed_form() {
        let u = steady_sine();
        let q = compute_quantities(&u, None, &Cylinder::at_origin(0.5).unwrap(), 2.0).unwrap();
        let (g, uu, l) = sine_oracle(0.5);
        assert!(((q.g - g) / g).abs() < 1e-8, "{} {g}", q.g);
        assert!(((q.u - uu) / uu).abs() < 1e-8);
        assert!(((q.l - l) / l).abs() < 1e-8);
        // frozen high-precision values
        assert!((g - 0.480117786549).abs() < 1e-11);
        assert!((uu - 0.158529015192).abs() < 1e-11);
        assert!((l - 0.0198161268990).abs() < 1e-12);
        assert_eq!(q.f, 0.0);
        assert!(!q.clipped);
    }

    #[test]
    fn linear_chart_and_constants() {
        let lin = AnalyticField::new(2.0 * PI, (-1.0, 1.0), 0.05)
            .with(0, |x, _| x)
            .with(1, |_, _| 1.0)
            .with(2, |_, _| 0.0);
        let q = compute_quantities(&lin, None, &Cylinder::at_origin(0.5).unwrap(), 3.0).unwrap();
        assert!((q.g - 0.5).abs() < 1e-12);
        assert_eq!(q.l, 0.0);
        assert!((q.o - 1.0 / 6.0).abs() < 1e-12);

        let g = TorusGrid::standard(32).unwrap();
        let tg = TimeGrid::new(-0.1, 0.01, 20).unwrap();
        let c = SpaceTimeField::constant(g, tg, 1.5).unwrap();
        let one = SpaceTimeField::constant(g, tg, 1.0).unwrap();
        let q = compute_quantities(&c, Some(&one), &Cylinder::at_origin(0.5).unwrap(), 2.0).unwrap();
        assert!(q.g < 1e-14 && q.o < 1e-14 && q.l < 1e-14);
        assert!((q.u - 2.0 * 2.25).abs() < 1e-12);
        assert!((q.f - 0.0625).abs() < 1e-14);
    }

    #[test]
    fn rejects_small_p() {
        let u = steady_sine();
        assert!(compute_quantities(&u, None, &Cylinder::at_origin(0.5).unwrap(), 1.5).is_err());
    }

    #[test]
    fn mean_minimizes_ball_deviation() {
        let u = steady_sine();
        let best = ball_deviation(&u, 1.0, 0.5, 0.0, None).unwrap();
        for c in [-1.0, 0.0, 0.5, 0.84, 2.0] {
            assert!(best <= ball_deviation(&u, 1.0, 0.5, 0.0, Some(c)).unwrap());
        }
    }
}
