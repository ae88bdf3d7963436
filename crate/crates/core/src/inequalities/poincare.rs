use super::report::{safe_ratio, InequalityReport, PassRule, NON_SOLUTION_TAG};
use super::tolerances::ROUNDOFF_REL;
use crate::error::{invalid, Result};
use crate::field::quadrature::{window_of, BallSampler, Probe, DEFAULT_REFINEMENT};
use crate::field::{cylinder_average, cylinder_mean_map, Cylinder, FieldSource};
use crate::quantities::{compute_quantities, ScaleQuantities};

/// For every time the cylinder's sup rule visits and every `c`, checks
/// `(1/r)∫_B |u − u_B(t)|² ≤ (1/r)∫_B |u − c|²`. Returns one report per
/// `(t, c)` pair.
pub fn mean_deviation_check(u: &dyn FieldSource, cyl: &Cylinder, constants: &[f64]) -> Result<Vec<InequalityReport>> {
    let w = window_of(u, cyl)?;
    let smp = BallSampler::new(vec![Probe::new(u, 0)], cyl.x0, cyl.r, DEFAULT_REFINEMENT)?;
    let mut out = Vec::new();
    for t in u.sup_times(w.a, w.b) {
        let rows = smp.at(t, |sl| {
            let mean = sl.integrate(|i| sl.v(0, i)) / sl.measure();
            let dev = |c: f64| sl.integrate(|i| (sl.v(0, i) - c).powi(2)) / cyl.r;
            let best = dev(mean);
            constants.iter().map(|&c| (c, best, dev(c))).collect::<Vec<_>>()
        })?;
        for (c, best, other) in rows {
            let tol = ROUNDOFF_REL * other.abs().max(f64::MIN_POSITIVE);
            out.push(
                InequalityReport::new("mean_vs_constant", best, other, PassRule::Inequality { tol })
                    .term("t", t)
                    .term("c", c),
            );
        }
    }
    Ok(out)
}

/// `avg_{Q_{r/2}} |u − u_{Q_{r/2}}|³` against `G_r³ + ϑ G_r⁶ + F_r³`.
///
/// `ϑ = 1` for the nonlinear equation, `ϑ = 0` for biharmonic data.
pub fn parabolic_poincare_check(
    u: &dyn FieldSource,
    f: Option<&dyn FieldSource>,
    cyl: &Cylinder,
    vartheta: f64,
    p: f64,
    cap: f64,
) -> Result<InequalityReport> {
    if !(0.0..=1.0).contains(&vartheta) {
        return invalid(format!("vartheta must lie in [0, 1] (got {vartheta})"));
    }
    let q = compute_quantities(u, f, cyl, p)?;
    let half = cyl.scaled(0.5)?;
    let mean = cylinder_average(u, &half, 1.0, false)?;
    let lhs = cylinder_mean_map(u, 0, &half, |v| (v - mean).abs().powi(3))?;
    // oscillation at roundoff level counts as none
    let lhs = if lhs <= (ROUNDOFF_REL * (1.0 + mean.abs())).powi(3) {
        0.0
    } else {
        lhs
    };
    let g3 = q.g.powi(3);
    let (t1, t2, t3) = (g3, vartheta * g3 * g3, q.f.powi(3));
    Ok(
        InequalityReport::new("parabolic_poincare", lhs, t1 + t2 + t3, PassRule::RatioCap { cap })
            .tag_if(q.clipped, "clipped")
            .term("vartheta", vartheta)
            .term("gradient_term", t1)
            .term("nonlinear_term", t2)
            .term("forcing_term", t3),
    )
}

/// The three interpolation checks on one cylinder, in the order
/// `avg|u|³` vs `U^{9/7}G^{3/7} + U^{3/2}`, `G` vs `U^{5/24}L^{7/24} + U^{1/2}`,
/// `G` vs `O^{5/24}L^{7/24}`. The last only holds on the whole torus, so on
/// smaller balls it is informational.
pub fn interpolation_checks(u: &dyn FieldSource, cyl: &Cylinder, cap: f64) -> Result<[InequalityReport; 3]> {
    let q = compute_quantities(u, None, cyl, 2.0)?;
    let avg_u3 = cylinder_average(u, cyl, 3.0, true)?;
    Ok(interpolation_reports(&q, avg_u3, u.period(), cap))
}

/// [`interpolation_checks`] from precomputed quantities.
pub fn interpolation_reports(q: &ScaleQuantities, avg_u3: f64, period: f64, cap: f64) -> [InequalityReport; 3] {
    let rule = PassRule::RatioCap { cap };
    let r1 = q.u.powf(9.0 / 7.0) * q.g.powf(3.0 / 7.0) + q.u.powf(1.5);
    let r2 = q.u.powf(5.0 / 24.0) * q.l.powf(7.0 / 24.0) + q.u.sqrt();
    let r3 = q.o.powf(5.0 / 24.0) * q.l.powf(7.0 / 24.0);
    let whole_torus = 2.0 * q.cyl.r >= period * (1.0 - 1e-12);
    let third = if whole_torus {
        InequalityReport::new("interp_oscillation", q.g, r3, rule)
    } else {
        InequalityReport::new("interp_oscillation", q.g, r3, PassRule::Informational).tag("sub-torus ball")
    };
    [
        InequalityReport::new("interp_cubic", avg_u3, r1, rule),
        InequalityReport::new("interp_gradient", q.g, r2, rule),
        third,
    ]
    .map(|r| r.tag_if(q.clipped, "clipped").term("r", q.cyl.r))
}

/// `sup_{Q_{r/2}} |v_x|` against `‖v_x‖_{L²(Q_r)} + ‖v‖_{L²(Q_r)}`.
pub fn linf_estimate_check(
    v: &dyn FieldSource,
    cyl: &Cylinder,
    cap: f64,
    biharmonic: bool,
) -> Result<InequalityReport> {
    let half = cyl.scaled(0.5)?;
    let w = window_of(v, &half)?;
    let smp = BallSampler::new(vec![Probe::new(v, 1)], half.x0, half.r, DEFAULT_REFINEMENT)?;
    let sup = smp.sup(w.a, w.b, |sl| {
        (0..sl.len()).fold(0.0_f64, |m, i| m.max(sl.v(0, i).abs()))
    })?;
    let vol = cyl.volume();
    let l2x = (cylinder_mean_map(v, 1, cyl, |x| x * x)? * vol).sqrt();
    let l2 = (cylinder_mean_map(v, 0, cyl, |x| x * x)? * vol).sqrt();
    let rhs = l2x + l2;
    Ok(
        InequalityReport::new("linf_estimate", sup, rhs, PassRule::RatioCap { cap })
            .tag_if(!biharmonic, NON_SOLUTION_TAG)
            .term("r", cyl.r)
            .term("constant", safe_ratio(sup, rhs)),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::AnalyticField;
    use std::f64::consts::PI;

    fn linear_chart() -> AnalyticField {
        AnalyticField::new(2.0 * PI, (-1.0, 1.0), 0.02)
            .with(0, |x, _| x)
            .with(1, |_, _| 1.0)
            .with(2, |_, _| 0.0)
    }

    #[test]
    fn linear_chart_poincare_ratio() {
        let r = parabolic_poincare_check(
            &linear_chart(),
            None,
            &Cylinder::at_origin(0.5).unwrap(),
            0.0,
            2.0,
            100.0,
        )
        .unwrap();
        // avg over Q_{r/2} of |x|³ is (r/2)³/4, gradient term r³
        assert!((r.lhs - 0.25f64.powi(3) / 4.0).abs() < 1e-14);
        assert!((r.ratio.unwrap() - 1.0 / 32.0).abs() < 1e-12);
    }

    #[test]
    fn constant_passes_everything() {
        let c = AnalyticField::new(2.0 * PI, (-1.0, 1.0), 0.05)
            .with(0, |_, _| 2.0)
            .with(1, |_, _| 0.0)
            .with(2, |_, _| 0.0);
        let cyl = Cylinder::at_origin(0.5).unwrap();
        assert!(parabolic_poincare_check(&c, None, &cyl, 1.0, 2.0, 100.0).unwrap().pass);
        let reps = interpolation_checks(&c, &cyl, 100.0).unwrap();
        assert!(reps.iter().all(|r| r.pass));
        assert!(mean_deviation_check(&c, &cyl, &[0.0, 2.0, 3.0])
            .unwrap()
            .iter()
            .all(|r| r.pass));
    }
}
