use super::cutoff::CutoffSpec;
use super::report::{safe_ratio, InequalityReport, PassRule, NON_SOLUTION_TAG};
use super::tolerances::{local_energy_tol, weak_form_tol};
use crate::error::{invalid, Result};
use crate::field::quadrature::{gauss_legendre_panels, window_of, BallSampler, Probe, Slice, DEFAULT_REFINEMENT};
use crate::field::{cylinder_mean_map, Cylinder, FieldSource, Resolution, ZeroField};
use crate::quantities::check_p;

const U: usize = 0;
const UX: usize = 1;
const UXX: usize = 2;
const F: usize = 3;

fn zero_like(u: &dyn FieldSource) -> ZeroField {
    ZeroField {
        period: u.period(),
        span: u.time_span(),
        dx: u.resolution().dx(),
    }
}

/// Sampler over the cutoff's ball with probes `u, u_x, u_xx, f`.
fn cutoff_sampler<'a>(u: &'a dyn FieldSource, f: &'a dyn FieldSource, phi: &CutoffSpec) -> Result<BallSampler<'a>> {
    Cylinder::new(phi.x0, phi.t0, phi.r)?.check_embeds(u.period())?;
    BallSampler::new(
        vec![Probe::new(u, 0), Probe::new(u, 1), Probe::new(u, 2), Probe::new(f, 0)],
        phi.x0,
        phi.r,
        DEFAULT_REFINEMENT,
    )
}

fn check_times(u: &dyn FieldSource, lo: f64, hi: f64) -> Result<()> {
    let (start, end) = u.time_span();
    let eps = 1e-12 * (1.0 + start.abs().max(end.abs()));
    if !(lo < hi) {
        return invalid(format!("time interval ({lo}, {hi}) is empty"));
    }
    if lo < start - eps || hi > end + eps {
        return invalid(format!(
            "time interval ({lo}, {hi}) leaves the field's range [{start}, {end}]"
        ));
    }
    Ok(())
}

/// `∫_a^b Σ_k ∂_t^{orders[k]}χ(t) · g_k(t) dt`, where `χ` is the cutoff's time
/// factor and `g_k` are spatial integrals over the cutoff's ball.
///
/// For sampled fields the `g_k` are interpolated linearly between the nodes
/// of the field's time rule and integrated exactly against the polynomial
/// time factor; closed-form fields use their own rule.
fn cutoff_time_integral<const K: usize>(
    u: &dyn FieldSource,
    smp: &BallSampler,
    phi: &CutoffSpec,
    a: f64,
    b: f64,
    orders: [usize; K],
    g: impl Fn(&Slice) -> [f64; K],
) -> Result<[f64; K]> {
    let rule = u.time_rule(a, b);
    let mut out = [0.0; K];
    match u.resolution() {
        Resolution::Continuous { .. } => {
            for (t, w) in rule {
                if w == 0.0 {
                    continue;
                }
                let vals = smp.at(t, &g)?;
                for k in 0..K {
                    out[k] += w * phi.time_factor(orders[k], t) * vals[k];
                }
            }
        }
        Resolution::Sampled { .. } => {
            let nodes: Vec<f64> = rule.into_iter().map(|(t, _)| t).collect();
            let mut prev: Option<(f64, [f64; K])> = None;
            for &t in &nodes {
                let vals = smp.at(t, &g)?;
                if let Some((t0, v0)) = prev {
                    let h = t - t0;
                    if h > 0.0 {
                        for (s, w) in gauss_legendre_panels(t0, t, 2) {
                            let lam = (s - t0) / h;
                            for k in 0..K {
                                out[k] += w * phi.time_factor(orders[k], s) * ((1.0 - lam) * v0[k] + lam * vals[k]);
                            }
                        }
                    }
                }
                prev = Some((t, vals));
            }
        }
    }
    Ok(out)
}

/// `|LHS − RHS|` of the weak form tested against `φ` between `s_prev` and `s`:
/// `∫_B (uφ)(s) − (uφ)(s′) = ∫_{s′}^{s} ∫_B (uφ_t − u_xx φ_xx − u_x² φ_xx + fφ)`.
pub fn weak_form_residual(
    u: &dyn FieldSource,
    f: Option<&dyn FieldSource>,
    phi: &CutoffSpec,
    s_prev: f64,
    s: f64,
) -> Result<f64> {
    check_times(u, s_prev, s)?;
    let zero = zero_like(u);
    let smp = cutoff_sampler(u, f.unwrap_or(&zero), phi)?;
    let pairing = |t: f64| smp.at(t, |sl| sl.integrate(|i| sl.v(U, i) * phi.phi(sl.xs[i], t)));
    let lhs = pairing(s)? - pairing(s_prev)?;
    // uφ_t carries χ'(t); the other terms carry χ(t)
    let [with_dt, plain] = cutoff_time_integral(u, &smp, phi, s_prev, s, [1, 0], |sl| {
        [
            sl.integrate(|i| sl.v(U, i) * phi.space_factor(0, sl.xs[i])),
            sl.integrate(|i| {
                let x = sl.xs[i];
                let (ux, uxx) = (sl.v(UX, i), sl.v(UXX, i));
                -(uxx + ux * ux) * phi.space_factor(2, x) + sl.v(F, i) * phi.space_factor(0, x)
            }),
        ]
    })?;
    let rhs = with_dt + plain;
    Ok((lhs - rhs).abs())
}

/// Weak-form residual as a report against the resolution-scaled tolerance.
pub fn weak_form_report(
    u: &dyn FieldSource,
    f: Option<&dyn FieldSource>,
    phi: &CutoffSpec,
    s_prev: f64,
    s: f64,
    solution: bool,
) -> Result<InequalityReport> {
    let res = weak_form_residual(u, f, phi, s_prev, s)?;
    let rule = if solution {
        PassRule::Identity {
            tol: weak_form_tol(u.resolution()),
        }
    } else {
        PassRule::Informational
    };
    Ok(InequalityReport::new("weak_form", res, 0.0, rule)
        .tag_if(!solution, NON_SOLUTION_TAG)
        .term("s_prev", s_prev)
        .term("s", s))
}

/// Local energy balance at time `t` for `u − a`:
///
/// LHS = ½∫(u−a)²φ(t) + ∫∫u_xx²φ,
/// RHS = ∫∫ ½(φ_t − φ_xxxx)(u−a)² + 2u_x²φ_xx − (5/3)u_x³φ_x − u_x²(u−a)φ_xx + f(u−a)φ,
///
/// time integrals running from the start of `φ`'s support to `t`. For smooth
/// solutions it is an identity, so solutions are judged on `|RHS − LHS|`.
pub fn local_energy_check(
    u: &dyn FieldSource,
    f: Option<&dyn FieldSource>,
    phi: &CutoffSpec,
    t: f64,
    shift: f64,
    solution: bool,
) -> Result<InequalityReport> {
    let (start, _) = phi.time_support();
    check_times(u, start, t)?;
    let zero = zero_like(u);
    let smp = cutoff_sampler(u, f.unwrap_or(&zero), phi)?;
    let a = shift;

    let [with_dt, plain, dissipation] = cutoff_time_integral(u, &smp, phi, start, t, [1, 0, 0], |sl| {
        let s0 = |i: usize| phi.space_factor(0, sl.xs[i]);
        [
            sl.integrate(|i| 0.5 * (sl.v(U, i) - a).powi(2) * s0(i)),
            sl.integrate(|i| {
                let x = sl.xs[i];
                let v = sl.v(U, i) - a;
                let (ux, ux2) = (sl.v(UX, i), sl.v(UX, i).powi(2));
                let s2 = phi.space_factor(2, x);
                -0.5 * phi.space_factor(4, x) * v * v + 2.0 * ux2 * s2
                    - (5.0 / 3.0) * ux2 * ux * phi.space_factor(1, x)
                    - ux2 * v * s2
                    + sl.v(F, i) * v * s0(i)
            }),
            sl.integrate(|i| sl.v(UXX, i).powi(2) * s0(i)),
        ]
    })?;
    let rhs = with_dt + plain;
    let energy = smp.at(t, |sl| {
        sl.integrate(|i| 0.5 * (sl.v(U, i) - a).powi(2) * phi.phi(sl.xs[i], t))
    })?;
    let lhs = energy + dissipation;
    let tol = local_energy_tol(u.resolution());
    let rule = if solution {
        PassRule::Identity { tol }
    } else {
        PassRule::Inequality { tol }
    };
    let name = if a == 0.0 {
        "local_energy".to_string()
    } else {
        format!("local_energy_shifted(a={a})")
    };
    Ok(InequalityReport::new(name, lhs, rhs, rule)
        .tag_if(!solution, NON_SOLUTION_TAG)
        .term("t", t)
        .term("shift", a)
        .term("energy", energy)
        .term("dissipation", dissipation))
}

/// `∫_{Q} h(∂_x^order g)` (plain integral over the clipped cylinder).
fn cylinder_integral(g: &dyn FieldSource, order: usize, cyl: &Cylinder, h: impl Fn(f64) -> f64) -> Result<f64> {
    Ok(cylinder_mean_map(g, order, cyl, h)? * cyl.volume())
}

/// Unit-scale hypothesis terms on `Q_R`: `(∫|u|³, ∫|u_x|³, (∫|f|^p)^{3/(2p)})`
/// after rescaling `Q_R` to `Q_1`.
fn hypothesis_terms(
    u: &dyn FieldSource,
    f: Option<&dyn FieldSource>,
    cyl: &Cylinder,
    p: f64,
) -> Result<(f64, f64, f64)> {
    let r = cyl.r;
    let u3 = cylinder_integral(u, 0, cyl, |v| v.abs().powi(3))? / r.powi(5);
    let ux3 = cylinder_integral(u, 1, cyl, |v| v.abs().powi(3))? / r.powi(2);
    let fp = match f {
        Some(f) if !f.is_identically_zero() => {
            let i = cylinder_integral(f, 0, cyl, |v| v.abs().powf(p))? * r.powf(4.0 * p - 5.0);
            i.powf(3.0 / (2.0 * p))
        }
        _ => 0.0,
    };
    Ok((u3, ux3, fp))
}

/// Energy bound on the half cylinder against `|u|³ + |u_x|³` and the forcing
/// on the full one, both in unit-scale form; the ratio is the empirical
/// constant.
pub fn local_energy_estimate_check(
    u: &dyn FieldSource,
    f: Option<&dyn FieldSource>,
    cyl: &Cylinder,
    p: f64,
    cap: f64,
    solution: bool,
) -> Result<InequalityReport> {
    check_p(p)?;
    let r = cyl.r;
    let half = cyl.scaled(0.5)?;
    let w = window_of(u, &half)?;
    let smp = BallSampler::new(vec![Probe::new(u, 0)], half.x0, half.r, DEFAULT_REFINEMENT)?;
    let sup_energy = smp.sup(w.a, w.b, |sl| sl.integrate(|i| sl.v(0, i).powi(2)))?;
    let dissipation = cylinder_integral(u, 2, &half, |v| v * v)?;
    let lhs = (sup_energy + dissipation) / r;
    let (u3, ux3, fp) = hypothesis_terms(u, f, cyl, p)?;
    let rhs = u3 + ux3 + fp;
    Ok(
        InequalityReport::new("local_energy_estimate", lhs, rhs, PassRule::RatioCap { cap })
            .tag_if(!solution, NON_SOLUTION_TAG)
            .term("sup_energy", sup_energy / r)
            .term("dissipation", dissipation / r)
            .term("u3", u3)
            .term("ux3", ux3)
            .term("forcing", fp)
            .term("constant", safe_ratio(lhs, rhs)),
    )
}

/// Normalizes `(u, f) ↦ (c u, c f)` so that the unit-scale hypothesis sum is
/// one, then reports `∫_{Q_{1/2}} |cu|^{10/3} + |c u_x|^{10/3}`.
pub fn l103_bounds_check(
    u: &dyn FieldSource,
    f: Option<&dyn FieldSource>,
    cyl: &Cylinder,
    p: f64,
    cap: f64,
) -> Result<InequalityReport> {
    check_p(p)?;
    let (u3, ux3, fp) = hypothesis_terms(u, f, cyl, p)?;
    let a = u3 + ux3;
    let b = fp;
    let name = "l103_bounds";
    if a == 0.0 && b == 0.0 {
        return Ok(InequalityReport::new(name, 0.0, 1.0, PassRule::RatioCap { cap }).tag("degenerate hypothesis"));
    }
    // A c³ + B c^{3/2} = 1 with y = c^{3/2}
    let y = if a == 0.0 {
        1.0 / b
    } else {
        (-b + (b * b + 4.0 * a).sqrt()) / (2.0 * a)
    };
    let c = y.powf(2.0 / 3.0);
    let r = cyl.r;
    let e = 10.0 / 3.0;
    let half = cyl.scaled(0.5)?;
    let iu = cylinder_integral(u, 0, &half, |v| v.abs().powf(e))? / r.powi(5);
    let iux = cylinder_integral(u, 1, &half, |v| v.abs().powf(e))? * r.powf(e - 5.0);
    let value = c.powf(e) * (iu + iux);
    Ok(InequalityReport::new(name, value, 1.0, PassRule::RatioCap { cap })
        .term("normalization", c)
        .term("hypothesis_u", a)
        .term("hypothesis_f", b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::AnalyticField;
    use std::f64::consts::PI;

    #[test]
    fn zero_field_balances() {
        let z = ZeroField {
            period: 2.0 * PI,
            span: (-1.0, 1.0),
            dx: 0.1,
        };
        let phi = CutoffSpec::new(0.0, 0.0, 1.0).unwrap();
        assert_eq!(weak_form_residual(&z, None, &phi, -1.0, 1.0).unwrap(), 0.0);
        let r = local_energy_check(&z, None, &phi, 0.0, 0.0, true).unwrap();
        assert_eq!((r.lhs, r.rhs), (0.0, 0.0));
        assert!(r.pass);
        let r = local_energy_estimate_check(&z, None, &Cylinder::at_origin(1.0).unwrap(), 2.0, 100.0, true).unwrap();
        assert!(r.pass && r.ratio == Some(0.0));
        let r = l103_bounds_check(&z, None, &Cylinder::at_origin(1.0).unwrap(), 2.0, 100.0).unwrap();
        assert!(r.pass && r.lhs == 0.0);
    }

    #[test]
    fn steady_sine_is_not_a_weak_solution() {
        let u = AnalyticField::new(2.0 * PI, (-1.0, 1.0), 2.0 * PI / 64.0)
            .with(0, |x, _| x.sin())
            .with(1, |x, _| x.cos())
            .with(2, |x, _| -x.sin());
        let phi = CutoffSpec::new(0.0, 0.0, 1.0).unwrap();
        let res = weak_form_residual(&u, None, &phi, -1.0, 1.0).unwrap();
        // independent value of ∫∫(u_xx + u_x²)φ_xx from a 30-digit oracle
        assert!((res - 0.9345156172).abs() < 1e-8, "{res}");
    }
}
