use serde::Serialize;

use super::config::{resolvable, RegularityConfig, EMPIRICAL_STAMP};
use crate::error::{invalid, Result};
use crate::field::{Cylinder, FieldSource};
use crate::quantities::{compute_quantities, ScaleQuantities};

fn within(lhs: f64, rhs: f64) -> bool {
    lhs <= rhs + 1e-12 * rhs.abs()
}

/// One contraction variant evaluated on a pair of scales.
#[derive(Debug, Clone, Serialize)]
pub struct ContractionOutcome {
    pub variant: &'static str,
    pub ratio: f64,
    /// `G` on the small cylinder.
    pub lhs: f64,
    pub rhs: f64,
    pub satisfied: bool,
    /// Smallness hypothesis value and its threshold.
    pub hypothesis_value: f64,
    pub hypothesis_threshold: f64,
    pub in_hypothesis: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ContractionReport {
    pub x0: f64,
    pub t0: f64,
    pub r: f64,
    pub base: [f64; 5],
    pub outcomes: [ContractionOutcome; 3],
    pub stamp: &'static str,
}

/// Evaluates the three contraction variants at `(center, r)`:
///
/// * `G_{λr} ≤ ¼G_r + ¼F_r^{1/2}` under `G_r + F_r^{1/2} ≤ δ0`,
/// * `G_{θr} ≤ ¼G_r + ¼F_r^{1/2} + U_r^{1/4}` under `U_r ≤ δ1*`,
/// * `G_{θr} ≤ ¼G_r + ¼F_r^{1/2} + L_r^{1/4}` under `L_r < δ2*`.
///
/// Outcomes are observations only.
pub fn contraction_check(
    u: &dyn FieldSource,
    f: Option<&dyn FieldSource>,
    cfg: &RegularityConfig,
    center: (f64, f64),
    r: f64,
) -> Result<ContractionReport> {
    cfg.validate()?;
    let at = |s: f64| -> Result<ScaleQuantities> {
        let cyl = Cylinder::new(center.0, center.1, s)?;
        if !resolvable(u, &cyl) {
            return invalid(format!("radius {s} is below the field's resolvable scale"));
        }
        compute_quantities(u, f, &cyl, cfg.p)
    };
    let base = at(r)?;
    let small_l = at(cfg.lambda * r)?;
    let small_t = if cfg.theta == cfg.lambda {
        small_l
    } else {
        at(cfg.theta * r)?
    };
    let core = 0.25 * base.g + 0.25 * base.f.sqrt();
    let outcome = |variant, ratio, lhs: f64, rhs: f64, hv: f64, ht: f64, inside: bool| ContractionOutcome {
        variant,
        ratio,
        lhs,
        rhs,
        satisfied: within(lhs, rhs),
        hypothesis_value: hv,
        hypothesis_threshold: ht,
        in_hypothesis: inside,
    };
    let gf = base.g + base.f.sqrt();
    Ok(ContractionReport {
        x0: center.0,
        t0: center.1,
        r,
        base: base.values(),
        outcomes: [
            outcome(
                "gradient",
                cfg.lambda,
                small_l.g,
                core,
                gf,
                cfg.delta0,
                gf <= cfg.delta0,
            ),
            outcome(
                "energy",
                cfg.theta,
                small_t.g,
                core + base.u.powf(0.25),
                base.u,
                cfg.delta1_star,
                base.u <= cfg.delta1_star,
            ),
            outcome(
                "dissipation",
                cfg.theta,
                small_t.g,
                core + base.l.powf(0.25),
                base.l,
                cfg.delta2_star,
                base.l < cfg.delta2_star,
            ),
        ],
        stamp: EMPIRICAL_STAMP,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecayRow {
    pub k: usize,
    pub scale: f64,
    pub g: f64,
    pub f_half: f64,
    pub u_quarter: f64,
    pub l_quarter: f64,
    /// `G_1/4^k + k F_1^{1/2}/4^k`
    pub bound_gradient: f64,
    /// The gradient bound plus `Σ_{i<k} 4^{−(k−1−i)} U_{ρ^i}^{1/4}`.
    pub bound_energy: f64,
    pub gradient_ok: bool,
    pub energy_ok: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct DecayTrace {
    pub x0: f64,
    pub t0: f64,
    pub base: f64,
    /// Ratio between successive scales (`λ` from the config).
    pub ratio: f64,
    pub rows: Vec<DecayRow>,
    /// Number of steps asked for; `rows.len() − 1` may be smaller.
    pub requested: usize,
    pub truncated: bool,
    /// Least-squares slope of `ln G` against `k`, when at least two rows
    /// have `G > 0`.
    pub slope: Option<f64>,
    pub stamp: &'static str,
}

impl DecayTrace {
    pub fn all_within_bounds(&self) -> bool {
        self.rows.iter().all(|r| r.gradient_ok && r.energy_ok)
    }

    pub fn to_csv(&self) -> String {
        let mut out =
            String::from("k,scale,G,F_half,U_quarter,L_quarter,bound_gradient,bound_energy,gradient_ok,energy_ok\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{}\n",
                r.k,
                r.scale,
                r.g,
                r.f_half,
                r.u_quarter,
                r.l_quarter,
                r.bound_gradient,
                r.bound_energy,
                r.gradient_ok,
                r.energy_ok
            ));
        }
        out
    }
}

/// Quantities at `base · λ^k`, `k = 0..=k_max`, with both iterated bounds.
/// Stops at the first scale the field cannot resolve.
pub fn decay_trace(
    u: &dyn FieldSource,
    f: Option<&dyn FieldSource>,
    cfg: &RegularityConfig,
    center: (f64, f64),
    base: f64,
    k_max: usize,
) -> Result<DecayTrace> {
    cfg.validate()?;
    let mut rows: Vec<DecayRow> = Vec::new();
    let mut u_sum = 0.0;
    let mut truncated = false;
    let mut g1f1 = (0.0, 0.0);
    for k in 0..=k_max {
        let scale = base * cfg.lambda.powi(k as i32);
        let cyl = Cylinder::new(center.0, center.1, scale)?;
        if !resolvable(u, &cyl) {
            if k == 0 {
                return invalid(format!("base radius {base} is not resolvable"));
            }
            truncated = true;
            break;
        }
        let q = compute_quantities(u, f, &cyl, cfg.p)?;
        if k == 0 {
            g1f1 = (q.g, q.f.sqrt());
        }
        let w = 0.25f64.powi(k as i32);
        let bound_gradient = w * g1f1.0 + k as f64 * w * g1f1.1;
        // Σ_{i<k} 4^{−(k−1−i)} U_i^{1/4} = ¼·(previous sum) + U_{k−1}^{1/4}
        if let Some(prev) = rows.last() {
            u_sum = 0.25 * u_sum + prev.u_quarter;
        }
        let bound_energy = bound_gradient + u_sum;
        rows.push(DecayRow {
            k,
            scale,
            g: q.g,
            f_half: q.f.sqrt(),
            u_quarter: q.u.powf(0.25),
            l_quarter: q.l.powf(0.25),
            bound_gradient,
            bound_energy,
            gradient_ok: within(q.g, bound_gradient),
            energy_ok: within(q.g, bound_energy),
        });
    }
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.g > 0.0)
        .map(|r| (r.k as f64, r.g.ln()))
        .collect();
    Ok(DecayTrace {
        x0: center.0,
        t0: center.1,
        base,
        ratio: cfg.lambda,
        rows,
        requested: k_max,
        truncated,
        slope: least_squares(&pts).map(|(s, _)| s),
        stamp: EMPIRICAL_STAMP,
    })
}

/// `(slope, intercept)` of the least-squares line; `None` for fewer than two
/// points or no spread in `x`.
pub(crate) fn least_squares(pts: &[(f64, f64)]) -> Option<(f64, f64)> {
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    Some((slope, my - slope * mx))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::ZeroField;
    use crate::fixtures::linear_chart;
    use std::f64::consts::PI;

    #[test]
    fn zero_field_is_trivially_fine() {
        let z = ZeroField {
            period: 2.0 * PI,
            span: (-1.0, 1.0),
            dx: 0.05,
        };
        let cfg = RegularityConfig::default();
        let rep = contraction_check(&z, Some(&z), &cfg, (0.0, 0.0), 1.0).unwrap();
        assert!(rep
            .outcomes
            .iter()
            .all(|o| o.satisfied && o.in_hypothesis && o.lhs == 0.0));
        let tr = decay_trace(&z, None, &cfg, (0.0, 0.0), 1.0, 3).unwrap();
        assert!(tr.all_within_bounds());
        assert!(tr.slope.is_none());
        assert_eq!(tr.rows.len(), 4);
    }

    #[test]
    fn linear_chart_decays_like_lambda() {
        let u = linear_chart((-1.0, 1.0), 0.02);
        let cfg = RegularityConfig::default();
        let tr = decay_trace(&u, None, &cfg, (0.0, 0.0), 1.0, 3).unwrap();
        for row in &tr.rows {
            assert!((row.g - row.scale).abs() <= 1e-12 * row.scale, "{row:?}");
            assert!(row.gradient_ok);
        }
        assert!((tr.slope.unwrap() - cfg.lambda.ln()).abs() < 1e-10);
    }

    #[test]
    fn least_squares_line() {
        let (s, c) = least_squares(&[(0.0, 1.0), (1.0, 3.0), (2.0, 5.0)]).unwrap();
        assert!((s - 2.0).abs() < 1e-15 && (c - 1.0).abs() < 1e-15);
        assert!(least_squares(&[(1.0, 1.0)]).is_none());
    }
}
