use super::report::{InequalityReport, PassRule};
use super::tolerances::ROUNDOFF_REL;
use crate::error::{invalid, Result};
use crate::field::{Cylinder, FieldSource};
use crate::quantities::{check_p, compute_quantities};

/// `η_p = 4^{−2p/(2p−3)}`, defined for `p > 3/2`.
pub fn eta_p(p: f64) -> Result<f64> {
    check_p(p)?;
    let e = -2.0 * p / (2.0 * p - 3.0);
    // integer exponents are evaluated exactly
    if e.fract() == 0.0 && e.abs() < 1024.0 {
        Ok(4f64.powi(e as i32))
    } else {
        Ok(4f64.powf(e))
    }
}

/// For `k = 0..=k_max`, compares `F_{r^k}` with `4^{−2k} F_1` on cylinders
/// about `center`.
pub fn f_decay_check(
    f: &dyn FieldSource,
    center: (f64, f64),
    p: f64,
    r: f64,
    k_max: usize,
) -> Result<Vec<InequalityReport>> {
    let eta = eta_p(p)?;
    if !(r > 0.0 && r <= eta) {
        return invalid(format!("r must lie in (0, η_p = {eta}] (got {r})"));
    }
    let (x0, t0) = center;
    let base = compute_quantities(f, Some(f), &Cylinder::new(x0, t0, 1.0)?, p)?;
    let f1 = base.f;
    let mut out = Vec::with_capacity(k_max + 1);
    for k in 0..=k_max {
        let rk = r.powi(k as i32);
        let q = compute_quantities(f, Some(f), &Cylinder::new(x0, t0, rk)?, p)?;
        let bound = f1 / 16f64.powi(k as i32);
        out.push(
            InequalityReport::new(
                format!("f_decay(k={k})"),
                q.f,
                bound,
                PassRule::Inequality { tol: ROUNDOFF_REL * f1 },
            )
            .tag_if(q.clipped || base.clipped, "clipped")
            .term("k", k as f64)
            .term("radius", rk),
        );
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{AnalyticField, ZeroField};
    use std::f64::consts::PI;

    #[test]
    fn eta_values() {
        assert_eq!(eta_p(3.0).unwrap(), 0.0625);
        assert_eq!(eta_p(2.0).unwrap(), 1.0 / 256.0);
        assert!(eta_p(1.5).is_err());
        assert!(eta_p(1.5 + 1e-6).unwrap() < 1e-100);
        // the exponent tends to −1, so η_p → 1/4
        assert!((eta_p(1e9).unwrap() - 0.25).abs() < 1e-8);
        let grid: Vec<f64> = (1..200).map(|i| 1.5 + 0.05 * i as f64).collect();
        assert!(grid.windows(2).all(|w| eta_p(w[0]).unwrap() < eta_p(w[1]).unwrap()));
    }

    #[test]
    fn constant_forcing_decays() {
        let one = AnalyticField::new(2.0 * PI, (-1.0, 1.0), 0.1)
            .with(0, |_, _| 1.0)
            .with(1, |_, _| 0.0)
            .with(2, |_, _| 0.0);
        let reps = f_decay_check(&one, (0.0, 0.0), 2.0, 1.0 / 256.0, 2).unwrap();
        assert!(reps.iter().all(|r| r.pass));
        assert!((reps[1].lhs - (1.0f64 / 256.0).powi(4)).abs() < 1e-20);
        let z = ZeroField {
            period: 2.0 * PI,
            span: (-1.0, 1.0),
            dx: 0.1,
        };
        assert!(f_decay_check(&z, (0.0, 0.0), 3.0, 0.0625, 2)
            .unwrap()
            .iter()
            .all(|r| r.pass && r.lhs == 0.0));
        assert!(f_decay_check(&z, (0.0, 0.0), 3.0, 0.07, 1).is_err());
    }
}
