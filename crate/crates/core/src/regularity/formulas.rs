use crate::error::{invalid, Result};

/// `α = −1/log₂λ` for `0 < λ < 1/2`.
pub fn alpha_from_lambda(lambda: f64) -> Result<f64> {
    if !(lambda > 0.0 && lambda < 0.5) {
        return invalid(format!("lambda must lie in (0, 1/2) (got {lambda})"));
    }
    Ok(-1.0 / lambda.log2())
}

/// `k0 = ⌈log₂((G1 + F1^{1/2})/δ0)⌉ + 3`, clamped to at least 3, and
/// `r0 = θ^{k0}`. A logarithm within 1e-9 of an integer is snapped to it.
pub fn k0_and_r0(g1: f64, f1: f64, delta0: f64, theta: f64) -> Result<(u32, f64)> {
    if !(delta0.is_finite() && delta0 > 0.0) {
        return invalid(format!("delta0 must be positive (got {delta0})"));
    }
    if !(g1 >= 0.0 && f1 >= 0.0 && g1.is_finite() && f1.is_finite()) {
        return invalid("G1 and F1 must be finite and non-negative");
    }
    if !(theta > 0.0 && theta < 1.0) {
        return invalid(format!("theta must lie in (0, 1) (got {theta})"));
    }
    let s = g1 + f1.sqrt();
    let k0 = if s == 0.0 {
        3
    } else {
        let mut e = (s / delta0).log2();
        if (e - e.round()).abs() <= 1e-9 {
            e = e.round();
        }
        (e.ceil() as i64 + 3).max(3) as u32
    };
    Ok((k0, theta.powi(k0 as i32)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn worked_values() {
        assert_eq!(alpha_from_lambda(1.0 / 32.0).unwrap(), 0.2);
        assert_eq!(alpha_from_lambda(0.25).unwrap(), 0.5);
        assert!(alpha_from_lambda(0.5).is_err());
        let th = 1.0 / 32.0;
        assert_eq!(k0_and_r0(0.1, 0.0, 0.1, th).unwrap(), (3, th.powi(3)));
        assert_eq!(k0_and_r0(0.0, 0.0, 0.1, th).unwrap().0, 3);
        assert_eq!(k0_and_r0(0.8, 0.0, 0.1, th).unwrap().0, 6);
        assert_eq!(k0_and_r0(0.4, 0.16, 0.1, th).unwrap().0, 6);
        assert_eq!(k0_and_r0(0.1, 0.0, 0.1, th).unwrap().1, 2f64.powi(-15));
        assert!(k0_and_r0(0.1, 0.0, 0.0, th).is_err());
    }

    proptest! {
        #[test]
        fn doubling_adds_one(s in 0.3f64..1e3, frac in 0.05f64..0.95) {
            // keep log₂(s/δ0) away from integers
            let delta0 = 0.1;
            let e = (s / delta0).log2();
            let s = delta0 * 2f64.powf(e.floor() + frac);
            let (a, _) = k0_and_r0(s, 0.0, delta0, 0.03).unwrap();
            let (b, _) = k0_and_r0(2.0 * s, 0.0, delta0, 0.03).unwrap();
            prop_assert_eq!(b, a + 1);
        }
    }
}
