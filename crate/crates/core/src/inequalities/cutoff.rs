use crate::error::{invalid, Result};

/// Coefficients of `(1 − s²)⁵` in powers `s^{2j}`.
const BUMP: [f64; 6] = [1.0, -5.0, 10.0, -10.0, 5.0, -1.0];

/// `d^k/ds^k (1 − s²)⁵` for `|s| ≤ 1`, zero outside.
pub fn bump(order: usize, s: f64) -> f64 {
    if s.abs() > 1.0 {
        return 0.0;
    }
    let mut acc = 0.0;
    for (j, c) in BUMP.iter().enumerate() {
        let deg = 2 * j;
        if deg < order {
            continue;
        }
        let falling: f64 = (0..order).map(|i| (deg - i) as f64).product();
        acc += c * falling * s.powi((deg - order) as i32);
    }
    acc
}

/// Test function `φ(x, t) = χ((x − x0)/r) · χ((t − t0)/r⁴)` with
/// `χ(s) = (1 − s²)⁵`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutoffSpec {
    pub x0: f64,
    pub t0: f64,
    pub r: f64,
}

impl CutoffSpec {
    pub fn new(x0: f64, t0: f64, r: f64) -> Result<Self> {
        if !(r.is_finite() && r > 0.0) {
            return invalid(format!("cutoff radius must be positive (got {r})"));
        }
        Ok(Self { x0, t0, r })
    }

    pub fn half_height(&self) -> f64 {
        self.r.powi(4)
    }

    /// Support in time.
    pub fn time_support(&self) -> (f64, f64) {
        (self.t0 - self.half_height(), self.t0 + self.half_height())
    }

    /// `∂_x^order` of the spatial factor.
    pub fn space_factor(&self, order: usize, x: f64) -> f64 {
        bump(order, (x - self.x0) / self.r) / self.r.powi(order as i32)
    }

    /// `∂_t^order` of the temporal factor.
    pub fn time_factor(&self, order: usize, t: f64) -> f64 {
        let tau = self.half_height();
        bump(order, (t - self.t0) / tau) / tau.powi(order as i32)
    }

    pub fn phi(&self, x: f64, t: f64) -> f64 {
        self.space_factor(0, x) * self.time_factor(0, t)
    }

    /// `∂_x^order φ`.
    pub fn phi_x(&self, order: usize, x: f64, t: f64) -> f64 {
        self.space_factor(order, x) * self.time_factor(0, t)
    }

    pub fn phi_t(&self, x: f64, t: f64) -> f64 {
        self.space_factor(0, x) * self.time_factor(1, t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn bump_values() {
        assert_eq!(bump(0, 0.0), 1.0);
        assert_eq!(bump(0, 1.0), 0.0);
        assert_eq!(bump(0, 1.5), 0.0);
        assert_eq!(bump(2, 0.0), -10.0);
        for k in 0..=4 {
            assert!(bump(k, 1.0).abs() < 1e-12, "order {k}");
            assert!(bump(k, -1.0).abs() < 1e-12, "order {k}");
        }
    }

    fn sup_norm(order: usize) -> f64 {
        (0..=2000)
            .map(|i| bump(order, -1.0 + i as f64 / 1000.0).abs())
            .fold(0.0, f64::max)
    }

    // errors are measured relative to the sup norm of the derivative in question
    proptest! {
        #[test]
        fn derivatives_match_central_differences(
            s in -0.99f64..0.99,
            t in -0.99f64..0.99,
            r in 0.3f64..1.5,
        ) {
            let c = CutoffSpec::new(0.2, 0.1, r).unwrap();
            let x = 0.2 + s * r;
            let tt = 0.1 + t * r.powi(4);
            let h = 1e-4 * r;
            for order in 0..4 {
                let fd = (c.phi_x(order, x + h, tt) - c.phi_x(order, x - h, tt)) / (2.0 * h);
                let exact = c.phi_x(order + 1, x, tt);
                let scale = sup_norm(order + 1) / r.powi(order as i32 + 1);
                prop_assert!((fd - exact).abs() / scale <= 1e-6, "order {}", order + 1);
            }
            let ht = 1e-4 * r.powi(4);
            let fdt = (c.phi(x, tt + ht) - c.phi(x, tt - ht)) / (2.0 * ht);
            let scale = sup_norm(1) / r.powi(4);
            prop_assert!((fdt - c.phi_t(x, tt)).abs() / scale <= 1e-6);
            let v = c.phi(x, tt);
            prop_assert!((0.0..=1.0).contains(&v));
        }
    }
}
