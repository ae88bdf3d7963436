use serde::{Deserialize, Serialize};

use super::formulas::alpha_from_lambda;
use crate::error::{invalid, Result};
use crate::field::{Cylinder, FieldSource, Resolution};
use crate::inequalities::eta_p;

/// Attached to every regularity report.
pub const EMPIRICAL_STAMP: &str = "empirical thresholds; not proven constants";

/// Thresholds and ratios used by the regularity monitor. None of these are
/// known admissible values; they are user-chosen stand-ins.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegularityConfig {
    pub p: f64,
    pub lambda: f64,
    pub theta: f64,
    pub delta0: f64,
    pub delta1_star: f64,
    pub delta2_star: f64,
    pub delta1: f64,
    pub delta2: f64,
    /// Radius ladder for profiles and verdicts, strictly descending.
    pub radii: Vec<f64>,
}

impl Default for RegularityConfig {
    fn default() -> Self {
        Self::new(3.0, 1.0 / 32.0, 1.0 / 32.0, 0.1).expect("defaults are valid")
    }
}

impl RegularityConfig {
    /// `δ1*`, `δ2*` default to 1/2 and `δ1`, `δ2` to `min(δ0⁴/8⁴, δ*)`.
    pub fn new(p: f64, lambda: f64, theta: f64, delta0: f64) -> Result<Self> {
        let star = 0.5;
        let cfg = Self {
            p,
            lambda,
            theta,
            delta0,
            delta1_star: star,
            delta2_star: star,
            delta1: Self::small_delta(delta0, star),
            delta2: Self::small_delta(delta0, star),
            radii: vec![0.5, 0.25, 0.125],
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// `min(δ0⁴/8⁴, δ*)`.
    pub fn small_delta(delta0: f64, star: f64) -> f64 {
        // plain products: powi may fold differently at compile time
        let d2 = delta0 * delta0;
        (d2 * d2 / 4096.0).min(star)
    }

    /// Resets `δ1`, `δ2` from the current `δ0` and `δ*` values.
    pub fn with_default_deltas(mut self) -> Self {
        self.delta1 = Self::small_delta(self.delta0, self.delta1_star);
        self.delta2 = Self::small_delta(self.delta0, self.delta2_star);
        self
    }

    pub fn eta_p(&self) -> f64 {
        eta_p(self.p).unwrap_or(f64::NAN)
    }

    /// `α = −1/log₂λ`.
    pub fn alpha(&self) -> f64 {
        -1.0 / self.lambda.log2()
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.p.is_finite() && self.p > 1.5) {
            return invalid(format!("p must exceed 3/2 (got {})", self.p));
        }
        let eta = self.eta_p();
        for (name, v) in [("lambda", self.lambda), ("theta", self.theta)] {
            if !(v > 0.0 && v < eta) {
                return invalid(format!("{name} must lie in (0, eta_p = {eta}) (got {v})"));
            }
        }
        for (name, v) in [
            ("delta0", self.delta0),
            ("delta1", self.delta1),
            ("delta2", self.delta2),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return invalid(format!("{name} must be positive (got {v})"));
            }
        }
        for (name, v) in [("delta1_star", self.delta1_star), ("delta2_star", self.delta2_star)] {
            if !(v > 0.0 && v < 1.0) {
                return invalid(format!("{name} must lie in (0, 1) (got {v})"));
            }
        }
        let alpha = alpha_from_lambda(self.lambda)?;
        if !(alpha > 0.0 && alpha < 1.0) {
            return invalid(format!("alpha must lie in (0, 1) (got {alpha})"));
        }
        if self.radii.is_empty()
            || self.radii.iter().any(|r| !(r.is_finite() && *r > 0.0))
            || self.radii.windows(2).any(|w| w[1] >= w[0])
        {
            return invalid("radius ladder must be non-empty, positive and strictly descending");
        }
        Ok(())
    }

    /// Name/value pairs for output headers.
    pub fn ledger(&self) -> Vec<(&'static str, f64)> {
        vec![
            ("p", self.p),
            ("eta_p", self.eta_p()),
            ("lambda", self.lambda),
            ("theta", self.theta),
            ("alpha", self.alpha()),
            ("delta0", self.delta0),
            ("delta1_star", self.delta1_star),
            ("delta2_star", self.delta2_star),
            ("delta1", self.delta1),
            ("delta2", self.delta2),
        ]
    }
}

/// A cylinder is resolvable when its ball spans at least four grid cells and
/// its time window holds at least two stored slices. Closed-form fields
/// resolve every scale.
pub fn resolvable(field: &dyn FieldSource, cyl: &Cylinder) -> bool {
    match field.resolution() {
        Resolution::Continuous { .. } => true,
        Resolution::Sampled { dx, dt } => {
            if 2.0 * cyl.r < 4.0 * dx * (1.0 - 1e-12) {
                return false;
            }
            let Ok(w) = cyl.window(field.time_span()) else {
                return false;
            };
            let start = field.time_span().0;
            let eps = 1e-9;
            let first = ((w.a - start) / dt - eps).ceil();
            let last = ((w.b - start) / dt + eps).floor();
            last - first + 1.0 >= 2.0
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{SpaceTimeField, TimeGrid, TorusGrid};

    #[test]
    fn defaults() {
        let c = RegularityConfig::default();
        assert_eq!(c.alpha(), 0.2);
        assert!((c.delta1 - 1e-4 / 4096.0).abs() < 1e-20);
        assert_eq!(c.eta_p(), 0.0625);
        assert!(RegularityConfig::new(2.0, 1.0 / 32.0, 1.0 / 32.0, 0.1).is_err());
        assert!(RegularityConfig::new(3.0, 1.0 / 32.0, 0.07, 0.1).is_err());
        assert!(RegularityConfig::new(3.0, 1.0 / 32.0, 1.0 / 32.0, 0.0).is_err());
    }

    #[test]
    fn resolvability_rules() {
        let g = TorusGrid::standard(64).unwrap();
        let u = SpaceTimeField::constant(g, TimeGrid::new(0.0, 1e-3, 1000).unwrap(), 1.0).unwrap();
        let dx = g.dx();
        assert!(resolvable(&u, &Cylinder::new(0.0, 0.5, 0.5).unwrap()));
        assert!(!resolvable(&u, &Cylinder::new(0.0, 0.5, 1.9 * dx).unwrap()));
        // r = 0.15 gives a window 2r⁴ ≈ 1e-3 wide: at most one or two slices
        assert!(!resolvable(&u, &Cylinder::new(0.0, 0.5003, 0.15).unwrap()));
    }
}
