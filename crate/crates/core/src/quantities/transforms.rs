use super::compute::{compute_quantities, ScaleQuantities};
use crate::error::{invalid, Result};
use crate::field::{rescale_field, Cylinder, FieldSource, RescaleTarget, SpaceTimeField};

/// Denominator floor for relative comparisons of quantities that vanish.
pub const RELATIVE_FLOOR: f64 = 1e-12;

pub fn relative_gap(a: f64, b: f64) -> f64 {
    let d = (a - b).abs();
    if d == 0.0 {
        0.0
    } else {
        d / a.abs().max(b.abs()).max(RELATIVE_FLOOR)
    }
}

/// Both sides of the scaling identities and their per-quantity gaps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingResidual {
    /// Quantities of the rescaled pair on the target cylinder.
    pub rescaled: ScaleQuantities,
    /// Quantities of the original pair on the image cylinder.
    pub original: ScaleQuantities,
    /// Relative gaps in the order G, U, O, L, F.
    pub gaps: [f64; 5],
}

impl ScalingResidual {
    pub fn max(&self) -> f64 {
        self.gaps.iter().fold(0.0, |m, g| m.max(*g))
    }
}

/// Compares quantities of `u^r(y, s) = u(r y + x0, r⁴ s + t0)` and
/// `f^r = r⁴ f(r y + x0, r⁴ s + t0)` on `target` with those of `(u, f)` on
/// the image cylinder `Q_{rR}(x0 + r y0, t0 + r⁴ s0)`.
pub fn scaling_identity_residual(
    u: &SpaceTimeField,
    f: Option<&SpaceTimeField>,
    r: f64,
    center: (f64, f64),
    target: &Cylinder,
    p: f64,
) -> Result<ScalingResidual> {
    let grids = RescaleTarget::aligned(u, r, center)?;
    let ur = rescale_field(u, r, center, &grids)?;
    let fr = match f {
        Some(f) => {
            let fg = RescaleTarget::aligned(f, r, center)?;
            Some(rescale_field(f, r, center, &fg)?.scaled(r.powi(4))?)
        }
        None => None,
    };
    let image = Cylinder::new(center.0 + r * target.x0, center.1 + r.powi(4) * target.t0, r * target.r)?;
    let rescaled = compute_quantities(&ur, fr.as_ref().map(|f| f as &dyn FieldSource), target, p)?;
    let original = compute_quantities(u, f.map(|f| f as &dyn FieldSource), &image, p)?;
    let (a, b) = (rescaled.values(), original.values());
    let gaps = std::array::from_fn(|i| relative_gap(a[i], b[i]));
    Ok(ScalingResidual {
        rescaled,
        original,
        gaps,
    })
}

/// Effect of `u ↦ u − a` on the quantities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TranslationResidual {
    /// `|G[u−a] − G[u]| / max(G[u], ε)`
    pub g: f64,
    pub l: f64,
    pub o: f64,
    /// `(U[u], U[u−a])`: not shift invariant, reported only.
    pub u_before_after: (f64, f64),
}

impl TranslationResidual {
    /// Largest gap among the invariant quantities.
    pub fn max_invariant(&self) -> f64 {
        self.g.max(self.l).max(self.o)
    }
}

pub fn translation_invariance_residual(u: &SpaceTimeField, a: f64, cyl: &Cylinder) -> Result<TranslationResidual> {
    if !a.is_finite() {
        return invalid("shift must be finite");
    }
    let shifted = u.shifted(a)?;
    let before = compute_quantities(u, None, cyl, 2.0)?;
    let after = compute_quantities(&shifted, None, cyl, 2.0)?;
    let rel = |x: f64, y: f64| (x - y).abs() / y.abs().max(f64::EPSILON);
    Ok(TranslationResidual {
        g: rel(after.g, before.g),
        l: rel(after.l, before.l),
        o: rel(after.o, before.o),
        u_before_after: (before.u, after.u),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{TimeGrid, TorusGrid};

    fn band_limited() -> SpaceTimeField {
        let g = TorusGrid::standard(64).unwrap();
        let tg = TimeGrid::new(-1.0, 1.0 / 256.0, 512).unwrap();
        SpaceTimeField::from_fn(g, tg, |x, t| {
            (-t).exp() * x.sin() + 0.3 * (2.0 * x + 0.4).cos() * (1.0 + 0.5 * t)
        })
        .unwrap()
    }

    #[test]
    fn identity_rescaling_is_exact() {
        let u = band_limited();
        let res =
            scaling_identity_residual(&u, None, 1.0, (0.0, 0.0), &Cylinder::at_origin(0.5).unwrap(), 2.0).unwrap();
        assert!(res.max() <= 1e-10, "{:?}", res.gaps);
    }

    #[test]
    fn half_scale_matches() {
        let u = band_limited();
        let f = u.map(|v| v * v).unwrap();
        let res =
            scaling_identity_residual(&u, Some(&f), 0.5, (0.0, 0.0), &Cylinder::at_origin(1.0).unwrap(), 3.0).unwrap();
        assert!(res.max() <= 1e-3, "{:?}", res.gaps);
    }

    #[test]
    fn shift_leaves_g_l_o_alone() {
        let u = band_limited();
        let cyl = Cylinder::at_origin(0.5).unwrap();
        let res = translation_invariance_residual(&u, 7.3, &cyl).unwrap();
        assert!(res.max_invariant() <= 1e-12, "{res:?}");
        assert!(res.u_before_after.0 != res.u_before_after.1);
        assert_eq!(
            translation_invariance_residual(&u, 0.0, &cyl).unwrap().max_invariant(),
            0.0
        );
    }
}
