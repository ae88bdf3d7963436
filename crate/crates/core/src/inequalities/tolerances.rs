//! Tolerances and caps used by every check, in one place.

use crate::field::Resolution;

/// Local energy identity: `coefficient · dt²` for sampled inputs.
pub const LOCAL_ENERGY_COEFF: f64 = 100.0;
/// Weak form identity: `coefficient · dt²` for sampled inputs.
pub const WEAK_FORM_COEFF: f64 = 10.0;
/// Identity tolerance for closed-form inputs (quadrature only).
pub const CONTINUOUS_IDENTITY_TOL: f64 = 1e-8;
/// Relative slack for inequalities that hold exactly in exact arithmetic.
pub const ROUNDOFF_REL: f64 = 1e-12;
/// Default cap on empirical ratios for estimates with unknown constants.
pub const DEFAULT_RATIO_CAP: f64 = 100.0;
/// Scaling identities on band-limited inputs.
pub const SCALING_TOL: f64 = 1e-3;
/// Shift invariance of G, L and O.
pub const TRANSLATION_TOL: f64 = 1e-12;

fn dt_scaled(coeff: f64, res: Resolution) -> f64 {
    match res {
        Resolution::Sampled { dt, .. } => (coeff * dt * dt).max(CONTINUOUS_IDENTITY_TOL),
        Resolution::Continuous { .. } => CONTINUOUS_IDENTITY_TOL,
    }
}

pub fn local_energy_tol(res: Resolution) -> f64 {
    dt_scaled(LOCAL_ENERGY_COEFF, res)
}

pub fn weak_form_tol(res: Resolution) -> f64 {
    dt_scaled(WEAK_FORM_COEFF, res)
}

/// `(name, value)` pairs embedded in output headers.
pub fn ledger() -> Vec<(&'static str, f64)> {
    vec![
        ("local_energy_coeff", LOCAL_ENERGY_COEFF),
        ("weak_form_coeff", WEAK_FORM_COEFF),
        ("continuous_identity_tol", CONTINUOUS_IDENTITY_TOL),
        ("roundoff_rel", ROUNDOFF_REL),
        ("default_ratio_cap", DEFAULT_RATIO_CAP),
        ("scaling_tol", SCALING_TOL),
        ("translation_tol", TRANSLATION_TOL),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tolerances_track_dt() {
        let a = local_energy_tol(Resolution::Sampled { dx: 0.1, dt: 1e-3 });
        let b = local_energy_tol(Resolution::Sampled { dx: 0.1, dt: 2e-3 });
        assert!((a - 1e-4).abs() < 1e-18);
        assert!((b / a - 4.0).abs() < 1e-12);
        assert_eq!(
            weak_form_tol(Resolution::Continuous { dx: 0.1 }),
            CONTINUOUS_IDENTITY_TOL
        );
    }
}
