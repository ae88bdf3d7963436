use std::f64::consts::PI;
use std::sync::Arc;

use proptest::prelude::*;
use sgm_core::field::AnalyticField;
use sgm_core::fixtures::BandLimited;
use sgm_core::quantities::multiscale_profile;
use sgm_core::regularity::{
    biparabolic_cover, campanato_estimate, decay_trace, detect_singular_candidates, RegularityConfig,
};

const SPAN: (f64, f64) = (-1.0, 2.0);
const DX: f64 = 0.01;

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * (a.abs().max(b.abs()) + 1e-300)
}

/// `u^r(x, t) = u(x0 + r x, t0 + r⁴ t)` for a band-limited `u`.
fn rescaled(bl: &BandLimited, x0: f64, t0: f64, r: f64) -> AnalyticField {
    let me = Arc::new(bl.clone());
    let span = ((SPAN.0 - t0) / r.powi(4), (SPAN.1 - t0) / r.powi(4));
    (0..=4).fold(AnalyticField::new(2.0 * PI / r, span, DX / r), |f, order| {
        let me = me.clone();
        f.with(order, move |x, t| {
            r.powi(order as i32) * me.value(order, x0 + r * x, t0 + r.powi(4) * t)
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn larger_thresholds_never_add_candidates(
        seed in any::<u64>(),
        amp in 1e-4f64..1.0,
        grow in 1.0f64..100.0,
    ) {
        let u = BandLimited::random(seed, 3).analytic(SPAN, DX).scaled(amp);
        let centers = [(0.3, 0.5), (2.0, 1.0), (4.0, 0.2)];
        let radii = [0.4, 0.2, 0.1];
        let prof = multiscale_profile(&u, None, &centers, &radii, 3.0).unwrap();
        let tight = RegularityConfig::default();
        let mut loose = tight.clone();
        loose.delta0 *= grow;
        loose.delta1 *= grow;
        loose.delta2 *= grow;
        let a = detect_singular_candidates(&prof, &tight, tight.alpha());
        let b = detect_singular_candidates(&prof, &loose, tight.alpha());
        for (va, vb) in a.verdicts.iter().zip(&b.verdicts) {
            for c in &va.certified_by {
                prop_assert!(vb.certified_by.contains(c), "{va:?} vs {vb:?}");
            }
        }
        prop_assert!(b.candidates().count() <= a.candidates().count());
    }

    #[test]
    fn decay_trace_is_scale_covariant(
        seed in any::<u64>(),
        r in 0.2f64..0.9,
        x0 in 0.0f64..6.0,
        t0 in prop_oneof![Just(0.0), 0.0f64..1.0],
    ) {
        let bl = BandLimited::random(seed, 3);
        let u = bl.analytic(SPAN, DX);
        let ur = rescaled(&bl, x0, t0, r);
        let cfg = RegularityConfig::default();
        let base = 0.5;
        let a = decay_trace(&u, None, &cfg, (x0, t0), r * base, 2).unwrap();
        let b = decay_trace(&ur, None, &cfg, (0.0, 0.0), base, 2).unwrap();
        prop_assert_eq!(a.rows.len(), b.rows.len());
        for (ra, rb) in a.rows.iter().zip(&b.rows) {
            // the unscaled window t0 − ρ⁴ carries an absolute rounding error of ulp(t0)
            let tol = 1e-9 + 8.0 * f64::EPSILON * t0 / ra.scale.powi(4);
            prop_assert!(close(ra.g, rb.g, tol), "{ra:?} vs {rb:?}");
            prop_assert!(close(ra.u_quarter, rb.u_quarter, tol), "{ra:?} vs {rb:?}");
            prop_assert!(close(ra.l_quarter, rb.l_quarter, tol), "{ra:?} vs {rb:?}");
        }
    }

    #[test]
    fn cover_sums_fall_with_the_exponent(
        pts in proptest::collection::vec((0.0f64..1.0, 0.0f64..1.0), 1..200),
        cap in 0.01f64..1.0,
    ) {
        let est = biparabolic_cover(&pts, cap, &[1.0, 2.0, 3.0, 4.0]).unwrap();
        for w in est.sums.windows(2) {
            prop_assert!(w[1].1 <= w[0].1, "{:?}", est.sums);
        }
        prop_assert!(est.cylinders.iter().all(|c| c.r < cap));
        prop_assert!(pts.iter().all(|p| est.cylinders.iter().any(|c| c.contains(*p))));
    }

    #[test]
    fn campanato_exponent_ignores_amplitude_and_offset(
        seed in any::<u64>(),
        c in prop_oneof![-100.0f64..-0.01, 0.01f64..100.0],
        shift in -10.0f64..10.0,
    ) {
        let bl = BandLimited::random(seed, 3);
        let u = bl.analytic(SPAN, DX);
        let mut moved = bl.clone();
        for m in &mut moved.modes {
            m.a *= c;
            m.b *= c;
        }
        moved.mean = c * bl.mean + shift;
        let v = moved.analytic(SPAN, DX);
        let radii = [0.4, 0.2, 0.1, 0.05];
        let a = campanato_estimate(&u, (1.0, 0.5), &radii).unwrap();
        let b = campanato_estimate(&v, (1.0, 0.5), &radii).unwrap();
        match (a.alpha(), b.alpha()) {
            (Some(x), Some(y)) => prop_assert!((x - y).abs() <= 1e-8, "{x} vs {y}"),
            (x, y) => prop_assert_eq!(x.is_none(), y.is_none()),
        }
    }
}
