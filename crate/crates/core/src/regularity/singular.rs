use serde::Serialize;

use super::config::{RegularityConfig, EMPIRICAL_STAMP};
use crate::quantities::Profile;

/// Which sufficient criterion certified a center.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Criterion {
    /// `G_r + F_r^{1/2} ≤ δ0/2` at some tested radius.
    GradientForcing,
    /// `sup_r U_r ≤ δ1`.
    Energy,
    /// `sup_r L_r ≤ δ2`.
    Dissipation,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CenterVerdict {
    pub x0: f64,
    pub t0: f64,
    /// Number of radii with usable quantities.
    pub radii_used: usize,
    pub certified_by: Vec<Criterion>,
    /// `min_r (G_r + F_r^{1/2}) − δ0/2`; positive means the criterion failed.
    pub margin_gradient: f64,
    /// `sup_r U_r − δ1`.
    pub margin_energy: f64,
    /// `sup_r L_r − δ2`.
    pub margin_dissipation: f64,
}

impl CenterVerdict {
    pub fn is_candidate(&self) -> bool {
        self.certified_by.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SingularReport {
    /// Hölder exponent the certification refers to.
    pub alpha: f64,
    pub delta0: f64,
    pub delta1: f64,
    pub delta2: f64,
    pub verdicts: Vec<CenterVerdict>,
    pub stamp: &'static str,
}

impl SingularReport {
    /// Centers no criterion certified. Never a claim of singularity.
    pub fn candidates(&self) -> impl Iterator<Item = &CenterVerdict> {
        self.verdicts.iter().filter(|v| v.is_candidate())
    }

    pub fn candidate_points(&self) -> Vec<(f64, f64)> {
        self.candidates().map(|v| (v.x0, v.t0)).collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out =
            String::from("x0,t0,radii_used,status,certified_by,margin_gradient,margin_energy,margin_dissipation\n");
        for v in &self.verdicts {
            let by: Vec<&str> = v
                .certified_by
                .iter()
                .map(|c| match c {
                    Criterion::GradientForcing => "gradient",
                    Criterion::Energy => "energy",
                    Criterion::Dissipation => "dissipation",
                })
                .collect();
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                v.x0,
                v.t0,
                v.radii_used,
                if v.is_candidate() { "candidate" } else { "regular" },
                by.join("+"),
                v.margin_gradient,
                v.margin_energy,
                v.margin_dissipation
            ));
        }
        out
    }
}

/// Applies the three sufficient regularity criteria to every center of a
/// profile. Rows that failed to evaluate are ignored; a center without any
/// usable row stays a candidate with `NaN` margins.
pub fn detect_singular_candidates(profile: &Profile, cfg: &RegularityConfig, alpha: f64) -> SingularReport {
    let verdicts = profile
        .centers
        .iter()
        .map(|c| {
            let qs: Vec<_> = profile
                .rows_for(c.x0, c.t0)
                .filter_map(|row| row.result.as_ref().ok())
                .collect();
            let min_gf = qs.iter().map(|q| q.g + q.f.sqrt()).fold(f64::NAN, f64::min);
            let sup_u = qs.iter().map(|q| q.u).fold(f64::NAN, f64::max);
            let sup_l = qs.iter().map(|q| q.l).fold(f64::NAN, f64::max);
            let mut by = Vec::new();
            if min_gf <= 0.5 * cfg.delta0 {
                by.push(Criterion::GradientForcing);
            }
            if sup_u <= cfg.delta1 {
                by.push(Criterion::Energy);
            }
            if sup_l <= cfg.delta2 {
                by.push(Criterion::Dissipation);
            }
            CenterVerdict {
                x0: c.x0,
                t0: c.t0,
                radii_used: qs.len(),
                certified_by: by,
                margin_gradient: min_gf - 0.5 * cfg.delta0,
                margin_energy: sup_u - cfg.delta1,
                margin_dissipation: sup_l - cfg.delta2,
            }
        })
        .collect();
    SingularReport {
        alpha,
        delta0: cfg.delta0,
        delta1: cfg.delta1,
        delta2: cfg.delta2,
        verdicts,
        stamp: EMPIRICAL_STAMP,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::ZeroField;
    use crate::fixtures::rough_power;
    use crate::quantities::multiscale_profile;
    use std::f64::consts::PI;

    #[test]
    fn zero_field_has_no_candidates() {
        let z = ZeroField {
            period: 2.0 * PI,
            span: (-1.0, 1.0),
            dx: 0.05,
        };
        let cfg = RegularityConfig::default();
        let prof = multiscale_profile(&z, None, &[(0.0, 0.0), (1.0, 0.0)], &cfg.radii, cfg.p).unwrap();
        let rep = detect_singular_candidates(&prof, &cfg, cfg.alpha());
        assert_eq!(rep.candidates().count(), 0);
        assert!(rep.verdicts.iter().all(|v| v.certified_by.len() == 3));
    }

    #[test]
    fn rough_profile_is_a_candidate_at_the_origin() {
        let u = rough_power(1e-3, (-1.0, 1.0), 0.01).unwrap();
        let cfg = RegularityConfig::default();
        let radii = [0.5, 0.25, 0.125, 0.0625];
        let prof = multiscale_profile(&u, None, &[(0.0, 0.0)], &radii, cfg.p).unwrap();
        let rep = detect_singular_candidates(&prof, &cfg, cfg.alpha());
        assert_eq!(rep.candidate_points(), vec![(0.0, 0.0)]);
        let v = &rep.verdicts[0];
        assert!(v.margin_gradient > 0.0 && v.margin_energy > 0.0 && v.margin_dissipation > 0.0);
        assert!(rep.to_csv().contains("candidate"));
    }
}
