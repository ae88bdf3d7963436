use serde::Serialize;

use super::config::resolvable;
use super::contraction::least_squares;
use crate::error::{invalid, Result};
use crate::field::{cylinder_average, cylinder_mean_map, Cylinder, FieldSource};
use crate::inequalities::tolerances::ROUNDOFF_REL;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CampanatoRow {
    pub r: f64,
    /// `u_{Q_r}`
    pub mean: f64,
    /// `M(r) = (avg_{Q_r} |u − u_{Q_r}|³)^{1/3}`
    pub m: f64,
    pub clipped: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum HolderFit {
    /// `M(r) ≈ C r^α`.
    Fitted { alpha: f64, c: f64 },
    /// Oscillation vanished at every radius: no exponent can be read off.
    Degenerate,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CampanatoEstimate {
    pub x0: f64,
    pub t0: f64,
    pub rows: Vec<CampanatoRow>,
    pub fit: HolderFit,
}

impl CampanatoEstimate {
    pub fn alpha(&self) -> Option<f64> {
        match self.fit {
            HolderFit::Fitted { alpha, .. } => Some(alpha),
            HolderFit::Degenerate => None,
        }
    }
}

/// Mean oscillation over the resolvable radii of `radii` and the log-log fit
/// of `M(r)` against `r`. Needs at least three resolvable radii.
pub fn campanato_estimate(u: &dyn FieldSource, center: (f64, f64), radii: &[f64]) -> Result<CampanatoEstimate> {
    let mut cyls = Vec::new();
    for &r in radii {
        let c = Cylinder::new(center.0, center.1, r)?;
        if resolvable(u, &c) {
            cyls.push(c);
        }
    }
    if cyls.len() < 3 {
        return invalid(format!("need at least 3 resolvable radii (got {})", cyls.len()));
    }
    let mut rows = Vec::with_capacity(cyls.len());
    for c in &cyls {
        let mean = cylinder_average(u, c, 1.0, false)?;
        let m3 = cylinder_mean_map(u, 0, c, |v| (v - mean).abs().powi(3))?;
        rows.push(CampanatoRow {
            r: c.r,
            mean,
            m: m3.max(0.0).cbrt(),
            clipped: c.window(u.time_span())?.clipped,
        });
    }
    let live: Vec<(f64, f64)> = rows
        .iter()
        .filter(|row| row.m > ROUNDOFF_REL * (1.0 + row.mean.abs()))
        .map(|row| (row.r.ln(), row.m.ln()))
        .collect();
    let fit = match least_squares(&live) {
        Some((alpha, b)) if live.len() == rows.len() => HolderFit::Fitted { alpha, c: b.exp() },
        _ => HolderFit::Degenerate,
    };
    Ok(CampanatoEstimate {
        x0: center.0,
        t0: center.1,
        rows,
        fit,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{constant, linear_chart};

    const RADII: [f64; 4] = [0.4, 0.2, 0.1, 0.05];

    #[test]
    fn linear_chart_is_lipschitz() {
        let est = campanato_estimate(&linear_chart((-1.0, 1.0), 0.01), (0.0, 0.0), &RADII).unwrap();
        // M(r) = r (avg_{[-1,1]} |y|³)^{1/3} = r / 4^{1/3}
        for row in &est.rows {
            assert!((row.m - row.r / 4f64.cbrt()).abs() < 1e-12 * row.r, "{row:?}");
        }
        assert!((est.alpha().unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn constants_are_degenerate() {
        let est = campanato_estimate(&constant(3.5, (-1.0, 1.0), 0.01), (0.0, 0.0), &RADII).unwrap();
        assert_eq!(est.fit, HolderFit::Degenerate);
        assert!(campanato_estimate(&constant(1.0, (-1.0, 1.0), 0.01), (0.0, 0.0), &RADII[..2]).is_err());
    }
}
