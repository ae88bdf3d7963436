use rayon::prelude::*;

use super::compute::{check_p, compute_quantities, ScaleQuantities};
use crate::error::{invalid, Result};
use crate::field::{Cylinder, FieldSource};

/// One (center, radius) row; errors are kept in-row.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileRow {
    pub x0: f64,
    pub t0: f64,
    pub r: f64,
    pub result: std::result::Result<ScaleQuantities, String>,
}

/// Per-center suprema over the tested radii.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CenterSummary {
    pub x0: f64,
    pub t0: f64,
    pub sup_u: f64,
    pub sup_l: f64,
    /// Smallest radius that produced a value: the suprema are truncated there.
    pub smallest_r: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Profile {
    pub p: f64,
    pub radii: Vec<f64>,
    pub rows: Vec<ProfileRow>,
    pub centers: Vec<CenterSummary>,
}

/// `base · factor^k` for `k = 0..count`.
pub fn radius_ladder(base: f64, factor: f64, count: usize) -> Result<Vec<f64>> {
    if !(base > 0.0 && factor > 0.0 && factor < 1.0) {
        return invalid(format!(
            "ladder needs base > 0 and factor in (0, 1) (got {base}, {factor})"
        ));
    }
    Ok((0..count).map(|k| base * factor.powi(k as i32)).collect())
}

pub fn multiscale_profile(
    u: &dyn FieldSource,
    f: Option<&dyn FieldSource>,
    centers: &[(f64, f64)],
    radii: &[f64],
    p: f64,
) -> Result<Profile> {
    check_p(p)?;
    if radii.is_empty() {
        return invalid("at least one radius is required");
    }
    if radii.windows(2).any(|w| w[1] >= w[0]) || radii.iter().any(|r| !(*r > 0.0)) {
        return invalid("radii must be positive and strictly descending");
    }
    let jobs: Vec<(f64, f64, f64)> = centers
        .iter()
        .flat_map(|&(x0, t0)| radii.iter().map(move |&r| (x0, t0, r)))
        .collect();
    let rows: Vec<ProfileRow> = jobs
        .par_iter()
        .map(|&(x0, t0, r)| ProfileRow {
            x0,
            t0,
            r,
            result: Cylinder::new(x0, t0, r)
                .and_then(|c| compute_quantities(u, f, &c, p))
                .map_err(|e| e.to_string()),
        })
        .collect();
    let summaries = centers
        .iter()
        .enumerate()
        .map(|(i, &(x0, t0))| {
            let mine = &rows[i * radii.len()..(i + 1) * radii.len()];
            let ok: Vec<&ScaleQuantities> = mine.iter().filter_map(|r| r.result.as_ref().ok()).collect();
            CenterSummary {
                x0,
                t0,
                sup_u: ok.iter().map(|q| q.u).fold(f64::NAN, f64::max),
                sup_l: ok.iter().map(|q| q.l).fold(f64::NAN, f64::max),
                smallest_r: ok.iter().map(|q| q.cyl.r).fold(f64::NAN, f64::min),
            }
        })
        .collect();
    Ok(Profile {
        p,
        radii: radii.to_vec(),
        rows,
        centers: summaries,
    })
}

pub const PROFILE_HEADER: &str = "x0,t0,r,G,U,O,L,F,clipped";

impl Profile {
    /// CSV with fixed columns; failed rows carry `nan` and `error`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(PROFILE_HEADER);
        out.push('\n');
        for row in &self.rows {
            match &row.result {
                Ok(q) => out.push_str(&format!(
                    "{},{},{},{},{},{},{},{},{}\n",
                    row.x0, row.t0, row.r, q.g, q.u, q.o, q.l, q.f, q.clipped
                )),
                Err(_) => out.push_str(&format!("{},{},{},nan,nan,nan,nan,nan,error\n", row.x0, row.t0, row.r)),
            }
        }
        out
    }

    pub fn summary_csv(&self) -> String {
        let mut out = String::from("x0,t0,sup_U,sup_L,smallest_r\n");
        for c in &self.centers {
            out.push_str(&format!("{},{},{},{},{}\n", c.x0, c.t0, c.sup_u, c.sup_l, c.smallest_r));
        }
        out
    }

    pub fn rows_for(&self, x0: f64, t0: f64) -> impl Iterator<Item = &ProfileRow> {
        self.rows.iter().filter(move |r| r.x0 == x0 && r.t0 == t0)
    }
}
