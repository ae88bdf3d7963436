use std::collections::HashMap;

use serde::Serialize;

use super::contraction::least_squares;
use crate::error::{invalid, Result};

/// Number of halvings below the cap tried when shrinking a cylinder.
pub const LADDER_DEPTH: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoverCylinder {
    pub x0: f64,
    pub t0: f64,
    pub r: f64,
}

impl CoverCylinder {
    pub fn contains(&self, p: (f64, f64)) -> bool {
        let slack = 1.0 + 1e-12;
        (p.0 - self.x0).abs() <= self.r * slack && (p.1 - self.t0).abs() <= self.r.powi(4) * slack
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoverEstimate {
    pub n_points: usize,
    pub delta_cap: f64,
    pub cylinders: Vec<CoverCylinder>,
    /// `(k, Σ r_i^k)` per requested exponent.
    pub sums: Vec<(f64, f64)>,
}

impl CoverEstimate {
    pub fn sum_for(&self, k: f64) -> Option<f64> {
        self.sums.iter().find(|(e, _)| *e == k).map(|(_, s)| *s)
    }
}

/// Point lookup at one radius: columns of width `2r` in `x`, each sorted in
/// `t` so the time window is found by bisection at any aspect ratio.
struct Buckets {
    r: f64,
    wx: f64,
    cells: HashMap<i64, Vec<(f64, usize)>>,
}

impl Buckets {
    fn new(points: &[(f64, f64)], r: f64) -> Self {
        let wx = 2.0 * r;
        let mut cells: HashMap<i64, Vec<(f64, usize)>> = HashMap::new();
        for (i, p) in points.iter().enumerate() {
            cells.entry((p.0 / wx).floor() as i64).or_default().push((p.1, i));
        }
        for col in cells.values_mut() {
            col.sort_by(|a, b| a.0.total_cmp(&b.0));
        }
        Self { r, wx, cells }
    }

    /// Indices of points inside `cyl`, uncovered only.
    fn inside(&self, cyl: &CoverCylinder, points: &[(f64, f64)], covered: &[bool], mut visit: impl FnMut(usize)) {
        let h = 2.0 * self.r.powi(4);
        let lo = ((cyl.x0 - 2.0 * self.r) / self.wx).floor() as i64;
        let hi = ((cyl.x0 + 2.0 * self.r) / self.wx).floor() as i64;
        for key in lo..=hi {
            let Some(col) = self.cells.get(&key) else { continue };
            let start = col.partition_point(|e| e.0 < cyl.t0 - h);
            for &(t, id) in &col[start..] {
                if t > cyl.t0 + h {
                    break;
                }
                if !covered[id] && cyl.contains(points[id]) {
                    visit(id);
                }
            }
        }
    }
}

/// Greedy cover. The first uncovered point in `(x, t)` order anchors each
/// cylinder; of the nine placements that keep the anchor on the closed
/// boundary or at the center, the one covering the most uncovered points
/// wins. With more than one radius, the smallest radius that still covers as
/// many points as the largest is used.
fn greedy(points: &[(f64, f64)], radii: &[f64]) -> Vec<CoverCylinder> {
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| points[a].partial_cmp(&points[b]).expect("finite points"));
    let buckets: Vec<Buckets> = radii.iter().map(|&r| Buckets::new(points, r)).collect();
    let mut covered = vec![false; points.len()];
    let mut out = Vec::new();
    for &anchor in &order {
        if covered[anchor] {
            continue;
        }
        let p = points[anchor];
        let mut best: Option<(CoverCylinder, usize)> = None;
        for b in &buckets {
            let (r, h) = (b.r, b.r.powi(4));
            let mut here: Option<(CoverCylinder, usize)> = None;
            for sx in [1.0, 0.0, -1.0] {
                for st in [1.0, 0.0, -1.0] {
                    let cyl = CoverCylinder {
                        x0: p.0 + sx * r,
                        t0: p.1 + st * h,
                        r,
                    };
                    if !cyl.contains(p) {
                        continue;
                    }
                    let mut n = 0;
                    b.inside(&cyl, points, &covered, |_| n += 1);
                    if here.is_none_or(|(_, m)| n > m) {
                        here = Some((cyl, n));
                    }
                }
            }
            let Some(here) = here else { continue };
            match best {
                None => best = Some(here),
                Some((_, m)) if here.1 >= m => best = Some(here),
                _ => break,
            }
        }
        let (cyl, _) = best.expect("the anchor always fits its own cylinder");
        let bucket = buckets.iter().find(|b| b.r == cyl.r).expect("radius from the ladder");
        let mut hit = Vec::new();
        bucket.inside(&cyl, points, &covered, |i| hit.push(i));
        for i in hit {
            covered[i] = true;
        }
        covered[anchor] = true;
        out.push(cyl);
    }
    out
}

fn check_points(points: &[(f64, f64)]) -> Result<()> {
    if points.iter().any(|p| !(p.0.is_finite() && p.1.is_finite())) {
        return invalid("points must be finite");
    }
    Ok(())
}

/// Greedy cover by biparabolic cylinders with radii `δ·2^{−j−1}` (all strictly
/// below the cap) and `Σ r_i^k` for every `k` in `exponents`. This bounds the
/// `δ`-capped biparabolic measure from above.
pub fn biparabolic_cover(points: &[(f64, f64)], delta_cap: f64, exponents: &[f64]) -> Result<CoverEstimate> {
    if !(delta_cap.is_finite() && delta_cap > 0.0) {
        return invalid(format!("delta cap must be positive (got {delta_cap})"));
    }
    check_points(points)?;
    let ladder: Vec<f64> = (0..LADDER_DEPTH)
        .map(|j| delta_cap * 0.5f64.powi(j as i32 + 1))
        .collect();
    let cylinders = if points.is_empty() {
        Vec::new()
    } else {
        greedy(points, &ladder)
    };
    let sums = exponents
        .iter()
        .map(|&k| (k, cylinders.iter().map(|c| c.r.powf(k)).sum()))
        .collect();
    Ok(CoverEstimate {
        n_points: points.len(),
        delta_cap,
        cylinders,
        sums,
    })
}

/// Greedy count of radius-`r` cylinders covering `points`.
pub fn cover_count(points: &[(f64, f64)], r: f64) -> Result<usize> {
    if !(r.is_finite() && r > 0.0) {
        return invalid(format!("radius must be positive (got {r})"));
    }
    check_points(points)?;
    Ok(if points.is_empty() {
        0
    } else {
        greedy(points, &[r]).len()
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoxDimension {
    pub dimension: f64,
    /// `(r, N(r))`
    pub counts: Vec<(f64, usize)>,
    /// Every count equal: the set looks like a point at these scales.
    pub degenerate: bool,
    /// Some radius needed one cylinder per point: the sampling is too coarse.
    pub saturated: bool,
}

/// Slope of `ln N(r)` against `ln(1/r)` in the biparabolic metric.
pub fn box_dimension_estimate(points: &[(f64, f64)], radii: &[f64]) -> Result<BoxDimension> {
    if radii.len() < 3 {
        return invalid("need at least 3 radii");
    }
    if points.is_empty() {
        return invalid("empty point set has no box dimension");
    }
    let mut counts = Vec::with_capacity(radii.len());
    for &r in radii {
        counts.push((r, cover_count(points, r)?));
    }
    let pts: Vec<(f64, f64)> = counts.iter().map(|&(r, n)| (-r.ln(), (n as f64).ln())).collect();
    let (dimension, _) =
        least_squares(&pts).ok_or_else(|| crate::Error::InvalidArgument("radii must differ".into()))?;
    let degenerate = counts.iter().all(|c| c.1 == counts[0].1);
    let saturated = points.len() > 1 && counts.iter().any(|c| c.1 >= points.len());
    Ok(BoxDimension {
        dimension: if degenerate { 0.0 } else { dimension },
        counts,
        degenerate,
        saturated,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{spatial_segment, time_segment};

    #[test]
    fn empty_and_single() {
        let e = biparabolic_cover(&[], 0.1, &[1.0, 2.0]).unwrap();
        assert_eq!(e.sums, vec![(1.0, 0.0), (2.0, 0.0)]);
        let s = biparabolic_cover(&[(0.3, 0.1)], 0.1, &[1.0]).unwrap();
        assert_eq!(s.cylinders.len(), 1);
        assert!(s.sum_for(1.0).unwrap() <= 0.1 * 0.5f64.powi(LADDER_DEPTH as i32) * 1.0000001);
        let d = box_dimension_estimate(&[(0.0, 0.0)], &[0.3, 0.2, 0.1]).unwrap();
        assert!(d.degenerate && d.dimension == 0.0);
    }

    #[test]
    fn segment_sum_is_half() {
        let pts = spatial_segment(0.0, 1.0, 0.0, 10_000);
        for cap in [0.1, 0.02, 0.004] {
            let est = biparabolic_cover(&pts, cap, &[1.0]).unwrap();
            let s = est.sum_for(1.0).unwrap();
            assert!((s - 0.5).abs() <= 0.05, "cap {cap}: {s}");
            assert!(est.cylinders.iter().all(|c| c.r < cap));
            assert!(pts.iter().all(|p| est.cylinders.iter().any(|c| c.contains(*p))));
        }
    }

    #[test]
    fn time_segment_dimension() {
        let pts = time_segment(0.0, 0.0, 1.0, 10_000);
        let d = box_dimension_estimate(&pts, &[0.35, 0.3, 0.25, 0.2]).unwrap();
        assert!((d.dimension - 4.0).abs() <= 0.2, "{d:?}");
        assert!(!d.saturated);
    }
}
