use std::f64::consts::PI;

use crate::error::{invalid, Result};

/// Uniform periodic grid on the torus `[0, period)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TorusGrid {
    n_points: usize,
    period: f64,
}

impl TorusGrid {
    /// `n_points` must be even and at least 8.
    pub fn new(n_points: usize, period: f64) -> Result<Self> {
        if n_points < 8 || !n_points.is_multiple_of(2) {
            return invalid(format!("n_points must be even and >= 8 (got {n_points})"));
        }
        if !(period.is_finite() && period > 0.0) {
            return invalid(format!("period must be positive and finite (got {period})"));
        }
        Ok(Self { n_points, period })
    }

    /// Grid on the standard `2π` torus.
    pub fn standard(n_points: usize) -> Result<Self> {
        Self::new(n_points, 2.0 * PI)
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn dx(&self) -> f64 {
        self.period / self.n_points as f64
    }

    pub fn x(&self, j: usize) -> f64 {
        j as f64 * self.dx()
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n_points).map(|j| self.x(j)).collect()
    }

    /// Angular wavenumber of Fourier index `k`.
    pub fn wavenumber(&self, k: usize) -> f64 {
        2.0 * PI * k as f64 / self.period
    }

    /// Number of non-negative Fourier indices `0..=n/2`.
    pub fn n_modes(&self) -> usize {
        self.n_points / 2 + 1
    }

    /// Largest index kept by the 2/3 truncation rule.
    pub fn dealias_cutoff(&self) -> usize {
        self.n_points / 3
    }
}

/// Uniform time grid `t_start + n·dt`, `n = 0..=n_steps`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    t_start: f64,
    dt: f64,
    n_steps: usize,
}

impl TimeGrid {
    pub fn new(t_start: f64, dt: f64, n_steps: usize) -> Result<Self> {
        if !t_start.is_finite() {
            return invalid("t_start must be finite");
        }
        if !(dt.is_finite() && dt > 0.0) {
            return invalid(format!("dt must be positive and finite (got {dt})"));
        }
        Ok(Self { t_start, dt, n_steps })
    }

    pub fn t_start(&self) -> f64 {
        self.t_start
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    pub fn n_slices(&self) -> usize {
        self.n_steps + 1
    }

    pub fn t_end(&self) -> f64 {
        self.time(self.n_steps)
    }

    pub fn time(&self, n: usize) -> f64 {
        self.t_start + n as f64 * self.dt
    }

    /// Bracketing slice index and linear weight of the upper slice.
    /// Times within `dt/2` beyond either end snap to the end slice.
    pub fn locate(&self, t: f64) -> Option<(usize, f64)> {
        let s = (t - self.t_start) / self.dt;
        let last = self.n_steps as f64;
        if s < -0.5 || s > last + 0.5 || !s.is_finite() {
            return None;
        }
        if self.n_steps == 0 {
            return Some((0, 0.0));
        }
        let s = s.clamp(0.0, last);
        let i = (s.floor() as usize).min(self.n_steps - 1);
        let w = s - i as f64;
        Some((i, w))
    }

    /// Stored slice indices with time strictly inside `(a, b)`.
    pub fn interior_slices(&self, a: f64, b: f64) -> std::ops::Range<usize> {
        let eps = 1e-9 * self.dt;
        let lo = ((a - self.t_start) / self.dt).floor() as i64 + 1;
        let hi = ((b - self.t_start) / self.dt).ceil() as i64 - 1;
        let mut lo = lo.max(0) as usize;
        let mut hi = (hi.min(self.n_steps as i64)).max(-1);
        // drop slices that coincide with the endpoints up to roundoff
        while lo <= self.n_steps && self.time(lo) <= a + eps {
            lo += 1;
        }
        while hi >= 0 && self.time(hi as usize) >= b - eps {
            hi -= 1;
        }
        if hi < lo as i64 {
            lo..lo
        } else {
            lo..(hi as usize + 1)
        }
    }

    /// Number of stored slices inside the closed interval `[a, b]`.
    pub fn slices_in(&self, a: f64, b: f64) -> usize {
        let eps = 1e-9 * self.dt;
        (0..=self.n_steps)
            .filter(|&n| {
                let t = self.time(n);
                t >= a - eps && t <= b + eps
            })
            .count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_odd_or_small_grids() {
        assert!(TorusGrid::standard(63).is_err());
        assert!(TorusGrid::standard(6).is_err());
        assert!(TorusGrid::new(16, -1.0).is_err());
        let g = TorusGrid::standard(64).unwrap();
        assert!((g.dx() * 64.0 - g.period()).abs() < 1e-14);
    }

    #[test]
    fn locate_and_interior() {
        let tg = TimeGrid::new(-1.0, 0.25, 8).unwrap();
        assert_eq!(tg.locate(-1.0), Some((0, 0.0)));
        let (i, w) = tg.locate(0.1).unwrap();
        assert_eq!(i, 4);
        assert!((w - 0.4).abs() < 1e-12);
        assert_eq!(tg.locate(1.0).map(|(i, w)| (i, w.round())), Some((7, 1.0)));
        assert!(tg.locate(1.2).is_none());
        assert!(tg.locate(1.1).is_some());
        // (−0.5, 0.5) contains −0.25, 0, 0.25
        assert_eq!(tg.interior_slices(-0.5, 0.5), 3..6);
        assert_eq!(tg.interior_slices(0.01, 0.02).len(), 0);
        assert_eq!(tg.slices_in(-0.5, 0.5), 5);
    }
}
