//! Real-to-half-spectrum transforms on a [`TorusGrid`], Fourier multipliers
//! and off-grid trigonometric interpolation.
//!
//! Half spectra hold the indices `k = 0..=n/2` normalized by `1/n`, so a
//! real sample vector `u_j` is reproduced by
//! `u(x) = Σ_k w_k Re(ĉ_k e^{i κ_k x})` with `w_0 = w_{n/2} = 1` and
//! `w_k = 2` otherwise.

use std::sync::Arc;

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::grid::TorusGrid;

#[derive(Clone)]
pub struct Spectral {
    grid: TorusGrid,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for Spectral {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Spectral").field("grid", &self.grid).finish()
    }
}

impl Spectral {
    pub fn new(grid: TorusGrid) -> Self {
        let mut planner = FftPlanner::new();
        let n = grid.n_points();
        Self {
            grid,
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
        }
    }

    pub fn grid(&self) -> &TorusGrid {
        &self.grid
    }

    /// Normalized half spectrum of real samples.
    pub fn half_spectrum(&self, samples: &[f64]) -> Vec<Complex64> {
        let n = self.grid.n_points();
        debug_assert_eq!(samples.len(), n);
        let mut buf: Vec<Complex64> = samples.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.forward.process(&mut buf);
        let scale = 1.0 / n as f64;
        let mut half: Vec<Complex64> = buf[..self.grid.n_modes()].iter().map(|c| c * scale).collect();
        // the mean and Nyquist modes of real data are real
        half[0].im = 0.0;
        let last = half.len() - 1;
        half[last].im = 0.0;
        half
    }

    /// Real samples from a half spectrum, conjugate symmetry imposed.
    pub fn synthesize(&self, half: &[Complex64]) -> Vec<f64> {
        self.synthesize_with_residue(half).0
    }

    /// As [`synthesize`](Self::synthesize), also returning the largest
    /// imaginary part left by the inverse transform.
    pub fn synthesize_with_residue(&self, half: &[Complex64]) -> (Vec<f64>, f64) {
        let n = self.grid.n_points();
        let m = n / 2;
        let mut buf = vec![Complex64::new(0.0, 0.0); n];
        buf[0] = Complex64::new(half[0].re, 0.0);
        for k in 1..m {
            buf[k] = half[k];
            buf[n - k] = half[k].conj();
        }
        buf[m] = Complex64::new(half[m].re, 0.0);
        self.inverse.process(&mut buf);
        let residue = buf.iter().fold(0.0_f64, |acc, c| acc.max(c.im.abs()));
        (buf.iter().map(|c| c.re).collect(), residue)
    }

    /// Multiplier `(i κ_k)^order`; the Nyquist entry is zero for odd orders.
    pub fn derivative_multiplier(&self, order: usize) -> Vec<Complex64> {
        derivative_multiplier(&self.grid, order)
    }

    /// Spectral derivative of one real slice.
    pub fn differentiate(&self, samples: &[f64], order: usize) -> Vec<f64> {
        let mult = self.derivative_multiplier(order);
        let half: Vec<Complex64> = self
            .half_spectrum(samples)
            .iter()
            .zip(&mult)
            .map(|(c, m)| c * m)
            .collect();
        self.synthesize(&half)
    }
}

pub fn derivative_multiplier(grid: &TorusGrid, order: usize) -> Vec<Complex64> {
    let m = grid.n_points() / 2;
    (0..=m)
        .map(|k| {
            if order % 2 == 1 && k == m {
                return Complex64::new(0.0, 0.0);
            }
            let ik = Complex64::new(0.0, grid.wavenumber(k));
            ik.powu(order as u32)
        })
        .collect()
}

/// Interpolation weights folded into a half spectrum scaled by `mult`.
pub fn weighted_coefficients(half: &[Complex64], mult: &[Complex64]) -> Vec<Complex64> {
    let last = half.len() - 1;
    half.iter()
        .zip(mult)
        .enumerate()
        .map(|(k, (c, m))| {
            let w = if k == 0 || k == last { 1.0 } else { 2.0 };
            c * m * w
        })
        .collect()
}

/// Evaluates the trigonometric interpolant with pre-weighted coefficients
/// (see [`weighted_coefficients`]) at arbitrary positions.
pub fn evaluate(coeffs: &[Complex64], grid: &TorusGrid, xs: &[f64], out: &mut [f64]) {
    let kappa = grid.wavenumber(1);
    for (x, o) in xs.iter().zip(out.iter_mut()) {
        let step = Complex64::from_polar(1.0, kappa * x);
        let mut z = Complex64::new(1.0, 0.0);
        let mut acc = 0.0;
        for c in coeffs {
            acc += c.re * z.re - c.im * z.im;
            z *= step;
        }
        *o = acc;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivative_of_sine() {
        let g = TorusGrid::standard(32).unwrap();
        let sp = Spectral::new(g);
        let u: Vec<f64> = g.points().iter().map(|x| x.sin()).collect();
        let du = sp.differentiate(&u, 1);
        for (x, d) in g.points().iter().zip(&du) {
            assert!((d - x.cos()).abs() <= 1e-12);
        }
        let u2: Vec<f64> = g.points().iter().map(|x| (2.0 * x).sin()).collect();
        let d4 = sp.differentiate(&u2, 4);
        for (x, d) in g.points().iter().zip(&d4) {
            assert!((d - 16.0 * (2.0 * x).sin()).abs() <= 1e-11);
        }
    }

    #[test]
    fn interpolation_is_exact_for_band_limited() {
        let g = TorusGrid::standard(16).unwrap();
        let sp = Spectral::new(g);
        let f = |x: f64| 0.3 + (x).sin() - 0.5 * (3.0 * x).cos() + 0.1 * (5.0 * x).sin();
        let u: Vec<f64> = g.points().iter().map(|&x| f(x)).collect();
        let half = sp.half_spectrum(&u);
        let coeffs = weighted_coefficients(&half, &sp.derivative_multiplier(0));
        let xs = [0.123, 1.7, -2.2, 7.9];
        let mut out = [0.0; 4];
        evaluate(&coeffs, &g, &xs, &mut out);
        for (x, v) in xs.iter().zip(out) {
            assert!((v - f(*x)).abs() < 1e-12, "{x}: {v}");
        }
    }

    #[test]
    fn nyquist_mode_survives_round_trip() {
        let g = TorusGrid::standard(8).unwrap();
        let sp = Spectral::new(g);
        let u: Vec<f64> = (0..8).map(|j| if j % 2 == 0 { 1.0 } else { -1.0 }).collect();
        let back = sp.synthesize(&sp.half_spectrum(&u));
        for (a, b) in u.iter().zip(back) {
            assert!((a - b).abs() < 1e-14);
        }
        // odd derivatives annihilate it
        let d = sp.differentiate(&u, 1);
        assert!(d.iter().all(|v| v.abs() < 1e-13));
    }
}
