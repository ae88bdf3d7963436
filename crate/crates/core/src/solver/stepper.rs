use rustfft::num_complex::Complex64;

use super::config::{Scheme, SolverConfig};
use super::forcing::ForcingSpec;
use crate::error::{invalid, Error, Result};
use crate::field::spectral::Spectral;
use crate::field::SpaceTimeField;

/// Per-run diagnostics gathered while stepping.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct StepStats {
    pub steps: usize,
    /// Largest imaginary part left by any inverse transform.
    pub max_imag_residue: f64,
    /// Largest deviation of the spatial mean from its initial value.
    pub mean_drift: f64,
    pub max_abs: f64,
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub field: SpaceTimeField,
    pub stats: StepStats,
}

/// `φ1(z) = (e^z − 1)/z` and `φ2(z) = (e^z − 1 − z)/z²`.
pub fn phi_functions(z: f64) -> (f64, f64) {
    if z.abs() < 0.1 {
        // Taylor series: φ_j(z) = Σ z^n / (n + j)!
        let (mut p1, mut p2) = (0.0, 0.0);
        let mut term = 1.0; // z^n / n!
        for n in 0..16 {
            p1 += term / (n + 1) as f64;
            p2 += term / ((n + 1) * (n + 2)) as f64;
            term *= z / (n + 1) as f64;
        }
        (p1, p2)
    } else {
        let em1 = z.exp_m1();
        (em1 / z, (em1 - z) / (z * z))
    }
}

struct Integrator<'a> {
    sp: Spectral,
    forcing: &'a ForcingSpec,
    ik: Vec<Complex64>,
    kappa2: Vec<f64>,
    kappa4: Vec<f64>,
    cutoff: Option<usize>,
    residue: f64,
    f_buf: Vec<f64>,
}

impl<'a> Integrator<'a> {
    fn new(cfg: &SolverConfig, forcing: &'a ForcingSpec) -> Self {
        let grid = cfg.grid;
        let m = grid.n_modes();
        let kappa2: Vec<f64> = (0..m).map(|k| grid.wavenumber(k).powi(2)).collect();
        Self {
            sp: Spectral::new(grid),
            forcing,
            ik: crate::field::spectral::derivative_multiplier(&grid, 1),
            kappa4: kappa2.iter().map(|k2| k2 * k2).collect(),
            kappa2,
            cutoff: cfg.dealias.then(|| grid.dealias_cutoff()),
            residue: 0.0,
            f_buf: vec![0.0; grid.n_points()],
        }
    }

    /// `N̂ = f̂ − (iκ)²·FFT(u_x²)`, with the product truncated when dealiasing.
    fn nonlinear(&mut self, u_hat: &[Complex64], t: f64) -> Result<Vec<Complex64>> {
        let ux_hat: Vec<Complex64> = u_hat.iter().zip(&self.ik).map(|(u, m)| u * m).collect();
        let (ux, res) = self.sp.synthesize_with_residue(&ux_hat);
        self.residue = self.residue.max(res);
        let q: Vec<f64> = ux.iter().map(|v| v * v).collect();
        let q_hat = product_spectrum(&self.sp, &q, self.cutoff);
        let mut n_hat: Vec<Complex64> = q_hat.iter().zip(&self.kappa2).map(|(q, k2)| q * *k2).collect();
        if !self.forcing.is_zero() {
            self.forcing.eval_on_grid(&self.sp, t, &mut self.f_buf)?;
            let f_hat = self.sp.half_spectrum(&self.f_buf);
            for (n, f) in n_hat.iter_mut().zip(f_hat) {
                *n += f;
            }
        }
        Ok(n_hat)
    }
}

/// Half spectrum of a quadratic product, zeroed above `cutoff` if given.
pub fn product_spectrum(sp: &Spectral, product: &[f64], cutoff: Option<usize>) -> Vec<Complex64> {
    let mut hat = sp.half_spectrum(product);
    if let Some(c) = cutoff {
        for v in hat.iter_mut().skip(c + 1) {
            *v = Complex64::new(0.0, 0.0);
        }
    }
    hat
}

fn check_initial(u0: &[f64], cfg: &SolverConfig) -> Result<usize> {
    let steps = cfg.n_steps()?;
    if u0.len() != cfg.grid.n_points() {
        return invalid(format!(
            "initial profile has {} points, grid has {}",
            u0.len(),
            cfg.grid.n_points()
        ));
    }
    if u0.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("initial profile".into()));
    }
    Ok(steps)
}

/// Integrates `u_t + u_xxxx + ∂_xx(u_x²) = f` and returns the stored
/// trajectory.
pub fn integrate_sgm(u0: &[f64], forcing: &ForcingSpec, cfg: &SolverConfig) -> Result<SpaceTimeField> {
    integrate_sgm_traced(u0, forcing, cfg).map(|t| t.field)
}

pub fn integrate_sgm_traced(u0: &[f64], forcing: &ForcingSpec, cfg: &SolverConfig) -> Result<Trajectory> {
    let steps = check_initial(u0, cfg)?;
    let times = cfg.output_times()?;
    let h = cfg.dt;
    let mut it = Integrator::new(cfg, forcing);

    let (decay, hphi1, hphi2): (Vec<f64>, Vec<f64>, Vec<f64>) = {
        let mut e = Vec::new();
        let mut a = Vec::new();
        let mut b = Vec::new();
        for &k4 in &it.kappa4 {
            let z = -k4 * h;
            let (p1, p2) = phi_functions(z);
            e.push(z.exp());
            a.push(h * p1);
            b.push(h * p2);
        }
        (e, a, b)
    };

    let mut u_hat = it.sp.half_spectrum(u0);
    let mean0 = u_hat[0].re;
    let mut stats = StepStats {
        max_abs: u0.iter().fold(0.0_f64, |m, v| m.max(v.abs())),
        ..Default::default()
    };
    let mut samples = Vec::with_capacity(times.n_slices() * u0.len());
    samples.extend_from_slice(u0);

    for n in 0..steps {
        let t = cfg.t_start + n as f64 * h;
        let n_hat = it.nonlinear(&u_hat, t)?;
        let next: Vec<Complex64> = match cfg.scheme {
            Scheme::Etdrk2 => {
                let a: Vec<Complex64> = (0..u_hat.len())
                    .map(|k| u_hat[k] * decay[k] + n_hat[k] * hphi1[k])
                    .collect();
                let n_a = it.nonlinear(&a, t + h)?;
                (0..u_hat.len())
                    .map(|k| a[k] + (n_a[k] - n_hat[k]) * hphi2[k])
                    .collect()
            }
            Scheme::ImexEuler => (0..u_hat.len())
                .map(|k| (u_hat[k] + n_hat[k] * h) / (1.0 + h * it.kappa4[k]))
                .collect(),
        };
        if next.iter().any(|c| !(c.re.is_finite() && c.im.is_finite())) {
            let last = it.sp.synthesize(&u_hat);
            return Err(Error::BlowUp {
                last_finite_time: t,
                max_abs: last.iter().fold(0.0_f64, |m, v| m.max(v.abs())),
            });
        }
        u_hat = next;
        // real data: mean and Nyquist coefficients stay real
        u_hat[0].im = 0.0;
        let last = u_hat.len() - 1;
        u_hat[last].im = 0.0;
        stats.mean_drift = stats.mean_drift.max((u_hat[0].re - mean0).abs());
        if (n + 1) % cfg.store_stride == 0 {
            let (row, res) = it.sp.synthesize_with_residue(&u_hat);
            it.residue = it.residue.max(res);
            stats.max_abs = row.iter().fold(stats.max_abs, |m, v| m.max(v.abs()));
            samples.extend(row);
        }
    }
    stats.steps = steps;
    stats.max_imag_residue = it.residue;
    let field = SpaceTimeField::new(cfg.grid, times, samples)?;
    Ok(Trajectory { field, stats })
}

/// Integrates `v_t + v_xxxx = 0`: every mode decays as `e^{−κ⁴(t − t_start)}`.
pub fn integrate_biharmonic(v0: &[f64], cfg: &SolverConfig) -> Result<SpaceTimeField> {
    check_initial(v0, cfg)?;
    let times = cfg.output_times()?;
    let sp = Spectral::new(cfg.grid);
    let v_hat = sp.half_spectrum(v0);
    let kappa4: Vec<f64> = (0..v_hat.len()).map(|k| cfg.grid.wavenumber(k).powi(4)).collect();
    let mut samples = Vec::with_capacity(times.n_slices() * v0.len());
    samples.extend_from_slice(v0);
    for n in 1..times.n_slices() {
        let elapsed = times.time(n) - cfg.t_start;
        let hat: Vec<Complex64> = v_hat
            .iter()
            .zip(&kappa4)
            .map(|(v, k4)| v * (-k4 * elapsed).exp())
            .collect();
        samples.extend(sp.synthesize(&hat));
    }
    SpaceTimeField::new(cfg.grid, times, samples)
}
