use crate::error::{invalid, Result};
use crate::field::{TimeGrid, TorusGrid};

/// Time-stepping scheme for the nonlinear term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Scheme {
    /// Exponential time differencing, second order (Cox–Matthews).
    #[default]
    Etdrk2,
    /// Linear part implicit, nonlinear part explicit; first order.
    ImexEuler,
}

impl Scheme {
    pub fn name(&self) -> &'static str {
        match self {
            Scheme::Etdrk2 => "etdrk2",
            Scheme::ImexEuler => "imex-euler",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "etdrk2" => Ok(Scheme::Etdrk2),
            "imex-euler" => Ok(Scheme::ImexEuler),
            other => invalid(format!("unknown scheme {other:?} (expected etdrk2 or imex-euler)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    pub grid: TorusGrid,
    pub t_start: f64,
    pub t_end: f64,
    pub dt: f64,
    pub dealias: bool,
    pub scheme: Scheme,
    pub store_stride: usize,
}

impl SolverConfig {
    pub fn new(grid: TorusGrid, t_start: f64, t_end: f64, dt: f64) -> Self {
        Self {
            grid,
            t_start,
            t_end,
            dt,
            dealias: true,
            scheme: Scheme::default(),
            store_stride: 1,
        }
    }

    pub fn with_scheme(mut self, scheme: Scheme) -> Self {
        self.scheme = scheme;
        self
    }

    pub fn with_stride(mut self, stride: usize) -> Self {
        self.store_stride = stride;
        self
    }

    pub fn with_dealias(mut self, on: bool) -> Self {
        self.dealias = on;
        self
    }

    /// Number of steps; `t_end - t_start` must be an integer multiple of
    /// `dt` (to 1e-9 relative) and of `dt * store_stride`.
    pub fn n_steps(&self) -> Result<usize> {
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return invalid(format!("dt must be positive (got {})", self.dt));
        }
        if !(self.t_start.is_finite() && self.t_end.is_finite() && self.t_end > self.t_start) {
            return invalid(format!(
                "t_end must exceed t_start (got {} .. {})",
                self.t_start, self.t_end
            ));
        }
        if self.store_stride == 0 {
            return invalid("store_stride must be at least 1");
        }
        let span = self.t_end - self.t_start;
        let steps = (span / self.dt).round();
        if steps < 1.0 || (steps * self.dt - span).abs() > 1e-9 * span {
            return invalid(format!(
                "t_end - t_start = {span} is not an integer multiple of dt = {}",
                self.dt
            ));
        }
        let steps = steps as usize;
        if !steps.is_multiple_of(self.store_stride) {
            return invalid(format!(
                "store_stride {} does not divide the step count {steps}",
                self.store_stride
            ));
        }
        Ok(steps)
    }

    /// Time grid of the stored trajectory.
    pub fn output_times(&self) -> Result<TimeGrid> {
        let steps = self.n_steps()?;
        TimeGrid::new(
            self.t_start,
            self.dt * self.store_stride as f64,
            steps / self.store_stride,
        )
    }

    pub fn validate(&self) -> Result<()> {
        self.n_steps().map(|_| ())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn step_count_and_stride() {
        let g = TorusGrid::standard(16).unwrap();
        let cfg = SolverConfig::new(g, -1.0, 1.0, 1e-3).with_stride(10);
        assert_eq!(cfg.n_steps().unwrap(), 2000);
        let tg = cfg.output_times().unwrap();
        assert_eq!(tg.n_steps(), 200);
        assert!((tg.t_end() - 1.0).abs() < 1e-12);
        assert!(cfg.with_stride(3).validate().is_err());
        assert!(SolverConfig::new(g, 0.0, 1.0, 0.3).validate().is_err());
        assert!(SolverConfig::new(g, 1.0, 0.0, 0.1).validate().is_err());
        assert!(cfg.with_stride(0).validate().is_err());
    }

    #[test]
    fn scheme_names_round_trip() {
        for s in [Scheme::Etdrk2, Scheme::ImexEuler] {
            assert_eq!(Scheme::parse(s.name()).unwrap(), s);
        }
        assert!(Scheme::parse("rk4").is_err());
    }
}
