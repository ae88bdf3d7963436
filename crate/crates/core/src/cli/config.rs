//! Flat `section.key=value` run configuration.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::field::TorusGrid;
use crate::regularity::RegularityConfig;
use crate::solver::{Scheme, SolverConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Simulate,
    Quantities,
    Verify,
    SingularSet,
    Convergence,
}

impl Command {
    pub const ALL: [Command; 5] = [
        Command::Simulate,
        Command::Quantities,
        Command::Verify,
        Command::SingularSet,
        Command::Convergence,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Command::Simulate => "simulate",
            Command::Quantities => "quantities",
            Command::Verify => "verify",
            Command::SingularSet => "singular-set",
            Command::Convergence => "convergence",
        }
    }
}

impl FromStr for Command {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown command {s:?}")))
    }
}

/// Built-in inputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// Zero data, zero forcing (solver run).
    Zero,
    /// `A e^{−t} sin x` with its manufactured forcing (solver run).
    DecayingSine,
    /// `A cos t sin x` with its manufactured forcing (solver run).
    Oscillating,
    /// Seeded random band-limited initial data, zero forcing (solver run).
    BandLimited,
    /// Constant `A` (closed form, a solution with zero forcing).
    Constant,
    /// Steady `A sin x` (closed form, not a solution).
    SteadySine,
    /// Steady `A((sin²x + ε²)^{1/6} − ε^{1/3})` (closed form).
    Rough,
    /// Points on `[0, 1] × {0}` (cover estimates only).
    Segment,
    /// Points on `{0} × [0, 1]` (cover estimates only).
    TimeSegment,
}

impl Preset {
    pub const ALL: [Preset; 9] = [
        Preset::Zero,
        Preset::DecayingSine,
        Preset::Oscillating,
        Preset::BandLimited,
        Preset::Constant,
        Preset::SteadySine,
        Preset::Rough,
        Preset::Segment,
        Preset::TimeSegment,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Preset::Zero => "zero",
            Preset::DecayingSine => "decaying-sine",
            Preset::Oscillating => "oscillating",
            Preset::BandLimited => "band-limited",
            Preset::Constant => "constant",
            Preset::SteadySine => "steady-sine",
            Preset::Rough => "rough",
            Preset::Segment => "segment",
            Preset::TimeSegment => "time-segment",
        }
    }

    pub fn is_point_set(&self) -> bool {
        matches!(self, Preset::Segment | Preset::TimeSegment)
    }

    pub fn is_manufactured(&self) -> bool {
        matches!(self, Preset::DecayingSine | Preset::Oscillating)
    }

    /// Presets produced by running the solver.
    pub fn is_simulated(&self) -> bool {
        matches!(
            self,
            Preset::Zero | Preset::DecayingSine | Preset::Oscillating | Preset::BandLimited
        )
    }
}

impl FromStr for Preset {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown preset {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub seed: u64,
    pub output_dir: String,

    pub n_points: usize,
    pub t_start: f64,
    pub t_end: f64,
    pub dt: f64,
    pub scheme: Scheme,
    pub dealias: bool,
    pub stride: usize,

    pub preset: Preset,
    pub amplitude: f64,
    pub eps: f64,
    /// Field file replacing the preset, if non-empty.
    pub input: String,
    /// Forcing field file for `input`, if non-empty.
    pub forcing: String,
    /// Whether `input` is to be judged as a solution.
    pub input_is_solution: bool,

    pub radii: Vec<f64>,
    pub centers: Vec<(f64, f64)>,
    pub p: f64,

    pub regularity: RegularityConfig,
    pub trace_steps: usize,

    pub shifts: Vec<f64>,
    pub ratio_cap: f64,

    pub dts: Vec<f64>,
    pub n_ladder: Vec<usize>,

    pub delta_caps: Vec<f64>,
    pub exponents: Vec<f64>,
    pub cover_points: usize,
    pub box_radii: Vec<f64>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            command: Command::Simulate,
            seed: 0,
            output_dir: "sgm-out".into(),
            n_points: 64,
            t_start: -1.0,
            t_end: 1.0,
            dt: 1e-3,
            scheme: Scheme::Etdrk2,
            dealias: true,
            stride: 1,
            preset: Preset::DecayingSine,
            amplitude: 1.0,
            eps: 1e-3,
            input: String::new(),
            forcing: String::new(),
            input_is_solution: false,
            radii: vec![0.5, 0.25, 0.125],
            centers: vec![(1.0, 0.0)],
            p: 3.0,
            regularity: RegularityConfig::default(),
            trace_steps: 3,
            shifts: vec![0.0, 5.0],
            ratio_cap: crate::inequalities::tolerances::DEFAULT_RATIO_CAP,
            dts: vec![2e-3, 1e-3, 5e-4],
            n_ladder: Vec::new(),
            delta_caps: vec![0.1, 0.05, 0.025],
            exponents: vec![1.0],
            cover_points: 10_000,
            box_radii: vec![0.35, 0.3, 0.25, 0.2],
        }
    }
}

fn fmt_f(v: f64) -> String {
    format!("{v:?}")
}

fn fmt_list<T>(xs: &[T], f: impl Fn(&T) -> String) -> String {
    xs.iter().map(f).collect::<Vec<_>>().join(",")
}

fn parse_f(key: &str, v: &str) -> Result<f64> {
    v.trim()
        .parse::<f64>()
        .map_err(|_| Error::Parse(format!("{key}: expected a number, got {v:?}")))
}

fn parse_u(key: &str, v: &str) -> Result<usize> {
    v.trim()
        .parse::<usize>()
        .map_err(|_| Error::Parse(format!("{key}: expected a non-negative integer, got {v:?}")))
}

fn parse_bool(key: &str, v: &str) -> Result<bool> {
    match v.trim() {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(Error::Parse(format!("{key}: expected true or false, got {v:?}"))),
    }
}

fn parse_list<T>(key: &str, v: &str, item: impl Fn(&str, &str) -> Result<T>) -> Result<Vec<T>> {
    if v.trim().is_empty() {
        return Ok(Vec::new());
    }
    v.split(',').map(|s| item(key, s)).collect()
}

fn parse_center(key: &str, v: &str) -> Result<(f64, f64)> {
    let (x, t) = v
        .split_once(':')
        .ok_or_else(|| Error::Parse(format!("{key}: centers are written x:t, got {v:?}")))?;
    Ok((parse_f(key, x)?, parse_f(key, t)?))
}

impl RunConfig {
    /// Every key with its current value, in a fixed order.
    pub fn entries(&self) -> Vec<(&'static str, String)> {
        let r = &self.regularity;
        vec![
            ("run.command", self.command.name().into()),
            ("run.seed", self.seed.to_string()),
            ("output.dir", self.output_dir.clone()),
            ("solver.n_points", self.n_points.to_string()),
            ("solver.t_start", fmt_f(self.t_start)),
            ("solver.t_end", fmt_f(self.t_end)),
            ("solver.dt", fmt_f(self.dt)),
            ("solver.scheme", self.scheme.name().into()),
            ("solver.dealias", self.dealias.to_string()),
            ("solver.stride", self.stride.to_string()),
            ("case.preset", self.preset.name().into()),
            ("case.amplitude", fmt_f(self.amplitude)),
            ("case.eps", fmt_f(self.eps)),
            ("case.input", self.input.clone()),
            ("case.forcing", self.forcing.clone()),
            ("case.solution", self.input_is_solution.to_string()),
            ("quantities.radii", fmt_list(&self.radii, |v| fmt_f(*v))),
            (
                "quantities.centers",
                fmt_list(&self.centers, |(x, t)| format!("{}:{}", fmt_f(*x), fmt_f(*t))),
            ),
            ("quantities.p", fmt_f(self.p)),
            ("regularity.p", fmt_f(r.p)),
            ("regularity.lambda", fmt_f(r.lambda)),
            ("regularity.theta", fmt_f(r.theta)),
            ("regularity.delta0", fmt_f(r.delta0)),
            ("regularity.delta1_star", fmt_f(r.delta1_star)),
            ("regularity.delta2_star", fmt_f(r.delta2_star)),
            ("regularity.delta1", fmt_f(r.delta1)),
            ("regularity.delta2", fmt_f(r.delta2)),
            ("regularity.trace_steps", self.trace_steps.to_string()),
            ("verify.shifts", fmt_list(&self.shifts, |v| fmt_f(*v))),
            ("verify.ratio_cap", fmt_f(self.ratio_cap)),
            ("convergence.dts", fmt_list(&self.dts, |v| fmt_f(*v))),
            ("convergence.n_points", fmt_list(&self.n_ladder, |v| v.to_string())),
            ("cover.delta_caps", fmt_list(&self.delta_caps, |v| fmt_f(*v))),
            ("cover.exponents", fmt_list(&self.exponents, |v| fmt_f(*v))),
            ("cover.points", self.cover_points.to_string()),
            ("cover.box_radii", fmt_list(&self.box_radii, |v| fmt_f(*v))),
        ]
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (k, v) in self.entries() {
            let _ = writeln!(out, "{k}={v}");
        }
        out
    }

    /// Sets one key. Unknown keys are errors.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let v = value;
        let r = &mut self.regularity;
        match key {
            "run.command" => self.command = v.trim().parse()?,
            "run.seed" => {
                self.seed = v
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("{key}: expected an unsigned integer, got {v:?}")))?
            }
            "output.dir" => self.output_dir = v.trim().to_string(),
            "solver.n_points" => self.n_points = parse_u(key, v)?,
            "solver.t_start" => self.t_start = parse_f(key, v)?,
            "solver.t_end" => self.t_end = parse_f(key, v)?,
            "solver.dt" => self.dt = parse_f(key, v)?,
            "solver.scheme" => self.scheme = Scheme::parse(v.trim())?,
            "solver.dealias" => self.dealias = parse_bool(key, v)?,
            "solver.stride" => self.stride = parse_u(key, v)?,
            "case.preset" => self.preset = v.trim().parse()?,
            "case.amplitude" => self.amplitude = parse_f(key, v)?,
            "case.eps" => self.eps = parse_f(key, v)?,
            "case.input" => self.input = v.trim().to_string(),
            "case.forcing" => self.forcing = v.trim().to_string(),
            "case.solution" => self.input_is_solution = parse_bool(key, v)?,
            "quantities.radii" => self.radii = parse_list(key, v, parse_f)?,
            "quantities.centers" => self.centers = parse_list(key, v, parse_center)?,
            "quantities.p" => self.p = parse_f(key, v)?,
            "regularity.p" => r.p = parse_f(key, v)?,
            "regularity.lambda" => r.lambda = parse_f(key, v)?,
            "regularity.theta" => r.theta = parse_f(key, v)?,
            "regularity.delta0" => r.delta0 = parse_f(key, v)?,
            "regularity.delta1_star" => r.delta1_star = parse_f(key, v)?,
            "regularity.delta2_star" => r.delta2_star = parse_f(key, v)?,
            "regularity.delta1" => r.delta1 = parse_f(key, v)?,
            "regularity.delta2" => r.delta2 = parse_f(key, v)?,
            "regularity.trace_steps" => self.trace_steps = parse_u(key, v)?,
            "verify.shifts" => self.shifts = parse_list(key, v, parse_f)?,
            "verify.ratio_cap" => self.ratio_cap = parse_f(key, v)?,
            "convergence.dts" => self.dts = parse_list(key, v, parse_f)?,
            "convergence.n_points" => self.n_ladder = parse_list(key, v, parse_u)?,
            "cover.delta_caps" => self.delta_caps = parse_list(key, v, parse_f)?,
            "cover.exponents" => self.exponents = parse_list(key, v, parse_f)?,
            "cover.points" => self.cover_points = parse_u(key, v)?,
            "cover.box_radii" => self.box_radii = parse_list(key, v, parse_f)?,
            other => return Err(Error::Parse(format!("unknown key {other:?}"))),
        }
        Ok(())
    }

    /// Applies `key=value` lines on top of the defaults. Blank lines and
    /// `#` comments are skipped; a key given twice keeps the last value.
    /// Derived thresholds `δ1`, `δ2` follow `δ0` and `δ*` unless set explicitly.
    pub fn parse(text: &str) -> Result<Self> {
        let mut pairs = BTreeMap::new();
        let mut order = Vec::new();
        for (ln, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("line {}: expected key=value, got {line:?}", ln + 1)))?;
            let k = k.trim().to_string();
            if pairs.insert(k.clone(), v.to_string()).is_none() {
                order.push(k);
            }
        }
        let mut cfg = Self::default();
        cfg.apply(order.iter().map(|k| (k.as_str(), pairs[k].as_str())))?;
        Ok(cfg)
    }

    /// Applies overrides in order, then re-derives `δ1`/`δ2` where they were
    /// not given explicitly.
    pub fn apply<'a>(&mut self, pairs: impl IntoIterator<Item = (&'a str, &'a str)>) -> Result<()> {
        let (mut d1, mut d2, mut touched) = (false, false, false);
        for (k, v) in pairs {
            self.set(k, v)?;
            d1 |= k == "regularity.delta1";
            d2 |= k == "regularity.delta2";
            touched |= matches!(
                k,
                "regularity.delta0" | "regularity.delta1_star" | "regularity.delta2_star"
            );
        }
        if touched {
            let r = &mut self.regularity;
            if !d1 {
                r.delta1 = RegularityConfig::small_delta(r.delta0, r.delta1_star);
            }
            if !d2 {
                r.delta2 = RegularityConfig::small_delta(r.delta0, r.delta2_star);
            }
        }
        Ok(())
    }

    /// First 16 hex digits of the SHA-256 of [`RunConfig::to_text`] without
    /// the `output.dir` line, so moving a run does not change its identity.
    pub fn hash(&self) -> String {
        let text: String = self
            .to_text()
            .lines()
            .filter(|l| !l.starts_with("output.dir="))
            .map(|l| format!("{l}\n"))
            .collect();
        let digest = Sha256::digest(text.as_bytes());
        digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }

    pub fn solver_config(&self) -> Result<SolverConfig> {
        let grid = TorusGrid::standard(self.n_points)?;
        Ok(SolverConfig::new(grid, self.t_start, self.t_end, self.dt)
            .with_scheme(self.scheme)
            .with_dealias(self.dealias)
            .with_stride(self.stride))
    }

    /// Regularity settings with the profile ladder as radii.
    pub fn regularity_config(&self) -> RegularityConfig {
        let mut r = self.regularity.clone();
        r.radii = self.radii.clone();
        r
    }

    /// Checks every invariant the chosen command relies on.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidArgument(m));
        self.solver_config()?.validate()?;
        self.regularity_config().validate()?;
        crate::quantities::check_p(self.p)?;
        if !(self.amplitude.is_finite()) {
            return bad(format!("case.amplitude must be finite (got {})", self.amplitude));
        }
        if !(self.eps > 0.0 && self.eps.is_finite()) {
            return bad(format!("case.eps must be positive (got {})", self.eps));
        }
        if self.centers.is_empty() {
            return bad("quantities.centers must list at least one center".into());
        }
        if !(self.ratio_cap > 0.0) {
            return bad(format!("verify.ratio_cap must be positive (got {})", self.ratio_cap));
        }
        if !self.forcing.is_empty() && self.input.is_empty() {
            return bad("case.forcing requires case.input".into());
        }
        if self.input.is_empty() && self.preset.is_point_set() && self.command != Command::SingularSet {
            return bad(format!(
                "preset {} is a point set; only singular-set accepts it",
                self.preset.name()
            ));
        }
        match self.command {
            Command::Simulate if !self.input.is_empty() || !self.preset.is_simulated() => {
                bad(format!("simulate needs a solver preset (got {})", self.preset.name()))
            }
            Command::Convergence => {
                if !self.preset.is_manufactured() || !self.input.is_empty() {
                    return bad("convergence needs a manufactured preset (decaying-sine or oscillating)".into());
                }
                let ladder = if self.n_ladder.is_empty() {
                    self.dts.len()
                } else {
                    self.n_ladder.len()
                };
                if ladder < 2 {
                    return bad("convergence ladder needs at least two rows".into());
                }
                for &dt in &self.dts {
                    let mut c = self.clone();
                    c.dt = dt;
                    c.solver_config()?.validate()?;
                }
                for &n in &self.n_ladder {
                    TorusGrid::standard(n)?;
                }
                Ok(())
            }
            Command::SingularSet => {
                if self.delta_caps.iter().any(|d| !(*d > 0.0)) {
                    return bad("cover.delta_caps must be positive".into());
                }
                if self.preset.is_point_set() && self.box_radii.len() < 3 {
                    return bad("cover.box_radii needs at least three radii".into());
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn defaults_round_trip_and_validate() {
        let c = RunConfig::default();
        assert_eq!(RunConfig::parse(&c.to_text()).unwrap(), c);
        c.validate().unwrap();
        assert_eq!(c.hash().len(), 16);
    }

    #[test]
    fn odd_grid_is_rejected_by_name() {
        let c = RunConfig::parse("solver.n_points=63").unwrap();
        let e = c.validate().unwrap_err().to_string();
        assert!(e.contains("n_points must be even"), "{e}");
        assert!(RunConfig::parse("nope=1").is_err());
        assert!(RunConfig::parse("solver.dt").is_err());
    }

    #[test]
    fn deltas_follow_delta0_unless_given() {
        let c = RunConfig::parse("regularity.delta0=0.2").unwrap();
        assert_eq!(c.regularity.delta1, RegularityConfig::small_delta(0.2, 0.5));
        let c = RunConfig::parse("regularity.delta0=0.2\nregularity.delta1=0.01").unwrap();
        assert_eq!(c.regularity.delta1, 0.01);
    }

    proptest! {
        #[test]
        fn text_round_trip(
            seed in any::<u64>(),
            n in 4usize..200,
            dt in 1e-6f64..1.0,
            amp in -1e3f64..1e3,
            radii in proptest::collection::vec(1e-4f64..3.0, 0..5),
            centers in proptest::collection::vec((-10.0f64..10.0, -5.0f64..5.0), 0..4),
            d0 in 1e-6f64..1.0,
            d1 in 1e-9f64..1.0,
            cmd in 0usize..5,
            preset in 0usize..9,
            dir in "[a-z0-9_/]{0,12}",
        ) {
            let mut c = RunConfig {
                seed,
                n_points: 2 * n,
                dt,
                amplitude: amp,
                radii,
                centers,
                command: Command::ALL[cmd],
                preset: Preset::ALL[preset],
                output_dir: dir,
                ..RunConfig::default()
            };
            c.regularity.delta0 = d0;
            c.regularity.delta1 = d1;
            let back = RunConfig::parse(&c.to_text()).unwrap();
            prop_assert_eq!(&back, &c);
            prop_assert_eq!(back.hash(), c.hash());
        }
    }
}
