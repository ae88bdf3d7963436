use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use super::config::{Command, Preset, RunConfig};
use super::output::Writer;
use crate::error::{Error, Result};
use crate::field::io::{read_field_file, write_field_file};
use crate::field::{AnalyticField, Cylinder, FieldSource, SpaceTimeField};
use crate::fixtures::{self, BandLimited};
use crate::inequalities::{
    eta_p, f_decay_check, interpolation_checks, l103_bounds_check, local_energy_check, local_energy_estimate_check,
    mean_deviation_check, parabolic_poincare_check, weak_form_report, CutoffSpec, InequalityReport,
};
use crate::quantities::multiscale_profile;
use crate::regularity::{
    biparabolic_cover, box_dimension_estimate, decay_trace, detect_singular_candidates, k0_and_r0,
};
use crate::solver::{
    integrate_sgm_traced, manufactured_forcing, ForcingSpec, ManufacturedSolution, SolverConfig, Trajectory,
};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_INVALID_CONFIG: i32 = 2;

#[derive(Debug, Clone)]
pub struct Outcome {
    pub exit_code: i32,
    pub files: Vec<PathBuf>,
    /// One-line human summary.
    pub summary: String,
}

/// Validates and runs the configured command. Never panics on bad input:
/// invalid configurations map to exit code 2, runtime failures to 1.
pub fn run(cfg: &RunConfig) -> Outcome {
    if let Err(e) = cfg.validate() {
        return Outcome {
            exit_code: EXIT_INVALID_CONFIG,
            files: Vec::new(),
            summary: format!("invalid config: {e}"),
        };
    }
    match execute(cfg) {
        Ok(o) => o,
        Err(e) => Outcome {
            exit_code: EXIT_FAILURE,
            files: Vec::new(),
            summary: format!("{} failed: {e}", cfg.command.name()),
        },
    }
}

fn execute(cfg: &RunConfig) -> Result<Outcome> {
    let mut w = Writer::new(cfg)?;
    w.raw("config.txt", &cfg.to_text())?;
    let (code, summary) = match cfg.command {
        Command::Simulate => simulate(cfg, &mut w)?,
        Command::Quantities => quantities(cfg, &mut w)?,
        Command::Verify => verify(cfg, &mut w)?,
        Command::SingularSet => singular_set(cfg, &mut w)?,
        Command::Convergence => convergence(cfg, &mut w)?,
    };
    Ok(Outcome {
        exit_code: code,
        files: w.written,
        summary,
    })
}

/// A preset run through the solver.
struct Simulated {
    trajectory: Trajectory,
    forcing: ForcingSpec,
    exact: Option<ManufacturedSolution>,
}

fn simulate_preset(cfg: &RunConfig, sc: &SolverConfig) -> Result<Simulated> {
    let xs = sc.grid.points();
    let a = cfg.amplitude;
    let (u0, forcing, exact): (Vec<f64>, ForcingSpec, Option<ManufacturedSolution>) = match cfg.preset {
        Preset::Zero => (vec![0.0; xs.len()], ForcingSpec::Zero, None),
        Preset::DecayingSine | Preset::Oscillating => {
            let ms = if cfg.preset == Preset::DecayingSine {
                ManufacturedSolution::decaying_sine(a)
            } else {
                ManufacturedSolution::oscillating(a)
            };
            let u0 = xs.iter().map(|&x| ms.value(x, sc.t_start)).collect();
            (u0, manufactured_forcing(&ms)?, Some(ms))
        }
        Preset::BandLimited => {
            let bl = BandLimited::random(cfg.seed, (sc.grid.n_points() / 3).min(4));
            let u0 = xs.iter().map(|&x| a * bl.value(0, x, 0.0)).collect();
            (u0, ForcingSpec::Zero, None)
        }
        other => {
            return Err(Error::InvalidArgument(format!(
                "preset {} is not simulated",
                other.name()
            )))
        }
    };
    let trajectory = integrate_sgm_traced(&u0, &forcing, sc)?;
    Ok(Simulated {
        trajectory,
        forcing,
        exact,
    })
}

/// The field (and forcing) a diagnostic command works on.
struct Case {
    u: Box<dyn FieldSource>,
    f: Option<Box<dyn FieldSource>>,
    solution: bool,
    label: String,
}

impl Case {
    fn f(&self) -> Option<&dyn FieldSource> {
        self.f.as_deref()
    }
}

fn load_case(cfg: &RunConfig) -> Result<Case> {
    if !cfg.input.is_empty() {
        let (u, _) = read_field_file(Path::new(&cfg.input))?;
        let f = if cfg.forcing.is_empty() {
            None
        } else {
            Some(Box::new(read_field_file(Path::new(&cfg.forcing))?.0) as Box<dyn FieldSource>)
        };
        return Ok(Case {
            u: Box::new(u),
            f,
            solution: cfg.input_is_solution,
            label: cfg.input.clone(),
        });
    }
    let span = (cfg.t_start, cfg.t_end);
    let dx = 2.0 * PI / cfg.n_points as f64;
    let a = cfg.amplitude;
    let closed = |u: AnalyticField, solution: bool| Case {
        u: Box::new(u),
        f: None,
        solution,
        label: cfg.preset.name().to_string(),
    };
    Ok(match cfg.preset {
        Preset::Constant => closed(fixtures::constant(a, span, dx), true),
        Preset::SteadySine => closed(fixtures::steady_sine(span, dx).scaled(a), false),
        Preset::Rough => closed(fixtures::rough_power(cfg.eps, span, dx)?.scaled(a), false),
        p if p.is_simulated() => {
            let sc = cfg.solver_config()?;
            let sim = simulate_preset(cfg, &sc)?;
            let f = if sim.forcing.is_zero() {
                None
            } else {
                Some(Box::new(sim.forcing.sample(sc.grid, sc.output_times()?)?) as Box<dyn FieldSource>)
            };
            Case {
                u: Box::new(sim.trajectory.field),
                f,
                solution: true,
                label: p.name().to_string(),
            }
        }
        p => return Err(Error::InvalidArgument(format!("preset {} has no field", p.name()))),
    })
}

fn simulate(cfg: &RunConfig, w: &mut Writer) -> Result<(i32, String)> {
    let sc = cfg.solver_config()?;
    let sim = match simulate_preset(cfg, &sc) {
        Ok(s) => s,
        Err(Error::BlowUp {
            last_finite_time,
            max_abs,
        }) => {
            w.records(
                "run.jsonl",
                &[json!({
                    "kind": "blow_up",
                    "preset": cfg.preset.name(),
                    "last_finite_time": last_finite_time,
                    "max_abs": max_abs,
                })],
            )?;
            return Ok((EXIT_FAILURE, format!("blow-up after t = {last_finite_time}")));
        }
        Err(e) => return Err(e),
    };
    let field = &sim.trajectory.field;
    let path = w.dir().join("trajectory.sgmf");
    write_field_file(field, &w.header_lines(), &path)?;
    w.written.push(path);
    let stats = sim.trajectory.stats;
    let mut rec = json!({
        "kind": "simulate",
        "preset": cfg.preset.name(),
        "steps": stats.steps,
        "max_abs": stats.max_abs,
        "mean_drift": stats.mean_drift,
        "max_imag_residue": stats.max_imag_residue,
    });
    let mut summary = format!("{} steps, max |u| = {:e}", stats.steps, stats.max_abs);
    if let Some(ms) = &sim.exact {
        let exact = ms.exact_field(*field.grid(), *field.times())?;
        let errs: Vec<(f64, f64)> = (0..field.times().n_slices())
            .map(|n| {
                let e = field
                    .slice(n)
                    .iter()
                    .zip(exact.slice(n))
                    .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()));
                (field.times().time(n), e)
            })
            .collect();
        let max_err = errs.iter().fold(0.0_f64, |m, e| m.max(e.1));
        let final_err = errs.last().map_or(0.0, |e| e.1);
        rec["max_error"] = json!(max_err);
        rec["final_error"] = json!(final_err);
        w.series("error_vs_time.dat", ("t", "max_abs_error"), &errs)?;
        summary.push_str(&format!(", max error vs exact = {max_err:e}"));
    }
    w.records("run.jsonl", &[rec])?;
    Ok((EXIT_PASS, summary))
}

fn quantities(cfg: &RunConfig, w: &mut Writer) -> Result<(i32, String)> {
    let case = load_case(cfg)?;
    let prof = multiscale_profile(case.u.as_ref(), case.f(), &cfg.centers, &cfg.radii, cfg.p)?;
    w.table("profile.csv", &prof.to_csv())?;
    w.table("profile_summary.csv", &prof.summary_csv())?;
    for (i, c) in cfg.centers.iter().enumerate() {
        let rows: Vec<(f64, f64)> = prof
            .rows_for(c.0, c.1)
            .filter_map(|r| r.result.as_ref().ok().map(|q| (r.r, q.g)))
            .collect();
        w.series(&format!("g_profile_{i}.dat"), ("r", "G"), &rows)?;
    }
    let failed = prof.rows.iter().filter(|r| r.result.is_err()).count();
    let clipped = prof
        .rows
        .iter()
        .filter(|r| r.result.as_ref().is_ok_and(|q| q.clipped))
        .count();
    w.records(
        "run.jsonl",
        &[json!({
            "kind": "quantities",
            "case": case.label,
            "rows": prof.rows.len(),
            "failed_rows": failed,
            "clipped_rows": clipped,
        })],
    )?;
    Ok((
        EXIT_PASS,
        format!("{} rows ({failed} failed, {clipped} clipped)", prof.rows.len()),
    ))
}

fn report_record(r: &InequalityReport, center: (f64, f64), radius: f64) -> Result<Value> {
    let mut v = serde_json::to_value(r).map_err(|e| Error::Io(e.to_string()))?;
    v["kind"] = json!("check");
    v["x0"] = json!(center.0);
    v["t0"] = json!(center.1);
    v["radius"] = json!(radius);
    Ok(v)
}

fn verify(cfg: &RunConfig, w: &mut Writer) -> Result<(i32, String)> {
    let case = load_case(cfg)?;
    let (u, f) = (case.u.as_ref(), case.f());
    let mut records = Vec::new();
    let mut reports = 0usize;
    let mut failures = 0usize;
    let mut residuals = Vec::new();
    let mut push = |records: &mut Vec<Value>, res: Result<Vec<InequalityReport>>, name: &str, c: (f64, f64), r: f64| {
        match res {
            Ok(reps) => {
                for rep in reps {
                    reports += 1;
                    failures += usize::from(!rep.pass);
                    residuals.push((residuals.len() as f64, rep.residual));
                    records.push(report_record(&rep, c, r)?);
                }
            }
            Err(e) => records.push(json!({
                "kind": "skipped",
                "check": name,
                "x0": c.0,
                "t0": c.1,
                "radius": r,
                "reason": e.to_string(),
            })),
        }
        Ok::<(), Error>(())
    };
    for &c in &cfg.centers {
        for &r in &cfg.radii {
            let cyl = Cylinder::new(c.0, c.1, r)?;
            let phi = CutoffSpec::new(c.0, c.1, r)?;
            for &a in &cfg.shifts {
                let res = local_energy_check(u, f, &phi, c.1, a, case.solution).map(|x| vec![x]);
                push(&mut records, res, "local_energy", c, r)?;
            }
            let res = weak_form_report(u, f, &phi, phi.time_support().0, c.1, case.solution).map(|x| vec![x]);
            push(&mut records, res, "weak_form", c, r)?;
            let res = local_energy_estimate_check(u, f, &cyl, cfg.p, cfg.ratio_cap, case.solution).map(|x| vec![x]);
            push(&mut records, res, "local_energy_estimate", c, r)?;
            let res = l103_bounds_check(u, f, &cyl, cfg.p, cfg.ratio_cap).map(|x| vec![x]);
            push(&mut records, res, "l103_bounds", c, r)?;
            let res = mean_deviation_check(u, &cyl, &[-1.0, 0.0, 1.0]);
            push(&mut records, res, "mean_vs_constant", c, r)?;
            let res = parabolic_poincare_check(u, f, &cyl, 1.0, cfg.p, cfg.ratio_cap).map(|x| vec![x]);
            push(&mut records, res, "parabolic_poincare", c, r)?;
            let res = interpolation_checks(u, &cyl, cfg.ratio_cap).map(|x| x.to_vec());
            push(&mut records, res, "interpolation", c, r)?;
        }
        if let Some(f) = f {
            let res = eta_p(cfg.p).and_then(|eta| f_decay_check(f, c, cfg.p, eta, 2));
            push(&mut records, res, "f_decay", c, 1.0)?;
        }
    }
    w.records("reports.jsonl", &records)?;
    w.series("residuals.dat", ("check", "residual"), &residuals)?;
    let skipped = records.iter().filter(|r| r["kind"] == "skipped").count();
    let code = if failures == 0 { EXIT_PASS } else { EXIT_FAILURE };
    Ok((code, format!("{reports} checks, {failures} failed, {skipped} skipped")))
}

fn cover_rows(points: &[(f64, f64)], cfg: &RunConfig, w: &mut Writer) -> Result<Vec<Value>> {
    let mut csv = String::from("delta_cap,k,sum,cylinders\n");
    let mut recs = Vec::new();
    for &cap in &cfg.delta_caps {
        let est = biparabolic_cover(points, cap, &cfg.exponents)?;
        for &(k, s) in &est.sums {
            csv.push_str(&format!("{cap},{k},{s},{}\n", est.cylinders.len()));
            recs.push(json!({"kind": "cover", "delta_cap": cap, "k": k, "sum": s, "cylinders": est.cylinders.len()}));
        }
    }
    w.table("cover.csv", &csv)?;
    Ok(recs)
}

fn singular_set(cfg: &RunConfig, w: &mut Writer) -> Result<(i32, String)> {
    if cfg.input.is_empty() && cfg.preset.is_point_set() {
        let n = cfg.cover_points;
        let points = match cfg.preset {
            Preset::Segment => fixtures::spatial_segment(0.0, 1.0, 0.0, n),
            _ => fixtures::time_segment(0.0, 0.0, 1.0, n),
        };
        let mut recs = cover_rows(&points, cfg, w)?;
        let dim = box_dimension_estimate(&points, &cfg.box_radii)?;
        let mut csv = String::from("r,count\n");
        for (r, c) in &dim.counts {
            csv.push_str(&format!("{r},{c}\n"));
        }
        w.table("box_counts.csv", &csv)?;
        let series: Vec<(f64, f64)> = dim
            .counts
            .iter()
            .map(|&(r, c)| ((1.0 / r).ln(), (c as f64).ln()))
            .collect();
        w.series("box_counts.dat", ("ln_inv_r", "ln_count"), &series)?;
        recs.push(json!({
            "kind": "box_dimension",
            "dimension": dim.dimension,
            "degenerate": dim.degenerate,
            "saturated": dim.saturated,
        }));
        w.records("run.jsonl", &recs)?;
        return Ok((
            EXIT_PASS,
            format!("{} points, box dimension {:.3}", points.len(), dim.dimension),
        ));
    }
    let case = load_case(cfg)?;
    let (u, f) = (case.u.as_ref(), case.f());
    let rc = cfg.regularity_config();
    let prof = multiscale_profile(u, f, &cfg.centers, &cfg.radii, rc.p)?;
    let rep = detect_singular_candidates(&prof, &rc, rc.alpha());
    w.table("verdicts.csv", &rep.to_csv())?;
    let candidates = rep.candidate_points();
    let mut recs = cover_rows(&candidates, cfg, w)?;
    for (i, &c) in cfg.centers.iter().enumerate() {
        let base = cfg.radii[0];
        match decay_trace(u, f, &rc, c, base, cfg.trace_steps) {
            Ok(tr) => {
                w.table(&format!("decay_{i}.csv"), &tr.to_csv())?;
                let (g1, f1) = tr.rows.first().map_or((0.0, 0.0), |r| (r.g, r.f_half * r.f_half));
                let (k0, r0) = k0_and_r0(g1, f1, rc.delta0, rc.theta)?;
                recs.push(json!({
                    "kind": "center",
                    "x0": c.0,
                    "t0": c.1,
                    "trace_rows": tr.rows.len(),
                    "trace_truncated": tr.truncated,
                    "trace_slope": tr.slope,
                    "trace_within_bounds": tr.all_within_bounds(),
                    "k0": k0,
                    "r0": r0,
                }));
            }
            Err(e) => recs.push(
                json!({"kind": "skipped", "check": "decay_trace", "x0": c.0, "t0": c.1, "reason": e.to_string()}),
            ),
        }
    }
    recs.push(json!({
        "kind": "singular_set",
        "case": case.label,
        "alpha": rep.alpha,
        "candidates": candidates.len(),
        "stamp": rep.stamp,
    }));
    w.records("run.jsonl", &recs)?;
    Ok((
        EXIT_PASS,
        format!("{} of {} centers are candidates", candidates.len(), cfg.centers.len()),
    ))
}

fn final_error(cfg: &RunConfig) -> Result<f64> {
    let sc = cfg.solver_config()?;
    let sim = simulate_preset(cfg, &sc)?;
    let ms = sim.exact.expect("manufactured preset");
    let field = &sim.trajectory.field;
    let last = field.times().n_slices() - 1;
    let t = field.times().time(last);
    Ok(sc
        .grid
        .points()
        .iter()
        .zip(field.slice(last))
        .fold(0.0_f64, |m, (&x, v)| m.max((v - ms.value(x, t)).abs())))
}

fn convergence(cfg: &RunConfig, w: &mut Writer) -> Result<(i32, String)> {
    let by_n = !cfg.n_ladder.is_empty();
    let mut rows: Vec<(f64, usize, f64)> = Vec::new();
    if by_n {
        for &n in &cfg.n_ladder {
            let mut c = cfg.clone();
            c.n_points = n;
            rows.push((cfg.dt, n, final_error(&c)?));
        }
    } else {
        for &dt in &cfg.dts {
            let mut c = cfg.clone();
            c.dt = dt;
            rows.push((dt, cfg.n_points, final_error(&c)?));
        }
    }
    let mut csv = String::from("dt,n_points,error,observed_order\n");
    let mut orders = Vec::new();
    for (i, &(dt, n, e)) in rows.iter().enumerate() {
        let order = if i > 0 && !by_n {
            let (dt0, _, e0) = rows[i - 1];
            (e0 / e).ln() / (dt0 / dt).ln()
        } else {
            f64::NAN
        };
        if order.is_finite() {
            orders.push(order);
        }
        csv.push_str(&format!("{dt},{n},{e},{order}\n"));
    }
    w.table("convergence.csv", &csv)?;
    let series: Vec<(f64, f64)> = rows
        .iter()
        .map(|&(dt, n, e)| (if by_n { n as f64 } else { dt }, e))
        .collect();
    w.series(
        "convergence.dat",
        (if by_n { "n_points" } else { "dt" }, "error"),
        &series,
    )?;
    w.records(
        "run.jsonl",
        &[json!({"kind": "convergence", "ladder": if by_n { "n_points" } else { "dt" }, "orders": orders})],
    )?;
    let summary = if by_n {
        format!(
            "{} grid sizes, errors {:?}",
            rows.len(),
            rows.iter().map(|r| r.2).collect::<Vec<_>>()
        )
    } else {
        format!("observed orders {orders:?}")
    };
    Ok((EXIT_PASS, summary))
}

/// Loads a stored trajectory for downstream use.
pub fn load_trajectory(path: &Path) -> Result<SpaceTimeField> {
    Ok(read_field_file(path)?.0)
}
