use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use sgm_core::cli::{run, RunConfig, EXIT_INVALID_CONFIG};

/// Surface growth solver and regularity diagnostics.
///
/// Settings come from `--config` (flat `section.key=value` lines) and are
/// overridden by `--section.key=value` flags, applied in order.
#[derive(Parser, Debug)]
#[command(name = "sgm", version)]
struct Cli {
    /// simulate | quantities | verify | singular-set | convergence
    command: String,

    /// Configuration file.
    #[arg(long)]
    config: Option<PathBuf>,

    /// Print the effective configuration and exit.
    #[arg(long)]
    print_config: bool,

    /// `--section.key=value` overrides.
    #[arg(trailing_var_arg = true, allow_hyphen_values = true)]
    overrides: Vec<String>,
}

fn build(cli: &Cli) -> Result<RunConfig, String> {
    let mut cfg = match &cli.config {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display()))?;
            RunConfig::parse(&text).map_err(|e| e.to_string())?
        }
        None => RunConfig::default(),
    };
    let mut pairs = vec![("run.command".to_string(), cli.command.clone())];
    for o in &cli.overrides {
        let body = o
            .strip_prefix("--")
            .ok_or_else(|| format!("overrides look like --section.key=value (got {o:?})"))?;
        let (k, v) = body
            .split_once('=')
            .ok_or_else(|| format!("override {o:?} has no '='"))?;
        pairs.push((k.to_string(), v.to_string()));
    }
    cfg.apply(pairs.iter().map(|(k, v)| (k.as_str(), v.as_str())))
        .map_err(|e| e.to_string())?;
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match build(&cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("sgm: invalid config: {e}");
            return ExitCode::from(EXIT_INVALID_CONFIG as u8);
        }
    };
    if cli.print_config {
        let _ = write!(std::io::stdout(), "{}", cfg.to_text());
        return ExitCode::SUCCESS;
    }
    let out = run(&cfg);
    // Output is advisory; a closed pipe must not change the exit code.
    let line = format!("sgm {}: {}", cfg.command.name(), out.summary);
    if out.exit_code == 0 {
        let _ = writeln!(std::io::stdout(), "{line}");
    } else {
        let _ = writeln!(std::io::stderr(), "{line}");
    }
    let mut stdout = std::io::stdout();
    for f in &out.files {
        let _ = writeln!(stdout, "  wrote {}", f.display());
    }
    ExitCode::from(out.exit_code as u8)
}
