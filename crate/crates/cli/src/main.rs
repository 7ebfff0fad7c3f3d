use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use sweil_core::report::{emit_report, Format};
use sweil_core::suite::{run_with_jobs, Mode, RunConfig};
use sweil_core::Error;

/// Exact verification of superconformal actions on semi-infinite Weil
/// complexes. Exit status: 0 all checks pass, 1 a check failed, 2 usage error.
#[derive(Parser, Debug)]
#[command(name = "sweil", version)]
struct Cli {
    /// verify-n2 | verify-s2a | verify-chain | verify-relative | sca-tables | cohomology | kahler
    mode: Option<String>,
    /// loop:sl2 | loop:abelian:D | witt | fmu:LAMBDA:MU
    #[arg(long)]
    backend: Option<String>,
    /// Parameter of S′(2,α) as an exact fraction.
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<String>,
    #[arg(long)]
    emax: Option<i64>,
    #[arg(long)]
    b0max: Option<usize>,
    #[arg(long)]
    window: Option<i64>,
    /// Use the relative subcomplex.
    #[arg(long)]
    rel: bool,
    /// json | csv | text
    #[arg(long)]
    format: Option<String>,
    /// Worker threads; the output does not depend on it.
    #[arg(long)]
    jobs: Option<usize>,
    /// `key = value` file; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Record wall-clock milliseconds per check.
    #[arg(long)]
    timing: bool,
    /// Suppress per-check progress lines on stderr.
    #[arg(long, short)]
    quiet: bool,
}

fn build_config(cli: &Cli) -> Result<RunConfig, Error> {
    let base = match &cli.config {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| Error::Usage(format!("{}: {e}", p.display())))?;
            RunConfig::from_config_text(&text)?
        }
        None => RunConfig::default(),
    };
    let flags = RunConfig {
        mode: cli.mode.as_deref().map(str::parse::<Mode>).transpose()?,
        backend: cli.backend.clone(),
        alpha: cli.alpha.clone(),
        emax: cli.emax,
        b0max: cli.b0max,
        window: cli.window,
        rel: cli.rel,
        format: cli.format.as_deref().map(str::parse::<Format>).transpose()?.unwrap_or_default(),
        jobs: cli.jobs,
        timing: cli.timing,
    };
    Ok(base.overlay(flags))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match build_config(&cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("sweil: {e}");
            return ExitCode::from(2);
        }
    };
    let quiet = cli.quiet;
    let mut progress = |line: &str| {
        if !quiet {
            eprintln!("{line}");
        }
    };
    let result = match run_with_jobs(&cfg, &mut progress) {
        Ok(r) => r,
        Err(e @ Error::Structural(_)) => {
            eprintln!("sweil: {e}");
            return ExitCode::from(1);
        }
        Err(e) => {
            eprintln!("sweil: {e}");
            return ExitCode::from(2);
        }
    };
    let out = match emit_report(&result, cfg.format) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("sweil: {e}");
            return ExitCode::from(1);
        }
    };
    let mut stdout = std::io::stdout().lock();
    if stdout.write_all(out.as_bytes()).and_then(|_| stdout.flush()).is_err() {
        return ExitCode::from(1);
    }
    if result.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
