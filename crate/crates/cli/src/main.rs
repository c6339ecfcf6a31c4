use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use holocert::{emit_report, parse_config, run_checks, EnumerationMode, ReportFormat, RunConfig};

#[derive(Parser)]
#[command(
    name = "holocert",
    version,
    about = "Exact holonomy certification for polynomial metrics of signature (2, n+2)"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the check suite and emit a report. Exits 1 if any exact check fails.
    Verify(VerifyArgs),
}

#[derive(clap::Args)]
struct VerifyArgs {
    /// JSON run configuration; optional when --fixture is given.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Built-in input: F0..F4 or random:<n>.
    #[arg(long)]
    fixture: Option<String>,
    #[arg(long)]
    max_order: Option<usize>,
    #[arg(long, value_enum)]
    mode: Option<Mode>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Report path; standard output when absent.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Pruned,
    Exhaustive,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

fn resolve(args: VerifyArgs) -> Result<RunConfig> {
    let mut cfg = match &args.config {
        Some(path) => parse_config(path)?,
        None if args.fixture.is_some() => RunConfig::default(),
        None => bail!("either --config or --fixture is required"),
    };
    if let Some(f) = args.fixture {
        cfg.fixture = Some(f);
    }
    if let Some(r) = args.max_order {
        cfg.max_order = Some(r);
    }
    if let Some(m) = args.mode {
        cfg.mode = match m {
            Mode::Pruned => EnumerationMode::Pruned,
            Mode::Exhaustive => EnumerationMode::Exhaustive,
        };
    }
    if let Some(f) = args.format {
        cfg.format = match f {
            Format::Json => ReportFormat::Json,
            Format::Text => ReportFormat::Text,
        };
    }
    if let Some(o) = args.output {
        cfg.output = Some(o);
    }
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn verify(args: VerifyArgs) -> Result<i32> {
    let cfg = resolve(args)?;
    let report = run_checks(&cfg).context("verification pipeline failed")?;
    match &cfg.output {
        Some(path) => {
            emit_report(&report, cfg.format, path)?;
            let s = &report.summary;
            eprintln!(
                "{}: {} passed, {} failed, {} heuristic",
                path.display(),
                s.passed,
                s.failed,
                s.heuristic
            );
        }
        None => print!("{}", report.render(cfg.format)),
    }
    Ok(report.exit_code())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Verify(args) => verify(args),
    };
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
