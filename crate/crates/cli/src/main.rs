use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use regfrac_cli::{emit_tables, run_scenario, CliError, Outputs, Pipeline, ScenarioConfig};

#[derive(Parser)]
#[command(name = "regfrac", version, about = "Run regional fractional Laplacian scenarios")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the pipeline named in the scenario file.
    Run(Opts),
    /// Constant annihilation, sign pattern and optional quadrature oracle.
    AssembleCheck(Opts),
    /// Exterior mass φ and its boundary exponent.
    Phi(Opts),
    /// Finite-level semilinear solves.
    Solve(Opts),
    /// Increasing sequence of boundary levels and its limit.
    Blowup(Opts),
    /// Blow-up limit with boundary-rate fits.
    Rates(Opts),
    /// Keller–Osserman and tail-integral classification.
    Ko(Opts),
    /// Green matrix bound, positivity and refinement stability.
    GreenCheck(Opts),
    /// Barrier estimate and super-solution certificate.
    BarrierCheck(Opts),
}

#[derive(Args)]
struct Opts {
    /// Scenario file (TOML, or JSON with a .json extension).
    #[arg(long)]
    config: PathBuf,
    /// Output directory; overrides the scenario's output.dir.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Accepted for compatibility; runs are always deterministic.
    #[arg(long)]
    seedless: bool,
    /// Override the number of boundary levels.
    #[arg(long)]
    levels: Option<usize>,
    /// Write only the CSV tables (combine with --json for both).
    #[arg(long)]
    csv: bool,
    /// Write only the JSON report (combine with --csv for both).
    #[arg(long)]
    json: bool,
}

fn split(cmd: Command) -> (Option<Pipeline>, Opts) {
    match cmd {
        Command::Run(o) => (None, o),
        Command::AssembleCheck(o) => (Some(Pipeline::AssembleCheck), o),
        Command::Phi(o) => (Some(Pipeline::Phi), o),
        Command::Solve(o) => (Some(Pipeline::Solve), o),
        Command::Blowup(o) => (Some(Pipeline::Blowup), o),
        Command::Rates(o) => (Some(Pipeline::Rates), o),
        Command::Ko(o) => (Some(Pipeline::Ko), o),
        Command::GreenCheck(o) => (Some(Pipeline::GreenCheck), o),
        Command::BarrierCheck(o) => (Some(Pipeline::BarrierCheck), o),
    }
}

fn execute(cli: Cli) -> Result<(), CliError> {
    let (pipeline, opts) = split(cli.command);
    let mut cfg = ScenarioConfig::load(&opts.config)?;
    if let Some(p) = pipeline {
        cfg.pipeline = p;
    }
    if let Some(k) = opts.levels {
        cfg.solver.levels = k;
    }
    let outputs = if opts.csv || opts.json {
        Outputs { csv: opts.csv, json: opts.json }
    } else {
        Outputs { csv: cfg.output.csv, json: cfg.output.json }
    };
    let dir = opts.out.or_else(|| cfg.output.dir.clone().map(PathBuf::from)).unwrap_or_else(|| PathBuf::from("out"));
    let report = run_scenario(&cfg)?;
    for c in &report.checks {
        println!("{} {}: {}", if c.pass { "pass" } else { "FAIL" }, c.name, c.detail);
    }
    for path in emit_tables(&report, &dir, outputs)? {
        println!("wrote {}", path.display());
    }
    println!("{} finished in {} ms (scheme {})", cfg.name, report.timing_ms, report.version);
    Ok(())
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
