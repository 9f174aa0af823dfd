use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use fpode::report::{analyze, emit_report, AnalysisRequest, OpaqueDecl, OutputFormat, Stage};

#[derive(Parser)]
#[command(
    name = "fpode",
    version,
    about = "Fiber-preserving invariants of third-order ODEs y''' = F(x, y, y', y'')"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the analysis pipeline on one equation and print a report.
    Analyze(AnalyzeArgs),
}

#[derive(clap::Args)]
struct AnalyzeArgs {
    /// Right-hand side F in the variables x, y, p = y', q = y''.
    #[arg(long)]
    ode: String,
    /// Declare an opaque function, e.g. `A:x,y`.
    #[arg(long, value_name = "NAME:ARGS")]
    opaque: Vec<OpaqueDecl>,
    /// Comma-separated subset of inv,cond,metric,einstein,petrov,conn,appendix.
    #[arg(long, value_delimiter = ',')]
    stages: Option<Vec<Stage>>,
    /// Substitute a function of (x, y) for an opaque function before Petrov classification, e.g. `A=x*y`.
    #[arg(long, value_name = "NAME=EXPR", value_parser = parse_specialization)]
    specialize: Vec<(String, String)>,
    /// Number of Petrov sample points.
    #[arg(long, default_value_t = 5)]
    points: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "json")]
    format: OutputFormat,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Include wall-clock time per stage (makes the report non-reproducible).
    #[arg(long)]
    timings: bool,
}

fn parse_specialization(s: &str) -> Result<(String, String), String> {
    let (name, value) = s
        .split_once('=')
        .ok_or_else(|| format!("expected NAME=EXPR in `{s}`"))?;
    let value = value.trim().trim_matches('"');
    Ok((name.trim().to_string(), value.to_string()))
}

fn run(args: AnalyzeArgs) -> Result<i32> {
    let mut req = AnalysisRequest::new(args.ode).with_points(args.points, args.seed);
    req.opaque = args.opaque;
    if let Some(stages) = args.stages {
        req = req.with_stages(stages);
    }
    for (name, value) in &args.specialize {
        req = req.with_specialization(name, value);
    }
    req.timings = args.timings;
    let report = analyze(&req);
    let doc = emit_report(&report, args.format);
    match &args.out {
        Some(path) => {
            std::fs::write(path, doc).with_context(|| format!("writing {}", path.display()))?
        }
        None => print!("{doc}"),
    }
    Ok(report.exit_code())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Analyze(args) => match run(args) {
            Ok(code) => ExitCode::from(code as u8),
            Err(e) => {
                eprintln!("error: {e:#}");
                ExitCode::from(2)
            }
        },
    }
}
