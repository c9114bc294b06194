use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use mixedsdde::experiments::{run_study, write_outputs, StudyConfig, StudyKind};
use mixedsdde::Error;

/// Monte Carlo studies for mixed stochastic delay differential equations.
#[derive(Parser)]
#[command(name = "mixedsdde", version, about)]
struct Cli {
    #[command(subcommand)]
    study: StudyCmd,
}

#[derive(Subcommand)]
enum StudyCmd {
    /// Moment estimates and their sample-size stability.
    Moments(CommonArgs),
    /// Solution distance under driver mollification.
    Stability(CommonArgs),
    /// Direct vs smoothed scheme agreement under refinement.
    Uniqueness(CommonArgs),
    /// Strong error against closed forms across a dt ladder.
    Convergence(CommonArgs),
    /// Norm profiles and closed-form norm checks.
    Norms(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// TOML study configuration.
    #[arg(long)]
    config: PathBuf,
    /// Master seed override.
    #[arg(long)]
    seed: Option<u64>,
    /// Replica-count override.
    #[arg(long)]
    replicas: Option<usize>,
    /// Output directory (defaults to the config's out_dir or `.`).
    #[arg(long)]
    out: Option<PathBuf>,
}

fn run(kind: StudyKind, args: &CommonArgs) -> Result<bool, Error> {
    let mut cfg = StudyConfig::from_file(&args.config)?;
    cfg.study = Some(kind);
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Some(replicas) = args.replicas {
        cfg.replicas = replicas;
    }
    cfg.validate()?;
    let result = run_study(&cfg)?;
    let out_dir = args
        .out
        .clone()
        .or_else(|| cfg.out_dir.clone())
        .unwrap_or_else(|| PathBuf::from("."));
    write_outputs(&result, &cfg, &out_dir)?;
    for w in &result.warnings {
        eprintln!("warning: {w}");
    }
    print!("{}", result.verdict_text());
    Ok(result.passed())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (kind, args) = match &cli.study {
        StudyCmd::Moments(a) => (StudyKind::Moments, a),
        StudyCmd::Stability(a) => (StudyKind::Stability, a),
        StudyCmd::Uniqueness(a) => (StudyKind::Uniqueness, a),
        StudyCmd::Convergence(a) => (StudyKind::Convergence, a),
        StudyCmd::Norms(a) => (StudyKind::Norms, a),
    };
    match run(kind, args) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
