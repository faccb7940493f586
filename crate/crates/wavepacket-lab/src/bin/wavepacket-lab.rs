use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use wavepacket_lab::cli::{self, exit, Command, ExperimentConfig, OUT_ENV};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Cmd {
    Propagate,
    Packets,
    FitConstants,
    Verify,
    KnappScan,
    Morawetz,
    Report,
}

impl From<Cmd> for Command {
    fn from(c: Cmd) -> Self {
        match c {
            Cmd::Propagate => Command::Propagate,
            Cmd::Packets => Command::Packets,
            Cmd::FitConstants => Command::FitConstants,
            Cmd::Verify => Command::Verify,
            Cmd::KnappScan => Command::KnappScan,
            Cmd::Morawetz => Command::Morawetz,
            Cmd::Report => Command::Report,
        }
    }
}

/// Free-wave harmonic analysis laboratory.
#[derive(Debug, Parser)]
#[command(version, after_help = format!("Exit codes: 0 pass, 1 fail, 2 inconclusive, 3 invalid config, 4 missing prerequisite.\nThe output directory defaults to ${OUT_ENV}."))]
struct Args {
    command: Cmd,
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let cfg = match ExperimentConfig::load(&args.config) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("invalid config {}: {e}", args.config.display());
            let code = if matches!(e, wavepacket_lab::LabError::Io(_)) {
                exit::MISSING_PREREQUISITE
            } else {
                exit::INVALID_CONFIG
            };
            return ExitCode::from(code as u8);
        }
    };
    let out = cli::resolve_out_dir(args.out.as_deref(), &cfg);
    let command = Command::from(args.command);
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = args.threads {
        pool = pool.num_threads(n);
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("thread pool: {e}");
            return ExitCode::from(exit::INVALID_CONFIG as u8);
        }
    };
    match pool.install(|| cli::run(command, &cfg, &out)) {
        Ok(s) => {
            for r in &s.reports {
                println!("{:<40} {:<12} {:>12.6}  {}", r.name, r.verdict.to_string(), r.statistic, r.criterion);
            }
            println!("{}: {} -> {}", command.name(), s.verdict, out.join(command.name()).display());
            ExitCode::from(cli::verdict_exit_code(s.verdict) as u8)
        }
        Err(e) => {
            eprintln!("{}: {e}", command.name());
            ExitCode::from(cli::error_exit_code(&e) as u8)
        }
    }
}
