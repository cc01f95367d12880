use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use quasirisk_cli::config::{self, Diagnostic};
use quasirisk_cli::{run, write_outputs, RunOptions};

#[derive(Parser)]
#[command(name = "quasirisk", version, about = "Run risk-measure duality experiments from a JSON config")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write outputs here instead of the config's `output_dir`.
    #[arg(long, global = true)]
    output_dir: Option<PathBuf>,
    /// Worker threads.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Replace the base seed of every experiment.
    #[arg(long, global = true)]
    seed_override: Option<u64>,
    /// Replace the solver tolerance of every experiment.
    #[arg(long, global = true)]
    tolerance: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Run every experiment and write results.csv, report.json and plots.
    Run { config: PathBuf },
    /// Check a config without running it.
    Validate { config: PathBuf },
}

const EXIT_FAIL: u8 = 1;
const EXIT_CONFIG: u8 = 2;

fn report_diagnostics(path: &Path, diags: &[Diagnostic]) {
    for d in diags {
        eprintln!("{}: {d}", path.display());
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let path = match &cli.command {
        Command::Run { config } | Command::Validate { config } => config.clone(),
    };
    let mut config = match config::load(&path) {
        Ok(c) => c,
        Err(diags) => {
            report_diagnostics(&path, &diags);
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    if let Some(seed) = cli.seed_override {
        config.experiments.iter_mut().for_each(|e| e.seed = seed);
    }
    if let Some(tol) = cli.tolerance {
        config.experiments.iter_mut().for_each(|e| e.tolerances.solver = tol);
    }
    if cli.jobs == Some(0) {
        eprintln!("--jobs must be at least 1");
        return ExitCode::from(EXIT_CONFIG);
    }
    let diags = config::check(&config);
    if !diags.is_empty() {
        report_diagnostics(&path, &diags);
        return ExitCode::from(EXIT_CONFIG);
    }

    if let Command::Validate { .. } = cli.command {
        println!("{}: ok", path.display());
        return ExitCode::SUCCESS;
    }

    let out_dir = cli.output_dir.clone().unwrap_or_else(|| {
        if config.output_dir.is_absolute() {
            config.output_dir.clone()
        } else {
            path.parent().unwrap_or(Path::new(".")).join(&config.output_dir)
        }
    });
    let report = match run(&config, &RunOptions { jobs: cli.jobs }) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("{}: {e}", path.display());
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    if let Err(e) = write_outputs(&config, &report, &out_dir) {
        eprintln!("cannot write outputs to {}: {e}", out_dir.display());
        return ExitCode::from(EXIT_FAIL);
    }
    for s in &report.experiments {
        println!(
            "{} [{}] {}/{} rows passed, {} violations",
            s.name,
            if s.passed { "PASS" } else { "FAIL" },
            s.passed_rows,
            s.rows,
            s.violations
        );
        for e in s.errors.iter().take(5) {
            println!("  {e}");
        }
    }
    println!("outputs written to {}", out_dir.display());
    if report.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_FAIL)
    }
}
