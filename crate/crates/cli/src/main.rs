use clap::{Parser, Subcommand};
use netcore::analysis::network_constants;
use netcore::experiment::{run_experiment, ExperimentConfig, Status};
use netcore::oracle::enumerate_networks;
use netcore::selftest::run_selftest;
use netcore::{CoreClass, Error};
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "netcore",
    version,
    about = "Random networks from 3-connected cores: constants, sampling campaigns and oracles"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the singularity report of a class as JSON.
    Constants {
        #[arg(long)]
        class: String,
        #[arg(long, default_value_t = 1.0)]
        y: f64,
        /// largest core size tabulated in p_k
        #[arg(long, default_value_t = 2000)]
        kmax: usize,
    },
    /// Run an exact-size sampling campaign and compare with predictions.
    Experiment {
        #[arg(long)]
        class: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[arg(long)]
        size_only: bool,
        #[arg(long, default_value_t = 1.0)]
        y: f64,
        /// attempt budget per accepted sample
        #[arg(long, default_value_t = 10_000_000_000)]
        max_attempts: u64,
        /// JSON report path; the census CSV is written next to it
        #[arg(long)]
        out: PathBuf,
    },
    /// Enumerate all networks up to `nmax` labeled vertices.
    Enumerate {
        #[arg(long)]
        class: String,
        #[arg(long)]
        nmax: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the oracle suites.
    Selftest {
        /// extra coefficient-table files to validate
        #[arg(long)]
        table: Vec<PathBuf>,
    },
}

fn fail(e: Error) -> ExitCode {
    eprintln!("error: {e}");
    if matches!(e, Error::NearCritical(_)) {
        ExitCode::from(2)
    } else {
        ExitCode::from(1)
    }
}

fn main() -> ExitCode {
    match run(Cli::parse().command) {
        Ok(code) => code,
        Err(e) => fail(e),
    }
}

fn run(cmd: Command) -> netcore::Result<ExitCode> {
    match cmd {
        Command::Constants { class, y, kmax } => {
            let class = CoreClass::parse(&class)?;
            let report = network_constants(&class, y, kmax)?;
            // a closed pipe (e.g. `| head`) is not an error
            let _ = writeln!(std::io::stdout().lock(), "{}", report.to_json()?);
            for w in &report.warnings {
                eprintln!("warning: {w}");
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Experiment {
            class,
            n,
            eps,
            samples,
            seed,
            workers,
            size_only,
            y,
            max_attempts,
            out,
        } => {
            let mut cfg = ExperimentConfig::new(class, n, eps, samples);
            cfg.seed = seed;
            cfg.workers = workers;
            cfg.size_only = size_only;
            cfg.y = y;
            cfg.max_attempts = max_attempts;
            let report = run_experiment(&cfg)?;
            std::fs::write(&out, report.to_json()?)?;
            let csv = out.with_extension("csv");
            std::fs::write(&csv, report.census_csv())?;
            println!(
                "{} samples in [{}, {}], acceptance {:.3e} ({} attempts)",
                report.samples.len(),
                report.window.0,
                report.window.1,
                report.acceptance.rate,
                report.acceptance.attempts
            );
            for c in &report.comparisons {
                let status = match c.status {
                    Status::Pass => "pass",
                    Status::Fail => "FAIL",
                    Status::InsufficientData => "insufficient data",
                };
                println!(
                    "{:<52} predicted {:>12.6} empirical {:>12.6} err {:.4} (tol {}) {status}",
                    c.statistic, c.predicted, c.empirical, c.rel_err, c.tolerance
                );
            }
            println!("report: {}\ncensus: {}", out.display(), csv.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::Enumerate { class, nmax, out } => {
            let class = CoreClass::parse(&class)?;
            let e = enumerate_networks(&class, nmax)?;
            match out {
                Some(path) => {
                    std::fs::write(&path, e.to_text())?;
                    for n in 0..=nmax {
                        println!("n = {n}: {} networks", e.total(n));
                    }
                }
                None => {
                    let _ = write!(std::io::stdout().lock(), "{}", e.to_text());
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Selftest { table } => {
            let results = run_selftest(&table);
            let mut ok = true;
            for r in &results {
                println!(
                    "{} {}: {}",
                    if r.passed { "PASS" } else { "FAIL" },
                    r.name,
                    r.detail
                );
                ok &= r.passed;
            }
            Ok(if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
    }
}
