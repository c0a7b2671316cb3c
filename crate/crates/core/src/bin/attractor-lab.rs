use std::path::PathBuf;
use std::process::ExitCode;

use attractor_lab::engine::set_worker_count;
use attractor_lab::harness::{list_experiments, run_experiment, validate_config, ExperimentConfig};
use attractor_lab::Error;
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "attractor-lab", version, about = "Run attractor and PDE experiments from JSON configs")]
struct Cli {
    /// Worker threads for independent seeds and directions.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment and write its artifacts and report.json.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Overrides out_dir from the config.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Overrides seed from the config.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Print the experiment registry.
    List,
    /// Check a config without running it.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
}

fn load(path: &PathBuf, out: Option<PathBuf>, seed: Option<u64>) -> Result<ExperimentConfig, Error> {
    let mut cfg = ExperimentConfig::from_file(path)?;
    if let Some(o) = out {
        cfg.out_dir = Some(o);
    }
    if let Some(s) = seed {
        cfg.seed = s;
    }
    validate_config(&cfg)?;
    Ok(cfg)
}

fn fail(e: Error) -> ExitCode {
    eprintln!("error: {e}");
    match e {
        Error::Config(_) => ExitCode::from(2),
        _ => ExitCode::from(1),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    set_worker_count(cli.threads);
    match cli.command {
        Command::List => {
            for e in list_experiments() {
                println!("{:<24} {}", e.name, e.description);
                println!("{:<24} params: {}", "", e.params);
            }
            ExitCode::SUCCESS
        }
        Command::Validate { config } => match load(&config, None, None) {
            Ok(cfg) => {
                println!("ok: {} (config hash {})", cfg.experiment, cfg.hash());
                ExitCode::SUCCESS
            }
            Err(e) => fail(e),
        },
        Command::Run { config, out, seed } => {
            let cfg = match load(&config, out, seed) {
                Ok(c) => c,
                Err(e) => return fail(e),
            };
            match run_experiment(&cfg) {
                Ok(report) => {
                    for a in &report.assertions {
                        println!("[{}] {}: {}", if a.pass { "PASS" } else { "FAIL" }, a.name, a.detail);
                    }
                    println!(
                        "{} in {:.2}s, {} artifacts in {}",
                        report.experiment,
                        report.wall_time_s,
                        report.artifacts.len(),
                        cfg.resolved_out_dir().display()
                    );
                    if report.pass {
                        ExitCode::SUCCESS
                    } else {
                        ExitCode::from(1)
                    }
                }
                Err(e) => fail(e),
            }
        }
    }
}
