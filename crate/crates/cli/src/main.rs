use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use qmclab_cli::{run_experiment, CliError, Experiment, ExperimentConfig, EXIT_CONFIG, EXIT_RUNTIME};

/// Copy-complexity experiments for quantum measurement.
#[derive(Debug, Parser)]
#[command(name = "qmclab", version, about)]
struct Args {
    experiment: Experiment,
    /// JSON config file.
    #[arg(long)]
    config: PathBuf,
    /// Overrides the config seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, default_value = "results")]
    out: PathBuf,
    /// Overrides the config trial count.
    #[arg(long)]
    trials: Option<u64>,
    /// Worker threads; defaults to the number of CPUs.
    #[arg(long)]
    jobs: Option<usize>,
}

fn run(args: Args) -> Result<(), CliError> {
    let source = std::fs::read_to_string(&args.config).map_err(|e| qmclab_cli::ConfigError {
        line: None,
        message: format!("cannot read {}: {e}", args.config.display()),
    })?;
    let config = ExperimentConfig::parse(&source, args.experiment)?.with_overrides(args.seed, args.trials)?;
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(jobs) = args.jobs {
        if jobs == 0 {
            return Err(qmclab_cli::ConfigError {
                line: None,
                message: "--jobs must be at least 1".into(),
            }
            .into());
        }
        pool = pool.num_threads(jobs);
    }
    let pool = pool.build().map_err(|e| std::io::Error::other(e.to_string()))?;
    let summary = pool.install(|| run_experiment(&config, &args.out))?;
    print!("{}", summary.render());
    println!(
        "\nwrote {} and {}",
        summary.csv_path.display(),
        summary.summary_path.display()
    );
    Ok(())
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(args) => args,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { 0 };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match run(args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qmclab: {e}");
            let code = e.exit_code();
            debug_assert!(code == EXIT_CONFIG || code == EXIT_RUNTIME);
            ExitCode::from(code as u8)
        }
    }
}
