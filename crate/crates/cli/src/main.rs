use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use nthsieve_cli::config::{Experiment, RunConfig};
use nthsieve_cli::plot::{emit_plot_data, Curve, PlotOptions};
use nthsieve_cli::{describe_setup, experiments, run, CliError, EXIT_CONFIG};

#[derive(Parser)]
#[command(name = "nthsieve", about = "Experiments with n-th order Hecke characters over Q(ζ₃) and Q(i)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a config file
    Run { config: PathBuf },
    /// Write plot data for one curve as CSV
    Plot {
        curve: Curve,
        #[arg(long, allow_hyphen_values = true)]
        from: f64,
        #[arg(long, allow_hyphen_values = true)]
        to: f64,
        #[arg(long, allow_hyphen_values = true)]
        step: f64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 3)]
        n: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        trials: usize,
    },
    /// Rebuild the ray class setup and print its structure
    VerifySetup {
        #[arg(long, default_value_t = 3)]
        n: u32,
        /// Extra rational primes whose prime ideals join S
        #[arg(long, value_delimiter = ',')]
        s: Vec<u64>,
    },
}

fn warn_precision(configured: u32) -> Result<(), CliError> {
    if let (_, Some(w)) = nthsieve_cli::config::effective_precision(configured)? {
        eprintln!("{w}");
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_CONFIG as u8 } else { 0 });
        }
    };
    let result: Result<i32, CliError> = match cli.command {
        Command::Run { config } => RunConfig::load(&config).and_then(|cfg| {
            warn_precision(cfg.run.precision)?;
            let report = run(&cfg)?;
            print!("{}", report.summary());
            Ok(report.exit_code())
        }),
        Command::Plot { curve, from, to, step, out, n, seed, trials } => {
            let opts = PlotOptions { n, seed, trials, ..PlotOptions::default() };
            warn_precision(nthsieve_cli::config::NATIVE_DIGITS)
                .and_then(|_| emit_plot_data(curve, from, to, step, &opts, &out))
                .map(|p| {
                    println!("wrote {}", p.display());
                    0
                })
        }
        Command::VerifySetup { n, s } => {
            let mut cfg = RunConfig::new(Experiment::GSigma);
            cfg.field.n = n;
            cfg.field.s = s;
            cfg.validate().and_then(|_| experiments::build_setup(&cfg)).map(|setup| {
                print!("{}", describe_setup(&setup));
                0
            })
        }
    };
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
