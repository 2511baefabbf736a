use std::path::PathBuf;
use std::process::ExitCode;

use cbcdbd::campaign::{CampaignConfig, CampaignSet};
use cbcdbd::commands::{self, parse_range, BenchArgs, ConstructArgs, ConvergenceArgs, VerifyArgs};
use cbcdbd::{configure_workers, CliError, Result};
use cbcdbd_core::construct::Path;
use cbcdbd_core::Limits;
use clap::{Args, Parser, Subcommand};

/// Construct rank-1 lattice rules with N = 2^n points digit by digit, and
/// check the error and quality estimates they satisfy.
#[derive(Debug, Parser)]
#[command(name = "cbcdbd", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct LimitArgs {
    /// Largest dimension over which subsets may be enumerated.
    #[arg(long, default_value_t = Limits::default().subset_cap)]
    subset_cap: usize,
    /// Largest number of frequency vectors a brute-force error may visit.
    #[arg(long, default_value_t = Limits::default().brute_force_budget)]
    budget: u128,
}

impl LimitArgs {
    fn limits(&self) -> Limits {
        Limits {
            subset_cap: self.subset_cap,
            brute_force_budget: self.budget,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build a generating vector and write it as JSON.
    Construct {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        s: usize,
        /// Weight specification (JSON).
        #[arg(long)]
        weights: PathBuf,
        #[arg(long, default_value = "auto")]
        path: Path,
        /// Output file; the vector is printed when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Skip H and the bound right-hand sides.
        #[arg(long)]
        no_diagnostics: bool,
        #[command(flatten)]
        limits: LimitArgs,
    },
    /// Run randomized bound-check campaigns on constructed vectors.
    Verify {
        /// thm2, induction, hbound, prop1 or all.
        #[arg(long, default_value = "all")]
        campaign: CampaignSet,
        #[arg(long, default_value_t = 1)]
        n_min: u32,
        #[arg(long)]
        n_max: u32,
        #[arg(long, default_value_t = 1)]
        s_min: usize,
        #[arg(long)]
        s_max: usize,
        #[arg(long)]
        draws: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Report prefix: writes <out>.csv and <out>.json.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        limits: LimitArgs,
    },
    /// Dual-lattice error of constructed vectors over a range of n.
    Convergence {
        #[arg(long)]
        alpha: u32,
        /// Inclusive range such as 6..14.
        #[arg(long, value_parser = parse_range)]
        n_range: std::ops::RangeInclusive<u32>,
        #[arg(long)]
        s: usize,
        /// Weights of the measured error (JSON).
        #[arg(long)]
        weights: PathBuf,
        /// Power applied to the weights for the construction (default 1/alpha).
        #[arg(long)]
        construct_exponent: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        limits: LimitArgs,
    },
    /// Time the fast construction paths.
    Bench {
        #[arg(long, default_value = "fast-pod")]
        path: Path,
        #[arg(long, value_delimiter = ',', default_value = "14,15,16")]
        n_list: Vec<u32>,
        #[arg(long, value_delimiter = ',', default_value = "10,20")]
        s_list: Vec<usize>,
        #[arg(long, default_value_t = 3)]
        repeats: usize,
        /// JSON report.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> Result<()> {
    configure_workers()?;
    match cli.command {
        Command::Construct {
            n,
            s,
            weights,
            path,
            out,
            no_diagnostics,
            limits,
        } => {
            let args = ConstructArgs {
                n,
                s,
                weights,
                path,
                out: out.clone(),
                diagnostics: !no_diagnostics,
                limits: limits.limits(),
            };
            let (_, file) = commands::construct(&args)?;
            if out.is_none() {
                println!("{}", serde_json::to_string_pretty(&file).expect("serializable"));
            } else {
                println!("z = {:?}", file.z);
            }
        }
        Command::Verify {
            campaign,
            n_min,
            n_max,
            s_min,
            s_max,
            draws,
            seed,
            out,
            limits,
        } => {
            let args = VerifyArgs {
                campaign: CampaignConfig {
                    campaigns: campaign.0,
                    n_min,
                    n_max,
                    s_min,
                    s_max,
                    draws,
                    seed,
                    limits: limits.limits(),
                },
                out: out.clone(),
            };
            let (rows, summary) = commands::verify(&args)?;
            if out.is_none() {
                print!("{}", cbcdbd::campaign::to_csv(&rows));
            }
            eprintln!(
                "{} satisfied, {} violated, {} skipped",
                summary.satisfied, summary.violated, summary.skipped
            );
            if summary.violated > 0 {
                return Err(CliError::Violation(summary.violated));
            }
        }
        Command::Convergence {
            alpha,
            n_range,
            s,
            weights,
            construct_exponent,
            out,
            limits,
        } => {
            let args = ConvergenceArgs {
                alpha,
                n_range,
                s,
                weights,
                construct_exponent,
                out: out.clone(),
                limits: limits.limits(),
            };
            let report = commands::convergence(&args)?;
            if out.is_none() {
                print!("{}", cbcdbd::convergence::to_csv(&report));
            }
        }
        Command::Bench {
            path,
            n_list,
            s_list,
            repeats,
            out,
        } => {
            let report = commands::bench(&BenchArgs {
                path,
                n_list,
                s_list,
                repeats,
                out,
            })?;
            print!("{}", cbcdbd::bench::to_table(&report));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
