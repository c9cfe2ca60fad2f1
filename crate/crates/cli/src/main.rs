use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use curation_core::analysis::{predict, ConvergencePrediction};
use curation_core::config::ScenarioConfig;
use curation_core::report::{emit_csv, emit_sweep, format_real};
use curation_core::scenario::{
    parse_ring_range, run_config, run_scenario_a, run_scenario_b, RunReport, ScenarioAVariant,
};
use curation_core::Error;

/// Overrides every output directory when set.
const OUT_DIR_ENV: &str = "CURATION_SIM_OUT_DIR";

#[derive(Debug, Parser)]
#[command(
    name = "curation-sim",
    version,
    about = "Stake-weighted post curation simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the experiment described by a config file.
    Run {
        config: PathBuf,
        /// Sampling interval in rounds (default: max(1, R / 500)).
        #[arg(long)]
        sample_every: Option<u64>,
    },
    /// Honest-only runs with enough or too few rounds.
    ScenarioA {
        #[arg(long)]
        variant: ScenarioAVariant,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value = "out/scenario-a")]
        out: PathBuf,
        #[arg(long)]
        sample_every: Option<u64>,
    },
    /// Voting-ring sweep over ring sizes (inclusive range, e.g. 1..100).
    ScenarioB {
        #[arg(long, default_value = "1..100")]
        rings: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value = "out/scenario-b")]
        out: PathBuf,
    },
    /// Print the convergence prediction for a config without simulating.
    Predict { config: PathBuf },
}

fn out_dir(default: &Path) -> PathBuf {
    std::env::var_os(OUT_DIR_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| default.to_path_buf())
}

fn print_prediction(p: &ConvergencePrediction) {
    println!("verdict: {:?}", p.verdict);
    println!("reason: {:?}", p.reason);
    println!("threshold: {}", p.threshold);
    println!("required_rounds: {}", p.required_rounds);
}

fn print_report(report: &RunReport, files: &[PathBuf]) {
    print_prediction(&report.prediction);
    let s = &report.final_sample;
    println!("final_round: {}", s.round);
    println!("t_ideal_rank: {}", s.t_ideal_rank);
    println!("kendall_tau: {}", format_real(s.kendall_tau));
    println!("spearman_rho: {}", format_real(s.spearman_rho));
    if let Some(g) = report.selfish_gain {
        println!("selfish_gain: {g}");
    }
    for f in files {
        println!("wrote {}", f.display());
    }
}

fn execute(command: Command) -> Result<(), Error> {
    match command {
        Command::Run {
            config,
            sample_every,
        } => {
            let mut config = ScenarioConfig::load(&config)?;
            if sample_every.is_some() {
                config.sample_every = sample_every;
                config.validate()?;
            }
            config.output_path = out_dir(&config.output_path);
            let outcome = run_config(&config)?;
            let files = emit_csv(&outcome.report, &config.output_path)?;
            print_report(&outcome.report, &files);
        }
        Command::ScenarioA {
            variant,
            seed,
            out,
            sample_every,
        } => {
            if sample_every == Some(0) {
                return Err(Error::Config("--sample-every must be at least 1".into()));
            }
            let dir = out_dir(&out);
            let mut outcome = run_scenario_a(variant, seed, sample_every)?;
            outcome.report.config.output_path = dir.clone();
            let files = emit_csv(&outcome.report, &dir)?;
            print_report(&outcome.report, &files);
        }
        Command::ScenarioB { rings, seed, out } => {
            let range = parse_ring_range(&rings)?;
            let rows = run_scenario_b(range, seed)?;
            let file = emit_sweep(&rows, &out_dir(&out))?;
            for r in &rows {
                println!(
                    "ring_size {:>4}  gain {:>4}  t_ideal_rank {:>4}",
                    r.ring_size, r.selfish_gain, r.t_ideal_rank
                );
            }
            println!("wrote {}", file.display());
        }
        Command::Predict { config } => {
            let config = ScenarioConfig::load(&config)?;
            print_prediction(&predict(&config.params, &config.steem_powers()?)?);
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
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_config() { 1 } else { 2 })
        }
    }
}
