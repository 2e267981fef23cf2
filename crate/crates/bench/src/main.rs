use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use cs_bench::config::{parse_algorithms, parse_m_grid, parse_power_law, PartialConfig};
use cs_bench::experiment::{run_experiment, trial_seed, BasisKind};
use cs_bench::report::{emit_report, mean_summary, ReportFormat};
use cs_bench::{BenchError, Result};
use cs_recovery::problem::{
    fourier_basis, gaussian_measurement, mutual_coherence, random_frame, rip_estimate,
};

#[derive(Parser)]
#[command(name = "cs-bench", version, about = "Benchmark harness for greedy sparse recovery")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment sweep and emit a per-trial report.
    Run(RunArgs),
    /// Print dictionary diagnostics for one generated (Φ, Ψ) pair.
    Diagnose(DiagnoseArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Config file with `key = value` lines; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// NoiselessKnownK, NoiselessUnknownK, NoisySparse, or NoisyCompressible.
    #[arg(long)]
    experiment: Option<String>,
    /// Signal dimension N.
    #[arg(long)]
    n: Option<usize>,
    /// Generating sparsity (needed by every experiment except NoisyCompressible).
    #[arg(long)]
    k: Option<usize>,
    /// Representation basis: Fourier or RandomFrame.
    #[arg(long)]
    basis: Option<String>,
    /// Comma-separated measurement counts, e.g. 20,24,28.
    #[arg(long = "m-grid")]
    m_grid: Option<String>,
    /// Input SNR in dB (noisy experiments).
    #[arg(long = "snr-db")]
    snr_db: Option<f64>,
    /// Trials per measurement count.
    #[arg(long)]
    trials: Option<usize>,
    /// Sweep seed; all per-trial randomness derives from it.
    #[arg(long)]
    seed: Option<u64>,
    /// Residual stop threshold, relative to the measurement norm.
    #[arg(long)]
    epsilon: Option<f64>,
    /// Entropy gate for the noisy pursuit (default: per-m formula).
    #[arg(long = "gamma")]
    gamma: Option<f64>,
    /// Comma-separated subset of MP,OMP,CoSaMP,ROMP,EMP.
    #[arg(long)]
    algorithms: Option<String>,
    /// Compressible magnitude profile as 'p,r', e.g. 1.0,1.5.
    #[arg(long = "power-law")]
    power_law: Option<String>,
    /// Report format: csv or json.
    #[arg(long, default_value = "csv")]
    format: String,
    /// Write the report here instead of stdout (a mean summary is then
    /// printed to stdout).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DiagnoseArgs {
    /// Print the mutual coherence of the measurement/basis pair.
    #[arg(long)]
    coherence: bool,
    /// Print the empirical restricted-isometry constant estimate.
    #[arg(long)]
    rip: bool,
    #[arg(long, default_value_t = 40)]
    n: usize,
    #[arg(long, default_value_t = 20)]
    m: usize,
    /// Representation basis: Fourier or RandomFrame.
    #[arg(long, default_value = "RandomFrame")]
    basis: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Sparsity level probed by the isometry estimate.
    #[arg(long, default_value_t = 4)]
    k: usize,
    /// Random supports drawn for the isometry estimate.
    #[arg(long, default_value_t = 200)]
    trials: usize,
}

fn flags_to_partial(args: &RunArgs) -> Result<PartialConfig> {
    Ok(PartialConfig {
        experiment: args
            .experiment
            .as_deref()
            .map(str::parse)
            .transpose()
            .map_err(BenchError::Config)?,
        n: args.n,
        k: args.k,
        basis: args.basis.as_deref().map(str::parse).transpose().map_err(BenchError::Config)?,
        m_grid: args.m_grid.as_deref().map(parse_m_grid).transpose()?,
        input_snr_db: args.snr_db,
        trials: args.trials,
        seed: args.seed,
        epsilon: args.epsilon,
        gamma_override: args.gamma,
        algorithms: args.algorithms.as_deref().map(parse_algorithms).transpose()?,
        power_law: args.power_law.as_deref().map(parse_power_law).transpose()?,
    })
}

fn opt_cell(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.3}")).unwrap_or_else(|| "-".into())
}

fn print_summary(rows: &[cs_bench::experiment::ReportRow]) {
    println!("{:<9} {:>5} {:>6} {:>12} {:>12} {:>10} {:>9}",
        "algorithm", "m", "trials", "mean_srer_db", "mean_snr_db", "mean_ip", "rec_rate");
    for line in mean_summary(rows) {
        println!(
            "{:<9} {:>5} {:>6} {:>12.3} {:>12} {:>10} {:>9}",
            line.algorithm,
            line.m,
            line.trials,
            line.mean_srer_db,
            opt_cell(line.mean_snr_db),
            opt_cell(line.mean_ip),
            opt_cell(line.recovery_rate),
        );
    }
}

fn run(args: RunArgs) -> Result<()> {
    let file = match &args.config {
        Some(path) => PartialConfig::load_file(path)?,
        None => PartialConfig::default(),
    };
    let format: ReportFormat = args.format.parse().map_err(BenchError::Config)?;
    let cfg = file.merged(flags_to_partial(&args)?).build()?;
    let rows = run_experiment(&cfg)?;
    emit_report(&rows, format, args.out.as_deref())?;
    if args.out.is_some() {
        print_summary(&rows);
    }
    Ok(())
}

fn diagnose(args: DiagnoseArgs) -> Result<()> {
    if !args.coherence && !args.rip {
        return Err(BenchError::Config(
            "diagnose needs at least one of --coherence or --rip".into(),
        ));
    }
    let basis: BasisKind = args.basis.parse().map_err(BenchError::Config)?;
    // Same derivation as the sweep's first trial at this (seed, m), so
    // the diagnostics describe exactly the matrices a run would use.
    let ts = trial_seed(args.seed, args.m, 0);
    let psi = match basis {
        BasisKind::Fourier => fourier_basis(args.n)?,
        BasisKind::RandomFrame => random_frame(args.n, ts.wrapping_add(1))?,
    };
    let phi = gaussian_measurement(args.m, args.n, ts.wrapping_add(2))?;
    if args.coherence {
        println!("mutual_coherence {:.6}", mutual_coherence(&phi, &psi)?);
    }
    if args.rip {
        println!("rip_estimate {:.6}", rip_estimate(&phi, args.k, args.trials, ts.wrapping_add(3))?);
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let outcome = match cli.command {
        Command::Run(args) => run(args),
        Command::Diagnose(args) => diagnose(args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                BenchError::Config(_) => 1,
                BenchError::Io { .. } => 2,
            })
        }
    }
}
