use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use coexsim::report::{run_experiment, selftest, write_outputs, Experiment};
use coexsim::scenario::ScenarioConfig;
use coexsim::waveform::PHYDYAS_K4;
use coexsim::Error;

const PAPER_SCALE_SYMBOLS: usize = 100_000;

#[derive(Parser)]
#[command(name = "coexsim", version, about = "CP-OFDM / OFDM-OQAM coexistence interference experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Interference tables per spectral distance: PSD model, Monte-Carlo Het and Hom.
    Interftable(RunArgs),
    /// EVM of both users versus the secondary power.
    EvmSweep(RunArgs),
    /// BER of both users versus the secondary power.
    BerSweep(RunArgs),
    /// Incumbent BER versus a fixed timing offset.
    BerVsTau(RunArgs),
    /// Distribution and covariance of the interference on one incumbent subcarrier.
    Stats(RunArgs),
    /// Fast oracle checks of the signal chains.
    Selftest,
}

#[derive(Args)]
struct RunArgs {
    /// Scenario file with `key = value` lines.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    /// Symbols per Monte-Carlo point (and per table).
    #[arg(long)]
    symbols: Option<usize>,
    /// Use 10^5 symbols per point.
    #[arg(long)]
    paper_scale: bool,
    /// Worker threads; results do not depend on it.
    #[arg(long)]
    threads: Option<usize>,
}

fn resolve(args: &RunArgs) -> Result<ScenarioConfig, Error> {
    let mut cfg = match &args.config {
        Some(path) => ScenarioConfig::from_file(path)?,
        None => ScenarioConfig::default(),
    };
    if args.paper_scale {
        cfg.n_symbols = PAPER_SCALE_SYMBOLS;
        cfg.table_symbols = PAPER_SCALE_SYMBOLS;
    }
    if let Some(n) = args.symbols {
        cfg.n_symbols = n;
        cfg.table_symbols = n;
    }
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Io(_) | Error::Config(_) => 2,
        e if e.is_numerical() => 3,
        _ => 1,
    }
}

fn run(experiment: Experiment, args: &RunArgs) -> ExitCode {
    if let Some(n) = args.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: cannot set up {n} worker threads: {e}");
            return ExitCode::from(1);
        }
    }
    let result = resolve(args).and_then(|cfg| {
        let (report, files) = run_experiment(experiment, &cfg)?;
        write_outputs(&args.out, &report, &files)?;
        Ok((report, files))
    });
    match result {
        Ok((report, files)) => {
            for (name, _) in &files {
                println!("wrote {}", args.out.join(name).display());
            }
            println!(
                "{} done in {:.1} s (config {}, seed {})",
                experiment.id(),
                report.duration_s,
                report.config_hash,
                report.seed
            );
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn run_selftest() -> ExitCode {
    let checks = selftest(&PHYDYAS_K4);
    let width = checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
    for c in &checks {
        let tag = if c.passed { "PASS" } else { "FAIL" };
        println!("{tag}  {:width$}  {}", c.name, c.detail);
    }
    let failed: Vec<&str> = checks.iter().filter(|c| !c.passed).map(|c| c.name).collect();
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        eprintln!("failed checks: {}", failed.join(", "));
        ExitCode::from(1)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match &cli.command {
        Command::Interftable(a) => run(Experiment::Interftable, a),
        Command::EvmSweep(a) => run(Experiment::EvmSweep, a),
        Command::BerSweep(a) => run(Experiment::BerSweep, a),
        Command::BerVsTau(a) => run(Experiment::BerVsTau, a),
        Command::Stats(a) => run(Experiment::Stats, a),
        Command::Selftest => run_selftest(),
    }
}
