use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use swapcrystal::harness::validate::solvable_suite;
use swapcrystal::harness::{emit_figure_data, figures_for, run_experiment, Experiment, ExperimentConfig, RunOptions, ScheduleConfig};
use swapcrystal::LocalSpin;

#[derive(Parser)]
#[command(name = "swapcrystal", version, about = "Swap-kicked Floquet spin chains by exact diagonalization")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Disorder-averaged Z(t) and site magnetizations
    Dynamics(RunArgs),
    /// Decay times of the period-doubling signal
    DecayTimes(RunArgs),
    /// Mean level-spacing ratio <r>
    LevelRatio(RunArgs),
    /// Spectral-pairing parameter over a (J, epsilon) grid
    Pairing(RunArgs),
    /// Spectral-pairing parameter against chain length
    #[command(name = "pairing-vs-l")]
    PairingVsL(RunArgs),
    /// Eigenstate correlation quantifier <Sigma>
    Correlations(RunArgs),
    /// Exact local-imbalance distributions
    ImbalanceDist(RunArgs),
    /// Solvable-point oracle suite
    Validate(ValidateArgs),
}

fn parse_spin(s: &str) -> Result<LocalSpin, String> {
    match s {
        "1/2" | "half" | "0.5" => Ok(LocalSpin::Half),
        "1" | "one" => Ok(LocalSpin::One),
        _ => Err(format!("spin must be 1/2 or 1, got {s:?}")),
    }
}

#[derive(Args)]
struct RunArgs {
    /// JSON configuration; flags below override its keys
    #[arg(long)]
    config: Option<PathBuf>,
    /// Master seed
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads (default: $SWAPCRYSTAL_THREADS, else all cores)
    #[arg(long)]
    threads: Option<usize>,
    /// Skip grid points already recorded in the inventory
    #[arg(long)]
    resume: bool,
    /// Figure tables to emit (default: every figure the experiment feeds)
    #[arg(long = "figure")]
    figures: Vec<String>,
    #[arg(long, value_parser = parse_spin)]
    spin: Option<LocalSpin>,
    #[arg(long, value_delimiter = ',')]
    lengths: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    j: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    epsilon: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    alpha: Option<Vec<f64>>,
    #[arg(long)]
    v: Option<f64>,
    #[arg(long)]
    h: Option<f64>,
    #[arg(long)]
    n_disorder: Option<usize>,
    /// neel, half-neel, up-zero, or an explicit string such as +-+0
    #[arg(long, allow_hyphen_values = true)]
    initial_state: Option<String>,
    #[arg(long)]
    horizon: Option<u64>,
    /// hybrid:<dense>:<per_decade>, strided:<n> or explicit:<t0>,<t1>,...
    #[arg(long)]
    schedule: Option<ScheduleConfig>,
    #[arg(long)]
    stride: Option<u64>,
    #[arg(long)]
    pilot: Option<usize>,
    #[arg(long)]
    mutual_information: bool,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long)]
    dim_cap: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    local_dims: Option<Vec<u32>>,
}

#[derive(Args)]
struct ValidateArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn build_config(experiment: Experiment, a: &RunArgs) -> Result<ExperimentConfig, String> {
    let mut c = match &a.config {
        Some(path) => ExperimentConfig::load(path).map_err(|e| e.to_string())?,
        None => {
            let lengths = a.lengths.clone().ok_or("either --config or --lengths is required")?;
            ExperimentConfig::new(experiment, lengths)
        }
    };
    if c.experiment != experiment {
        return Err(format!("config describes {} but the subcommand is {experiment}", c.experiment));
    }
    macro_rules! set {
        ($($field:ident),*) => { $( if let Some(x) = &a.$field { c.$field = x.clone(); } )* };
    }
    set!(spin, lengths, j, epsilon, alpha, v, h, initial_state, horizon, schedule, output, dim_cap, local_dims, pilot);
    if let Some(n) = a.n_disorder {
        c.n_disorder = Some(n);
    }
    if let Some(n) = a.stride {
        c.stride = Some(n);
    }
    if let Some(seed) = a.seed {
        c.master_seed = seed;
    }
    if a.mutual_information {
        c.mutual_information = true;
    }
    c.validate().map_err(|e| e.to_string())?;
    Ok(c)
}

fn run(experiment: Experiment, args: &RunArgs) -> Result<bool, String> {
    let config = build_config(experiment, args)?;
    let options = RunOptions { threads: args.threads, resume: args.resume };
    let result = run_experiment(&config, &options, &mut |line| eprintln!("{line}")).map_err(|e| e.to_string())?;
    for p in &result.points {
        println!(
            "{}: mean {} stderr {} ({} of {} realizations, {} failed)",
            p.point.label(),
            p.mean,
            p.stderr,
            p.count,
            p.requested,
            p.failures
        );
    }
    for t in &result.imbalance {
        println!("L{} d{}: {} support points", t.length, t.d, t.support.len());
    }
    let figures: Vec<String> = if args.figures.is_empty() {
        figures_for(&result).into_iter().map(String::from).collect()
    } else {
        args.figures.clone()
    };
    for f in &figures {
        for path in emit_figure_data(&result, f).map_err(|e| e.to_string())? {
            println!("wrote {}", path.display());
        }
    }
    println!("results in {}", result.experiment_dir().display());
    Ok(result.total_failures() == 0)
}

fn validate(args: &ValidateArgs) -> Result<bool, String> {
    let mut all = true;
    for (spin, lengths) in [(LocalSpin::Half, &[4usize, 6, 8][..]), (LocalSpin::One, &[4, 6][..])] {
        for c in solvable_suite(spin, lengths, args.seed).map_err(|e| e.to_string())? {
            println!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
            all &= c.passed;
        }
    }
    Ok(all)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Dynamics(a) => run(Experiment::Dynamics, a),
        Command::DecayTimes(a) => run(Experiment::DecayTimes, a),
        Command::LevelRatio(a) => run(Experiment::LevelRatio, a),
        Command::Pairing(a) => run(Experiment::Pairing, a),
        Command::PairingVsL(a) => run(Experiment::PairingVsL, a),
        Command::Correlations(a) => run(Experiment::Correlations, a),
        Command::ImbalanceDist(a) => run(Experiment::ImbalanceDist, a),
        Command::Validate(a) => validate(a),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
