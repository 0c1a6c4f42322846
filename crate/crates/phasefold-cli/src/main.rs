//! Command-line driver for the phase-folding optimizer.
//!
//! Subcommands cover the whole workflow: `optimize` rewrites a QASM file,
//! `stats` reports what a rewrite would do, `verify` checks a rewrite
//! against the dense matrix oracle, `gen` prints random circuits, `fuzz`
//! stress-tests the optimizer trial by trial, and `bench` times it across
//! sizes. Every run reports its effective seed and width so it can be
//! reproduced exactly.

mod record;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use phasefold::cancel::cancel_adjacent;
use phasefold::circuit::{Circuit, Gate};
use phasefold::fold::{fold, fold_traced, required_width};
use phasefold::generate::{random_circuit, tchain_cx};
use phasefold::oracle::{symbolic_fold, DenseUnitary, MAX_DENSE_QUBITS};
use phasefold::qasm::{self, ParseOptions};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use record::{StatsRecord, CSV_HEADER};

/// Entrywise unitary tolerance for verification.
const VERIFY_TOLERANCE: f64 = 1e-9;

#[derive(Parser)]
#[command(
    name = "phasefold",
    version,
    about = "Phase-folding T-count optimizer for OpenQASM 2.0 circuits"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Optimize a circuit file and write the result as QASM.
    Optimize(OptimizeArgs),
    /// Report optimization statistics without writing a circuit.
    Stats(StatsArgs),
    /// Optimize, then check the output against the dense matrix oracle.
    Verify(VerifyArgs),
    /// Print a random circuit as QASM.
    Gen(GenArgs),
    /// Generate, optimize and cross-check random circuits.
    Fuzz(FuzzArgs),
    /// Time the optimizer across circuit sizes and write a CSV.
    Bench(BenchArgs),
}

/// Flags shared by every subcommand that runs the optimizer.
#[derive(Args, Debug)]
struct Tuning {
    /// Randomization seed; defaults to PHASEFOLD_SEED or OS entropy.
    #[arg(long, value_name = "N")]
    seed: Option<u64>,
    /// Signature width in bits.
    #[arg(long, value_name = "K", conflicts_with = "epsilon",
          value_parser = clap::value_parser!(u32).range(1..=128))]
    width: Option<u32>,
    /// Collision budget in (0, 1); derives the width from the rotation count.
    #[arg(long, value_name = "E")]
    epsilon: Option<f64>,
    /// Skip the adjacent-cancellation prepass.
    #[arg(long)]
    no_precancel: bool,
    /// Accept ccx by expanding it into the 15-gate construction.
    #[arg(long)]
    decompose_ccx: bool,
}

impl Tuning {
    fn parse_options(&self) -> ParseOptions {
        ParseOptions { decompose_ccx: self.decompose_ccx }
    }

    /// Effective width: explicit flag, or the collision-bound formula when
    /// a budget was given, or the 128-bit default.
    fn resolve_width(&self, rotations: usize) -> Result<u32> {
        match self.epsilon {
            Some(eps) => {
                if !(eps > 0.0 && eps < 1.0) {
                    bail!("--epsilon must lie strictly between 0 and 1, got {eps}");
                }
                let bound = required_width(rotations.max(1), eps);
                if bound.capped {
                    eprintln!(
                        "note: width capped at {} bits; budget {eps} is not fully met",
                        bound.width
                    );
                }
                Ok(bound.width)
            }
            None => Ok(self.width.unwrap_or(128)),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Optimize(args) => run_optimize(args),
        Command::Stats(args) => run_stats(args),
        Command::Verify(args) => run_verify(args),
        Command::Gen(args) => run_gen(args),
        Command::Fuzz(args) => run_fuzz(args),
        Command::Bench(args) => run_bench(args),
    }
}

/// Seed precedence: flag, then PHASEFOLD_SEED, then OS entropy.
fn effective_seed(flag: Option<u64>) -> Result<u64> {
    if let Some(seed) = flag {
        return Ok(seed);
    }
    match std::env::var("PHASEFOLD_SEED") {
        Ok(text) => text
            .trim()
            .parse()
            .with_context(|| format!("PHASEFOLD_SEED must be a u64, got '{text}'")),
        Err(_) => Ok(rand::random()),
    }
}

fn load_circuit(path: &Path, options: ParseOptions) -> Result<(Circuit, String)> {
    let source =
        fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let circuit =
        qasm::parse_with(&source, options).with_context(|| path.display().to_string())?;
    let name = path
        .file_stem()
        .map_or_else(|| "circuit".to_string(), |stem| stem.to_string_lossy().into_owned());
    Ok((circuit, name))
}

struct PipelineOutcome {
    optimized: Circuit,
    merges: usize,
    /// Time spent in cancel+fold only.
    fold_time: Duration,
}

/// One or more rounds of (cancel if enabled) then fold. Later rounds fold
/// with derived seeds so a whole run replays from the one reported seed.
fn run_pipeline(
    input: &Circuit,
    width: u32,
    seed: u64,
    precancel: bool,
    rounds: u32,
) -> PipelineOutcome {
    let mut work = input.clone();
    let mut merges = 0usize;
    let mut fold_time = Duration::ZERO;
    for round in 0..u64::from(rounds) {
        let start = Instant::now();
        let (folded, report) = if precancel {
            let cancelled = cancel_adjacent(&work);
            fold(&cancelled, width, seed.wrapping_add(round))
        } else {
            fold(&work, width, seed.wrapping_add(round))
        };
        fold_time += start.elapsed();
        merges += report.merges;
        work = folded;
    }
    PipelineOutcome { optimized: work, merges, fold_time }
}

fn optimize_circuit(
    circuit: &Circuit,
    name: &str,
    tuning: &Tuning,
    rounds: u32,
) -> Result<(Circuit, StatsRecord)> {
    let stats_in = circuit.stats();
    let rotations = circuit.gates().filter(|gate| matches!(gate, Gate::Rz(..))).count();
    let width = tuning.resolve_width(rotations)?;
    let seed = effective_seed(tuning.seed)?;
    let outcome = run_pipeline(circuit, width, seed, !tuning.no_precancel, rounds);
    let stats_out = outcome.optimized.stats();
    let record = StatsRecord {
        name: name.to_string(),
        n_qubits: stats_in.n_qubits,
        gates_in: stats_in.gates,
        t_in: stats_in.t_count,
        gates_out: stats_out.gates,
        t_out: stats_out.t_count,
        merges: outcome.merges,
        wall_time_ns: outcome.fold_time.as_nanos(),
        seed,
        width,
    };
    Ok((outcome.optimized, record))
}

#[derive(Args)]
struct OptimizeArgs {
    /// Input QASM file.
    input: PathBuf,
    /// Output QASM file.
    #[arg(short, long, value_name = "FILE")]
    output: PathBuf,
    /// Also write the stats row to this CSV file.
    #[arg(long, value_name = "CSV")]
    stats: Option<PathBuf>,
    /// Cancel+fold rounds to run.
    #[arg(long, value_name = "N", default_value_t = 1,
          value_parser = clap::value_parser!(u32).range(1..))]
    rounds: u32,
    #[command(flatten)]
    tuning: Tuning,
}

fn run_optimize(args: OptimizeArgs) -> Result<ExitCode> {
    let total = Instant::now();
    let (circuit, name) = load_circuit(&args.input, args.tuning.parse_options())?;
    let (optimized, record) = optimize_circuit(&circuit, &name, &args.tuning, args.rounds)?;
    fs::write(&args.output, qasm::emit(&optimized))
        .with_context(|| format!("cannot write {}", args.output.display()))?;
    println!("{record}");
    if let Some(csv) = &args.stats {
        fs::write(csv, format!("{CSV_HEADER}\n{}\n", record.csv_row()))
            .with_context(|| format!("cannot write {}", csv.display()))?;
    }
    eprintln!("end_to_end_ns: {}", total.elapsed().as_nanos());
    Ok(ExitCode::SUCCESS)
}

#[derive(Args)]
struct StatsArgs {
    /// Input QASM file.
    input: PathBuf,
    /// Cancel+fold rounds to run.
    #[arg(long, value_name = "N", default_value_t = 1,
          value_parser = clap::value_parser!(u32).range(1..))]
    rounds: u32,
    #[command(flatten)]
    tuning: Tuning,
}

fn run_stats(args: StatsArgs) -> Result<ExitCode> {
    let (circuit, name) = load_circuit(&args.input, args.tuning.parse_options())?;
    let (_, record) = optimize_circuit(&circuit, &name, &args.tuning, args.rounds)?;
    println!("{record}");
    Ok(ExitCode::SUCCESS)
}

#[derive(Args)]
struct VerifyArgs {
    /// Input QASM file.
    input: PathBuf,
    #[command(flatten)]
    tuning: Tuning,
    /// Test hook: drop one rotation from the optimized circuit first.
    #[arg(long, hide = true)]
    corrupt_output: bool,
}

fn run_verify(args: VerifyArgs) -> Result<ExitCode> {
    let (circuit, name) = load_circuit(&args.input, args.tuning.parse_options())?;
    let n = circuit.n_qubits();
    if n > MAX_DENSE_QUBITS {
        eprintln!(
            "refusal: {name} has {n} qubits; the dense oracle handles at most {MAX_DENSE_QUBITS}"
        );
        return Ok(ExitCode::from(2));
    }
    let (mut optimized, record) = optimize_circuit(&circuit, &name, &args.tuning, 1)?;
    if args.corrupt_output {
        corrupt_drop_rotation(&mut optimized);
    }
    let diff = DenseUnitary::from_circuit(&circuit)?
        .max_abs_diff(&DenseUnitary::from_circuit(&optimized)?)?;
    eprintln!("seed: {}", record.seed);
    eprintln!("width: {}", record.width);
    if diff <= VERIFY_TOLERANCE {
        println!("pass: max entrywise difference {diff:.3e} after {} merges", record.merges);
        Ok(ExitCode::SUCCESS)
    } else {
        println!("FAIL: max entrywise difference {diff:.3e} exceeds {VERIFY_TOLERANCE:.0e}");
        Ok(ExitCode::from(1))
    }
}

fn corrupt_drop_rotation(circuit: &mut Circuit) {
    let victim = circuit
        .iter()
        .find_map(|(handle, gate)| matches!(gate, Gate::Rz(..)).then_some(handle));
    match victim {
        Some(handle) => circuit.delete(handle).expect("handle from a live iteration"),
        None => eprintln!("note: no rotation to drop; corruption hook was a no-op"),
    }
}

#[derive(Args)]
struct GenArgs {
    /// Qubit count.
    #[arg(short, value_name = "N", value_parser = clap::value_parser!(u32).range(1..))]
    n: u32,
    /// Gate count.
    #[arg(short, value_name = "M")]
    m: usize,
    /// Generator seed; defaults to PHASEFOLD_SEED or OS entropy.
    #[arg(long, value_name = "S")]
    seed: Option<u64>,
}

fn run_gen(args: GenArgs) -> Result<ExitCode> {
    let seed = effective_seed(args.seed)?;
    let circuit = random_circuit(args.n, args.m, seed);
    print!("{}", qasm::emit(&circuit));
    eprintln!("seed: {seed}");
    Ok(ExitCode::SUCCESS)
}

#[derive(Args)]
struct FuzzArgs {
    /// Number of trials.
    #[arg(long, value_name = "T", default_value_t = 100)]
    trials: u32,
    /// Largest qubit count to draw.
    #[arg(long, value_name = "Q", default_value_t = 6,
          value_parser = clap::value_parser!(u32).range(1..=10))]
    max_qubits: u32,
    /// Largest gate count to draw.
    #[arg(long, value_name = "G", default_value_t = 60)]
    max_gates: usize,
    /// Signature width in bits; 64 keeps the per-trial collision odds
    /// negligible while still exercising the masked path.
    #[arg(long, value_name = "K", default_value_t = 64,
          value_parser = clap::value_parser!(u32).range(1..=128))]
    width: u32,
    /// Base seed; trial i replays from seed + i.
    #[arg(long, value_name = "S")]
    seed: Option<u64>,
}

fn run_fuzz(args: FuzzArgs) -> Result<ExitCode> {
    let base = effective_seed(args.seed)?;
    eprintln!("seed: {base}");
    eprintln!("width: {}", args.width);
    let mut verify_failures = 0u32;
    let mut oracle_disagreements = 0u32;
    let mut total_merges = 0usize;
    for trial in 0..args.trials {
        let trial_seed = base.wrapping_add(u64::from(trial));
        let mut rng = ChaCha8Rng::seed_from_u64(trial_seed);
        let n = rng.random_range(1..=args.max_qubits);
        let m = rng.random_range(0..=args.max_gates);
        let circuit = random_circuit(n, m, rng.random());
        let fold_seed = rng.random();

        // The merge-list comparison and the unitary check are against the
        // same cancelled input the fold actually saw.
        let cancelled = cancel_adjacent(&circuit);
        let (optimized, report, merge_list) = fold_traced(&cancelled, args.width, fold_seed);
        let (symbolic, symbolic_merges) = symbolic_fold(&cancelled);
        let mut bad = false;
        if merge_list != symbolic_merges || optimized != symbolic {
            oracle_disagreements += 1;
            bad = true;
        }
        let diff = DenseUnitary::from_circuit(&circuit)?
            .max_abs_diff(&DenseUnitary::from_circuit(&optimized)?)?;
        if diff > VERIFY_TOLERANCE {
            verify_failures += 1;
            bad = true;
        }
        if bad {
            eprintln!("trial {trial} failed (trial seed {trial_seed}, diff {diff:.3e}); circuit:");
            eprint!("{}", qasm::emit(&circuit));
        }
        total_merges += report.merges;
    }
    println!("trials: {}", args.trials);
    println!("merges: {total_merges}");
    println!("verify failures: {verify_failures}");
    println!("oracle disagreements: {oracle_disagreements}");
    Ok(if verify_failures + oracle_disagreements == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Family {
    /// T rotations interleaved with random CX layers.
    #[value(name = "tchain-cx")]
    TchainCx,
    /// Uniform draws over the whole gate set.
    Random,
}

impl Family {
    fn name(self) -> &'static str {
        match self {
            Family::TchainCx => "tchain-cx",
            Family::Random => "random",
        }
    }
}

#[derive(Args)]
struct BenchArgs {
    /// Circuit family to generate.
    #[arg(long, value_enum)]
    family: Family,
    /// Comma-separated gate counts, strictly ascending.
    #[arg(long, value_delimiter = ',', required = true, value_name = "M,M,...")]
    sizes: Vec<usize>,
    /// Qubit count for every generated circuit.
    #[arg(long, value_name = "N", default_value_t = 32,
          value_parser = clap::value_parser!(u32).range(1..))]
    qubits: u32,
    /// Timed repetitions per size; the fastest run is recorded.
    #[arg(long, value_name = "R", default_value_t = 1,
          value_parser = clap::value_parser!(u32).range(1..))]
    repeat: u32,
    /// Signature width in bits.
    #[arg(long, value_name = "K", default_value_t = 128,
          value_parser = clap::value_parser!(u32).range(1..=128))]
    width: u32,
    /// Base seed; size i replays from seed + i.
    #[arg(long, value_name = "S")]
    seed: Option<u64>,
    /// CSV output file.
    #[arg(short, long, value_name = "CSV")]
    output: PathBuf,
}

fn run_bench(args: BenchArgs) -> Result<ExitCode> {
    if args.sizes.windows(2).any(|pair| pair[0] >= pair[1]) {
        bail!("--sizes must be strictly ascending");
    }
    if matches!(args.family, Family::TchainCx) && args.qubits < 2 {
        bail!("the tchain-cx family needs at least 2 qubits");
    }
    let base = effective_seed(args.seed)?;
    eprintln!("seed: {base}");
    eprintln!("width: {}", args.width);
    let mut csv = String::from(CSV_HEADER);
    csv.push('\n');
    println!("{CSV_HEADER}");
    let mut points = Vec::new();
    for (i, &m) in args.sizes.iter().enumerate() {
        let size_seed = base.wrapping_add(i as u64);
        let circuit = match args.family {
            Family::TchainCx => tchain_cx(args.qubits, m, size_seed),
            Family::Random => random_circuit(args.qubits, m, size_seed),
        };
        let stats_in = circuit.stats();
        // Identical seed per repetition: outputs agree, only timing varies.
        let mut best = Duration::MAX;
        let mut outcome = None;
        for _ in 0..args.repeat {
            let run = run_pipeline(&circuit, args.width, size_seed, true, 1);
            best = best.min(run.fold_time);
            outcome = Some(run);
        }
        let outcome = outcome.expect("at least one repetition");
        let stats_out = outcome.optimized.stats();
        let record = StatsRecord {
            name: format!("{}-{m}", args.family.name()),
            n_qubits: stats_in.n_qubits,
            gates_in: stats_in.gates,
            t_in: stats_in.t_count,
            gates_out: stats_out.gates,
            t_out: stats_out.t_count,
            merges: outcome.merges,
            wall_time_ns: best.as_nanos(),
            seed: size_seed,
            width: args.width,
        };
        println!("{}", record.csv_row());
        csv.push_str(&record.csv_row());
        csv.push('\n');
        points.push(((m as f64).log10(), best.as_secs_f64().max(1e-9).log10()));
    }
    fs::write(&args.output, csv)
        .with_context(|| format!("cannot write {}", args.output.display()))?;
    if points.len() >= 2 {
        eprintln!("log-log slope: {:.3}", least_squares_slope(&points));
    }
    Ok(ExitCode::SUCCESS)
}

fn least_squares_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let sx: f64 = points.iter().map(|p| p.0).sum();
    let sy: f64 = points.iter().map(|p| p.1).sum();
    let sxx: f64 = points.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = points.iter().map(|p| p.0 * p.1).sum();
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}
