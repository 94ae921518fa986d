use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use minsym::format::curve::{read_curves, write_curve};
use minsym::format::dataset::{read_dataset, read_dataset_with_lines, read_manifest, write_dataset, ReadOptions};
use minsym::format::instance::read_instance;
use minsym::format::log::{read_message_log, write_message_log};
use minsym::format::onehot::export_one_hot;
use minsym::{parallel, Result};
use minsym_core::analysis::{gap_table, DEFAULT_EPSILON};
use minsym_core::game::{Sender, SilentSender};
use minsym_core::sampler::{SampleError, SamplerConfig};
use minsym_core::{
    effective_symbols, message_length_stats, p_class_at_least, p_exists_class_at_least, solve_min_sym_enum,
    solve_min_sym_hitting, AccuracyCurve, AttributeSpace, CollisionQuery, EpisodeRecord, OracleReceiver, OracleSender,
};

#[derive(Parser)]
#[command(name = "minsym", version, about = "Minimum message length tools for attribute-value signaling games")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve min(|M|) for one instance file.
    Solve(SolveArgs),
    /// Evaluate the collision probability model.
    Prob(ProbArgs),
    /// Distribution of min(|M|) over uniform instances.
    Hist(HistArgs),
    /// Controlled sampling into min(|M|) buckets.
    Sample(SampleArgs),
    /// Re-solve every record of a dataset and check bucket purity.
    Verify(VerifyArgs),
    /// One-hot export with a train/eval split.
    Export(ExportArgs),
    /// Oracle game accuracy for max lengths 1..=L.
    Eval(EvalArgs),
    /// Effective symbols from an accuracy curve and optional message log.
    Analyze(AnalyzeArgs),
}

#[derive(Args, Clone, Copy)]
struct SpaceArgs {
    /// Number of attributes |A|.
    #[arg(long, default_value_t = 20)]
    attributes: usize,
    /// Values per attribute |V|.
    #[arg(long, default_value_t = 4)]
    values: usize,
    /// Distractors per instance.
    #[arg(long, default_value_t = 63)]
    distractors: usize,
}

#[derive(Args)]
struct SolveArgs {
    /// JSON instance: {"num_values": 3, "target_index": 0, "objects": [[0, 0], ...]}.
    instance: PathBuf,
}

#[derive(Args)]
struct ProbArgs {
    /// Sampled candidates n.
    #[arg(short = 'n', long)]
    n: u64,
    /// Occurrence threshold.
    #[arg(short = 'm', long)]
    m: u64,
    #[arg(long)]
    classes: u64,
    /// Also estimate the exact probability with this many Monte Carlo trials.
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    workers: usize,
}

#[derive(Args)]
struct HistArgs {
    #[command(flatten)]
    space: SpaceArgs,
    #[arg(long, default_value_t = 10_000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    workers: usize,
}

#[derive(Args)]
struct SampleArgs {
    #[command(flatten)]
    space: SpaceArgs,
    /// Instances per tracked bucket.
    #[arg(long, default_value_t = 10_000)]
    per_bucket: usize,
    /// Tracked min(|M|) values, comma separated.
    #[arg(long, value_delimiter = ',', default_values_t = [2, 3])]
    buckets: Vec<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Draw cap; defaults to 10^4 per requested instance.
    #[arg(long)]
    max_attempts: Option<u64>,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    force: bool,
    /// Re-read the written dataset and re-solve every record.
    #[arg(long)]
    verify: bool,
    #[arg(long, default_value_t = 1)]
    workers: usize,
}

#[derive(Args)]
struct VerifyArgs {
    /// Dataset directory.
    dataset: PathBuf,
    #[arg(long, default_value_t = 1)]
    workers: usize,
}

#[derive(Args)]
struct ExportArgs {
    #[arg(long)]
    dataset: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 0)]
    split_seed: u64,
    /// Train share per bucket; defaults to the manifest's ratio.
    #[arg(long)]
    train_ratio: Option<f64>,
    #[arg(long)]
    force: bool,
    #[arg(long)]
    verify: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum SenderKind {
    Oracle,
    Silent,
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long)]
    dataset: PathBuf,
    /// Evaluate one bucket only.
    #[arg(long)]
    bucket: Option<usize>,
    /// Largest max message length L.
    #[arg(long, default_value_t = 5)]
    max_length: usize,
    #[arg(long, default_value_t = 1)]
    episodes: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = SenderKind::Oracle)]
    sender: SenderKind,
    /// Write the accuracy curve (exact expectations) as CSV.
    #[arg(long)]
    curve: Option<PathBuf>,
    /// Write the episode message log as JSON lines.
    #[arg(long)]
    log: Option<PathBuf>,
    #[arg(long)]
    force: bool,
    #[arg(long)]
    verify: bool,
    #[arg(long, default_value_t = 1)]
    workers: usize,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Accuracy curve CSV.
    #[arg(long)]
    curve: Option<PathBuf>,
    /// Episode message log.
    #[arg(long)]
    log: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_EPSILON)]
    epsilon: f64,
    /// Use this epoch instead of the last one per length.
    #[arg(long)]
    epoch: Option<u32>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Solve(a) => solve(a),
        Command::Prob(a) => prob(a),
        Command::Hist(a) => hist(a),
        Command::Sample(a) => sample(a),
        Command::Verify(a) => verify(a),
        Command::Export(a) => export(a),
        Command::Eval(a) => eval(a),
        Command::Analyze(a) => analyze(a),
    }
}

fn solve(a: SolveArgs) -> Result<ExitCode> {
    let inst = read_instance(&a.instance)?;
    let reference = solve_min_sym_enum(&inst);
    let fast = solve_min_sym_hitting(&inst);
    assert_eq!(reference.min_symbols(), fast.min_symbols(), "solvers disagree");
    match reference.witness() {
        Some(w) => {
            println!("min_symbols: {}", w.len());
            println!("witness: {w}");
            let codes: Vec<String> = w.to_symbols(inst.space())?.iter().map(ToString::to_string).collect();
            println!("symbols: {}", codes.join(" "));
        }
        None => println!("min_symbols: unsolvable"),
    }
    Ok(ExitCode::SUCCESS)
}

fn prob(a: ProbArgs) -> Result<ExitCode> {
    let q = CollisionQuery::new(a.n, a.m, a.classes)?;
    println!("n={} m={} classes={}", q.n, q.m, q.num_classes);
    println!("p_class_at_least: {:.12e}", p_class_at_least(&q));
    println!("p_exists_class_at_least: {:.12}", p_exists_class_at_least(&q));
    if let Some(trials) = a.trials {
        let est = parallel::monte_carlo_exists(&q, trials, a.seed, a.workers)?;
        println!("monte_carlo: {:.6} +- {:.6} ({} trials, seed {})", est.value, est.std_error, est.trials, a.seed);
    }
    Ok(ExitCode::SUCCESS)
}

fn space(s: &SpaceArgs) -> Result<AttributeSpace> {
    Ok(AttributeSpace::new(s.attributes, s.values)?)
}

fn hist(a: HistArgs) -> Result<ExitCode> {
    let sp = space(&a.space)?;
    let h = parallel::min_m_histogram(&sp, a.space.distractors, a.trials, a.seed, a.workers)?;
    println!("# space={sp} distractors={} trials={} seed={}", a.space.distractors, a.trials, a.seed);
    println!("min_m,count,frequency");
    for (&k, &c) in &h.solved {
        println!("{k},{c},{:.6}", h.frequency(Some(k)));
    }
    println!("unsolvable,{},{:.6}", h.unsolvable, h.frequency(None));
    if let Some(((lo, hi), mass)) = h.top_adjacent_pair() {
        println!("# top adjacent pair: {lo},{hi} mass={mass:.6}");
    }
    Ok(ExitCode::SUCCESS)
}

fn sample(a: SampleArgs) -> Result<ExitCode> {
    let sp = space(&a.space)?;
    let mut config = SamplerConfig::new(sp, a.space.distractors, a.per_bucket, a.buckets.iter().copied(), a.seed)?;
    if let Some(cap) = a.max_attempts {
        config = config.with_max_attempts(cap)?;
    }
    eprintln!(
        "sampling space={sp} distractors={} buckets={:?} per_bucket={} seed={} max_attempts={}",
        config.num_distractors, config.tracked_buckets, config.per_bucket_target, config.seed, config.max_attempts
    );
    let (dataset, partial) = match parallel::controlled_sample(&config, a.workers) {
        Ok(ds) => (ds, None),
        Err(SampleError::Exhausted(p)) => {
            let err = SampleError::Exhausted(p.clone());
            (*p, Some(err))
        }
        Err(e) => return Err(e.into()),
    };
    let manifest = write_dataset(&dataset, &a.out, a.force)?;
    println!("attempts: {}", manifest.attempts);
    for (k, n) in &manifest.bucket_counts {
        println!("bucket {k}: {n}");
    }
    println!("histogram: {}", dataset.histogram);
    if let Some(err) = partial {
        return Err(err.into());
    }
    if a.verify {
        let ds = read_dataset(&a.out, ReadOptions { verify: true })?;
        println!("verified: {} instances", ds.len());
    }
    Ok(ExitCode::SUCCESS)
}

fn verify(a: VerifyArgs) -> Result<ExitCode> {
    let (ds, lines) = read_dataset_with_lines(&a.dataset, ReadOptions::default())?;
    let n = parallel::verify_dataset(&ds, Some(&lines), a.workers)?;
    println!("verified: {n} instances, 0 mismatches");
    Ok(ExitCode::SUCCESS)
}

fn export(a: ExportArgs) -> Result<ExitCode> {
    let ratio = match a.train_ratio {
        Some(r) => r,
        None => read_manifest(&a.dataset)?.split.train_ratio,
    };
    let ds = read_dataset(&a.dataset, ReadOptions { verify: a.verify })?;
    let header = export_one_hot(&ds, &a.out, a.split_seed, ratio, a.force)?;
    println!(
        "train: {} eval: {} row_width: {} candidates: {}",
        header.train_instances, header.eval_instances, header.row_width, header.candidates_per_instance
    );
    Ok(ExitCode::SUCCESS)
}

fn eval(a: EvalArgs) -> Result<ExitCode> {
    if a.max_length == 0 {
        return Err(minsym_core::Error::InvalidArgument("max length must be at least 1").into());
    }
    let ds = read_dataset(&a.dataset, ReadOptions { verify: a.verify })?;
    let items: Vec<_> = match a.bucket {
        Some(k) => ds.bucket(k).to_vec(),
        None => ds.instances().cloned().collect(),
    };
    let sender: &(dyn Sender + Sync) = match a.sender {
        SenderKind::Oracle => &OracleSender,
        SenderKind::Silent => &SilentSender,
    };
    println!("max_length,accuracy,std_error,expected_accuracy");
    let mut points = Vec::new();
    let mut log: Vec<EpisodeRecord> = Vec::new();
    for l in 1..=a.max_length {
        let report = parallel::evaluate(&items, sender, &OracleReceiver, l, a.episodes, a.seed, a.workers)?;
        let expected = report.expected_accuracy.expect("oracle receiver has a closed form");
        println!("{l},{:.6},{:.6},{:.6}", report.accuracy, report.std_error, expected);
        points.push((l, expected));
        log.extend(report.records);
    }
    if let Some(path) = &a.curve {
        let curve = AccuracyCurve::new("oracle", points)?;
        write_curve(&curve, path, a.force)?;
    }
    if let Some(path) = &a.log {
        write_message_log(&log, path, a.force)?;
    }
    Ok(ExitCode::SUCCESS)
}

fn analyze(a: AnalyzeArgs) -> Result<ExitCode> {
    if a.curve.is_none() && a.log.is_none() {
        return Err(minsym_core::Error::InvalidArgument("pass --curve and/or --log").into());
    }
    if let Some(path) = &a.curve {
        let curves = read_curves(path)?;
        let curve = match a.epoch {
            Some(e) => curves.at_epoch(e)?,
            None => curves.final_curve()?,
        };
        println!("max_length,accuracy,gap");
        for (l, acc, gap) in gap_table(&curve) {
            println!("{l},{acc:.6},{gap:.6}");
        }
        println!("effective_symbols: {} (epsilon {})", effective_symbols(&curve, a.epsilon)?, a.epsilon);
    }
    if let Some(path) = &a.log {
        let log = read_message_log(path)?;
        let stats = message_length_stats(&log);
        println!("episodes: {}", stats.total);
        println!("length,count");
        for (l, c) in &stats.lengths {
            println!("{l},{c}");
        }
        if let Some(m) = stats.modal_length() {
            println!("modal_length: {m}");
        }
        println!("symbol,count");
        for (s, c) in &stats.symbols {
            println!("{s},{c}");
        }
    }
    Ok(ExitCode::SUCCESS)
}
