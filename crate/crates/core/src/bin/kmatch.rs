use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use kmatch_stream::harness::{
    gen_no_matching, gen_planted, gen_random_inserts, measure, optimum, sub_rng, tag, true_weight, Algorithm, Engine,
    PlantedConfig,
};
use kmatch_stream::stream::{
    check_well_formed, format_weight, parse_stream, render_stream, LiveGraph, Record, StreamFile, StreamModel,
};
use kmatch_stream::Error;

#[derive(Parser)]
#[command(name = "kmatch", version, about = "Maximum-weight k-matching over graph streams")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Model {
    Dynamic,
    DynamicApprox,
    Insert,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GenModel {
    Dynamic,
    Insert,
}

#[derive(Subcommand)]
enum Command {
    /// Stream a file through an algorithm and print the answer at every query.
    Run {
        #[arg(long, value_enum)]
        model: Model,
        /// Overrides k from the header.
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, default_value_t = 0.1)]
        epsilon: f64,
        /// Failure probability of the insert-only algorithm.
        #[arg(long, default_value_t = 0.0625)]
        delta: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Print cost and space counters.
        #[arg(long)]
        stats: bool,
        file: PathBuf,
    },
    /// Write a planted stream to stdout.
    Gen {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        k: usize,
        /// Noise weights are drawn from 1..=W.
        #[arg(long, default_value_t = 5)]
        weights: u64,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 0.0)]
        del_rate: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = GenModel::Dynamic)]
        model: GenModel,
        /// Comma-separated planted weights.
        #[arg(long, value_delimiter = ',')]
        planted: Option<Vec<u64>>,
        /// Generate a stream whose final graph has no k-matching.
        #[arg(long)]
        no_matching: bool,
    },
    /// Check well-formedness and print the exact optimum at every query.
    Verify { file: PathBuf },
    /// Per-update cost and peak space on random streams of several lengths.
    Bench {
        #[arg(long, value_enum)]
        model: Model,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 1000)]
        n: u64,
        #[arg(long, default_value_t = 5)]
        weights: u64,
        #[arg(long, value_delimiter = ',', default_value = "1000,10000,100000")]
        lengths: Vec<usize>,
        #[arg(long, default_value_t = 0.1)]
        epsilon: f64,
        #[arg(long, default_value_t = 0.0625)]
        delta: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

enum Failure {
    Parse(String),
    IllFormed(String),
    Violation(String),
    Other(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. } => Failure::Parse(e.to_string()),
            other => Failure::Other(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run { model, k, epsilon, delta, seed, stats, file } => run(model, k, epsilon, delta, seed, stats, &file),
        Command::Gen { n, k, weights, m, del_rate, seed, model, planted, no_matching } => {
            generate(n, k, weights, m, del_rate, seed, model, planted, no_matching)
        }
        Command::Verify { file } => verify(&file),
        Command::Bench { model, k, n, weights, lengths, epsilon, delta, seed } => {
            bench(model, k, n, weights, &lengths, epsilon, delta, seed)
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Parse(m)) | Err(Failure::IllFormed(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Violation(m)) => {
            eprintln!("one-sided violation: {m}");
            ExitCode::from(3)
        }
        Err(Failure::Other(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}

fn read(file: &PathBuf, model: StreamModel) -> Result<StreamFile, Failure> {
    let text = std::fs::read_to_string(file).map_err(|e| Failure::Other(format!("{}: {e}", file.display())))?;
    Ok(parse_stream(&text, model)?)
}

fn algorithm(model: Model, epsilon: f64, delta: f64) -> Algorithm {
    match model {
        Model::Dynamic => Algorithm::Dynamic,
        Model::DynamicApprox => Algorithm::DynamicApprox { epsilon },
        Model::Insert => Algorithm::InsertOnly { delta },
    }
}

fn run(model: Model, k: Option<usize>, epsilon: f64, delta: f64, seed: u64, stats: bool, file: &PathBuf) -> Result<(), Failure> {
    let stream_model = if model == Model::Insert { StreamModel::InsertOnly } else { StreamModel::Dynamic };
    let stream = read(file, stream_model)?;
    let h = stream.header;
    let k = k.unwrap_or(h.k);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut engine = Engine::new(algorithm(model, epsilon, delta), h.n, k, h.scale(), &mut rng)?;
    let mut live = LiveGraph::default();
    let (mut updates, mut max_ops, mut peak_words, mut query_no) = (0u64, 0u64, 0usize, 0usize);
    for r in &stream.records {
        match r {
            Record::Update(u) => {
                engine.update(u)?;
                live.apply(u);
                updates += 1;
                max_ops = max_ops.max(engine.last_update_ops());
                peak_words = peak_words.max(engine.stored_words());
            }
            Record::Query => {
                query_no += 1;
                let Some(answer) = engine.query() else {
                    println!("query {query_no}: none");
                    continue;
                };
                let Some(w) = true_weight(&answer, &live, k) else {
                    return Err(Failure::Violation(format!("query {query_no} returned {:?}", answer.edges)));
                };
                let edges: Vec<String> = answer.edges.iter().map(|(u, v)| format!("{u}-{v}")).collect();
                let mut line = format!("query {query_no}: weight {}", format_weight(w, h.precision));
                if model == Model::DynamicApprox {
                    line.push_str(&format!(" (rounded {:.4})", answer.reported_weight / h.scale() as f64));
                }
                println!("{line} edges {}", edges.join(" "));
            }
        }
    }
    if stats {
        println!("updates {updates}");
        println!("max update ops {max_ops}");
        println!("peak stored words {peak_words}");
        match &engine {
            Engine::Dynamic(d) => {
                let p = d.scheme().params();
                println!("samplers {} (d2 = {}, index range {})", d.bank_len(), p.d2, p.index_range());
                println!("weight classes {}", d.classes_seen().len());
            }
            Engine::InsertOnly(m) => {
                println!("copies {} (q = {})", m.copies().len(), m.copies()[0].q());
            }
        }
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn generate(
    n: u64,
    k: usize,
    weights: u64,
    m: usize,
    del_rate: f64,
    seed: u64,
    model: GenModel,
    planted: Option<Vec<u64>>,
    no_matching: bool,
) -> Result<(), Failure> {
    let mut rng = sub_rng(seed, tag::STREAM, 0);
    let (stream, opt) = if no_matching {
        (gen_no_matching(n, k, weights, m, del_rate, &mut rng)?, None)
    } else {
        let stream_model = if model == GenModel::Insert { StreamModel::InsertOnly } else { StreamModel::Dynamic };
        let mut cfg = PlantedConfig::new(n, k, weights, m, del_rate, stream_model);
        cfg.planted = planted;
        let p = gen_planted(&cfg, &mut rng)?;
        (p.stream, p.opt.map(|o| o.weight()))
    };
    match opt {
        Some(w) => println!("# optimum {w}"),
        None => println!("# optimum none"),
    }
    print!("{}", render_stream(&stream));
    Ok(())
}

fn verify(file: &PathBuf) -> Result<(), Failure> {
    let stream = read(file, StreamModel::Dynamic)?;
    check_well_formed(&stream).map_err(|e| Failure::IllFormed(e.to_string()))?;
    let h = stream.header;
    let mut live = LiveGraph::default();
    let mut query_no = 0;
    for r in &stream.records {
        match r {
            Record::Update(u) => live.apply(u),
            Record::Query => {
                query_no += 1;
                match optimum(&live.graph(), h.k) {
                    Some(m) => println!("query {query_no}: optimum {}", format_weight(m.weight(), h.precision)),
                    None => println!("query {query_no}: no {}-matching", h.k),
                }
            }
        }
    }
    println!("ok: {} records, {} queries", stream.records.len(), query_no);
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn bench(
    model: Model,
    k: usize,
    n: u64,
    weights: u64,
    lengths: &[usize],
    epsilon: f64,
    delta: f64,
    seed: u64,
) -> Result<(), Failure> {
    println!("{:>10} {:>14} {:>14} {:>12}", "m", "max ops", "peak words", "bound fails");
    for (i, &m) in lengths.iter().enumerate() {
        let stream = gen_random_inserts(n, k, weights, m, &mut sub_rng(seed, tag::STREAM, i as u64))?;
        let mut rng = sub_rng(seed, tag::ALGORITHM, i as u64);
        let mut engine = Engine::new(algorithm(model, epsilon, delta), n, k, 1, &mut rng)?;
        let p = measure(&mut engine, &stream)?;
        println!("{:>10} {:>14} {:>14} {:>12}", m, p.max_update_ops, p.peak_stored_words, p.bound_failures);
    }
    Ok(())
}
