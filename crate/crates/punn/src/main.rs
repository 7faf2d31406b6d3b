use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use punn::dataset::read_patterns;
use punn::experiment::{run_experiment_with, save_report, train_model};
use punn::presets::lookup_preset;
use punn::schema::Schema;
use punn::split::stratified_holdout;
use punn::table::load_table;
use punn::trace::TraceWriter;
use punn::{load_dataset_dir, preprocess, ConfigId, Method, Model, ProcessedDataset, RunConfig};
use punn_core::expected_evaluations;

const DATASET_FILE: &str = "dataset.txt";
const DEFAULT_SPLIT_SEED: u64 = 1;

#[derive(Parser)]
#[command(name = "punn", version, about = "Evolve product-unit neural network classifiers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Impute, encode and normalize a CSV table into a dataset file.
    Preprocess {
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        schema: PathBuf,
        /// Output directory; receives dataset.txt.
        #[arg(long)]
        out: PathBuf,
    },
    /// Stratified holdout of a preprocessed dataset into train.txt and test.txt.
    Split {
        /// Directory holding dataset.txt, or the dataset file itself.
        #[arg(long)]
        data: PathBuf,
        #[arg(long, default_value_t = punn::TRAIN_RATIO)]
        ratio: f64,
        #[arg(long, default_value_t = DEFAULT_SPLIT_SEED)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// One training run; writes the best model.
    Train(TrainArgs),
    /// Repeated seeded runs of one configuration; writes a CSV report.
    Experiment(ExperimentArgs),
    /// Closed-form fitness evaluation counts.
    Evals {
        #[arg(long, default_value_t = 1000)]
        pop: u64,
        #[arg(long)]
        gen: u64,
    },
    /// Classify the rows of a dataset file with a saved model.
    Predict {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        data: PathBuf,
    },
}

#[derive(Args)]
struct TrainArgs {
    #[arg(long)]
    method: Method,
    #[arg(long)]
    config: ConfigId,
    /// Take neu and gen from a dataset preset.
    #[arg(long, conflicts_with_all = ["neu", "gen"])]
    preset: Option<String>,
    #[arg(long, requires = "gen")]
    neu: Option<usize>,
    #[arg(long, requires = "neu")]
    gen: Option<usize>,
    #[arg(long)]
    train: PathBuf,
    #[arg(long)]
    test: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    model_out: PathBuf,
    /// Per-generation trace of the main loop.
    #[arg(long)]
    trace: Option<PathBuf>,
    #[arg(long, default_value_t = 1000)]
    pop: usize,
}

#[derive(Args)]
struct ExperimentArgs {
    #[arg(long)]
    preset: String,
    #[arg(long)]
    config: ConfigId,
    #[arg(long, default_value_t = 30)]
    runs: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Directory with one `<preset>/data.csv` + `schema.txt` per dataset.
    #[arg(long, default_value = "data")]
    data_dir: PathBuf,
    /// Seed of the holdout split made from the raw data.
    #[arg(long, default_value_t = DEFAULT_SPLIT_SEED)]
    split_seed: u64,
    /// Use existing dataset files instead of splitting the raw data.
    #[arg(long, requires = "test")]
    train: Option<PathBuf>,
    #[arg(long, requires = "train")]
    test: Option<PathBuf>,
    #[arg(long, default_value_t = 1000)]
    pop: usize,
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Preprocess { data, schema, out } => {
            let schema = Schema::load(&schema)?;
            let raw = load_table(&data, &schema)?;
            let missing = raw.missing_count();
            let processed = preprocess(raw)?;
            fs::create_dir_all(&out).with_context(|| format!("creating {}", out.display()))?;
            processed.save(out.join(DATASET_FILE))?;
            println!(
                "patterns {}  inputs {}  classes {}  imputed {}",
                processed.len(),
                processed.input_count(),
                processed.class_count(),
                missing
            );
        }
        Command::Split {
            data,
            ratio,
            seed,
            out,
        } => {
            let path = if data.is_dir() { data.join(DATASET_FILE) } else { data };
            let full = ProcessedDataset::load(&path)?;
            let (train, test) = stratified_holdout(&full, ratio, seed)?;
            fs::create_dir_all(&out).with_context(|| format!("creating {}", out.display()))?;
            train.save(out.join("train.txt"))?;
            test.save(out.join("test.txt"))?;
            println!("train {}  test {}", train.len(), test.len());
        }
        Command::Train(args) => train(args)?,
        Command::Experiment(args) => experiment(args)?,
        Command::Evals { pop, gen } => {
            let b = expected_evaluations(pop, gen);
            println!("edd_single\tedd_pair\ttsea\treduction_percent");
            println!("{}\t{}\t{}\t{}", b.edd_single, b.edd_pair, b.tsea, b.reduction_percent);
        }
        Command::Predict { model, data } => predict(&model, &data)?,
    }
    Ok(())
}

fn train(args: TrainArgs) -> Result<()> {
    if args.config.method() != args.method {
        bail!(
            "configuration {} belongs to method {}, not {}",
            args.config,
            args.config.method(),
            args.method
        );
    }
    let mut config = match (&args.preset, args.neu, args.gen) {
        (Some(name), _, _) => RunConfig::from_preset(args.config, lookup_preset(name)?),
        (None, Some(neu), Some(gen)) => RunConfig::new(args.config, neu, gen),
        _ => bail!("give either --preset or both --neu and --gen"),
    };
    config.pop_size = args.pop;
    let train = ProcessedDataset::load(&args.train)?;
    let test = ProcessedDataset::load(&args.test)?;
    check_compatible(&train, &test)?;

    let mut trace = match &args.trace {
        Some(path) => Some(TraceWriter::new(BufWriter::new(
            File::create(path).with_context(|| format!("creating {}", path.display()))?,
        ))),
        None => None,
    };
    let (record, model) = train_model(
        &config,
        args.seed,
        &train.to_dataset()?,
        &test.to_dataset()?,
        |s| {
            if let Some(t) = trace.as_mut() {
                t.record(s);
            }
        },
    )?;
    if let Some(t) = trace {
        t.finish().context("writing trace")?;
    }
    model.save(&args.model_out)?;
    println!(
        "ccr_train {:.2}  ccr_test {:.2}  connections {}  hidden {}  evaluations {}  generations {}",
        record.ccr_train,
        record.ccr_test,
        record.connections,
        model.network.hidden_count(),
        record.evaluations,
        record.generations
    );
    Ok(())
}

fn experiment(args: ExperimentArgs) -> Result<()> {
    let preset = lookup_preset(&args.preset)?;
    let mut config = RunConfig::from_preset(args.config, preset);
    config.pop_size = args.pop;
    let (train, test) = match (&args.train, &args.test) {
        (Some(tr), Some(te)) => (ProcessedDataset::load(tr)?, ProcessedDataset::load(te)?),
        _ => {
            let full = load_dataset_dir(args.data_dir.join(preset.name))?;
            stratified_holdout(&full, punn::TRAIN_RATIO, args.split_seed)?
        }
    };
    check_compatible(&train, &test)?;
    eprintln!(
        "{} config {}: {} train / {} test, {} runs",
        preset.name,
        config.config,
        train.len(),
        test.len(),
        args.runs
    );
    let records = run_experiment_with(
        &config,
        args.runs,
        args.seed,
        &train.to_dataset()?,
        &test.to_dataset()?,
        args.workers,
        |r| {
            eprintln!(
                "run {:>3}  seed {}  ccr_test {:.2}  connections {}",
                r.run, r.seed, r.ccr_test, r.connections
            )
        },
    )?;
    let summary = save_report(&records, &args.out)?;
    println!(
        "ccr_test {:.2} +- {:.2}  connections {:.2} +- {:.2}",
        summary.ccr_test.mean, summary.ccr_test.sd, summary.connections.mean, summary.connections.sd
    );
    Ok(())
}

fn predict(model: &Path, data: &Path) -> Result<()> {
    let model = Model::load(model)?;
    let file = File::open(data).with_context(|| format!("opening {}", data.display()))?;
    let rows = read_patterns(file)?;
    let net = &model.network;
    if rows.feature_names.len() != net.input_count() || rows.class_labels.len() != net.class_count() {
        bail!("model and data disagree on input or class count");
    }
    let mut correct = 0usize;
    let mut labelled = 0usize;
    for (pattern, label) in rows.patterns.iter().zip(&rows.labels) {
        let class = net.predict_class(pattern)?;
        println!("{}", rows.class_labels[class]);
        if let Some(label) = label {
            labelled += 1;
            correct += usize::from(*label == class);
        }
    }
    if labelled > 0 {
        println!("ccr {:.2}", 100.0 * correct as f64 / labelled as f64);
    }
    Ok(())
}

fn check_compatible(train: &ProcessedDataset, test: &ProcessedDataset) -> Result<()> {
    if train.input_count() != test.input_count() || train.class_labels() != test.class_labels() {
        bail!("train and test files disagree on inputs or classes");
    }
    Ok(())
}
