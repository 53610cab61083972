use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use alignment_drift::changes::{
    diff_ontologies, read_labels_csv, write_labels_csv, ChangeError, Side,
};
use alignment_drift::classify::{
    evaluate, featurize, fit, read_dataset_csv, write_dataset_csv, write_report_csv,
    write_report_table, ClassifierSpec, ClassifyError, ReportRow, TrainedModel,
};
use alignment_drift::embedding::{
    build_vocab, read_word2vec, train_skipgram, write_word2vec, EmbeddingError, TrainConfig,
    TrainMode,
};
use alignment_drift::pipeline::{
    label_transition, load_epoch, read_config_file, run_pipeline, union_graph, EpochPaths,
    PipelineConfig, PipelineError, EMBEDDED_EPOCHS,
};
use alignment_drift::rdf::{build_graph, parse_ntriples, TripleSet};
use alignment_drift::synth::{generate_scenario, ScenarioConfig, SynthError};
use alignment_drift::walks::{generate_walks, read_corpus, write_corpus, WalkConfig, WalkError};
use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "alignment-drift",
    version,
    about = "Predict which ontology changes affect an alignment"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic evolution scenario as epoch directories.
    Synth(SynthArgs),
    /// List changed resources between two versions of one ontology.
    Diff(DiffArgs),
    /// Label the changes between two epoch directories.
    Label(LabelArgs),
    /// Generate random walks over the merged graph.
    Walks(WalksArgs),
    /// Train skip-gram embeddings on a walk corpus.
    Embed(EmbedArgs),
    /// Join labeled changes with their embedding vectors.
    Featurize(FeaturizeArgs),
    /// Fit one classifier on a feature CSV and save it as JSON.
    Train(TrainArgs),
    /// Score saved classifiers on a feature CSV.
    Evaluate(EvaluateArgs),
    /// Run every stage from epoch snapshots to the metrics report.
    Pipeline(PipelineArgs),
}

#[derive(Args)]
struct SynthArgs {
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long)]
    concepts: Option<usize>,
    #[arg(long)]
    branching: Option<usize>,
    #[arg(long)]
    aligned_fraction: Option<f64>,
    #[arg(long)]
    volatile_fraction: Option<f64>,
    #[arg(long)]
    edits: Option<usize>,
    #[arg(long)]
    p_affect: Option<f64>,
    #[arg(long)]
    epochs: Option<usize>,
}

#[derive(Args)]
struct DiffArgs {
    #[arg(long)]
    old: PathBuf,
    #[arg(long)]
    new: PathBuf,
    #[arg(long, default_value = "o1")]
    side: Side,
    /// CSV output; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct LabelArgs {
    /// Epoch directory with o1.nt, o2.nt and alignment.tsv.
    #[arg(long)]
    old: PathBuf,
    #[arg(long)]
    new: PathBuf,
    #[arg(long, default_value_t = 2)]
    radius: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct WalksArgs {
    /// Directory of epoch{t}/ snapshots; the first `--epochs` form the graph.
    #[arg(long, conflicts_with = "nt")]
    data_dir: Option<PathBuf>,
    #[arg(long, default_value_t = EMBEDDED_EPOCHS)]
    epochs: usize,
    /// N-Triples files to merge instead of a data directory.
    #[arg(long, num_args = 1..)]
    nt: Vec<PathBuf>,
    #[arg(long, default_value_t = 8)]
    depth: usize,
    #[arg(long, default_value_t = 100)]
    walks_per_entity: usize,
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    include_literals: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct EmbedArgs {
    #[arg(long)]
    walks: PathBuf,
    #[arg(long, default_value_t = 500)]
    dims: usize,
    #[arg(long, default_value_t = 5)]
    window: usize,
    #[arg(long, default_value_t = 5)]
    negatives: usize,
    #[arg(long, default_value_t = 5)]
    epochs: usize,
    #[arg(long, default_value_t = 0.025)]
    learning_rate: f64,
    #[arg(long, default_value_t = 1)]
    min_count: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    deterministic: bool,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct FeaturizeArgs {
    #[arg(long)]
    labels: PathBuf,
    #[arg(long)]
    embedding: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct TrainArgs {
    #[arg(long)]
    data: PathBuf,
    /// KIND[:key=value,...], e.g. `mlp:layers=500-500`.
    #[arg(long)]
    classifier: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct EvaluateArgs {
    #[arg(long = "model", required = true)]
    models: Vec<PathBuf>,
    #[arg(long)]
    data: PathBuf,
    /// Report CSV; the table always goes to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PipelineArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    data_dir: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    dims: Option<usize>,
    #[arg(long)]
    walk_depth: Option<usize>,
    #[arg(long)]
    walks_per_entity: Option<usize>,
    #[arg(long)]
    radius: Option<usize>,
    /// Repeatable; replaces the configured roster.
    #[arg(long)]
    classifier: Vec<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    deterministic: Option<bool>,
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    Ok(BufWriter::new(
        File::create(path).with_context(|| format!("creating {}", path.display()))?,
    ))
}

fn open(path: &Path) -> Result<BufReader<File>> {
    Ok(BufReader::new(
        File::open(path).with_context(|| format!("opening {}", path.display()))?,
    ))
}

fn read_nt(path: &Path) -> Result<TripleSet> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_ntriples(&text).with_context(|| format!("parsing {}", path.display()))
}

fn synth(a: SynthArgs) -> Result<()> {
    let d = ScenarioConfig::default();
    let cfg = ScenarioConfig {
        concepts_per_ontology: a.concepts.unwrap_or(d.concepts_per_ontology),
        branching_factor: a.branching.unwrap_or(d.branching_factor),
        aligned_fraction: a.aligned_fraction.unwrap_or(d.aligned_fraction),
        volatile_fraction: a.volatile_fraction.unwrap_or(d.volatile_fraction),
        edits_per_epoch: a.edits.unwrap_or(d.edits_per_epoch),
        p_affect: a.p_affect.unwrap_or(d.p_affect),
        epochs: a.epochs.unwrap_or(d.epochs),
        seed: a.seed,
    };
    let scenario = generate_scenario(&cfg)?;
    scenario.write_to(&a.out)?;
    let edits: usize = scenario.edit_log.iter().map(Vec::len).sum();
    println!(
        "wrote {} epochs and {edits} edits to {}",
        scenario.snapshots.len(),
        a.out.display()
    );
    Ok(())
}

fn diff(a: DiffArgs) -> Result<()> {
    let changes = diff_ontologies(&read_nt(&a.old)?, &read_nt(&a.new)?, a.side);
    let out: Box<dyn Write> = match &a.out {
        Some(p) => Box::new(create(p)?),
        None => Box::new(std::io::stdout().lock()),
    };
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["resource", "side", "kind", "num_added", "num_removed"])?;
    for c in &changes {
        w.write_record([
            c.resource.clone(),
            c.side.to_string(),
            c.kind.to_string(),
            c.added_triples.len().to_string(),
            c.removed_triples.len().to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn epoch_dir(dir: &Path) -> EpochPaths {
    EpochPaths {
        o1: dir.join("o1.nt"),
        o2: dir.join("o2.nt"),
        alignment: dir.join("alignment.tsv"),
    }
}

fn label(a: LabelArgs) -> Result<()> {
    let epochs = [
        load_epoch(&epoch_dir(&a.old))?,
        load_epoch(&epoch_dir(&a.new))?,
    ];
    let (changes, outcome) = label_transition(&epochs, 0, a.radius)?;
    write_labels_csv(&outcome.labeled, create(&a.out)?)?;
    println!(
        "{changes} changes: {} labeled ({} affect the alignment), {} beyond radius {}, {} unanchored",
        outcome.labeled.len(),
        outcome.positives(),
        outcome.out_of_radius,
        a.radius,
        outcome.unanchored
    );
    Ok(())
}

fn walks(a: WalksArgs) -> Result<()> {
    let graph = match &a.data_dir {
        Some(dir) => {
            let mut epochs = Vec::new();
            while epochs.len() < a.epochs && dir.join(format!("epoch{}", epochs.len())).is_dir() {
                epochs.push(load_epoch(&EpochPaths::in_data_dir(dir, epochs.len()))?);
            }
            if epochs.is_empty() {
                bail!(PipelineError::data(
                    alignment_drift::pipeline::Stage::Load,
                    format!("no epoch0/ under {}", dir.display())
                ));
            }
            union_graph(&epochs)
        }
        None => {
            if a.nt.is_empty() {
                bail!(ConfigIssue("give --data-dir or --nt".into()));
            }
            let sets =
                a.nt.iter()
                    .map(|p| read_nt(p))
                    .collect::<Result<Vec<_>>>()?;
            build_graph(&sets)
        }
    };
    let cfg = WalkConfig {
        depth: a.depth,
        walks_per_entity: a.walks_per_entity,
        include_literals: a.include_literals,
        seed: a.seed,
    };
    let walks = generate_walks(&graph, &graph.entities(), &cfg)?;
    let mut out = create(&a.out)?;
    write_corpus(&walks, &mut out)?;
    out.flush()?;
    println!("{} walks over {} nodes", walks.len(), graph.node_count());
    Ok(())
}

fn embed(a: EmbedArgs) -> Result<()> {
    let corpus = read_corpus(open(&a.walks)?)?;
    let cfg = TrainConfig {
        dimensions: a.dims,
        window: a.window,
        negatives: a.negatives,
        epochs: a.epochs,
        initial_learning_rate: a.learning_rate,
        min_count: a.min_count,
        seed: a.seed,
        mode: if a.deterministic {
            TrainMode::Sequential
        } else {
            TrainMode::Parallel
        },
    };
    cfg.validate()?;
    let vocab = build_vocab(&corpus, a.min_count)?;
    let model = train_skipgram(&corpus, vocab, &cfg)?;
    let mut out = create(&a.out)?;
    write_word2vec(&model, &mut out)?;
    out.flush()?;
    println!("{} vectors of {} dimensions", model.vocab.len(), a.dims);
    Ok(())
}

fn featurize_cmd(a: FeaturizeArgs) -> Result<()> {
    let labels = read_labels_csv(open(&a.labels)?)?;
    let vectors = read_word2vec(open(&a.embedding)?)?;
    let (data, skipped) = featurize(
        labels.iter().map(|r| (r.resource.as_str(), r.label)),
        &vectors,
    );
    write_dataset_csv(&data, create(&a.out)?)?;
    println!(
        "{} rows, {skipped} skipped (not in the embedding)",
        data.len()
    );
    Ok(())
}

fn train(a: TrainArgs) -> Result<()> {
    let spec = ClassifierSpec::parse(&a.classifier, a.seed)?;
    let data = read_dataset_csv(open(&a.data)?)?;
    let model = fit(&spec, &data)?;
    let mut out = create(&a.out)?;
    writeln!(out, "{}", model.to_json())?;
    out.flush()?;
    println!("{} fitted on {} rows", spec.name(), data.len());
    Ok(())
}

fn evaluate_cmd(a: EvaluateArgs) -> Result<()> {
    let data = read_dataset_csv(open(&a.data)?)?;
    let mut rows = Vec::new();
    for path in &a.models {
        let text =
            std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let model = TrainedModel::from_json(&text)
            .with_context(|| format!("parsing {}", path.display()))?;
        rows.push(ReportRow {
            classifier: model.spec.name(),
            metrics: evaluate(&model, &data)?,
        });
    }
    if let Some(p) = &a.out {
        write_report_csv(&rows, create(p)?)?;
    }
    write_report_table(&rows, std::io::stdout().lock())?;
    Ok(())
}

fn pipeline(a: PipelineArgs) -> Result<()> {
    let file = match &a.config {
        Some(p) => read_config_file(p)?,
        None => Vec::new(),
    };
    let mut overrides: Vec<(String, String)> = Vec::new();
    let mut set = |k: &str, v: Option<String>| {
        if let Some(v) = v {
            overrides.push((k.to_string(), v));
        }
    };
    set(
        "data_dir",
        a.data_dir.map(|p| p.to_string_lossy().into_owned()),
    );
    set("seed", a.seed.map(|v| v.to_string()));
    set("dims", a.dims.map(|v| v.to_string()));
    set("walk_depth", a.walk_depth.map(|v| v.to_string()));
    set(
        "walks_per_entity",
        a.walks_per_entity.map(|v| v.to_string()),
    );
    set("radius", a.radius.map(|v| v.to_string()));
    set("out", a.out.map(|p| p.to_string_lossy().into_owned()));
    set("deterministic", a.deterministic.map(|v| v.to_string()));
    for c in a.classifier {
        overrides.push(("classifier".into(), c));
    }
    let cfg = PipelineConfig::from_entries(&file, &overrides)?;
    let report = run_pipeline(&cfg)?;
    let table = std::fs::read_to_string(cfg.out_dir.join(alignment_drift::pipeline::REPORT_TABLE))?;
    print!("{table}");
    println!("report: {}", report.display());
    Ok(())
}

/// A usage problem detected after argument parsing.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
struct ConfigIssue(String);

fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<PipelineError>() {
            return e.exit_code() as u8;
        }
        let config = cause.is::<ConfigIssue>()
            || matches!(cause.downcast_ref(), Some(ClassifyError::InvalidSpec(_)))
            || matches!(cause.downcast_ref(), Some(SynthError::InvalidConfig(_)))
            || matches!(cause.downcast_ref(), Some(WalkError::InvalidConfig(_)))
            || matches!(cause.downcast_ref(), Some(EmbeddingError::InvalidConfig(_)));
        if config {
            return 2;
        }
        if matches!(
            cause.downcast_ref(),
            Some(ChangeError::InconsistentInput(_))
        ) {
            return 4;
        }
    }
    3
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Synth(a) => synth(a),
        Command::Diff(a) => diff(a),
        Command::Label(a) => label(a),
        Command::Walks(a) => walks(a),
        Command::Embed(a) => embed(a),
        Command::Featurize(a) => featurize_cmd(a),
        Command::Train(a) => train(a),
        Command::Evaluate(a) => evaluate_cmd(a),
        Command::Pipeline(a) => pipeline(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
