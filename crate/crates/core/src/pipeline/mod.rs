//! End-to-end run: diff and label two epoch transitions, embed the union
//! graph, then train on the first transition and test on the second.

mod config;

use std::fmt;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde_json::json;
use thiserror::Error;

pub use config::{parse_config_text, read_config_file, EpochPaths, PipelineConfig, CONFIG_KEYS};

use crate::alignment::{diff_alignments, parse_alignment, reify, statement_index, Alignment};
use crate::changes::{
    diff_ontologies, label_changes, write_labels_csv, LabelingOutcome, Side, StatementNodes,
};
use crate::classify::{
    evaluate, featurize_changes, fit, write_report_csv, write_report_table, ClassifierSpec,
    Dataset, ReportRow,
};
use crate::embedding::{build_vocab, train_skipgram, write_word2vec, EmbeddingModel, TrainConfig};
use crate::rdf::{build_graph, parse_ntriples, Graph, TripleSet};
use crate::walks::{generate_walks, write_corpus, Walk, WalkConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Config,
    Load,
    Label,
    Walks,
    Embed,
    Featurize,
    Train,
    Evaluate,
    Write,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stage::Config => "config",
            Stage::Load => "load",
            Stage::Label => "label",
            Stage::Walks => "walks",
            Stage::Embed => "embed",
            Stage::Featurize => "featurize",
            Stage::Train => "train",
            Stage::Evaluate => "evaluate",
            Stage::Write => "write",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Config,
    Data,
    Internal,
}

#[derive(Debug, Error)]
#[error("[{stage}] {message}")]
pub struct PipelineError {
    pub stage: Stage,
    pub kind: ErrorKind,
    pub message: String,
}

impl PipelineError {
    pub fn config(stage: Stage, message: impl Into<String>) -> Self {
        PipelineError {
            stage,
            kind: ErrorKind::Config,
            message: message.into(),
        }
    }

    pub fn data(stage: Stage, message: impl fmt::Display) -> Self {
        PipelineError {
            stage,
            kind: ErrorKind::Data,
            message: message.to_string(),
        }
    }

    pub fn internal(stage: Stage, message: impl fmt::Display) -> Self {
        PipelineError {
            stage,
            kind: ErrorKind::Internal,
            message: message.to_string(),
        }
    }

    /// Process exit status: 2 config, 3 data, 4 internal.
    pub fn exit_code(&self) -> i32 {
        match self.kind {
            ErrorKind::Config => 2,
            ErrorKind::Data => 3,
            ErrorKind::Internal => 4,
        }
    }
}

/// One snapshot of both ontologies and their alignment.
#[derive(Debug, Clone, PartialEq)]
pub struct EpochInput {
    pub o1: TripleSet,
    pub o2: TripleSet,
    pub alignment: Alignment,
}

impl From<&crate::synth::Snapshot> for EpochInput {
    fn from(s: &crate::synth::Snapshot) -> Self {
        EpochInput {
            o1: s.o1.clone(),
            o2: s.o2.clone(),
            alignment: s.alignment.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSettings {
    pub walk: WalkConfig,
    pub train: TrainConfig,
    pub radius: usize,
    pub classifiers: Vec<ClassifierSpec>,
}

impl RunSettings {
    pub fn from_config(cfg: &PipelineConfig) -> Self {
        RunSettings {
            walk: cfg.walk.clone(),
            train: cfg.train.clone(),
            radius: cfg.radius,
            classifiers: cfg.classifiers.clone(),
        }
    }
}

/// Statement IRI prefix for epoch `t`, so reified statements of different
/// epochs stay distinct nodes in the union graph.
pub fn epoch_base(t: usize) -> String {
    format!("{}e{t}/", crate::alignment::DEFAULT_BASE_IRI)
}

/// Labeled changes for one epoch transition plus the counts behind them.
#[derive(Debug, Clone)]
pub struct TransitionLabels {
    pub changes: usize,
    pub outcome: LabelingOutcome,
    pub dataset: Dataset,
    pub skipped_oov: usize,
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub train: TransitionLabels,
    pub test: TransitionLabels,
    pub walks: Vec<Walk>,
    pub embedding: EmbeddingModel,
    pub report: Vec<ReportRow>,
    pub graph_nodes: usize,
    pub graph_edges: usize,
    pub entities: usize,
}

impl RunOutput {
    pub fn best_affects_precision(&self) -> Option<&ReportRow> {
        self.report.iter().max_by(|a, b| {
            a.metrics
                .affects
                .precision
                .total_cmp(&b.metrics.affects.precision)
        })
    }
}

fn epoch_graph(epoch: &EpochInput, t: usize) -> Graph {
    let statements = reify(&epoch.alignment, &epoch_base(t));
    build_graph([&epoch.o1, &epoch.o2, &statements])
}

/// Leading epochs whose union graph the embedding is trained on.
pub const EMBEDDED_EPOCHS: usize = 2;

/// Both ontologies of every given epoch plus each epoch's reified alignment.
pub fn union_graph(epochs: &[EpochInput]) -> Graph {
    let statements: Vec<TripleSet> = epochs
        .iter()
        .enumerate()
        .map(|(t, e)| reify(&e.alignment, &epoch_base(t)))
        .collect();
    build_graph(
        epochs
            .iter()
            .flat_map(|e| [&e.o1, &e.o2])
            .chain(statements.iter()),
    )
}

/// Diffs both ontologies between epochs `t` and `t + 1` and labels the changes.
pub fn label_transition(
    epochs: &[EpochInput],
    t: usize,
    radius: usize,
) -> Result<(usize, LabelingOutcome), PipelineError> {
    let (old, new) = (&epochs[t], &epochs[t + 1]);
    let mut changes = diff_ontologies(&old.o1, &new.o1, Side::O1);
    changes.extend(diff_ontologies(&old.o2, &new.o2, Side::O2));
    let graph = epoch_graph(old, t);
    let statements =
        StatementNodes::resolve(&graph, &statement_index(&old.alignment, &epoch_base(t)))
            .map_err(|e| PipelineError::internal(Stage::Label, e))?;
    let delta = diff_alignments(&old.alignment, &new.alignment);
    let outcome = label_changes(&changes, &graph, &delta, &statements, radius)
        .map_err(|e| PipelineError::internal(Stage::Label, e))?;
    Ok((changes.len(), outcome))
}

/// Runs every stage in memory on three epochs.
pub fn run(epochs: &[EpochInput], settings: &RunSettings) -> Result<RunOutput, PipelineError> {
    if epochs.len() != 3 {
        return Err(PipelineError::config(
            Stage::Config,
            format!("expected 3 epochs, got {}", epochs.len()),
        ));
    }
    let (train_changes, train_outcome) = label_transition(epochs, 0, settings.radius)?;
    let (test_changes, test_outcome) = label_transition(epochs, 1, settings.radius)?;

    // The last epoch only supplies the outcome of the test changes; keeping
    // it out of the graph keeps that outcome out of the features.
    let graph = union_graph(&epochs[..EMBEDDED_EPOCHS]);
    let starts = graph.entities();
    let walks = generate_walks(&graph, &starts, &settings.walk)
        .map_err(|e| PipelineError::data(Stage::Walks, e))?;

    let vocab = build_vocab(&walks, settings.train.min_count)
        .map_err(|e| PipelineError::data(Stage::Embed, e))?;
    let embedding = train_skipgram(&walks, vocab, &settings.train)
        .map_err(|e| PipelineError::data(Stage::Embed, e))?;
    let vectors = embedding.keyed_vectors();

    let featurize = |changes: usize, outcome: LabelingOutcome| {
        let (dataset, skipped_oov) = featurize_changes(&outcome.labeled, &vectors);
        TransitionLabels {
            changes,
            outcome,
            dataset,
            skipped_oov,
        }
    };
    let train = featurize(train_changes, train_outcome);
    let test = featurize(test_changes, test_outcome);
    if train.dataset.is_empty() {
        return Err(PipelineError::data(
            Stage::Featurize,
            "no labeled training changes near alignment statements",
        ));
    }
    if test.dataset.is_empty() {
        return Err(PipelineError::data(
            Stage::Featurize,
            "no labeled test changes near alignment statements",
        ));
    }

    let report = settings
        .classifiers
        .par_iter()
        .map(|spec| {
            let model = fit(spec, &train.dataset)
                .map_err(|e| PipelineError::data(Stage::Train, format!("{}: {e}", spec.name())))?;
            let metrics = evaluate(&model, &test.dataset).map_err(|e| {
                PipelineError::internal(Stage::Evaluate, format!("{}: {e}", spec.name()))
            })?;
            Ok(ReportRow {
                classifier: spec.name(),
                metrics,
            })
        })
        .collect::<Result<Vec<_>, PipelineError>>()?;

    Ok(RunOutput {
        train,
        test,
        walks,
        embedding,
        report,
        graph_nodes: graph.node_count(),
        graph_edges: graph.edge_count(),
        entities: starts.len(),
    })
}

fn read(path: &Path) -> Result<String, PipelineError> {
    std::fs::read_to_string(path)
        .map_err(|e| PipelineError::data(Stage::Load, format!("{}: {e}", path.display())))
}

/// Loads one snapshot. Blank nodes are scoped per side so the two
/// ontologies never share them.
pub fn load_epoch(paths: &EpochPaths) -> Result<EpochInput, PipelineError> {
    let load_nt = |path: &Path, scope: &str| -> Result<TripleSet, PipelineError> {
        let set = parse_ntriples(&read(path)?)
            .map_err(|e| PipelineError::data(Stage::Load, format!("{}: {e}", path.display())))?;
        Ok(set.scope_blank_nodes(scope))
    };
    let o1 = load_nt(&paths.o1, "o1")?;
    let o2 = load_nt(&paths.o2, "o2")?;
    let alignment = parse_alignment(&read(&paths.alignment)?).map_err(|e| {
        PipelineError::data(Stage::Load, format!("{}: {e}", paths.alignment.display()))
    })?;
    Ok(EpochInput { o1, o2, alignment })
}

pub const REPORT_CSV: &str = "report.csv";
pub const REPORT_TABLE: &str = "report.txt";
pub const MANIFEST: &str = "manifest.json";
pub const WALKS_FILE: &str = "walks.txt";
pub const EMBEDDING_FILE: &str = "embedding.txt";
pub const TRAIN_LABELS: &str = "labels_train.csv";
pub const TEST_LABELS: &str = "labels_test.csv";

fn transition_json(name: &str, t: &TransitionLabels, labels_file: &str) -> serde_json::Value {
    let positives = t.outcome.positives();
    let labeled = t.outcome.labeled.len();
    json!({
        "name": name,
        "changes": t.changes,
        "labeled": labeled,
        "affects_alignment": positives,
        "no_effect": labeled - positives,
        "unanchored": t.outcome.unanchored,
        "out_of_radius": t.outcome.out_of_radius,
        "featurized": t.dataset.len(),
        "featurized_affects_alignment": t.dataset.positives(),
        "skipped_oov": t.skipped_oov,
        "majority_baseline": t.dataset.majority_baseline(),
        "labels_file": labels_file,
    })
}

/// Run manifest: inputs, settings, seeds and the counts behind the report.
pub fn manifest(cfg: &PipelineConfig, out: &RunOutput) -> serde_json::Value {
    let path = |p: &Path| p.to_string_lossy().into_owned();
    json!({
        "seed": cfg.seed,
        "epochs": cfg.epochs.iter().map(|e| json!({
            "o1": path(&e.o1),
            "o2": path(&e.o2),
            "alignment": path(&e.alignment),
        })).collect::<Vec<_>>(),
        "radius": cfg.radius,
        "walk": cfg.walk,
        "embedding": cfg.train,
        "classifiers": cfg.classifiers.iter().map(|c| json!({
            "name": c.name(),
            "seed": c.seed,
            "hyperparameters": c.hyper,
        })).collect::<Vec<_>>(),
        "graph": {
            "nodes": out.graph_nodes,
            "edges": out.graph_edges,
            "walk_starts": out.entities,
        },
        "corpus": {
            "walks": out.walks.len(),
            "tokens": out.walks.iter().map(Walk::len).sum::<usize>(),
            "vocabulary": out.embedding.vocab.len(),
        },
        "train": transition_json("epoch0->epoch1", &out.train, TRAIN_LABELS),
        "test": transition_json("epoch1->epoch2", &out.test, TEST_LABELS),
        "artifacts": {
            "walks": WALKS_FILE,
            "embedding": EMBEDDING_FILE,
            "report_csv": REPORT_CSV,
            "report_table": REPORT_TABLE,
        },
    })
}

/// Writes every artifact of a finished run into `dir`.
pub fn write_artifacts(
    cfg: &PipelineConfig,
    out: &RunOutput,
    dir: &Path,
) -> Result<PathBuf, PipelineError> {
    let werr = |e: &dyn fmt::Display| PipelineError::data(Stage::Write, e.to_string());
    std::fs::create_dir_all(dir).map_err(|e| werr(&format!("{}: {e}", dir.display())))?;
    let create = |name: &str| {
        std::fs::File::create(dir.join(name))
            .map(BufWriter::new)
            .map_err(|e| werr(&format!("{name}: {e}")))
    };
    write_corpus(&out.walks, create(WALKS_FILE)?).map_err(|e| werr(&e))?;
    write_word2vec(&out.embedding, create(EMBEDDING_FILE)?).map_err(|e| werr(&e))?;
    write_labels_csv(&out.train.outcome.labeled, create(TRAIN_LABELS)?).map_err(|e| werr(&e))?;
    write_labels_csv(&out.test.outcome.labeled, create(TEST_LABELS)?).map_err(|e| werr(&e))?;
    write_report_csv(&out.report, create(REPORT_CSV)?).map_err(|e| werr(&e))?;
    write_report_table(&out.report, create(REPORT_TABLE)?).map_err(|e| werr(&e))?;
    let text = serde_json::to_string_pretty(&manifest(cfg, out)).map_err(|e| werr(&e))?;
    std::fs::write(dir.join(MANIFEST), text + "\n").map_err(|e| werr(&e))?;
    Ok(dir.join(REPORT_CSV))
}

/// Loads the configured files, runs every stage and writes the artifacts.
/// Returns the path of the CSV report.
pub fn run_pipeline(cfg: &PipelineConfig) -> Result<PathBuf, PipelineError> {
    cfg.validate()?;
    let epochs = cfg
        .epochs
        .iter()
        .map(load_epoch)
        .collect::<Result<Vec<_>, _>>()?;
    let out = run(&epochs, &RunSettings::from_config(cfg))?;
    write_artifacts(cfg, &out, &cfg.out_dir)
}
