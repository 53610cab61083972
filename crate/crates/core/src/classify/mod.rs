//! Change classification: feature rows from embeddings, the classifier
//! roster and evaluation metrics.
//!
//! Every classifier is binary with [`ImpactLabel::AffectsAlignment`] as the
//! positive class. Decision ties always resolve toward the positive class.
//! Training rows are put in a canonical order before fitting, so fitted
//! models do not depend on row order.

mod dataset;
mod forest;
mod knn;
mod logistic;
mod metrics;
mod mlp;
mod naive_bayes;
mod scale;
mod spec;
mod svm;
mod tree;

use ndarray::{Array2, ArrayView1};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use dataset::{
    featurize, featurize_changes, read_dataset_csv, write_dataset_csv, Dataset, Row,
};
pub use forest::{ForestParams, RandomForest};
pub use knn::{Knn, KnnParams};
pub use logistic::{LogisticParams, LogisticRegression};
pub use metrics::{
    evaluate, f1_score, metrics_from_predictions, write_report_csv, write_report_table,
    ClassMetrics, Confusion, Metrics, ReportRow,
};
pub use mlp::{Mlp, MlpGradients, MlpParams};
pub use naive_bayes::{GaussianNb, NbParams};
pub use scale::Standardizer;
pub use spec::{ClassifierKind, ClassifierSpec, Hyper};
pub use svm::{LinearSvm, LinearSvmParams, RbfSvm, RbfSvmParams};
pub use tree::{DecisionTree, TreeParams};

use crate::changes::ImpactLabel;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ClassifyError {
    #[error("training set is empty")]
    EmptyDataset,
    #[error("all training rows are identical but carry both labels")]
    DegenerateData,
    #[error("feature dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid classifier spec: {0}")]
    InvalidSpec(String),
    #[error("dataset file line {line}: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for ClassifyError {
    fn from(e: std::io::Error) -> Self {
        ClassifyError::Io(e.to_string())
    }
}

impl From<csv::Error> for ClassifyError {
    fn from(e: csv::Error) -> Self {
        ClassifyError::Io(e.to_string())
    }
}

/// Learned state for each classifier kind.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum ModelParams {
    /// Single-class training data: always predict that class.
    Constant(ImpactLabel),
    Logistic(LogisticRegression),
    GaussianNb(GaussianNb),
    Knn(Knn),
    Cart(DecisionTree),
    RandomForest(RandomForest),
    SvmLinear(LinearSvm),
    SvmRbf(RbfSvm),
    Mlp(Mlp),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrainedModel {
    pub spec: ClassifierSpec,
    pub dimensions: usize,
    pub params: ModelParams,
}

/// Training data as a dense matrix plus positive-class flags, in canonical row order.
pub(crate) struct TrainingData {
    pub x: Array2<f64>,
    pub y: Vec<bool>,
}

impl TrainingData {
    fn from_dataset(train: &Dataset) -> Self {
        let mut rows: Vec<&Row> = train.rows.iter().collect();
        rows.sort_by(|a, b| {
            a.features
                .iter()
                .zip(&b.features)
                .map(|(x, y)| x.total_cmp(y))
                .find(|o| o.is_ne())
                .unwrap_or(std::cmp::Ordering::Equal)
                .then_with(|| a.label.cmp(&b.label))
        });
        let d = train.dimensions().unwrap_or(0);
        let mut x = Array2::zeros((rows.len(), d));
        for (i, r) in rows.iter().enumerate() {
            x.row_mut(i)
                .iter_mut()
                .zip(&r.features)
                .for_each(|(dst, &src)| *dst = src);
        }
        let y = rows.iter().map(|r| r.label.is_positive()).collect();
        TrainingData { x, y }
    }

    pub fn len(&self) -> usize {
        self.y.len()
    }

    pub fn dims(&self) -> usize {
        self.x.ncols()
    }
}

/// Fits one classifier. Deterministic given `spec.seed`.
pub fn fit(spec: &ClassifierSpec, train: &Dataset) -> Result<TrainedModel, ClassifyError> {
    spec.validate()?;
    if train.rows.is_empty() {
        return Err(ClassifyError::EmptyDataset);
    }
    let dimensions = train.validate_dimensions()?;
    let data = TrainingData::from_dataset(train);

    let positives = data.y.iter().filter(|&&y| y).count();
    let params = if positives == 0 || positives == data.len() {
        ModelParams::Constant(ImpactLabel::from_positive(positives > 0))
    } else {
        let first = data.x.row(0);
        if data.x.rows().into_iter().all(|r| r == first) {
            return Err(ClassifyError::DegenerateData);
        }
        match &spec.hyper {
            Hyper::Logistic(p) => ModelParams::Logistic(LogisticRegression::fit(&data, p)),
            Hyper::GaussianNb(p) => ModelParams::GaussianNb(GaussianNb::fit(&data, p)),
            Hyper::Knn(p) => ModelParams::Knn(Knn::fit(&data, p)),
            Hyper::Cart(p) => ModelParams::Cart(DecisionTree::fit(&data, p, None, spec.seed)),
            Hyper::RandomForest(p) => {
                ModelParams::RandomForest(RandomForest::fit(&data, p, spec.seed))
            }
            Hyper::SvmLinear(p) => ModelParams::SvmLinear(LinearSvm::fit(&data, p, spec.seed)),
            Hyper::SvmRbf(p) => ModelParams::SvmRbf(RbfSvm::fit(&data, p, spec.seed)),
            Hyper::Mlp(p) => ModelParams::Mlp(Mlp::fit(&data, p, spec.seed)),
        }
    };
    Ok(TrainedModel {
        spec: spec.clone(),
        dimensions,
        params,
    })
}

impl TrainedModel {
    pub fn predict(&self, features: &[f64]) -> Result<ImpactLabel, ClassifyError> {
        if features.len() != self.dimensions {
            return Err(ClassifyError::DimensionMismatch {
                expected: self.dimensions,
                got: features.len(),
            });
        }
        let x = ArrayView1::from(features);
        let positive = match &self.params {
            ModelParams::Constant(label) => return Ok(*label),
            ModelParams::Logistic(m) => m.predict(x),
            ModelParams::GaussianNb(m) => m.predict(x),
            ModelParams::Knn(m) => m.predict(x),
            ModelParams::Cart(m) => m.predict(x),
            ModelParams::RandomForest(m) => m.predict(x),
            ModelParams::SvmLinear(m) => m.predict(x),
            ModelParams::SvmRbf(m) => m.predict(x),
            ModelParams::Mlp(m) => m.predict(x),
        };
        Ok(ImpactLabel::from_positive(positive))
    }

    pub fn predict_all(&self, data: &Dataset) -> Result<Vec<ImpactLabel>, ClassifyError> {
        data.rows
            .iter()
            .map(|r| self.predict(&r.features))
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("models serialize")
    }

    pub fn from_json(text: &str) -> Result<Self, ClassifyError> {
        serde_json::from_str(text).map_err(|e| ClassifyError::Malformed {
            line: e.line(),
            reason: e.to_string(),
        })
    }
}

pub fn predict(model: &TrainedModel, features: &[f64]) -> Result<ImpactLabel, ClassifyError> {
    model.predict(features)
}
