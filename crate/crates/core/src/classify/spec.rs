use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{
    ClassifyError, ForestParams, KnnParams, LinearSvmParams, LogisticParams, MlpParams, NbParams,
    RbfSvmParams, TreeParams,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ClassifierKind {
    Lr,
    GaussianNb,
    Knn,
    Cart,
    RandomForest,
    SvmRbf,
    SvmLinear,
    Mlp,
}

impl ClassifierKind {
    /// Report order.
    pub const ALL: [ClassifierKind; 8] = [
        ClassifierKind::Lr,
        ClassifierKind::GaussianNb,
        ClassifierKind::Knn,
        ClassifierKind::Cart,
        ClassifierKind::RandomForest,
        ClassifierKind::SvmRbf,
        ClassifierKind::SvmLinear,
        ClassifierKind::Mlp,
    ];

    /// Short name accepted on the command line.
    pub fn key(self) -> &'static str {
        match self {
            ClassifierKind::Lr => "lr",
            ClassifierKind::GaussianNb => "nb",
            ClassifierKind::Knn => "knn",
            ClassifierKind::Cart => "cart",
            ClassifierKind::RandomForest => "rf",
            ClassifierKind::SvmRbf => "svm-rbf",
            ClassifierKind::SvmLinear => "svm-linear",
            ClassifierKind::Mlp => "mlp",
        }
    }

    /// Row name in metric reports.
    pub fn display_name(self) -> &'static str {
        match self {
            ClassifierKind::Lr => "LR",
            ClassifierKind::GaussianNb => "NB",
            ClassifierKind::Knn => "KNN",
            ClassifierKind::Cart => "CART",
            ClassifierKind::RandomForest => "RandomForest",
            ClassifierKind::SvmRbf => "SVM rbf",
            ClassifierKind::SvmLinear => "SVM linear",
            ClassifierKind::Mlp => "MLP",
        }
    }

    /// Whether the kind can represent non-linear decision boundaries.
    pub fn is_nonlinear(self) -> bool {
        !matches!(
            self,
            ClassifierKind::Lr | ClassifierKind::SvmLinear | ClassifierKind::GaussianNb
        )
    }
}

impl FromStr for ClassifierKind {
    type Err = ClassifyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm = s.to_ascii_lowercase().replace('_', "-");
        Ok(match norm.as_str() {
            "lr" | "logistic" => ClassifierKind::Lr,
            "nb" | "gaussiannb" | "gaussian-nb" => ClassifierKind::GaussianNb,
            "knn" => ClassifierKind::Knn,
            "cart" | "tree" => ClassifierKind::Cart,
            "rf" | "randomforest" | "random-forest" => ClassifierKind::RandomForest,
            "svm-rbf" | "svmrbf" => ClassifierKind::SvmRbf,
            "svm-linear" | "svmlinear" => ClassifierKind::SvmLinear,
            "mlp" => ClassifierKind::Mlp,
            _ => {
                return Err(ClassifyError::InvalidSpec(format!(
                    "unknown classifier {s:?}"
                )))
            }
        })
    }
}

impl fmt::Display for ClassifierKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.display_name())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Hyper {
    Logistic(LogisticParams),
    GaussianNb(NbParams),
    Knn(KnnParams),
    Cart(TreeParams),
    RandomForest(ForestParams),
    SvmLinear(LinearSvmParams),
    SvmRbf(RbfSvmParams),
    Mlp(MlpParams),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifierSpec {
    pub hyper: Hyper,
    pub seed: u64,
}

impl ClassifierSpec {
    pub fn default_for(kind: ClassifierKind, seed: u64) -> Self {
        let hyper = match kind {
            ClassifierKind::Lr => Hyper::Logistic(LogisticParams::default()),
            ClassifierKind::GaussianNb => Hyper::GaussianNb(NbParams::default()),
            ClassifierKind::Knn => Hyper::Knn(KnnParams::default()),
            ClassifierKind::Cart => Hyper::Cart(TreeParams::default()),
            ClassifierKind::RandomForest => Hyper::RandomForest(ForestParams::default()),
            ClassifierKind::SvmLinear => Hyper::SvmLinear(LinearSvmParams::default()),
            ClassifierKind::SvmRbf => Hyper::SvmRbf(RbfSvmParams::default()),
            ClassifierKind::Mlp => Hyper::Mlp(MlpParams::default()),
        };
        ClassifierSpec { hyper, seed }
    }

    /// All eight kinds with default hyperparameters.
    pub fn roster(seed: u64) -> Vec<Self> {
        ClassifierKind::ALL
            .iter()
            .map(|&k| Self::default_for(k, seed))
            .collect()
    }

    pub fn kind(&self) -> ClassifierKind {
        match self.hyper {
            Hyper::Logistic(_) => ClassifierKind::Lr,
            Hyper::GaussianNb(_) => ClassifierKind::GaussianNb,
            Hyper::Knn(_) => ClassifierKind::Knn,
            Hyper::Cart(_) => ClassifierKind::Cart,
            Hyper::RandomForest(_) => ClassifierKind::RandomForest,
            Hyper::SvmLinear(_) => ClassifierKind::SvmLinear,
            Hyper::SvmRbf(_) => ClassifierKind::SvmRbf,
            Hyper::Mlp(_) => ClassifierKind::Mlp,
        }
    }

    /// Report label, e.g. `MLP` or `MLP (500,500)` for non-default layers.
    pub fn name(&self) -> String {
        match &self.hyper {
            Hyper::Mlp(p) if p.hidden != MlpParams::default().hidden => format!(
                "MLP ({})",
                p.hidden
                    .iter()
                    .map(usize::to_string)
                    .collect::<Vec<_>>()
                    .join(",")
            ),
            _ => self.kind().display_name().to_string(),
        }
    }

    pub fn validate(&self) -> Result<(), ClassifyError> {
        let bad = |m: &str| Err(ClassifyError::InvalidSpec(m.to_string()));
        match &self.hyper {
            Hyper::Logistic(p) if !(p.l2 >= 0.0) || p.max_iter == 0 => bad("lr: l2 >= 0, max_iter >= 1"),
            Hyper::GaussianNb(p) if !(p.var_smoothing > 0.0) => bad("nb: var_smoothing > 0"),
            Hyper::Knn(p) if p.k == 0 => bad("knn: k >= 1"),
            Hyper::Cart(p) if p.max_depth == 0 || p.min_samples_split < 2 => {
                bad("cart: max_depth >= 1, min_samples_split >= 2")
            }
            Hyper::RandomForest(p)
                if p.trees == 0 || p.tree.max_depth == 0 || p.tree.min_samples_split < 2 || p.max_features == Some(0) =>
            {
                bad("rf: trees >= 1, max_depth >= 1, min_samples_split >= 2, max_features >= 1")
            }
            Hyper::SvmLinear(p) if !(p.l2 > 0.0) || p.epochs == 0 => bad("svm-linear: l2 > 0, epochs >= 1"),
            Hyper::SvmRbf(p) if !(p.l2 > 0.0) || p.epochs == 0 || p.gamma.is_some_and(|g| !(g > 0.0)) => {
                bad("svm-rbf: l2 > 0, epochs >= 1, gamma > 0")
            }
            Hyper::Mlp(p)
                if p.hidden.is_empty()
                    || p.hidden.contains(&0)
                    || p.epochs == 0
                    || p.batch_size == 0
                    || !(p.learning_rate > 0.0)
                    || !(p.tol >= 0.0) =>
            {
                bad("mlp: at least one hidden layer, all sizes >= 1, epochs >= 1, batch_size >= 1, learning_rate > 0, tol >= 0")
            }
            _ => Ok(()),
        }
    }

    /// Parses `KIND[:key=value[,key=value...]]`, e.g. `knn:k=3` or
    /// `mlp:layers=500-500`.
    pub fn parse(text: &str, seed: u64) -> Result<Self, ClassifyError> {
        let (kind, rest) = match text.split_once(':') {
            Some((k, r)) => (k, Some(r)),
            None => (text, None),
        };
        let mut spec = Self::default_for(kind.trim().parse()?, seed);
        for pair in rest
            .into_iter()
            .flat_map(|r| r.split(','))
            .filter(|p| !p.trim().is_empty())
        {
            let (key, value) = pair.split_once('=').ok_or_else(|| {
                ClassifyError::InvalidSpec(format!("expected key=value, got {pair:?}"))
            })?;
            spec.set(key.trim(), value.trim())?;
        }
        spec.validate()?;
        Ok(spec)
    }

    fn set(&mut self, key: &str, value: &str) -> Result<(), ClassifyError> {
        fn num<T: FromStr>(key: &str, value: &str) -> Result<T, ClassifyError> {
            value
                .parse()
                .map_err(|_| ClassifyError::InvalidSpec(format!("bad value {value:?} for {key}")))
        }
        let unknown = || {
            Err(ClassifyError::InvalidSpec(format!(
                "unknown hyperparameter {key:?}"
            )))
        };
        if key == "seed" {
            self.seed = num(key, value)?;
            return Ok(());
        }
        match &mut self.hyper {
            Hyper::Logistic(p) => match key {
                "l2" => p.l2 = num(key, value)?,
                "tol" => p.tol = num(key, value)?,
                "max_iter" => p.max_iter = num(key, value)?,
                _ => return unknown(),
            },
            Hyper::GaussianNb(p) => match key {
                "var_smoothing" => p.var_smoothing = num(key, value)?,
                _ => return unknown(),
            },
            Hyper::Knn(p) => match key {
                "k" => p.k = num(key, value)?,
                _ => return unknown(),
            },
            Hyper::Cart(p) => match key {
                "max_depth" => p.max_depth = num(key, value)?,
                "min_samples_split" => p.min_samples_split = num(key, value)?,
                _ => return unknown(),
            },
            Hyper::RandomForest(p) => match key {
                "trees" => p.trees = num(key, value)?,
                "max_depth" => p.tree.max_depth = num(key, value)?,
                "min_samples_split" => p.tree.min_samples_split = num(key, value)?,
                "max_features" => p.max_features = Some(num(key, value)?),
                _ => return unknown(),
            },
            Hyper::SvmLinear(p) => match key {
                "l2" => p.l2 = num(key, value)?,
                "epochs" => p.epochs = num(key, value)?,
                _ => return unknown(),
            },
            Hyper::SvmRbf(p) => match key {
                "l2" => p.l2 = num(key, value)?,
                "epochs" => p.epochs = num(key, value)?,
                "gamma" => p.gamma = Some(num(key, value)?),
                _ => return unknown(),
            },
            Hyper::Mlp(p) => match key {
                "layers" | "hidden" => {
                    p.hidden = value
                        .split(['-', 'x', ';'])
                        .map(|s| num(key, s.trim()))
                        .collect::<Result<_, _>>()?
                }
                "epochs" => p.epochs = num(key, value)?,
                "batch_size" => p.batch_size = num(key, value)?,
                "learning_rate" | "lr" => p.learning_rate = num(key, value)?,
                "tol" => p.tol = num(key, value)?,
                _ => return unknown(),
            },
        }
        Ok(())
    }
}
