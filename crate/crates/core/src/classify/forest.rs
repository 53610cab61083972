use ndarray::ArrayView1;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{DecisionTree, TrainingData, TreeParams};
use crate::seeds;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForestParams {
    pub trees: usize,
    pub tree: TreeParams,
    /// Features tried per split; `None` means `round(sqrt(d))`.
    pub max_features: Option<usize>,
}

impl Default for ForestParams {
    fn default() -> Self {
        ForestParams {
            trees: 100,
            tree: TreeParams::default(),
            max_features: None,
        }
    }
}

/// Bagged CART trees with per-split feature subsampling and a majority vote.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RandomForest {
    trees: Vec<DecisionTree>,
}

impl RandomForest {
    pub(crate) fn fit(data: &TrainingData, params: &ForestParams, seed: u64) -> Self {
        let d = data.dims();
        let n = data.len();
        let max_features = params
            .max_features
            .unwrap_or_else(|| ((d as f64).sqrt().round() as usize).max(1))
            .min(d);
        let trees = (0..params.trees)
            .into_par_iter()
            .map(|t| {
                let mut rng = seeds::rng(seed, &[t as u64]);
                let rows: Vec<usize> = (0..n).map(|_| rng.gen_range(0..n)).collect();
                DecisionTree::fit_rows(data, &rows, &params.tree, Some(max_features), rng)
            })
            .collect();
        RandomForest { trees }
    }

    pub fn len(&self) -> usize {
        self.trees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trees.is_empty()
    }

    pub(crate) fn predict(&self, x: ArrayView1<f64>) -> bool {
        let votes = self.trees.iter().filter(|t| t.predict(x)).count();
        2 * votes >= self.trees.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::Array2;

    #[test]
    fn same_seed_same_forest() {
        let mut x = Array2::zeros((40, 3));
        let mut y = Vec::new();
        for i in 0..40 {
            x[[i, 0]] = i as f64;
            x[[i, 1]] = (i % 7) as f64;
            x[[i, 2]] = (i % 3) as f64;
            y.push(i >= 20);
        }
        let data = TrainingData { x, y };
        let p = ForestParams {
            trees: 15,
            ..ForestParams::default()
        };
        let a = RandomForest::fit(&data, &p, 4);
        let b = RandomForest::fit(&data, &p, 4);
        assert_eq!(a.len(), 15);
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
        let correct = (0..40)
            .filter(|&i| a.predict(data.x.row(i)) == data.y[i])
            .count();
        assert!(correct >= 36);
    }
}
