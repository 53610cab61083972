use ndarray::{Array2, ArrayView1};
use serde::{Deserialize, Serialize};

use super::TrainingData;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KnnParams {
    pub k: usize,
}

impl Default for KnnParams {
    fn default() -> Self {
        KnnParams { k: 5 }
    }
}

/// k-nearest neighbours, Euclidean distance, majority vote.
///
/// Equal distances keep training order; vote ties go to the positive class.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Knn {
    k: usize,
    x: Array2<f64>,
    y: Vec<bool>,
}

impl Knn {
    pub(crate) fn fit(data: &TrainingData, params: &KnnParams) -> Self {
        Knn {
            k: params.k,
            x: data.x.clone(),
            y: data.y.clone(),
        }
    }

    pub(crate) fn predict(&self, x: ArrayView1<f64>) -> bool {
        let mut dist: Vec<(f64, usize)> = self
            .x
            .rows()
            .into_iter()
            .enumerate()
            .map(|(i, row)| {
                let d2: f64 = row.iter().zip(x).map(|(a, b)| (a - b) * (a - b)).sum();
                (d2, i)
            })
            .collect();
        let k = self.k.min(dist.len());
        dist.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let pos = dist[..k].iter().filter(|(_, i)| self.y[*i]).count();
        2 * pos >= k
    }
}
