use ndarray::{Array1, ArrayView1};
use serde::{Deserialize, Serialize};

use super::{Standardizer, TrainingData};
use crate::embedding::sigmoid;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogisticParams {
    /// L2 penalty on the weights (not the intercept).
    pub l2: f64,
    /// Stop when the gradient norm falls below this.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for LogisticParams {
    fn default() -> Self {
        LogisticParams {
            l2: 1e-4,
            tol: 1e-6,
            max_iter: 10_000,
        }
    }
}

/// Binary logistic regression trained by full-batch gradient descent on
/// standardized features, with step size `1/L` from a power-iteration
/// estimate of the loss's Lipschitz constant.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LogisticRegression {
    scaler: Standardizer,
    weights: Array1<f64>,
    bias: f64,
    pub iterations: usize,
}

impl LogisticRegression {
    pub(crate) fn fit(data: &TrainingData, params: &LogisticParams) -> Self {
        let scaler = Standardizer::fit(&data.x);
        let x = scaler.transform(&data.x);
        let n = data.len() as f64;
        let d = data.dims();
        let t: Array1<f64> = data.y.iter().map(|&y| if y { 1.0 } else { 0.0 }).collect();

        // Largest eigenvalue of [X 1]ᵀ[X 1] / n.
        let mut v = Array1::from_elem(d + 1, 1.0 / ((d + 1) as f64).sqrt());
        let mut eig = 1.0;
        for _ in 0..50 {
            let xv = x.dot(&v.slice(ndarray::s![..d])) + v[d];
            let mut next = Array1::zeros(d + 1);
            next.slice_mut(ndarray::s![..d])
                .assign(&(x.t().dot(&xv) / n));
            next[d] = xv.sum() / n;
            let norm = next.dot(&next).sqrt();
            if norm == 0.0 {
                break;
            }
            eig = norm;
            v = next / norm;
        }
        let lipschitz = 0.25 * eig * 1.1 + params.l2;
        let step = 1.0 / lipschitz;

        let mut w = Array1::<f64>::zeros(d);
        let mut b = 0.0;
        let mut iterations = 0;
        for _ in 0..params.max_iter {
            let z = x.dot(&w) + b;
            let residual = z.mapv(sigmoid) - &t;
            let grad_w = x.t().dot(&residual) / n + &w * params.l2;
            let grad_b = residual.sum() / n;
            let norm = (grad_w.dot(&grad_w) + grad_b * grad_b).sqrt();
            if norm < params.tol {
                break;
            }
            w.scaled_add(-step, &grad_w);
            b -= step * grad_b;
            iterations += 1;
        }
        LogisticRegression {
            scaler,
            weights: w,
            bias: b,
            iterations,
        }
    }

    pub fn probability(&self, x: ArrayView1<f64>) -> f64 {
        sigmoid(self.scaler.transform_row(x).dot(&self.weights) + self.bias)
    }

    pub(crate) fn predict(&self, x: ArrayView1<f64>) -> bool {
        self.probability(x) >= 0.5
    }

    pub fn zero(dimensions: usize) -> Self {
        LogisticRegression {
            scaler: Standardizer::identity(dimensions),
            weights: Array1::zeros(dimensions),
            bias: 0.0,
            iterations: 0,
        }
    }
}
