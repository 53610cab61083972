use ndarray::{Array1, Array2, ArrayView1};
use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::{Standardizer, TrainingData};
use crate::seeds;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearSvmParams {
    pub l2: f64,
    pub epochs: usize,
}

impl Default for LinearSvmParams {
    fn default() -> Self {
        LinearSvmParams {
            l2: 1e-4,
            epochs: 200,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RbfSvmParams {
    pub l2: f64,
    pub epochs: usize,
    /// Kernel width; `None` means `1/d`.
    pub gamma: Option<f64>,
}

impl Default for RbfSvmParams {
    fn default() -> Self {
        RbfSvmParams {
            l2: 1e-4,
            epochs: 200,
            gamma: None,
        }
    }
}

fn sign(y: bool) -> f64 {
    if y {
        1.0
    } else {
        -1.0
    }
}

/// Hinge loss with an L2 penalty, trained by Pegasos subgradient steps on
/// standardized features plus a constant bias feature.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LinearSvm {
    scaler: Standardizer,
    weights: Array1<f64>,
    bias: f64,
}

impl LinearSvm {
    pub(crate) fn fit(data: &TrainingData, params: &LinearSvmParams, seed: u64) -> Self {
        let scaler = Standardizer::fit(&data.x);
        let x = scaler.transform(&data.x);
        let (n, d) = x.dim();
        let mut rng = seeds::rng(seed, &[0x73766d6c]);
        let lambda = params.l2;

        // w = s * v, so the (1 - 1/t) shrink is O(1).
        let mut v = Array1::<f64>::zeros(d + 1);
        let mut s = 1.0;
        let mut t = 0u64;
        let mut order: Vec<usize> = (0..n).collect();
        for _ in 0..params.epochs {
            order.shuffle(&mut rng);
            for &i in &order {
                t += 1;
                let eta = 1.0 / (lambda * t as f64);
                let xi = x.row(i);
                let yi = sign(data.y[i]);
                let margin = yi * s * (xi.dot(&v.slice(ndarray::s![..d])) + v[d]);
                s *= 1.0 - 1.0 / t as f64;
                if s == 0.0 {
                    v.fill(0.0);
                    s = 1.0;
                }
                if margin < 1.0 {
                    let c = eta * yi / s;
                    v.slice_mut(ndarray::s![..d]).scaled_add(c, &xi);
                    v[d] += c;
                }
            }
        }
        let w = v * s;
        LinearSvm {
            scaler,
            weights: w.slice(ndarray::s![..d]).to_owned(),
            bias: w[d],
        }
    }

    pub fn decision(&self, x: ArrayView1<f64>) -> f64 {
        self.scaler.transform_row(x).dot(&self.weights) + self.bias
    }

    pub(crate) fn predict(&self, x: ArrayView1<f64>) -> bool {
        self.decision(x) >= 0.0
    }
}

/// Kernel Pegasos with an RBF kernel on standardized features. The kernel
/// is offset by 1, which acts as an unregularized-in-practice bias term.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RbfSvm {
    scaler: Standardizer,
    gamma: f64,
    support: Array2<f64>,
    /// `alpha_i * y_i / (lambda * T)` per support vector.
    coef: Vec<f64>,
}

fn rbf(gamma: f64, a: ArrayView1<f64>, b: ArrayView1<f64>) -> f64 {
    let d2: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
    (-gamma * d2).exp() + 1.0
}

impl RbfSvm {
    pub(crate) fn fit(data: &TrainingData, params: &RbfSvmParams, seed: u64) -> Self {
        let scaler = Standardizer::fit(&data.x);
        let x = scaler.transform(&data.x);
        let (n, d) = x.dim();
        let gamma = params.gamma.unwrap_or(1.0 / d.max(1) as f64);
        let lambda = params.l2;

        let mut kernel = Array2::<f64>::zeros((n, n));
        for i in 0..n {
            for j in i..n {
                let k = rbf(gamma, x.row(i), x.row(j));
                kernel[[i, j]] = k;
                kernel[[j, i]] = k;
            }
        }
        let y: Vec<f64> = data.y.iter().map(|&b| sign(b)).collect();

        let mut rng = seeds::rng(seed, &[0x73766d72]);
        let mut alpha = vec![0u64; n];
        // f[j] = sum_i alpha_i y_i K(i, j), kept incrementally.
        let mut f = vec![0.0f64; n];
        let mut t = 0u64;
        let mut order: Vec<usize> = (0..n).collect();
        for _ in 0..params.epochs {
            order.shuffle(&mut rng);
            for &i in &order {
                t += 1;
                if y[i] * f[i] / (lambda * t as f64) < 1.0 {
                    alpha[i] += 1;
                    let row = kernel.row(i);
                    for (fj, &k) in f.iter_mut().zip(row) {
                        *fj += y[i] * k;
                    }
                }
            }
        }

        let scale = lambda * t.max(1) as f64;
        let support_idx: Vec<usize> = (0..n).filter(|&i| alpha[i] > 0).collect();
        let mut support = Array2::zeros((support_idx.len(), d));
        for (r, &i) in support_idx.iter().enumerate() {
            support.row_mut(r).assign(&x.row(i));
        }
        let coef = support_idx
            .iter()
            .map(|&i| alpha[i] as f64 * y[i] / scale)
            .collect();
        RbfSvm {
            scaler,
            gamma,
            support,
            coef,
        }
    }

    pub fn decision(&self, x: ArrayView1<f64>) -> f64 {
        let z = self.scaler.transform_row(x);
        self.support
            .rows()
            .into_iter()
            .zip(&self.coef)
            .map(|(sv, c)| c * rbf(self.gamma, sv, z.view()))
            .sum()
    }

    pub fn support_vectors(&self) -> usize {
        self.coef.len()
    }

    pub(crate) fn predict(&self, x: ArrayView1<f64>) -> bool {
        self.decision(x) >= 0.0
    }
}
