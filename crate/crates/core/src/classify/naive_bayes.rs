use ndarray::{Array1, ArrayView1};
use serde::{Deserialize, Serialize};

use super::TrainingData;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NbParams {
    /// Variance floor as a fraction of the largest per-feature variance.
    pub var_smoothing: f64,
}

impl Default for NbParams {
    fn default() -> Self {
        NbParams {
            var_smoothing: 1e-9,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct ClassModel {
    log_prior: f64,
    mean: Array1<f64>,
    var: Array1<f64>,
}

/// Gaussian naive Bayes with per-class, per-feature moments.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GaussianNb {
    /// Index 0 is the positive class.
    classes: Vec<ClassModel>,
}

impl GaussianNb {
    pub(crate) fn fit(data: &TrainingData, params: &NbParams) -> Self {
        let d = data.dims();
        let n = data.len() as f64;

        let overall_mean = data.x.sum_axis(ndarray::Axis(0)) / n;
        let max_var = (0..d)
            .map(|j| {
                data.x
                    .column(j)
                    .iter()
                    .map(|v| (v - overall_mean[j]).powi(2))
                    .sum::<f64>()
                    / n
            })
            .fold(0.0, f64::max);
        let floor = if max_var > 0.0 {
            params.var_smoothing * max_var
        } else {
            params.var_smoothing
        };

        let classes = [true, false]
            .iter()
            .map(|&class| {
                let idx: Vec<usize> = (0..data.len()).filter(|&i| data.y[i] == class).collect();
                let m = idx.len() as f64;
                let mut mean = Array1::<f64>::zeros(d);
                for &i in &idx {
                    mean += &data.x.row(i);
                }
                mean /= m;
                let mut var = Array1::<f64>::zeros(d);
                for &i in &idx {
                    let diff = &data.x.row(i) - &mean;
                    var += &(&diff * &diff);
                }
                var /= m;
                var.mapv_inplace(|v| v + floor);
                ClassModel {
                    log_prior: (m / n).ln(),
                    mean,
                    var,
                }
            })
            .collect();
        GaussianNb { classes }
    }

    fn log_joint(c: &ClassModel, x: ArrayView1<f64>) -> f64 {
        let mut ll = c.log_prior;
        for ((&xi, &mu), &var) in x.iter().zip(&c.mean).zip(&c.var) {
            ll -= 0.5 * ((2.0 * std::f64::consts::PI * var).ln() + (xi - mu).powi(2) / var);
        }
        ll
    }

    pub(crate) fn predict(&self, x: ArrayView1<f64>) -> bool {
        Self::log_joint(&self.classes[0], x) >= Self::log_joint(&self.classes[1], x)
    }
}
