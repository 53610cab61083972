use ndarray::{Array1, Array2, ArrayView1, Axis};
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{Standardizer, TrainingData};
use crate::embedding::sigmoid;
use crate::seeds;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MlpParams {
    pub hidden: Vec<usize>,
    pub learning_rate: f64,
    /// Upper bound on passes over the training set.
    pub epochs: usize,
    pub batch_size: usize,
    /// Training stops once the epoch loss fails to improve by this much
    /// for ten consecutive epochs.
    pub tol: f64,
}

impl Default for MlpParams {
    fn default() -> Self {
        MlpParams {
            hidden: vec![250],
            learning_rate: 1e-3,
            epochs: 200,
            batch_size: 32,
            tol: 1e-4,
        }
    }
}

const NO_CHANGE_EPOCHS: usize = 10;
const BETA1: f64 = 0.9;
const BETA2: f64 = 0.999;
const ADAM_EPS: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct MlpGradients {
    pub weights: Vec<Array2<f64>>,
    pub biases: Vec<Array1<f64>>,
}

/// Feed-forward network: ReLU hidden layers, one logistic output unit,
/// cross-entropy loss, trained with Adam on standardized inputs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Mlp {
    scaler: Standardizer,
    /// `weights[l]` has shape (fan_in, fan_out).
    pub weights: Vec<Array2<f64>>,
    pub biases: Vec<Array1<f64>>,
    pub epochs_run: usize,
}

impl Mlp {
    /// Random network with weights uniform in ±1/√fan_in and zero biases.
    pub fn new(input: usize, hidden: &[usize], seed: u64) -> Self {
        let mut rng = seeds::rng(seed, &[0x6d6c70]);
        let mut sizes = vec![input];
        sizes.extend_from_slice(hidden);
        sizes.push(1);
        let mut weights = Vec::new();
        let mut biases = Vec::new();
        for w in sizes.windows(2) {
            let bound = 1.0 / (w[0] as f64).sqrt();
            weights.push(Array2::from_shape_simple_fn((w[0], w[1]), || {
                rng.gen_range(-bound..=bound)
            }));
            biases.push(Array1::zeros(w[1]));
        }
        Mlp {
            scaler: Standardizer::identity(input),
            weights,
            biases,
            epochs_run: 0,
        }
    }

    pub(crate) fn fit(data: &TrainingData, params: &MlpParams, seed: u64) -> Self {
        let mut net = Mlp::new(data.dims(), &params.hidden, seed);
        net.scaler = Standardizer::fit(&data.x);
        let x = net.scaler.transform(&data.x);
        let n = data.len();
        let mut rng = seeds::rng(seed, &[0x73687566]);

        let mut m_w: Vec<Array2<f64>> = net
            .weights
            .iter()
            .map(|w| Array2::zeros(w.raw_dim()))
            .collect();
        let mut v_w = m_w.clone();
        let mut m_b: Vec<Array1<f64>> = net
            .biases
            .iter()
            .map(|b| Array1::zeros(b.raw_dim()))
            .collect();
        let mut v_b = m_b.clone();
        let mut step = 0i32;

        let mut order: Vec<usize> = (0..n).collect();
        let mut best_loss = f64::INFINITY;
        let mut stale = 0;
        for epoch in 0..params.epochs {
            order.shuffle(&mut rng);
            let mut epoch_loss = 0.0;
            for batch in order.chunks(params.batch_size) {
                let xb = x.select(Axis(0), batch);
                let yb: Vec<bool> = batch.iter().map(|&i| data.y[i]).collect();
                let (loss, g) = net.loss_and_gradients(&xb, &yb);
                epoch_loss += loss * batch.len() as f64;

                step += 1;
                let c1 = 1.0 - BETA1.powi(step);
                let c2 = 1.0 - BETA2.powi(step);
                let lr = params.learning_rate;
                for l in 0..net.weights.len() {
                    adam(
                        &mut net.weights[l],
                        &g.weights[l],
                        &mut m_w[l],
                        &mut v_w[l],
                        lr,
                        c1,
                        c2,
                    );
                    adam(
                        &mut net.biases[l],
                        &g.biases[l],
                        &mut m_b[l],
                        &mut v_b[l],
                        lr,
                        c1,
                        c2,
                    );
                }
            }
            net.epochs_run = epoch + 1;
            epoch_loss /= n as f64;
            if epoch_loss > best_loss - params.tol {
                stale += 1;
            } else {
                stale = 0;
            }
            best_loss = best_loss.min(epoch_loss);
            if stale >= NO_CHANGE_EPOCHS {
                break;
            }
        }
        net
    }

    /// Returns per-layer pre-activations and activations; `acts[0]` is the input.
    fn forward(&self, x: &Array2<f64>) -> (Vec<Array2<f64>>, Array1<f64>) {
        let mut acts = vec![x.clone()];
        let last = self.weights.len() - 1;
        for l in 0..last {
            let h = (acts[l].dot(&self.weights[l]) + &self.biases[l]).mapv(|v| v.max(0.0));
            acts.push(h);
        }
        let z = acts[last].dot(&self.weights[last]) + &self.biases[last];
        (acts, z.column(0).to_owned())
    }

    /// Mean cross-entropy over the batch and its exact gradient. `x` is fed
    /// to the first layer as is, without standardization.
    pub fn loss_and_gradients(&self, x: &Array2<f64>, y: &[bool]) -> (f64, MlpGradients) {
        let b = x.nrows() as f64;
        let (acts, z) = self.forward(x);
        let mut loss = 0.0;
        let mut delta = Array2::zeros((x.nrows(), 1));
        for (i, (&zi, &yi)) in z.iter().zip(y).enumerate() {
            let t = if yi { 1.0 } else { 0.0 };
            // softplus(z) - t z
            loss += zi.max(0.0) + (-zi.abs()).exp().ln_1p() - t * zi;
            delta[[i, 0]] = (sigmoid(zi) - t) / b;
        }
        loss /= b;

        let layers = self.weights.len();
        let mut gw = vec![Array2::zeros((0, 0)); layers];
        let mut gb = vec![Array1::zeros(0); layers];
        for l in (0..layers).rev() {
            gw[l] = acts[l].t().dot(&delta);
            gb[l] = delta.sum_axis(Axis(0));
            if l > 0 {
                let mut prev = delta.dot(&self.weights[l].t());
                prev.zip_mut_with(&acts[l], |d, &a| {
                    if a <= 0.0 {
                        *d = 0.0;
                    }
                });
                delta = prev;
            }
        }
        (
            loss,
            MlpGradients {
                weights: gw,
                biases: gb,
            },
        )
    }

    pub fn logit(&self, x: ArrayView1<f64>) -> f64 {
        let mut h = self.scaler.transform_row(x);
        let last = self.weights.len() - 1;
        for l in 0..last {
            h = (h.dot(&self.weights[l]) + &self.biases[l]).mapv(|v| v.max(0.0));
        }
        h.dot(&self.weights[last].column(0)) + self.biases[last][0]
    }

    pub(crate) fn predict(&self, x: ArrayView1<f64>) -> bool {
        self.logit(x) >= 0.0
    }
}

fn adam<D: ndarray::Dimension>(
    param: &mut ndarray::Array<f64, D>,
    grad: &ndarray::Array<f64, D>,
    m: &mut ndarray::Array<f64, D>,
    v: &mut ndarray::Array<f64, D>,
    lr: f64,
    c1: f64,
    c2: f64,
) {
    ndarray::Zip::from(param)
        .and(grad)
        .and(m)
        .and(v)
        .for_each(|p, &g, m, v| {
            *m = BETA1 * *m + (1.0 - BETA1) * g;
            *v = BETA2 * *v + (1.0 - BETA2) * g * g;
            *p -= lr * (*m / c1) / ((*v / c2).sqrt() + ADAM_EPS);
        });
}
