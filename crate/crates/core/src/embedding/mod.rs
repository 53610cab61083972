//! Skip-gram embeddings with negative sampling over walk corpora.

mod io;
mod sgns;
mod vocab;

use std::sync::atomic::{AtomicU64, AtomicUsize, Ordering};

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use io::{read_word2vec, write_word2vec, KeyedVectors};
pub use sgns::{log_sigmoid, sgns_loss_and_grad, sigmoid, SgnsGradients};
pub use vocab::{Vocab, NEGATIVE_POWER};

use crate::seeds;
use crate::walks::Walk;
use sgns::update_target;

#[derive(Debug, Error)]
pub enum EmbeddingError {
    #[error("no token survives the minimum count")]
    EmptyVocab,
    #[error("corpus is empty")]
    EmptyCorpus,
    #[error("token {0:?} is out of vocabulary")]
    OutOfVocabulary(String),
    #[error("invalid training config: {0}")]
    InvalidConfig(String),
    #[error("embedding file line {line}: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TrainMode {
    /// Single-threaded; bitwise reproducible for a given seed.
    Sequential,
    /// Lock-free updates from all rayon workers. Low-order bits vary between runs.
    Parallel,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub dimensions: usize,
    pub window: usize,
    pub negatives: usize,
    pub epochs: usize,
    pub initial_learning_rate: f64,
    pub min_count: u64,
    pub seed: u64,
    pub mode: TrainMode,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            dimensions: 500,
            window: 5,
            negatives: 5,
            epochs: 5,
            initial_learning_rate: 0.025,
            min_count: 1,
            seed: 0,
            mode: TrainMode::Sequential,
        }
    }
}

/// Learning rate never decays below this fraction of the initial rate.
pub const MIN_LR_FRACTION: f64 = 1e-4;

impl TrainConfig {
    pub fn validate(&self) -> Result<(), EmbeddingError> {
        let bad = |m: &str| Err(EmbeddingError::InvalidConfig(m.into()));
        if self.dimensions == 0 {
            return bad("dimensions must be at least 1");
        }
        if self.window == 0 {
            return bad("window must be at least 1");
        }
        if self.negatives == 0 {
            return bad("negatives must be at least 1");
        }
        if self.epochs == 0 {
            return bad("epochs must be at least 1");
        }
        if !(self.initial_learning_rate > 0.0 && self.initial_learning_rate.is_finite()) {
            return bad("initial_learning_rate must be positive");
        }
        Ok(())
    }

    fn learning_rate(&self, processed: usize, total: usize) -> f64 {
        let progress = processed as f64 / total.max(1) as f64;
        self.initial_learning_rate * (1.0 - progress).max(MIN_LR_FRACTION)
    }
}

/// Anything that maps tokens to fixed-width vectors.
pub trait TokenVectors {
    fn dimensions(&self) -> usize;
    fn lookup(&self, token: &str) -> Option<&[f64]>;

    fn vector(&self, token: &str) -> Result<&[f64], EmbeddingError> {
        self.lookup(token)
            .ok_or_else(|| EmbeddingError::OutOfVocabulary(token.to_string()))
    }
}

/// Trained parameters: input vectors are the published embeddings, output
/// vectors are the context parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingModel {
    pub vocab: Vocab,
    input: Vec<f64>,
    output: Vec<f64>,
    pub config: TrainConfig,
}

impl EmbeddingModel {
    pub fn dimensions(&self) -> usize {
        self.config.dimensions
    }

    pub fn input_row(&self, idx: u32) -> &[f64] {
        let d = self.config.dimensions;
        &self.input[idx as usize * d..(idx as usize + 1) * d]
    }

    pub fn output_row(&self, idx: u32) -> &[f64] {
        let d = self.config.dimensions;
        &self.output[idx as usize * d..(idx as usize + 1) * d]
    }

    pub fn keyed_vectors(&self) -> KeyedVectors {
        KeyedVectors::new(
            self.vocab.tokens().to_vec(),
            self.config.dimensions,
            self.input.clone(),
        )
    }

    pub fn cosine(&self, a: &str, b: &str) -> Result<f64, EmbeddingError> {
        Ok(cosine(self.vector(a)?, self.vector(b)?))
    }
}

impl TokenVectors for EmbeddingModel {
    fn dimensions(&self) -> usize {
        self.config.dimensions
    }

    fn lookup(&self, token: &str) -> Option<&[f64]> {
        self.vocab.index(token).map(|i| self.input_row(i))
    }
}

pub fn cosine(a: &[f64], b: &[f64]) -> f64 {
    let na = sgns::dot(a, a).sqrt();
    let nb = sgns::dot(b, b).sqrt();
    if na == 0.0 || nb == 0.0 {
        0.0
    } else {
        sgns::dot(a, b) / (na * nb)
    }
}

pub fn build_vocab(corpus: &[Walk], min_count: u64) -> Result<Vocab, EmbeddingError> {
    Vocab::build(corpus, min_count)
}

/// Trains skip-gram with negative sampling.
///
/// Every (center, context) pair within `window` positions gets one update
/// against `negatives` samples drawn from the vocabulary's `count^0.75`
/// distribution. The learning rate decays linearly per processed center
/// token down to `MIN_LR_FRACTION` of its initial value.
pub fn train_skipgram(
    corpus: &[Walk],
    vocab: Vocab,
    config: &TrainConfig,
) -> Result<EmbeddingModel, EmbeddingError> {
    config.validate()?;
    if vocab.is_empty() {
        return Err(EmbeddingError::EmptyVocab);
    }
    let encoded: Vec<Vec<u32>> = corpus
        .iter()
        .map(|w| vocab.encode(w))
        .filter(|w| !w.is_empty())
        .collect();
    if encoded.is_empty() {
        return Err(EmbeddingError::EmptyCorpus);
    }

    let d = config.dimensions;
    let v = vocab.len();
    let mut init_rng = seeds::rng(config.seed, &[0x1417]);
    let half = 0.5 / d as f64;
    let input: Vec<f64> = (0..v * d)
        .map(|_| init_rng.gen_range(-half..half))
        .collect();
    let output = vec![0.0; v * d];

    let (input, output) = match config.mode {
        TrainMode::Sequential => train_sequential(&encoded, &vocab, config, input, output),
        TrainMode::Parallel => train_parallel(&encoded, &vocab, config, input, output),
    };
    debug_assert!(input.iter().chain(&output).all(|x| x.is_finite()));
    Ok(EmbeddingModel {
        vocab,
        input,
        output,
        config: config.clone(),
    })
}

fn train_sequential(
    walks: &[Vec<u32>],
    vocab: &Vocab,
    config: &TrainConfig,
    mut input: Vec<f64>,
    mut output: Vec<f64>,
) -> (Vec<f64>, Vec<f64>) {
    let d = config.dimensions;
    let total: usize = config.epochs * walks.iter().map(Vec::len).sum::<usize>();
    let mut rng = seeds::rng(config.seed, &[0x5eed]);
    let mut delta = vec![0.0; d];
    let mut processed = 0usize;
    for _ in 0..config.epochs {
        for walk in walks {
            for (pos, &center) in walk.iter().enumerate() {
                let lr = config.learning_rate(processed, total);
                processed += 1;
                let lo = pos.saturating_sub(config.window);
                let hi = (pos + config.window).min(walk.len() - 1);
                for (cpos, &context) in walk.iter().enumerate().take(hi + 1).skip(lo) {
                    if cpos == pos {
                        continue;
                    }
                    delta.iter_mut().for_each(|x| *x = 0.0);
                    let c = center as usize * d;
                    let center_row = &input[c..c + d];
                    for (target, positive) in targets(vocab, context, config.negatives, &mut rng) {
                        let t = target as usize * d;
                        update_target(center_row, &mut output[t..t + d], positive, lr, &mut delta);
                    }
                    for (x, dx) in input[c..c + d].iter_mut().zip(&delta) {
                        *x += dx;
                    }
                }
            }
        }
    }
    (input, output)
}

/// The positive context followed by sampled negatives (never equal to the context).
fn targets<R: Rng>(
    vocab: &Vocab,
    context: u32,
    negatives: usize,
    rng: &mut R,
) -> impl Iterator<Item = (u32, bool)> {
    let mut out = Vec::with_capacity(negatives + 1);
    out.push((context, true));
    if vocab.len() > 1 {
        for _ in 0..negatives {
            let neg = loop {
                let n = vocab.sample_negative(rng);
                if n != context {
                    break n;
                }
            };
            out.push((neg, false));
        }
    }
    out.into_iter()
}

/// Hogwild-style training over relaxed atomics: rows are copied out, updated
/// locally and written back without locking.
fn train_parallel(
    walks: &[Vec<u32>],
    vocab: &Vocab,
    config: &TrainConfig,
    input: Vec<f64>,
    output: Vec<f64>,
) -> (Vec<f64>, Vec<f64>) {
    let d = config.dimensions;
    let to_atomic = |v: Vec<f64>| -> Vec<AtomicU64> {
        v.into_iter().map(|x| AtomicU64::new(x.to_bits())).collect()
    };
    let input = to_atomic(input);
    let output = to_atomic(output);
    let load = |src: &[AtomicU64], row: usize, buf: &mut [f64]| {
        for (b, a) in buf.iter_mut().zip(&src[row * d..(row + 1) * d]) {
            *b = f64::from_bits(a.load(Ordering::Relaxed));
        }
    };
    let store = |dst: &[AtomicU64], row: usize, buf: &[f64]| {
        for (b, a) in buf.iter().zip(&dst[row * d..(row + 1) * d]) {
            a.store(b.to_bits(), Ordering::Relaxed);
        }
    };

    let total: usize = config.epochs * walks.iter().map(Vec::len).sum::<usize>();
    let processed = AtomicUsize::new(0);
    let chunk = walks
        .len()
        .div_ceil(rayon::current_num_threads() * 8)
        .max(1);
    for epoch in 0..config.epochs {
        walks
            .par_chunks(chunk)
            .enumerate()
            .for_each(|(ci, chunk_walks)| {
                let mut rng = seeds::rng(config.seed, &[0x5eed, epoch as u64, ci as u64]);
                let mut center_buf = vec![0.0; d];
                let mut out_buf = vec![0.0; d];
                let mut delta = vec![0.0; d];
                for walk in chunk_walks {
                    for (pos, &center) in walk.iter().enumerate() {
                        let lr =
                            config.learning_rate(processed.fetch_add(1, Ordering::Relaxed), total);
                        let lo = pos.saturating_sub(config.window);
                        let hi = (pos + config.window).min(walk.len() - 1);
                        for (cpos, &context) in walk.iter().enumerate().take(hi + 1).skip(lo) {
                            if cpos == pos {
                                continue;
                            }
                            delta.iter_mut().for_each(|x| *x = 0.0);
                            load(&input, center as usize, &mut center_buf);
                            for (target, positive) in
                                targets(vocab, context, config.negatives, &mut rng)
                            {
                                load(&output, target as usize, &mut out_buf);
                                update_target(&center_buf, &mut out_buf, positive, lr, &mut delta);
                                store(&output, target as usize, &out_buf);
                            }
                            for (x, dx) in center_buf.iter_mut().zip(&delta) {
                                *x += dx;
                            }
                            store(&input, center as usize, &center_buf);
                        }
                    }
                }
            });
    }
    let from_atomic = |v: Vec<AtomicU64>| -> Vec<f64> {
        v.into_iter()
            .map(|a| f64::from_bits(a.into_inner()))
            .collect()
    };
    (from_atomic(input), from_atomic(output))
}
