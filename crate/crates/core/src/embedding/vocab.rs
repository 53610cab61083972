use std::collections::HashMap;

use rand::Rng;

use super::EmbeddingError;
use crate::walks::Walk;

/// Exponent applied to counts for the negative-sampling distribution.
pub const NEGATIVE_POWER: f64 = 0.75;

/// Token index ordered by descending count, ties broken lexicographically.
#[derive(Debug, Clone, PartialEq)]
pub struct Vocab {
    tokens: Vec<String>,
    index: HashMap<String, u32>,
    counts: Vec<u64>,
    /// Cumulative, normalized `count^0.75` weights.
    negative_cdf: Vec<f64>,
}

impl Vocab {
    pub fn build(corpus: &[Walk], min_count: u64) -> Result<Self, EmbeddingError> {
        let mut counts: HashMap<&str, u64> = HashMap::new();
        for walk in corpus {
            for t in &walk.tokens {
                *counts.entry(t.as_str()).or_default() += 1;
            }
        }
        let mut kept: Vec<(&str, u64)> = counts
            .into_iter()
            .filter(|&(_, c)| c >= min_count.max(1))
            .collect();
        if kept.is_empty() {
            return Err(EmbeddingError::EmptyVocab);
        }
        kept.sort_unstable_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
        Ok(Self::from_counts(
            kept.into_iter().map(|(t, c)| (t.to_string(), c)).collect(),
        ))
    }

    /// `entries` must already be in index order.
    pub(crate) fn from_counts(entries: Vec<(String, u64)>) -> Self {
        let mut tokens = Vec::with_capacity(entries.len());
        let mut counts = Vec::with_capacity(entries.len());
        for (t, c) in entries {
            tokens.push(t);
            counts.push(c);
        }
        let index = tokens
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), i as u32))
            .collect();
        let weights: Vec<f64> = counts
            .iter()
            .map(|&c| (c as f64).powf(NEGATIVE_POWER))
            .collect();
        let total: f64 = weights.iter().sum();
        let mut acc = 0.0;
        let mut negative_cdf: Vec<f64> = weights
            .iter()
            .map(|w| {
                acc += w;
                acc / total
            })
            .collect();
        if let Some(last) = negative_cdf.last_mut() {
            *last = 1.0;
        }
        Vocab {
            tokens,
            index,
            counts,
            negative_cdf,
        }
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn index(&self, token: &str) -> Option<u32> {
        self.index.get(token).copied()
    }

    pub fn token(&self, idx: u32) -> &str {
        &self.tokens[idx as usize]
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn count(&self, idx: u32) -> u64 {
        self.counts[idx as usize]
    }

    /// Probability of drawing `idx` as a negative sample.
    pub fn negative_probability(&self, idx: u32) -> f64 {
        let i = idx as usize;
        let prev = if i == 0 {
            0.0
        } else {
            self.negative_cdf[i - 1]
        };
        self.negative_cdf[i] - prev
    }

    pub fn sample_negative<R: Rng>(&self, rng: &mut R) -> u32 {
        let u: f64 = rng.gen();
        let i = self.negative_cdf.partition_point(|&c| c <= u);
        i.min(self.tokens.len() - 1) as u32
    }

    /// Maps a walk to vocabulary indices, dropping unknown tokens.
    pub fn encode(&self, walk: &Walk) -> Vec<u32> {
        walk.tokens.iter().filter_map(|t| self.index(t)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn walk(tokens: &[&str]) -> Walk {
        Walk {
            tokens: tokens.iter().map(|s| s.to_string()).collect(),
        }
    }

    #[test]
    fn single_walk() {
        let v = Vocab::build(&[walk(&["a", "p", "b"])], 1).unwrap();
        assert_eq!(v.len(), 3);
        // Equal counts: lexicographic order.
        assert_eq!(v.tokens(), ["a", "b", "p"]);
        assert!((0..3).all(|i| v.count(i) == 1));
    }

    #[test]
    fn min_count_filters() {
        let v = Vocab::build(&[walk(&["a", "p", "b"]), walk(&["a", "q", "c"])], 2).unwrap();
        assert_eq!(v.tokens(), ["a"]);
        assert_eq!(v.index("a"), Some(0));
        assert!(v.index("p").is_none());
        assert!(matches!(
            Vocab::build(&[walk(&["a"])], 2),
            Err(EmbeddingError::EmptyVocab)
        ));
    }

    #[test]
    fn indices_dense_and_count_ordered() {
        let corpus = [walk(&["x", "y", "x", "z", "x", "y"])];
        let v = Vocab::build(&corpus, 1).unwrap();
        assert_eq!(v.tokens(), ["x", "y", "z"]);
        let mut idx: Vec<u32> = v.tokens().iter().map(|t| v.index(t).unwrap()).collect();
        idx.sort();
        assert_eq!(idx, [0, 1, 2]);
    }

    #[test]
    fn negative_distribution_follows_power_law() {
        let corpus = [walk(&["x", "x", "x", "x", "x", "x", "x", "x", "y"])];
        let v = Vocab::build(&corpus, 1).unwrap();
        let expected_x = 8f64.powf(0.75) / (8f64.powf(0.75) + 1.0);
        assert!((v.negative_probability(0) - expected_x).abs() < 1e-12);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let n = 40_000;
        let hits = (0..n).filter(|_| v.sample_negative(&mut rng) == 0).count();
        let p = hits as f64 / n as f64;
        let sd = (expected_x * (1.0 - expected_x) / n as f64).sqrt();
        assert!((p - expected_x).abs() < 5.0 * sd, "{p} vs {expected_x}");
    }
}
