use ndarray::ArrayView1;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::TrainingData;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeParams {
    pub max_depth: usize,
    pub min_samples_split: usize,
}

impl Default for TreeParams {
    fn default() -> Self {
        TreeParams {
            max_depth: 20,
            min_samples_split: 2,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
enum Node {
    Leaf {
        positives: usize,
        negatives: usize,
    },
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
}

/// CART decision tree with Gini impurity.
///
/// Candidate thresholds are midpoints between adjacent distinct values and
/// `x <= threshold` goes left. Among equally good splits the lowest feature
/// index wins, then the lowest threshold.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DecisionTree {
    nodes: Vec<Node>,
}

struct Builder<'a, R> {
    data: &'a TrainingData,
    params: &'a TreeParams,
    max_features: Option<usize>,
    rng: R,
    nodes: Vec<Node>,
}

struct BestSplit {
    feature: usize,
    threshold: f64,
    score: f64,
}

impl DecisionTree {
    /// Fits on all rows. With `max_features`, each split looks at a random
    /// feature subset drawn from `seed`.
    pub(crate) fn fit(
        data: &TrainingData,
        params: &TreeParams,
        max_features: Option<usize>,
        seed: u64,
    ) -> Self {
        let rows: Vec<usize> = (0..data.len()).collect();
        Self::fit_rows(
            data,
            &rows,
            params,
            max_features,
            crate::seeds::rng(seed, &[]),
        )
    }

    /// Fits on `rows`, which may repeat indices (bootstrap samples).
    pub(crate) fn fit_rows<R: Rng>(
        data: &TrainingData,
        rows: &[usize],
        params: &TreeParams,
        max_features: Option<usize>,
        rng: R,
    ) -> Self {
        let mut b = Builder {
            data,
            params,
            max_features,
            rng,
            nodes: Vec::new(),
        };
        let mut rows = rows.to_vec();
        b.grow(&mut rows, 0);
        DecisionTree { nodes: b.nodes }
    }

    fn leaf(&self, x: ArrayView1<f64>) -> (usize, usize) {
        let mut i = 0;
        loop {
            match &self.nodes[i] {
                Node::Leaf {
                    positives,
                    negatives,
                } => return (*positives, *negatives),
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    i = if x[*feature] <= *threshold {
                        *left
                    } else {
                        *right
                    }
                }
            }
        }
    }

    pub(crate) fn predict(&self, x: ArrayView1<f64>) -> bool {
        let (p, n) = self.leaf(x);
        p >= n
    }

    pub fn depth(&self) -> usize {
        fn go(nodes: &[Node], i: usize) -> usize {
            match &nodes[i] {
                Node::Leaf { .. } => 0,
                Node::Split { left, right, .. } => 1 + go(nodes, *left).max(go(nodes, *right)),
            }
        }
        go(&self.nodes, 0)
    }

    pub fn leaf_count(&self) -> usize {
        self.nodes
            .iter()
            .filter(|n| matches!(n, Node::Leaf { .. }))
            .count()
    }
}

impl<R: Rng> Builder<'_, R> {
    fn grow(&mut self, rows: &mut [usize], depth: usize) -> usize {
        let positives = rows.iter().filter(|&&i| self.data.y[i]).count();
        let negatives = rows.len() - positives;
        let id = self.nodes.len();
        self.nodes.push(Node::Leaf {
            positives,
            negatives,
        });
        if positives == 0
            || negatives == 0
            || depth >= self.params.max_depth
            || rows.len() < self.params.min_samples_split
        {
            return id;
        }
        let Some(best) = self.best_split(rows, positives) else {
            return id;
        };
        let x = &self.data.x;
        rows.sort_by_key(|&i| x[[i, best.feature]] > best.threshold);
        let mid = rows.partition_point(|&i| x[[i, best.feature]] <= best.threshold);
        let (l, r) = rows.split_at_mut(mid);
        let left = self.grow(l, depth + 1);
        let right = self.grow(r, depth + 1);
        self.nodes[id] = Node::Split {
            feature: best.feature,
            threshold: best.threshold,
            left,
            right,
        };
        id
    }

    fn best_split(&mut self, rows: &[usize], positives: usize) -> Option<BestSplit> {
        let d = self.data.dims();
        let order: Vec<usize> = match self.max_features {
            None => (0..d).collect(),
            Some(_) => {
                let mut f: Vec<usize> = (0..d).collect();
                f.shuffle(&mut self.rng);
                f
            }
        };
        let budget = self.max_features.unwrap_or(d);

        let mut best: Option<BestSplit> = None;
        let mut candidates = Vec::new();
        let mut visited = 0;
        let mut sorted: Vec<(f64, bool)> = Vec::with_capacity(rows.len());
        for feature in order {
            if visited >= budget {
                break;
            }
            sorted.clear();
            sorted.extend(
                rows.iter()
                    .map(|&i| (self.data.x[[i, feature]], self.data.y[i])),
            );
            sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
            if sorted[0].0 == sorted[sorted.len() - 1].0 {
                continue;
            }
            visited += 1;
            candidates.clear();
            let n = sorted.len();
            let mut lp = 0usize;
            for k in 0..n - 1 {
                if sorted[k].1 {
                    lp += 1;
                }
                let (a, b) = (sorted[k].0, sorted[k + 1].0);
                if a == b {
                    continue;
                }
                let nl = (k + 1) as f64;
                let nr = (n - k - 1) as f64;
                let ln = nl - lp as f64;
                let rp = (positives - lp) as f64;
                let rn = nr - rp;
                let lp = lp as f64;
                // Maximizing this minimizes the size-weighted child Gini.
                let score = (lp * lp + ln * ln) / nl + (rp * rp + rn * rn) / nr;
                candidates.push((score, a, b));
            }
            for &(score, a, b) in &candidates {
                if best.as_ref().is_none_or(|s| score > s.score) {
                    let mut threshold = a + (b - a) / 2.0;
                    if threshold >= b {
                        threshold = a;
                    }
                    best = Some(BestSplit {
                        feature,
                        threshold,
                        score,
                    });
                }
            }
        }
        best
    }
}
