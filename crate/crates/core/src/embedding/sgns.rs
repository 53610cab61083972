//! The skip-gram negative-sampling objective and its dense kernels.

/// Numerically stable logistic function.
pub fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// `ln σ(x)` without overflow for large `|x|`.
pub fn log_sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        -(-x).exp().ln_1p()
    } else {
        x - x.exp().ln_1p()
    }
}

#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = [0.0f64; 4];
    let chunks = a.len() / 4;
    for i in 0..chunks {
        let j = i * 4;
        acc[0] += a[j] * b[j];
        acc[1] += a[j + 1] * b[j + 1];
        acc[2] += a[j + 2] * b[j + 2];
        acc[3] += a[j + 3] * b[j + 3];
    }
    let mut tail = 0.0;
    for j in chunks * 4..a.len() {
        tail += a[j] * b[j];
    }
    (acc[0] + acc[1]) + (acc[2] + acc[3]) + tail
}

/// `y += alpha * x`
#[inline]
pub fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    debug_assert_eq!(x.len(), y.len());
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SgnsGradients {
    pub center: Vec<f64>,
    pub context: Vec<f64>,
    pub negatives: Vec<Vec<f64>>,
}

/// Loss `−ln σ(u·v) − Σ ln σ(−u·n)` for center `u`, context `v` and
/// negatives `n`, with its exact gradient with respect to every input.
pub fn sgns_loss_and_grad(
    center: &[f64],
    context: &[f64],
    negatives: &[&[f64]],
) -> (f64, SgnsGradients) {
    let d = center.len();
    let pos = dot(center, context);
    let mut loss = -log_sigmoid(pos);
    // d/dx −ln σ(x) = σ(x) − 1
    let g_pos = sigmoid(pos) - 1.0;
    let mut grad_center = vec![0.0; d];
    axpy(g_pos, context, &mut grad_center);
    let grad_context: Vec<f64> = center.iter().map(|u| g_pos * u).collect();

    let mut grad_neg = Vec::with_capacity(negatives.len());
    for n in negatives {
        let s = dot(center, n);
        loss -= log_sigmoid(-s);
        // d/dx −ln σ(−x) = σ(x)
        let g = sigmoid(s);
        axpy(g, n, &mut grad_center);
        grad_neg.push(center.iter().map(|u| g * u).collect());
    }
    (
        loss,
        SgnsGradients {
            center: grad_center,
            context: grad_context,
            negatives: grad_neg,
        },
    )
}

/// One in-place SGD update of an output row against a center row.
///
/// The center's own update is accumulated into `center_delta` and applied by
/// the caller once all targets of the pair are processed.
#[inline]
pub(crate) fn update_target(
    center: &[f64],
    output: &mut [f64],
    positive: bool,
    lr: f64,
    center_delta: &mut [f64],
) {
    let label = if positive { 1.0 } else { 0.0 };
    let g = (label - sigmoid(dot(center, output))) * lr;
    axpy(g, output, center_delta);
    axpy(g, center, output);
}
