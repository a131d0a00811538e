//! One-vs-rest linear SVM trained by full-batch projected subgradient descent.
//!
//! Each binary problem minimizes
//! `lambda/2 |w|^2 + 1/n sum_i max(0, 1 - y_i (w.x_i + b))` with
//! `lambda = 1 / (C n)`. The weight step is `1/(lambda t)` with projection
//! onto the ball of radius `1/sqrt(lambda)`. The bias is unregularized
//! and set to its exact minimizer for the current weights before every
//! step. The iterate with the lowest objective is kept.

use rayon::prelude::*;

use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct SvmOptions {
    pub c: f64,
    pub iterations: usize,
}

impl Default for SvmOptions {
    fn default() -> Self {
        Self { c: 1.0, iterations: 1000 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LinearSvm {
    classes: Vec<u32>,
    dim: usize,
    /// One weight row per class.
    weights: Vec<f64>,
    bias: Vec<f64>,
}

/// Trains on the rows of `x` (row-major, `dim` columns) with labels `y`.
pub fn train_linear_svm(x: &[f64], dim: usize, y: &[u32], options: &SvmOptions) -> Result<LinearSvm> {
    if !(options.c > 0.0 && options.c.is_finite()) {
        return Err(Error::param(format!("C must be positive, got {}", options.c)));
    }
    if dim == 0 || x.len() != y.len() * dim {
        return Err(Error::Invalid("feature matrix does not match the labels".into()));
    }
    let mut classes = y.to_vec();
    classes.sort_unstable();
    classes.dedup();
    if classes.len() < 2 {
        return Err(Error::Invalid("training set holds a single class".into()));
    }
    let fits: Vec<(Vec<f64>, f64)> = classes
        .par_iter()
        .map(|&c| {
            let signs: Vec<f64> = y.iter().map(|&l| if l == c { 1.0 } else { -1.0 }).collect();
            fit_binary(x, dim, &signs, options)
        })
        .collect();
    let mut weights = Vec::with_capacity(classes.len() * dim);
    let mut bias = Vec::with_capacity(classes.len());
    for (w, b) in fits {
        weights.extend(w);
        bias.push(b);
    }
    Ok(LinearSvm { classes, dim, weights, bias })
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn fit_binary(x: &[f64], dim: usize, y: &[f64], options: &SvmOptions) -> (Vec<f64>, f64) {
    let n = y.len();
    let lambda = 1.0 / (options.c * n as f64);
    let radius = 1.0 / lambda.sqrt();
    let positives = y.iter().filter(|&&l| l > 0.0).count();
    let mut w = vec![0.0; dim];
    let mut grad = vec![0.0; dim];
    let mut scores = vec![0.0; n];
    let mut kinks = vec![0.0; n];
    let mut best = (f64::INFINITY, w.clone(), 0.0);
    for t in 1..=options.iterations + 1 {
        for (s, row) in scores.iter_mut().zip(x.chunks_exact(dim)) {
            *s = dot(&w, row);
        }
        let b = best_bias(&scores, y, positives, &mut kinks);
        grad.iter_mut().for_each(|g| *g = 0.0);
        let mut hinge = 0.0;
        for ((row, &yi), &s) in x.chunks_exact(dim).zip(y).zip(&scores) {
            let m = yi * (s + b);
            if m < 1.0 {
                hinge += 1.0 - m;
                for (g, v) in grad.iter_mut().zip(row) {
                    *g += yi * v;
                }
            }
        }
        let objective = 0.5 * lambda * dot(&w, &w) + hinge / n as f64;
        if objective < best.0 {
            best = (objective, w.clone(), b);
        }
        if t > options.iterations {
            break;
        }
        let eta = 1.0 / (lambda * t as f64);
        let shrink = 1.0 - 1.0 / t as f64;
        for (wi, g) in w.iter_mut().zip(&grad) {
            *wi = shrink * *wi + eta * g / n as f64;
        }
        let norm = dot(&w, &w).sqrt();
        if norm > radius {
            w.iter_mut().for_each(|wi| *wi *= radius / norm);
        }
    }
    (best.1, best.2)
}

/// Bias minimizing the summed hinge loss for fixed scores.
///
/// The loss is piecewise linear in `b` with one kink per point, at
/// `1 - s` for positives and `-1 - s` for negatives, and its slope is
/// `-positives` plus the number of kinks below `b`. Any `b` between the
/// `positives`-th and the next kink is optimal; the midpoint is returned.
fn best_bias(scores: &[f64], y: &[f64], positives: usize, kinks: &mut [f64]) -> f64 {
    for ((k, &s), &yi) in kinks.iter_mut().zip(scores).zip(y) {
        *k = yi - s;
    }
    let (_, &mut hi, _) = kinks.select_nth_unstable_by(positives, f64::total_cmp);
    let lo = kinks[..positives].iter().copied().fold(f64::NEG_INFINITY, f64::max);
    (lo + hi) / 2.0
}

impl LinearSvm {
    pub fn classes(&self) -> &[u32] {
        &self.classes
    }

    /// Margins of `row` for each class, in [`classes`](Self::classes) order.
    pub fn margins(&self, row: &[f64]) -> Vec<f64> {
        self.weights
            .chunks_exact(self.dim)
            .zip(&self.bias)
            .map(|(w, b)| dot(w, row) + b)
            .collect()
    }

    /// Class with the largest margin; ties go to the smaller class id.
    pub fn predict_one(&self, row: &[f64]) -> u32 {
        let m = self.margins(row);
        let mut best = 0;
        for i in 1..m.len() {
            if m[i] > m[best] {
                best = i;
            }
        }
        self.classes[best]
    }

    pub fn predict(&self, x: &[f64]) -> Vec<u32> {
        x.chunks_exact(self.dim).map(|r| self.predict_one(r)).collect()
    }
}
