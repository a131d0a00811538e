//! Skip-gram with negative sampling: loss, gradients and in-place updates.

use std::sync::atomic::{AtomicU64, Ordering};

/// Row-major matrix of `f64` that many workers may update without locks.
///
/// Reads and writes are relaxed per element, so concurrent updates can be
/// lost but never torn.
pub struct SharedMatrix {
    data: Vec<AtomicU64>,
    cols: usize,
}

impl SharedMatrix {
    pub fn from_vec(values: Vec<f64>, cols: usize) -> Self {
        assert!(cols > 0 && values.len() % cols == 0);
        Self {
            data: values.into_iter().map(|x| AtomicU64::new(x.to_bits())).collect(),
            cols,
        }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_vec(vec![0.0; rows * cols], cols)
    }

    pub fn rows(&self) -> usize {
        self.data.len() / self.cols
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        f64::from_bits(self.data[row * self.cols + col].load(Ordering::Relaxed))
    }

    #[inline]
    fn add(&self, row: usize, col: usize, delta: f64) {
        let cell = &self.data[row * self.cols + col];
        let x = f64::from_bits(cell.load(Ordering::Relaxed)) + delta;
        cell.store(x.to_bits(), Ordering::Relaxed);
    }

    pub fn row(&self, row: usize) -> Vec<f64> {
        (0..self.cols).map(|c| self.get(row, c)).collect()
    }

    fn dot(&self, row: usize, other: &SharedMatrix, other_row: usize) -> f64 {
        (0..self.cols).map(|c| self.get(row, c) * other.get(other_row, c)).sum()
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data.into_iter().map(|x| f64::from_bits(x.into_inner())).collect()
    }
}

pub fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// `-log(sigmoid(x))` without overflow.
fn neg_log_sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        (-x).exp().ln_1p()
    } else {
        -x + x.exp().ln_1p()
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Negative-sampling loss of one (center, context) pair:
/// `-log s(c.o) - sum_n log s(-c.n)`.
pub fn sgns_loss(center: &[f64], context: &[f64], negatives: &[&[f64]]) -> f64 {
    neg_log_sigmoid(dot(center, context)) + negatives.iter().map(|n| neg_log_sigmoid(-dot(center, n))).sum::<f64>()
}

/// Gradients of [`sgns_loss`] with respect to its arguments.
#[derive(Clone, Debug, PartialEq)]
pub struct SgnsGradients {
    pub center: Vec<f64>,
    pub context: Vec<f64>,
    pub negatives: Vec<Vec<f64>>,
}

pub fn sgns_gradients(center: &[f64], context: &[f64], negatives: &[&[f64]]) -> SgnsGradients {
    let g_pos = sigmoid(dot(center, context)) - 1.0;
    let mut gc: Vec<f64> = context.iter().map(|o| g_pos * o).collect();
    let mut gn = Vec::with_capacity(negatives.len());
    for n in negatives {
        let g = sigmoid(dot(center, n));
        for (a, x) in gc.iter_mut().zip(n.iter()) {
            *a += g * x;
        }
        gn.push(center.iter().map(|c| g * c).collect());
    }
    SgnsGradients {
        center: gc,
        context: center.iter().map(|c| g_pos * c).collect(),
        negatives: gn,
    }
}

/// One stochastic gradient step on `input[center]`, `output[context]` and
/// `output[negatives]`. Returns the pair's loss before the update.
///
/// Output rows are updated one target at a time against the unchanged
/// center row; the center row is updated last with the accumulated
/// gradient.
pub fn sgns_step(
    input: &SharedMatrix,
    output: &SharedMatrix,
    center: usize,
    context: usize,
    negatives: &[usize],
    lr: f64,
    scratch: &mut Vec<f64>,
) -> f64 {
    let d = input.cols();
    scratch.clear();
    scratch.resize(d, 0.0);
    let mut loss = 0.0;
    for (target, label) in std::iter::once((context, 1.0)).chain(negatives.iter().map(|&n| (n, 0.0))) {
        let f = input.dot(center, output, target);
        loss += if label == 1.0 { neg_log_sigmoid(f) } else { neg_log_sigmoid(-f) };
        let g = lr * (label - sigmoid(f));
        for (c, acc) in scratch.iter_mut().enumerate() {
            *acc += g * output.get(target, c);
            output.add(target, c, g * input.get(center, c));
        }
    }
    for (c, acc) in scratch.iter().enumerate() {
        input.add(center, c, *acc);
    }
    loss
}
