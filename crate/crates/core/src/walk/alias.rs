//! Walker/Vose alias tables for O(1) categorical sampling.

use rand::Rng;

/// Fills `prob` and `alias` (both of length `weights.len()`) for the
/// categorical distribution proportional to `weights`.
pub(crate) fn build_alias(
    weights: &[f64],
    prob: &mut [f64],
    alias: &mut [u32],
    small: &mut Vec<u32>,
    large: &mut Vec<u32>,
) {
    let n = weights.len();
    debug_assert!(n > 0 && prob.len() == n && alias.len() == n);
    let total: f64 = weights.iter().sum();
    small.clear();
    large.clear();
    for (i, w) in weights.iter().enumerate() {
        prob[i] = w * n as f64 / total;
        alias[i] = i as u32;
        if prob[i] < 1.0 {
            small.push(i as u32);
        } else {
            large.push(i as u32);
        }
    }
    while let (Some(&s), Some(&l)) = (small.last(), large.last()) {
        small.pop();
        alias[s as usize] = l;
        let rest = (prob[l as usize] + prob[s as usize]) - 1.0;
        prob[l as usize] = rest;
        if rest < 1.0 {
            large.pop();
            small.push(l);
        }
    }
    // leftovers only differ from 1 by rounding
    for &i in small.iter().chain(large.iter()) {
        prob[i as usize] = 1.0;
    }
}

pub(crate) fn sample_alias<R: Rng + ?Sized>(prob: &[f64], alias: &[u32], rng: &mut R) -> usize {
    let i = rng.random_range(0..prob.len());
    if rng.random::<f64>() < prob[i] {
        i
    } else {
        alias[i] as usize
    }
}

/// Probabilities encoded by an alias table.
pub(crate) fn decode_alias(prob: &[f64], alias: &[u32]) -> Vec<f64> {
    let n = prob.len() as f64;
    let mut p: Vec<f64> = prob.iter().map(|x| x / n).collect();
    for (i, &a) in alias.iter().enumerate() {
        if a as usize != i {
            p[a as usize] += (1.0 - prob[i]) / n;
        }
    }
    p
}

/// Standalone alias table.
#[derive(Clone, Debug)]
pub struct AliasTable {
    prob: Vec<f64>,
    alias: Vec<u32>,
}

impl AliasTable {
    /// Returns `None` when `weights` is empty or sums to zero.
    pub fn new(weights: &[f64]) -> Option<Self> {
        if weights.is_empty() || !(weights.iter().sum::<f64>() > 0.0) {
            return None;
        }
        let mut prob = vec![0.0; weights.len()];
        let mut alias = vec![0; weights.len()];
        build_alias(weights, &mut prob, &mut alias, &mut Vec::new(), &mut Vec::new());
        Some(Self { prob, alias })
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        sample_alias(&self.prob, &self.alias, rng)
    }

    pub fn len(&self) -> usize {
        self.prob.len()
    }

    pub fn is_empty(&self) -> bool {
        self.prob.is_empty()
    }

    /// The distribution the table samples from.
    pub fn probabilities(&self) -> Vec<f64> {
        decode_alias(&self.prob, &self.alias)
    }
}
