//! Precomputed and on-demand second-order transition sampling.
//!
//! Every directed edge `u -> v` whose head has degree at most `tau` gets an
//! alias table over the neighbors of `v`; edges into higher-degree nodes are
//! sampled by building the distribution at each step. Storing every table
//! costs `sum_v deg(v)^2` entries, which explodes at attribute hubs.

use rand::Rng;
use rayon::prelude::*;

use super::alias::{build_alias, decode_alias, sample_alias};
use super::bias::{first_step_weights, transition_weights};
use super::params::{Bias, WalkParams};
use crate::graph::AugmentedGraph;
use crate::{Error, Result};

const NONE: usize = usize::MAX;

#[derive(Clone, Debug, PartialEq)]
pub struct ModelOptions {
    /// Degree threshold for precomputation; 0 disables it entirely.
    pub tau: usize,
    /// Maximum number of stored alias entries.
    pub max_entries: u64,
}

impl Default for ModelOptions {
    fn default() -> Self {
        Self {
            tau: 1024,
            max_entries: 100_000_000,
        }
    }
}

impl ModelOptions {
    pub fn on_demand() -> Self {
        Self { tau: 0, ..Self::default() }
    }

    pub fn precompute_all() -> Self {
        Self {
            tau: usize::MAX,
            ..Self::default()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SamplingMode {
    Precomputed,
    OnDemand,
}

/// Immutable transition sampler shared by all walk workers.
#[derive(Clone, Debug)]
pub struct TransitionModel {
    bias: Bias,
    tau: usize,
    /// Table offset for each adjacency slot (directed edge), or `NONE`.
    edge_table: Vec<usize>,
    /// First-step table offset for each node, or `NONE`.
    first_table: Vec<usize>,
    prob: Vec<f64>,
    alias: Vec<u32>,
}

/// Builds alias tables for every directed edge into a node of degree `<= tau`.
pub fn preprocess_transitions(g: &AugmentedGraph, params: &WalkParams, options: &ModelOptions) -> Result<TransitionModel> {
    params.validate()?;
    let bias = params.bias();
    let n = g.n_nodes();
    let tau = options.tau;
    let stored = |d: usize| d > 0 && d <= tau;

    let mut first_table = vec![NONE; n];
    let mut edge_table = vec![NONE; g.n_slots()];
    let mut needed: u64 = 0;
    // per-node arena ranges, used to split the arena for parallel filling
    let mut node_start = Vec::with_capacity(n + 1);
    for u in 0..n as u32 {
        node_start.push(needed as usize);
        let d = g.degree(u);
        if stored(d) {
            first_table[u as usize] = needed as usize;
            needed += d as u64;
        }
        for slot in g.slots(u) {
            let dv = g.degree(g.slot_target(slot));
            if stored(dv) {
                edge_table[slot] = needed as usize;
                needed += dv as u64;
            }
        }
        if needed > options.max_entries {
            return Err(Error::MemoryBudget {
                needed: count_entries(g, tau),
                budget: options.max_entries,
            });
        }
    }
    node_start.push(needed as usize);

    let mut prob = vec![0.0; needed as usize];
    let mut alias = vec![0u32; needed as usize];
    let mut chunks = Vec::with_capacity(n);
    {
        let (mut prob_rest, mut alias_rest) = (prob.as_mut_slice(), alias.as_mut_slice());
        for u in 0..n {
            let len = node_start[u + 1] - node_start[u];
            let (p, pr) = std::mem::take(&mut prob_rest).split_at_mut(len);
            let (a, ar) = std::mem::take(&mut alias_rest).split_at_mut(len);
            prob_rest = pr;
            alias_rest = ar;
            if len > 0 {
                chunks.push((u as u32, p, a));
            }
        }
    }
    chunks.into_par_iter().for_each_init(
        || (Vec::new(), Vec::new(), Vec::new()),
        |(weights, small, large), (u, prob, alias)| {
            let mut at = 0;
            if stored(g.degree(u)) {
                first_step_weights(g, &bias, u, weights);
                let end = at + weights.len();
                build_alias(weights, &mut prob[at..end], &mut alias[at..end], small, large);
                at = end;
            }
            for slot in g.slots(u) {
                let v = g.slot_target(slot);
                if stored(g.degree(v)) {
                    transition_weights(g, &bias, u, v, weights);
                    let end = at + weights.len();
                    build_alias(weights, &mut prob[at..end], &mut alias[at..end], small, large);
                    at = end;
                }
            }
        },
    );

    Ok(TransitionModel {
        bias,
        tau,
        edge_table,
        first_table,
        prob,
        alias,
    })
}

/// Alias entries a model with threshold `tau` stores for `g`.
pub fn count_entries(g: &AugmentedGraph, tau: usize) -> u64 {
    (0..g.n_nodes() as u32)
        .map(|v| g.degree(v) as u64)
        .filter(|&d| d > 0 && d <= tau as u64)
        .map(|d| d + d * d)
        .sum()
}

impl TransitionModel {
    pub fn bias(&self) -> &Bias {
        &self.bias
    }

    pub fn tau(&self) -> usize {
        self.tau
    }

    /// Number of stored alias entries.
    pub fn stored_entries(&self) -> usize {
        self.prob.len()
    }

    pub fn n_precomputed_edges(&self) -> usize {
        self.edge_table.iter().filter(|&&o| o != NONE).count()
    }

    /// How the move out of the head of adjacency slot `slot` is sampled.
    pub fn mode(&self, slot: usize) -> SamplingMode {
        if self.edge_table[slot] == NONE {
            SamplingMode::OnDemand
        } else {
            SamplingMode::Precomputed
        }
    }

    /// The stored distribution for the directed edge at `slot`, decoded from
    /// its alias table.
    pub fn stored_distribution(&self, g: &AugmentedGraph, slot: usize) -> Option<Vec<f64>> {
        let off = self.edge_table[slot];
        (off != NONE).then(|| {
            let d = g.degree(g.slot_target(slot));
            decode_alias(&self.prob[off..off + d], &self.alias[off..off + d])
        })
    }

    /// Samples the slot taken out of `current`.
    ///
    /// `arrival` is the previous node and the slot the walk used to reach
    /// `current` (absent on the first step). Returns `None` when `current`
    /// has no neighbors.
    pub fn sample<R: Rng + ?Sized>(
        &self,
        g: &AugmentedGraph,
        arrival: Option<(u32, usize)>,
        current: u32,
        rng: &mut R,
        scratch: &mut Vec<f64>,
    ) -> Option<usize> {
        let d = g.degree(current);
        if d == 0 {
            return None;
        }
        let base = g.slots(current).start;
        let off = match arrival {
            Some((_, slot)) => self.edge_table[slot],
            None => self.first_table[current as usize],
        };
        if off != NONE {
            return Some(base + sample_alias(&self.prob[off..off + d], &self.alias[off..off + d], rng));
        }
        match arrival {
            Some((prev, _)) => transition_weights(g, &self.bias, prev, current, scratch),
            None => first_step_weights(g, &self.bias, current, scratch),
        }
        Some(base + sample_linear(scratch, rng))
    }
}

fn sample_linear<R: Rng + ?Sized>(weights: &[f64], rng: &mut R) -> usize {
    let total: f64 = weights.iter().sum();
    let mut target = rng.random::<f64>() * total;
    for (i, w) in weights.iter().enumerate() {
        if target < *w {
            return i;
        }
        target -= w;
    }
    // rounding left us past the end
    weights.iter().rposition(|w| *w > 0.0).unwrap_or(weights.len() - 1)
}
