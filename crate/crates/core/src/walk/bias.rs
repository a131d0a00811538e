//! Second-order transition weights over the augmented graph.
//!
//! A walk that arrived at `v` from `u` moves to neighbor `x` with probability
//! proportional to `w'(v, x) * alpha(v, x)`, where `alpha` is `1/r` whenever
//! the strategy's attribute condition holds and the node2vec return/in-out
//! factor `beta` otherwise.

use super::params::{BetaGraph, Bias, Strategy, WalkParams};
use crate::graph::AugmentedGraph;
use crate::{Error, Result};

/// Shortest-path distance between the previous node `u` and a candidate `x`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HopDistance {
    Zero,
    One,
    Two,
}

pub fn beta(hop: HopDistance, p: f64, q: f64) -> f64 {
    match hop {
        HopDistance::Zero => 1.0 / p,
        HopDistance::One => 1.0,
        HopDistance::Two => 1.0 / q,
    }
}

/// `1/r` when the strategy's attribute condition holds, `beta` otherwise.
/// `hop` is only evaluated when needed.
pub fn alpha(
    strategy: Strategy,
    source_is_attr: bool,
    target_is_attr: bool,
    hop: impl FnOnce() -> HopDistance,
    p: f64,
    q: f64,
    r: f64,
) -> f64 {
    let focused = (strategy.source_focused() && source_is_attr)
        || (strategy.target_focused() && target_is_attr);
    if focused {
        1.0 / r
    } else {
        beta(hop(), p, q)
    }
}

pub fn hop_distance(g: &AugmentedGraph, prev: u32, x: u32, mode: BetaGraph) -> HopDistance {
    if x == prev {
        return HopDistance::Zero;
    }
    let adjacent = match mode {
        BetaGraph::Augmented => g.has_edge(prev, x),
        BetaGraph::Raw => !g.is_attribute(prev) && !g.is_attribute(x) && g.has_edge(prev, x),
    };
    if adjacent {
        HopDistance::One
    } else {
        HopDistance::Two
    }
}

/// Unnormalized weights over the neighbors of `v` for a walk that came from
/// `prev`, written into `out` in neighbor order.
pub(crate) fn transition_weights(g: &AugmentedGraph, bias: &Bias, prev: u32, v: u32, out: &mut Vec<f64>) {
    out.clear();
    let nbrs = g.neighbors(v);
    let ws = g.weights(v);
    let v_attr = g.is_attribute(v);
    let inv_r = 1.0 / bias.r;
    if bias.strategy.source_focused() && v_attr {
        out.extend(ws.iter().map(|w| w * inv_r));
        return;
    }
    let (inv_p, inv_q) = (1.0 / bias.p, 1.0 / bias.q);
    let prev_adj = g.neighbors(prev);
    let prev_attr = g.is_attribute(prev);
    let scan = prev_adj.len() <= 8 * nbrs.len();
    let mut j = 0;
    for (&x, &w) in nbrs.iter().zip(ws) {
        let x_attr = g.is_attribute(x);
        if bias.strategy.target_focused() && x_attr {
            out.push(w * inv_r);
            continue;
        }
        // advance the cursor in prev's sorted list up to x
        if scan {
            while j < prev_adj.len() && prev_adj[j] < x {
                j += 1;
            }
        } else {
            j += prev_adj[j..].partition_point(|&y| y < x);
        }
        let factor = if x == prev {
            inv_p
        } else {
            let counts = match bias.beta_graph {
                BetaGraph::Augmented => true,
                BetaGraph::Raw => !prev_attr && !x_attr,
            };
            if counts && prev_adj.get(j) == Some(&x) {
                1.0
            } else {
                inv_q
            }
        };
        out.push(w * factor);
    }
}

/// Unnormalized first-step weights: `w'(v, x)` scaled by `1/r` when the
/// strategy's attribute condition holds for `(v, x)`.
pub(crate) fn first_step_weights(g: &AugmentedGraph, bias: &Bias, v: u32, out: &mut Vec<f64>) {
    out.clear();
    let v_attr = g.is_attribute(v);
    let inv_r = 1.0 / bias.r;
    for (&x, &w) in g.neighbors(v).iter().zip(g.weights(v)) {
        let focused = (bias.strategy.source_focused() && v_attr)
            || (bias.strategy.target_focused() && g.is_attribute(x));
        out.push(if focused { w * inv_r } else { w });
    }
}

fn normalize(mut weights: Vec<f64>) -> Vec<f64> {
    let total: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= total;
    }
    weights
}

/// Probability of moving from `v` to each of its neighbors (in neighbor
/// order) given that the walk arrived from `prev`.
pub fn transition_distribution(g: &AugmentedGraph, params: &WalkParams, prev: u32, v: u32) -> Result<Vec<f64>> {
    if g.degree(v) == 0 {
        return Err(Error::IsolatedNode(v));
    }
    if !g.has_edge(prev, v) {
        return Err(Error::param(format!("{prev} -> {v} is not an edge")));
    }
    let mut out = Vec::with_capacity(g.degree(v));
    transition_weights(g, &params.bias(), prev, v, &mut out);
    Ok(normalize(out))
}

/// Distribution of the first move out of a walk's start node.
pub fn first_step_distribution(g: &AugmentedGraph, params: &WalkParams, v: u32) -> Result<Vec<f64>> {
    if g.degree(v) == 0 {
        return Err(Error::IsolatedNode(v));
    }
    let mut out = Vec::with_capacity(g.degree(v));
    first_step_weights(g, &params.bias(), v, &mut out);
    Ok(normalize(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_augmented, AttrEdgeWeight, AttrId, AttributeMatrix, AttributedGraph, NodeId, NodeNames};

    fn augmented(n: usize, edges: &[(u32, u32)], attrs: &[(u32, u32)]) -> AugmentedGraph {
        let n_attrs = attrs.iter().map(|a| a.1 as usize + 1).max().unwrap_or(0);
        let g = AttributedGraph::from_edges(
            NodeNames::identity(n),
            edges.iter().map(|&(a, b)| (NodeId(a), NodeId(b), 1.0)),
        )
        .with_attributes(
            AttributeMatrix::from_entries(
                n_attrs,
                attrs.iter().map(|&(v, a)| (NodeId(v), AttrId(a), 1.0)).collect(),
            )
            .unwrap(),
        );
        build_augmented(&g, &AttrEdgeWeight::Value)
    }

    fn params(p: f64, q: f64, r: f64, strategy: Strategy) -> WalkParams {
        WalkParams { p, q, r, strategy, ..Default::default() }
    }

    fn assert_close(a: &[f64], b: &[f64]) {
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(b) {
            assert!((x - y).abs() <= 1e-12, "{a:?} vs {b:?}");
        }
    }

    #[test]
    fn beta_cases() {
        assert_eq!(beta(HopDistance::Zero, 4.0, 0.25), 0.25);
        assert_eq!(beta(HopDistance::One, 4.0, 0.25), 1.0);
        assert_eq!(beta(HopDistance::Two, 4.0, 0.25), 4.0);
        for hop in [HopDistance::Zero, HopDistance::One, HopDistance::Two] {
            assert_eq!(beta(hop, 1.0, 1.0), 1.0);
        }
    }

    #[test]
    fn triangle_neighbor_is_one_hop() {
        let g = augmented(3, &[(0, 1), (1, 2), (2, 0)], &[]);
        assert_eq!(hop_distance(&g, 0, 2, BetaGraph::Augmented), HopDistance::One);
        assert_eq!(hop_distance(&g, 0, 0, BetaGraph::Augmented), HopDistance::Zero);
        assert_eq!(beta(hop_distance(&g, 0, 2, BetaGraph::Augmented), 4.0, 0.25), 1.0);
    }

    #[test]
    fn alpha_cases() {
        let never = || -> HopDistance { panic!("hop not needed") };
        assert_eq!(alpha(Strategy::TargetFocused, false, true, never, 1.0, 1.0, 2.0), 0.5);
        for s in Strategy::ALL {
            assert_eq!(alpha(s, false, false, || HopDistance::One, 3.0, 0.2, 5.0), 1.0);
        }
        assert_eq!(alpha(Strategy::SourceTargetFocused, true, false, never, 1.0, 1.0, 4.0), 0.25);
        assert_eq!(alpha(Strategy::SourceFocused, false, true, || HopDistance::Two, 1.0, 0.5, 4.0), 2.0);
    }

    #[test]
    fn unbiased_is_uniform() {
        let g = augmented(4, &[(0, 1), (1, 2), (1, 3), (2, 3)], &[]);
        let d = transition_distribution(&g, &params(1.0, 1.0, 1.0, Strategy::TargetFocused), 0, 1).unwrap();
        assert_close(&d, &[1.0 / 3.0; 3]);
    }

    #[test]
    fn walk_through_shared_attribute() {
        // u=0 -> v=1; v neighbors x1=2, x2=3, x3=4 and attribute node a2.
        // v and x2 carry a2; u is adjacent to x1.
        let g = augmented(5, &[(0, 1), (1, 2), (1, 3), (1, 4), (0, 2)], &[(1, 2), (3, 2)]);
        let a2 = g.node_of_attr(AttrId(2)).unwrap();
        assert_eq!(g.neighbors(1), &[0, 2, 3, 4, a2]);
        let (p, q, r) = (2.0, 0.5, 0.25);
        let d = transition_distribution(&g, &params(p, q, r, Strategy::TargetFocused), 0, 1).unwrap();
        let raw = [1.0 / p, 1.0, 1.0 / q, 1.0 / q, 1.0 / r];
        let z: f64 = raw.iter().sum();
        assert_close(&d, &raw.map(|m| m / z));
    }

    #[test]
    fn first_step_attribute_share() {
        let g = augmented(4, &[(0, 1), (0, 2), (0, 3)], &[(0, 0)]);
        let d = first_step_distribution(&g, &params(1.0, 1.0, 0.1, Strategy::TargetFocused), 0).unwrap();
        assert_close(&d, &[1.0 / 13.0, 1.0 / 13.0, 1.0 / 13.0, 10.0 / 13.0]);
        let uniform = first_step_distribution(&g, &params(1.0, 1.0, 1.0, Strategy::TargetFocused), 0).unwrap();
        assert_close(&uniform, &[0.25; 4]);
    }

    #[test]
    fn first_step_from_attribute_node_source_focused() {
        let g = augmented(3, &[(0, 1)], &[(0, 0), (1, 0), (2, 0)]);
        let a = g.node_of_attr(AttrId(0)).unwrap();
        let d = first_step_distribution(&g, &params(1.0, 1.0, 10.0, Strategy::SourceFocused), a).unwrap();
        assert_close(&d, &[1.0 / 3.0; 3]);
    }

    #[test]
    fn source_focused_ignores_r_at_raw_nodes() {
        let g = augmented(4, &[(0, 1), (1, 2), (2, 3)], &[(1, 0), (3, 0), (2, 1)]);
        for (prev, v) in [(0, 1), (1, 2), (3, 2)] {
            let lo = transition_distribution(&g, &params(2.0, 0.5, 0.01, Strategy::SourceFocused), prev, v).unwrap();
            let hi = transition_distribution(&g, &params(2.0, 0.5, 100.0, Strategy::SourceFocused), prev, v).unwrap();
            assert_eq!(lo, hi);
        }
    }

    #[test]
    fn attribute_mass_grows_as_r_shrinks() {
        let g = augmented(4, &[(0, 1), (1, 2), (2, 3)], &[(1, 0), (3, 0), (1, 1)]);
        for strategy in [Strategy::TargetFocused, Strategy::SourceTargetFocused] {
            let mass = |r: f64| {
                let d = transition_distribution(&g, &params(1.0, 1.0, r, strategy), 0, 1).unwrap();
                g.neighbors(1)
                    .iter()
                    .zip(&d)
                    .filter(|(x, _)| g.is_attribute(**x))
                    .map(|(_, p)| p)
                    .sum::<f64>()
            };
            assert!(mass(0.25) > mass(1.0) && mass(1.0) > mass(4.0));
        }
    }

    #[test]
    fn raw_beta_graph_ignores_virtual_adjacency() {
        // 0 -> 1, and 1's neighbor 2 is reachable from 0 only through attribute a0.
        let g = augmented(3, &[(0, 1), (1, 2)], &[(0, 0), (2, 0)]);
        let a0 = g.node_of_attr(AttrId(0)).unwrap();
        // prev is the attribute node, x=2 adjacent to a0 only through a virtual edge
        assert_eq!(hop_distance(&g, a0, 2, BetaGraph::Augmented), HopDistance::One);
        assert_eq!(hop_distance(&g, a0, 2, BetaGraph::Raw), HopDistance::Two);
    }

    #[test]
    fn isolated_and_non_edges_error() {
        let g = augmented(3, &[(0, 1)], &[]);
        let p = WalkParams::default();
        assert!(matches!(first_step_distribution(&g, &p, 2), Err(Error::IsolatedNode(2))));
        assert!(transition_distribution(&g, &p, 2, 1).is_err());
    }
}
