//! Synthetic attributed graphs for benchmarks and tests.

use rand::seq::index::sample;
use rand::Rng;

use crate::graph::{AttrId, AttributeMatrix, AttributedGraph, NodeId, NodeNames};
use crate::rng::{self, Domain};
use crate::{Error, Result};

/// `G(n, p)` with `p = degree / (n - 1)`, sampled by geometric skipping.
///
/// Every node left isolated is joined to one uniformly chosen other node.
pub fn erdos_renyi(n: usize, degree: f64, seed: u64) -> Result<AttributedGraph> {
    if n < 2 {
        return Err(Error::param("an Erdos-Renyi graph needs at least 2 nodes"));
    }
    if !(degree > 0.0) || degree >= n as f64 {
        return Err(Error::param(format!("mean degree must lie in (0, {n}), got {degree}")));
    }
    let p = (degree / (n - 1) as f64).min(1.0);
    let mut rng = rng::stream(seed, n as u64, 0, Domain::Synthetic);
    let mut edges = Vec::with_capacity((degree * n as f64 / 2.0 * 1.1) as usize);
    if p >= 1.0 {
        for v in 1..n {
            edges.extend((0..v).map(|w| (v, w)));
        }
    } else {
        let log_q = (1.0 - p).ln();
        let (mut v, mut w) = (1usize, -1i64);
        while v < n {
            let r: f64 = rng.random();
            w += 1 + ((1.0 - r).ln() / log_q).floor() as i64;
            while w >= v as i64 && v < n {
                w -= v as i64;
                v += 1;
            }
            if v < n {
                edges.push((v, w as usize));
            }
        }
    }
    let mut deg = vec![0u32; n];
    for &(a, b) in &edges {
        deg[a] += 1;
        deg[b] += 1;
    }
    for v in 0..n {
        if deg[v] == 0 {
            let mut u = rng.random_range(0..n - 1);
            if u >= v {
                u += 1;
            }
            deg[v] += 1;
            deg[u] += 1;
            edges.push((v, u));
        }
    }
    Ok(AttributedGraph::from_edges(
        NodeNames::identity(n),
        edges.into_iter().map(|(a, b)| (NodeId(a as u32), NodeId(b as u32), 1.0)),
    ))
}

/// Gives every node `per_node` distinct attributes drawn uniformly from
/// `0..universe`, each with value 1.
pub fn attach_random_attributes(g: AttributedGraph, per_node: usize, universe: usize, seed: u64) -> Result<AttributedGraph> {
    if universe < per_node {
        return Err(Error::param(format!(
            "cannot draw {per_node} distinct attributes from a universe of {universe}"
        )));
    }
    let mut entries = Vec::with_capacity(g.n_nodes() * per_node);
    for v in 0..g.n_nodes() {
        let mut rng = rng::stream(seed, v as u64, per_node as u64, Domain::Synthetic);
        for a in sample(&mut rng, universe, per_node) {
            entries.push((NodeId(v as u32), AttrId(a as u32), 1.0));
        }
    }
    let attrs = AttributeMatrix::from_entries(universe, entries)?;
    Ok(g.with_attributes(attrs))
}
