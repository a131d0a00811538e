//! Fixtures shared by the criterion benchmarks in `benches/`.

use fane_core::graph::{build_augmented, AttrEdgeWeight, AugmentedGraph};
use fane_core::synth::{attach_random_attributes, erdos_renyi};
use fane_core::AttributedGraph;

/// Erdos-Renyi graph with `attrs_per_node` random attributes per node
/// drawn from `universe`.
pub fn attributed(n: usize, degree: f64, attrs_per_node: usize, universe: usize, seed: u64) -> AttributedGraph {
    let g = erdos_renyi(n, degree, seed).expect("valid generator parameters");
    if attrs_per_node == 0 {
        return g;
    }
    attach_random_attributes(g, attrs_per_node, universe, seed).expect("valid attribute parameters")
}

pub fn augmented(n: usize, degree: f64, attrs_per_node: usize, universe: usize, seed: u64) -> AugmentedGraph {
    build_augmented(&attributed(n, degree, attrs_per_node, universe, seed), &AttrEdgeWeight::Value)
}
