#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap, HashSet};

use fane_core::graph::{
    build_augmented, AttrEdgeWeight, AttrId, AttributeMatrix, AttributedGraph, AugmentedGraph, Labels, NodeId,
    NodeNames,
};
use fane_core::rng::{stream, Domain};
use rand::Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF};

/// Five raw nodes, one attribute carried by nodes 0, 3 and 4.
pub fn five_node_fixture() -> AugmentedGraph {
    let g = AttributedGraph::from_edges(
        NodeNames::identity(5),
        [(0, 1, 1.0), (1, 2, 2.0), (0, 2, 1.0), (2, 3, 1.0), (3, 4, 0.5)].map(|(a, b, w)| (NodeId(a), NodeId(b), w)),
    )
    .with_attributes(AttributeMatrix::from_entries(1, [0, 3, 4].map(|v| (NodeId(v), AttrId(0), 1.0)).to_vec()).unwrap());
    build_augmented(&g, &AttrEdgeWeight::Value)
}

/// Connected-ish random weighted graph without attributes.
pub fn random_raw_graph(seed: u64, n: usize, extra: usize) -> AttributedGraph {
    let mut rng = stream(seed, 0, 0, Domain::Synthetic);
    let mut edges = Vec::new();
    for v in 1..n {
        let u = rng.random_range(0..v);
        edges.push((NodeId(u as u32), NodeId(v as u32), rng.random_range(0.5..3.0)));
    }
    for _ in 0..extra {
        let (a, b) = (rng.random_range(0..n), rng.random_range(0..n));
        if a != b {
            edges.push((NodeId(a as u32), NodeId(b as u32), rng.random_range(0.5..3.0)));
        }
    }
    AttributedGraph::from_edges(NodeNames::identity(n), edges)
}

/// Random graph with random binary attributes.
pub fn random_attributed_graph(seed: u64, n: usize, extra: usize, n_attrs: usize, per_node: usize) -> AttributedGraph {
    let g = random_raw_graph(seed, n, extra);
    let mut rng = stream(seed, 1, 0, Domain::Synthetic);
    let mut entries = HashSet::new();
    for v in 0..n {
        for _ in 0..per_node {
            entries.insert((v as u32, rng.random_range(0..n_attrs) as u32));
        }
    }
    let mut entries: Vec<_> = entries.into_iter().map(|(v, a)| (NodeId(v), AttrId(a), 1.0)).collect();
    entries.sort_by_key(|e| (e.0, e.1));
    g.with_attributes(AttributeMatrix::from_entries(n_attrs, entries).unwrap())
}

/// node2vec second-order transition probabilities, written from scratch
/// over an adjacency map: weight times 1/p (return), 1 (distance one) or
/// 1/q (distance two), normalized over the neighbors of `v`.
pub fn node2vec_oracle(g: &AttributedGraph, p: f64, q: f64, u: u32, v: u32) -> BTreeMap<u32, f64> {
    let mut adj: HashMap<u32, BTreeMap<u32, f64>> = HashMap::new();
    for e in g.edges() {
        adj.entry(e.a.0).or_default().insert(e.b.0, e.weight);
        adj.entry(e.b.0).or_default().insert(e.a.0, e.weight);
    }
    let mut out = BTreeMap::new();
    for (&x, &w) in &adj[&v] {
        let bias = if x == u {
            1.0 / p
        } else if adj[&u].contains_key(&x) {
            1.0
        } else {
            1.0 / q
        };
        out.insert(x, w * bias);
    }
    let z: f64 = out.values().sum();
    out.values_mut().for_each(|x| *x /= z);
    out
}

/// Upper-tail p-value of Pearson's statistic for `observed` counts
/// against `expected` probabilities. Cells with zero probability must
/// stay empty.
pub fn chi_square_p(observed: &[u64], expected: &[f64]) -> f64 {
    let n: u64 = observed.iter().sum();
    let mut stat = 0.0;
    let mut cells = 0;
    for (&o, &e) in observed.iter().zip(expected) {
        if e == 0.0 {
            assert_eq!(o, 0, "sampled an impossible outcome");
            continue;
        }
        let m = e * n as f64;
        stat += (o as f64 - m).powi(2) / m;
        cells += 1;
    }
    if cells < 2 {
        return 1.0;
    }
    ChiSquared::new((cells - 1) as f64).unwrap().sf(stat)
}

/// Planted-partition graph whose attributes carry most of the class signal.
///
/// `k` classes of `size` nodes; edges within a class with probability
/// `p_in`, across with `p_out`. Each class owns `topic` attributes; a node
/// draws `per_node` attributes, each from its own class's topic with
/// probability `purity` and from a random topic otherwise.
pub struct Sbm {
    pub k: usize,
    pub size: usize,
    pub p_in: f64,
    pub p_out: f64,
    pub topic: usize,
    pub per_node: usize,
    pub purity: f64,
}

impl Sbm {
    pub fn generate(&self, seed: u64) -> AttributedGraph {
        let n = self.k * self.size;
        let class = |v: usize| v / self.size;
        let mut rng = stream(seed, 7, 0, Domain::Synthetic);
        let mut edges = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                let p = if class(a) == class(b) { self.p_in } else { self.p_out };
                if rng.random::<f64>() < p {
                    edges.push((NodeId(a as u32), NodeId(b as u32), 1.0));
                }
            }
        }
        let mut entries = HashSet::new();
        for v in 0..n {
            for _ in 0..self.per_node {
                let t = if rng.random::<f64>() < self.purity { class(v) } else { rng.random_range(0..self.k) };
                entries.insert((v as u32, (t * self.topic + rng.random_range(0..self.topic)) as u32));
            }
        }
        let mut entries: Vec<_> = entries.into_iter().map(|(v, a)| (NodeId(v), AttrId(a), 1.0)).collect();
        entries.sort_by_key(|e| (e.0, e.1));
        let mut labels = Labels::unlabeled(n);
        for v in 0..n {
            labels.set(NodeId(v as u32), &format!("c{}", class(v)));
        }
        AttributedGraph::from_edges(NodeNames::identity(n), edges)
            .with_attributes(AttributeMatrix::from_entries(self.k * self.topic, entries).unwrap())
            .with_labels(labels)
    }
}

pub fn cosine(a: &[f64], b: &[f64]) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb: f64 = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    dot / (na * nb)
}

/// Largest relative error between the analytic negative-sampling
/// gradient and a central finite difference with step `h`, over every
/// coordinate block of one random (center, context, negatives) triple.
pub fn gradient_check(seed: u64, dim: usize, negatives: usize, h: f64) -> f64 {
    use fane_core::embed::{sgns_gradients, sgns_loss};
    let mut rng = stream(seed, 0, 0, Domain::Synthetic);
    let mut v = || (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect::<Vec<f64>>();
    let center = v();
    let context = v();
    let negs: Vec<Vec<f64>> = (0..negatives).map(|_| v()).collect();
    let loss = |c: &[f64], o: &[f64], n: &[Vec<f64>]| {
        let refs: Vec<&[f64]> = n.iter().map(Vec::as_slice).collect();
        sgns_loss(c, o, &refs)
    };
    let refs: Vec<&[f64]> = negs.iter().map(Vec::as_slice).collect();
    let g = sgns_gradients(&center, &context, &refs);
    // block 0 = center, 1 = context, 2.. = negatives
    let mut worst: f64 = 0.0;
    for block in 0..2 + negatives {
        let analytic = match block {
            0 => &g.center,
            1 => &g.context,
            b => &g.negatives[b - 2],
        };
        let mut numeric = vec![0.0; dim];
        for k in 0..dim {
            let eval = |delta: f64| {
                let (mut c, mut o, mut n) = (center.clone(), context.clone(), negs.clone());
                match block {
                    0 => c[k] += delta,
                    1 => o[k] += delta,
                    b => n[b - 2][k] += delta,
                }
                loss(&c, &o, &n)
            };
            numeric[k] = (eval(h) - eval(-h)) / (2.0 * h);
        }
        let diff: f64 = analytic.iter().zip(&numeric).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
        let scale = analytic.iter().map(|a| a * a).sum::<f64>().sqrt().max(numeric.iter().map(|a| a * a).sum::<f64>().sqrt());
        worst = worst.max(if scale > 0.0 { diff / scale } else { diff });
    }
    worst
}
