use std::collections::BTreeMap;
use std::fmt;
use std::ops::Range;

use super::{AttrId, AttributedGraph, NodeId, NodeNames};
use crate::{Error, Result};

/// Weight given to the virtual edge between a node and one of its attributes.
#[derive(Clone, Debug, Default, PartialEq)]
pub enum AttrEdgeWeight {
    /// The attribute value itself (1.0 for binary attributes).
    #[default]
    Value,
    /// The same weight for every virtual edge.
    Uniform(f64),
    /// Attribute value times a per-attribute scale.
    Scaled(Vec<f64>),
}

impl AttrEdgeWeight {
    pub fn uniform(weight: f64) -> Result<Self> {
        if weight > 0.0 && weight.is_finite() {
            Ok(Self::Uniform(weight))
        } else {
            Err(Error::param(format!("attribute edge weight must be positive, got {weight}")))
        }
    }

    fn weight(&self, attr: AttrId, value: f64) -> f64 {
        match self {
            Self::Value => value,
            Self::Uniform(w) => *w,
            Self::Scaled(scales) => value * scales.get(attr.index()).copied().unwrap_or(1.0),
        }
    }
}

/// What a unified node id stands for.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NodeKind {
    Raw(NodeId),
    Attribute(AttrId),
}

/// The raw graph plus one virtual node per used attribute, stored as
/// compressed adjacency lists sorted by unified id.
///
/// Raw nodes occupy ids `0..n_raw`; attribute nodes follow in attribute-id
/// order. The structure is immutable once built.
#[derive(Clone, Debug, PartialEq)]
pub struct AugmentedGraph {
    n_raw: usize,
    n_attr_columns: usize,
    attr_of: Vec<AttrId>,
    node_of_attr: Vec<Option<u32>>,
    offsets: Vec<usize>,
    targets: Vec<u32>,
    weights: Vec<f64>,
    n_raw_edges: usize,
    n_virtual_edges: usize,
    skipped_attrs: usize,
}

/// Count summary of an [`AugmentedGraph`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphStats {
    pub n_raw_nodes: usize,
    pub n_raw_edges: usize,
    pub n_attr_nodes: usize,
    pub n_virtual_edges: usize,
    pub skipped_attrs: usize,
    /// degree -> number of nodes with that degree
    pub degree_histogram: BTreeMap<usize, usize>,
}

impl GraphStats {
    pub fn n_nodes(&self) -> usize {
        self.n_raw_nodes + self.n_attr_nodes
    }

    pub fn n_edges(&self) -> usize {
        self.n_raw_edges + self.n_virtual_edges
    }
}

impl fmt::Display for GraphStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "raw_nodes={}", self.n_raw_nodes)?;
        writeln!(f, "raw_edges={}", self.n_raw_edges)?;
        writeln!(f, "attribute_nodes={}", self.n_attr_nodes)?;
        writeln!(f, "virtual_edges={}", self.n_virtual_edges)?;
        writeln!(f, "skipped_attributes={}", self.skipped_attrs)?;
        writeln!(f, "total_nodes={}", self.n_nodes())?;
        writeln!(f, "total_edges={}", self.n_edges())?;
        for (deg, count) in &self.degree_histogram {
            writeln!(f, "degree {deg} {count}")?;
        }
        Ok(())
    }
}

/// Adds one attribute node per attribute carried by at least one raw node and
/// links each carrier to it with a virtual edge.
///
/// Attributes nobody carries get no node; they are counted in
/// [`GraphStats::skipped_attrs`].
pub fn build_augmented(g: &AttributedGraph, rule: &AttrEdgeWeight) -> AugmentedGraph {
    let n_raw = g.n_nodes();
    let incidence = g.attributes.incidence();
    let mut node_of_attr = vec![None; incidence.len()];
    let mut attr_of = Vec::new();
    for (a, &count) in incidence.iter().enumerate() {
        if count > 0 {
            node_of_attr[a] = Some((n_raw + attr_of.len()) as u32);
            attr_of.push(AttrId(a as u32));
        }
    }
    let skipped = incidence.len() - attr_of.len();
    if skipped > 0 {
        log::info!("skipped {skipped} attribute(s) without any incident node");
    }
    let n = n_raw + attr_of.len();

    let mut degree = vec![0usize; n];
    for e in g.edges() {
        degree[e.a.index()] += 1;
        degree[e.b.index()] += 1;
    }
    for &(v, a, _) in g.attributes.entries() {
        degree[v.index()] += 1;
        degree[node_of_attr[a.index()].unwrap() as usize] += 1;
    }
    let mut offsets = Vec::with_capacity(n + 1);
    offsets.push(0);
    for d in &degree {
        offsets.push(offsets.last().unwrap() + d);
    }
    let total = *offsets.last().unwrap();
    let mut targets = vec![0u32; total];
    let mut weights = vec![0f64; total];
    let mut cursor = offsets[..n].to_vec();
    let mut push = |u: usize, x: u32, w: f64| {
        targets[cursor[u]] = x;
        weights[cursor[u]] = w;
        cursor[u] += 1;
    };
    for e in g.edges() {
        push(e.a.index(), e.b.0, e.weight);
        push(e.b.index(), e.a.0, e.weight);
    }
    for &(v, a, value) in g.attributes.entries() {
        let node = node_of_attr[a.index()].unwrap();
        let w = rule.weight(a, value);
        push(v.index(), node, w);
        push(node as usize, v.0, w);
    }
    sort_segments(&offsets, &mut targets, &mut weights);

    AugmentedGraph {
        n_raw,
        n_attr_columns: incidence.len(),
        attr_of,
        node_of_attr,
        offsets,
        targets,
        weights,
        n_raw_edges: g.n_edges(),
        n_virtual_edges: g.attributes.nnz(),
        skipped_attrs: skipped,
    }
}

fn sort_segments(offsets: &[usize], targets: &mut [u32], weights: &mut [f64]) {
    let mut pairs = Vec::new();
    for w in offsets.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        if targets[lo..hi].windows(2).all(|p| p[0] < p[1]) {
            continue;
        }
        pairs.clear();
        pairs.extend(targets[lo..hi].iter().copied().zip(weights[lo..hi].iter().copied()));
        pairs.sort_unstable_by_key(|p| p.0);
        for (i, (t, wt)) in pairs.iter().enumerate() {
            targets[lo + i] = *t;
            weights[lo + i] = *wt;
        }
    }
}

impl AugmentedGraph {
    /// Rebuilds a graph from per-node adjacency lists, checking symmetry and
    /// the raw/attribute bipartition of virtual edges.
    pub(crate) fn from_lists(
        n_raw: usize,
        attr_of: Vec<AttrId>,
        n_attr_columns: usize,
        mut lists: Vec<Vec<(u32, f64)>>,
    ) -> Result<Self> {
        let n = lists.len();
        if n != n_raw + attr_of.len() {
            return Err(Error::Invalid("node count does not match kinds".into()));
        }
        let mut node_of_attr = vec![None; n_attr_columns];
        for (i, a) in attr_of.iter().enumerate() {
            let slot = node_of_attr
                .get_mut(a.index())
                .ok_or_else(|| Error::Invalid(format!("attribute {a} out of range")))?;
            if slot.replace((n_raw + i) as u32).is_some() {
                return Err(Error::Invalid(format!("attribute {a} listed twice")));
            }
        }
        let mut offsets = vec![0];
        let mut targets = Vec::new();
        let mut weights = Vec::new();
        let (mut raw_half, mut virtual_half) = (0usize, 0usize);
        for (u, list) in lists.iter_mut().enumerate() {
            list.sort_by_key(|p| p.0);
            for (k, &(x, w)) in list.iter().enumerate() {
                if x as usize >= n || x as usize == u {
                    return Err(Error::Invalid(format!("node {u}: invalid neighbor {x}")));
                }
                if k > 0 && list[k - 1].0 == x {
                    return Err(Error::Invalid(format!("node {u}: repeated neighbor {x}")));
                }
                if !(w > 0.0 && w.is_finite()) {
                    return Err(Error::Invalid(format!("node {u}: non-positive weight")));
                }
                match (u >= n_raw, x as usize >= n_raw) {
                    (false, false) => raw_half += 1,
                    (true, true) => {
                        return Err(Error::Invalid(format!("attribute-attribute edge {u}-{x}")))
                    }
                    _ => virtual_half += 1,
                }
                targets.push(x);
                weights.push(w);
            }
            offsets.push(targets.len());
        }
        let g = Self {
            n_raw,
            n_attr_columns,
            attr_of,
            node_of_attr,
            offsets,
            targets,
            weights,
            n_raw_edges: raw_half / 2,
            n_virtual_edges: virtual_half / 2,
            skipped_attrs: 0,
        };
        for u in 0..n as u32 {
            for (&x, &w) in g.neighbors(u).iter().zip(g.weights(u)) {
                if g.edge_weight(x, u) != Some(w) {
                    return Err(Error::Invalid(format!("edge {u}-{x} is not symmetric")));
                }
            }
        }
        Ok(Self {
            skipped_attrs: n_attr_columns - g.n_attr_nodes(),
            ..g
        })
    }

    pub fn n_nodes(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn n_raw(&self) -> usize {
        self.n_raw
    }

    pub fn n_attr_nodes(&self) -> usize {
        self.attr_of.len()
    }

    /// Width of the attribute matrix the graph was built from.
    pub fn n_attr_columns(&self) -> usize {
        self.n_attr_columns
    }

    pub fn n_raw_edges(&self) -> usize {
        self.n_raw_edges
    }

    pub fn n_virtual_edges(&self) -> usize {
        self.n_virtual_edges
    }

    /// Undirected edge count `|E| + nnz`.
    pub fn n_edges(&self) -> usize {
        self.n_raw_edges + self.n_virtual_edges
    }

    /// Number of directed adjacency slots (twice the edge count).
    pub fn n_slots(&self) -> usize {
        self.targets.len()
    }

    pub fn is_attribute(&self, u: u32) -> bool {
        u as usize >= self.n_raw
    }

    pub fn kind(&self, u: u32) -> NodeKind {
        if self.is_attribute(u) {
            NodeKind::Attribute(self.attr_of[u as usize - self.n_raw])
        } else {
            NodeKind::Raw(NodeId(u))
        }
    }

    pub fn node_of_attr(&self, a: AttrId) -> Option<u32> {
        self.node_of_attr.get(a.index()).copied().flatten()
    }

    pub fn slots(&self, u: u32) -> Range<usize> {
        self.offsets[u as usize]..self.offsets[u as usize + 1]
    }

    pub fn neighbors(&self, u: u32) -> &[u32] {
        &self.targets[self.slots(u)]
    }

    pub fn weights(&self, u: u32) -> &[f64] {
        &self.weights[self.slots(u)]
    }

    pub fn degree(&self, u: u32) -> usize {
        self.offsets[u as usize + 1] - self.offsets[u as usize]
    }

    /// Target of a directed adjacency slot.
    pub fn slot_target(&self, slot: usize) -> u32 {
        self.targets[slot]
    }

    /// Position of `x` within the neighbor list of `u`.
    pub fn position(&self, u: u32, x: u32) -> Option<usize> {
        self.neighbors(u).binary_search(&x).ok()
    }

    pub fn has_edge(&self, u: u32, x: u32) -> bool {
        let (small, other) = if self.degree(u) <= self.degree(x) { (u, x) } else { (x, u) };
        self.position(small, other).is_some()
    }

    pub fn edge_weight(&self, u: u32, x: u32) -> Option<f64> {
        self.position(u, x).map(|i| self.weights(u)[i])
    }

    /// Output label of a unified node: the original name for raw nodes and
    /// `a<attr>` for attribute nodes.
    pub fn node_label(&self, u: u32, names: &NodeNames) -> String {
        match self.kind(u) {
            NodeKind::Raw(v) => names.name(v).to_owned(),
            NodeKind::Attribute(a) => a.to_string(),
        }
    }

    pub fn stats(&self) -> GraphStats {
        let mut degree_histogram = BTreeMap::new();
        for u in 0..self.n_nodes() as u32 {
            *degree_histogram.entry(self.degree(u)).or_insert(0) += 1;
        }
        GraphStats {
            n_raw_nodes: self.n_raw,
            n_raw_edges: self.n_raw_edges,
            n_attr_nodes: self.n_attr_nodes(),
            n_virtual_edges: self.n_virtual_edges,
            skipped_attrs: self.skipped_attrs,
            degree_histogram,
        }
    }
}
