//! Raw attributed graphs and the augmented graph with virtual attribute nodes.
//!
//! Raw nodes are remapped to dense ids `0..n` at load time; the original
//! tokens are kept in [`NodeNames`] so outputs can be written back with the
//! labels the user supplied.

mod augment;
mod io;

use std::collections::HashMap;
use std::fmt;

pub use augment::{build_augmented, AttrEdgeWeight, AugmentedGraph, GraphStats, NodeKind};
pub use io::{
    load_attr_scales, load_attributes, load_edge_list, load_labels, read_dump, read_node_names,
    write_attributes, write_dump, write_edge_list, write_labels, write_node_names, AttrFormat,
    EdgeListOptions,
};

/// Dense index of a raw node.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub u32);

/// Dense index of an attribute column.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AttrId(pub u32);

/// Dense index of a ground-truth class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ClassId(pub u32);

impl NodeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl AttrId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for AttrId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a{}", self.0)
    }
}

/// Undirected weighted edge stored with `a < b`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Edge {
    pub a: NodeId,
    pub b: NodeId,
    pub weight: f64,
}

/// Bidirectional map between original node tokens and dense ids.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NodeNames {
    names: Vec<String>,
    index: HashMap<String, NodeId>,
}

impl NodeNames {
    pub fn new() -> Self {
        Self::default()
    }

    /// Names `0..n` mapped onto themselves.
    pub fn identity(n: usize) -> Self {
        let mut names = Self::new();
        for i in 0..n {
            names.intern(&i.to_string());
        }
        names
    }

    pub fn intern(&mut self, name: &str) -> NodeId {
        if let Some(&id) = self.index.get(name) {
            return id;
        }
        let id = NodeId(self.names.len() as u32);
        self.names.push(name.to_owned());
        self.index.insert(name.to_owned(), id);
        id
    }

    pub fn get(&self, name: &str) -> Option<NodeId> {
        self.index.get(name).copied()
    }

    pub fn name(&self, id: NodeId) -> &str {
        &self.names[id.index()]
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.names.iter().map(String::as_str)
    }
}

/// Sparse node-attribute matrix. Entries are sorted by `(node, attr)` and
/// every stored value is strictly positive.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct AttributeMatrix {
    n_attrs: usize,
    entries: Vec<(NodeId, AttrId, f64)>,
}

impl AttributeMatrix {
    pub fn empty(n_attrs: usize) -> Self {
        Self {
            n_attrs,
            entries: Vec::new(),
        }
    }

    /// Builds a matrix from unsorted entries. Zero values are dropped; a
    /// repeated `(node, attr)` pair or a negative value is rejected.
    pub fn from_entries(n_attrs: usize, mut entries: Vec<(NodeId, AttrId, f64)>) -> crate::Result<Self> {
        entries.retain(|e| e.2 != 0.0);
        for &(v, a, value) in &entries {
            if a.index() >= n_attrs {
                return Err(crate::Error::Invalid(format!(
                    "attribute {} out of range for {} attributes",
                    a.0, n_attrs
                )));
            }
            if !(value > 0.0 && value.is_finite()) {
                return Err(crate::Error::Invalid(format!(
                    "attribute value {value} for node {} must be positive",
                    v.0
                )));
            }
        }
        entries.sort_by_key(|e| (e.0, e.1));
        if let Some(w) = entries.windows(2).find(|w| (w[0].0, w[0].1) == (w[1].0, w[1].1)) {
            return Err(crate::Error::Invalid(format!(
                "duplicate attribute entry ({}, {})",
                w[0].0 .0, w[0].1 .0
            )));
        }
        Ok(Self { n_attrs, entries })
    }

    pub fn n_attrs(&self) -> usize {
        self.n_attrs
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[(NodeId, AttrId, f64)] {
        &self.entries
    }

    /// Number of nodes carrying each attribute.
    pub fn incidence(&self) -> Vec<usize> {
        let mut counts = vec![0; self.n_attrs];
        for &(_, a, _) in &self.entries {
            counts[a.index()] += 1;
        }
        counts
    }
}

/// Partial map from raw nodes to ground-truth classes.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Labels {
    classes: Vec<String>,
    of_node: Vec<Option<ClassId>>,
}

impl Labels {
    pub fn unlabeled(n_nodes: usize) -> Self {
        Self {
            classes: Vec::new(),
            of_node: vec![None; n_nodes],
        }
    }

    /// Assigns `class` to `node`, interning the class name.
    pub fn set(&mut self, node: NodeId, class: &str) -> ClassId {
        let id = match self.classes.iter().position(|c| c == class) {
            Some(i) => ClassId(i as u32),
            None => {
                self.classes.push(class.to_owned());
                ClassId(self.classes.len() as u32 - 1)
            }
        };
        if self.of_node.len() <= node.index() {
            self.of_node.resize(node.index() + 1, None);
        }
        self.of_node[node.index()] = Some(id);
        id
    }

    pub fn get(&self, node: NodeId) -> Option<ClassId> {
        self.of_node.get(node.index()).copied().flatten()
    }

    pub fn n_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn class_name(&self, class: ClassId) -> &str {
        &self.classes[class.0 as usize]
    }

    pub fn n_labeled(&self) -> usize {
        self.of_node.iter().filter(|c| c.is_some()).count()
    }

    pub fn is_empty(&self) -> bool {
        self.n_labeled() == 0
    }

    /// Labeled nodes in id order.
    pub fn iter(&self) -> impl Iterator<Item = (NodeId, ClassId)> + '_ {
        self.of_node
            .iter()
            .enumerate()
            .filter_map(|(i, c)| c.map(|c| (NodeId(i as u32), c)))
    }
}

/// An undirected weighted graph with node attributes and optional labels.
#[derive(Clone, Debug, Default)]
pub struct AttributedGraph {
    pub names: NodeNames,
    edges: Vec<Edge>,
    pub attributes: AttributeMatrix,
    pub labels: Labels,
    /// Self-loops discarded while loading.
    pub dropped_self_loops: usize,
}

impl AttributedGraph {
    /// Builds a graph from raw `(a, b, weight)` triples. Self-loops are
    /// dropped and repeated undirected edges are merged by summing weights.
    pub fn from_edges(names: NodeNames, raw: impl IntoIterator<Item = (NodeId, NodeId, f64)>) -> Self {
        let mut dropped = 0;
        let mut edges: Vec<Edge> = raw
            .into_iter()
            .filter_map(|(a, b, weight)| {
                if a == b {
                    dropped += 1;
                    return None;
                }
                let (a, b) = if a < b { (a, b) } else { (b, a) };
                Some(Edge { a, b, weight })
            })
            .collect();
        edges.sort_by_key(|e| (e.a, e.b));
        edges.dedup_by(|next, kept| {
            if (next.a, next.b) == (kept.a, kept.b) {
                kept.weight += next.weight;
                true
            } else {
                false
            }
        });
        if dropped > 0 {
            log::warn!("dropped {dropped} self-loop(s)");
        }
        let n = names.len();
        Self {
            names,
            edges,
            attributes: AttributeMatrix::empty(0),
            labels: Labels::unlabeled(n),
            dropped_self_loops: dropped,
        }
    }

    pub fn n_nodes(&self) -> usize {
        self.names.len()
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn with_attributes(mut self, attributes: AttributeMatrix) -> Self {
        self.attributes = attributes;
        self
    }

    pub fn with_labels(mut self, labels: Labels) -> Self {
        self.labels = labels;
        self
    }

    /// The same graph with every attribute removed.
    pub fn without_attributes(&self) -> Self {
        Self {
            attributes: AttributeMatrix::empty(0),
            ..self.clone()
        }
    }
}
