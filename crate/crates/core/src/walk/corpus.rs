use std::io::{BufRead, Write};

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;

use super::model::TransitionModel;
use super::params::WalkParams;
use crate::graph::{AttrId, AugmentedGraph, NodeKind};
use crate::rng::{self, Domain};
use crate::{Error, Result};

/// A sequence of unified node ids, each adjacent to the next.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Walk(pub Vec<u32>);

/// Walks stored back to back.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Corpus {
    tokens: Vec<u32>,
    ends: Vec<usize>,
}

impl Corpus {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, walk: &[u32]) {
        self.tokens.extend_from_slice(walk);
        self.ends.push(self.tokens.len());
    }

    pub fn len(&self) -> usize {
        self.ends.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ends.is_empty()
    }

    pub fn n_tokens(&self) -> usize {
        self.tokens.len()
    }

    pub fn get(&self, i: usize) -> &[u32] {
        let start = if i == 0 { 0 } else { self.ends[i - 1] };
        &self.tokens[start..self.ends[i]]
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = &[u32]> + '_ {
        (0..self.len()).map(|i| self.get(i))
    }

    /// Applies `f` to every token, e.g. to relabel nodes.
    pub fn map_tokens(&self, f: impl Fn(u32) -> u32) -> Self {
        Self {
            tokens: self.tokens.iter().map(|&t| f(t)).collect(),
            ends: self.ends.clone(),
        }
    }
}

impl<'a> FromIterator<&'a [u32]> for Corpus {
    fn from_iter<I: IntoIterator<Item = &'a [u32]>>(iter: I) -> Self {
        let mut c = Corpus::new();
        for w in iter {
            c.push(w);
        }
        c
    }
}

/// Random stream of walk number `index` from `start`.
pub fn walk_rng(seed: u64, start: u32, index: u64) -> rand_chacha::ChaCha8Rng {
    rng::stream(seed, start as u64, index, Domain::Walk)
}

fn check_model(model: &TransitionModel, params: &WalkParams) -> Result<()> {
    params.validate()?;
    if *model.bias() != params.bias() {
        return Err(Error::param("walk parameters differ from the ones the model was built with"));
    }
    Ok(())
}

fn walk_into<R: Rng + ?Sized>(
    g: &AugmentedGraph,
    model: &TransitionModel,
    start: u32,
    length: usize,
    rng: &mut R,
    scratch: &mut Vec<f64>,
    out: &mut Vec<u32>,
) {
    out.clear();
    out.push(start);
    let mut arrival = None;
    let mut current = start;
    while out.len() < length {
        let Some(slot) = model.sample(g, arrival, current, rng, scratch) else {
            break;
        };
        let next = g.slot_target(slot);
        out.push(next);
        arrival = Some((current, slot));
        current = next;
    }
}

/// One biased walk of `params.walk_length` nodes from `start`.
pub fn generate_walk<R: Rng + ?Sized>(
    g: &AugmentedGraph,
    model: &TransitionModel,
    start: u32,
    params: &WalkParams,
    rng: &mut R,
) -> Result<Walk> {
    check_model(model, params)?;
    if start as usize >= g.n_nodes() {
        return Err(Error::param(format!("start node {start} out of range")));
    }
    if g.degree(start) == 0 {
        return Err(Error::IsolatedNode(start));
    }
    let mut out = Vec::with_capacity(params.walk_length);
    walk_into(g, model, start, params.walk_length, rng, &mut Vec::new(), &mut out);
    Ok(Walk(out))
}

/// Start nodes visited in iteration `iteration`, shuffled deterministically.
pub fn visit_order(g: &AugmentedGraph, params: &WalkParams, iteration: usize) -> Vec<u32> {
    let n = if params.raw_starts_only { g.n_raw() } else { g.n_nodes() };
    let mut order: Vec<u32> = (0..n as u32).collect();
    order.shuffle(&mut rng::stream(params.seed, iteration as u64, 0, Domain::VisitOrder));
    order
}

/// `walks_per_node` walks from every start node.
///
/// Walks are listed iteration by iteration, each iteration in its shuffled
/// visit order. Each walk draws from its own `(seed, start, iteration)`
/// stream, so the corpus does not depend on the rayon pool size. Isolated
/// nodes contribute a single-node walk.
pub fn generate_corpus(g: &AugmentedGraph, model: &TransitionModel, params: &WalkParams) -> Result<Corpus> {
    check_model(model, params)?;
    let orders: Vec<Vec<u32>> = (0..params.walks_per_node)
        .map(|it| visit_order(g, params, it))
        .collect();
    let per_iter = orders.first().map_or(0, Vec::len);
    let walks: Vec<Vec<u32>> = (0..params.walks_per_node * per_iter)
        .into_par_iter()
        .map_init(Vec::new, |scratch, k| {
            let it = k / per_iter;
            let start = orders[it][k % per_iter];
            let mut rng = walk_rng(params.seed, start, it as u64);
            let mut out = Vec::with_capacity(params.walk_length);
            walk_into(g, model, start, params.walk_length, &mut rng, scratch, &mut out);
            out
        })
        .collect();
    Ok(walks.iter().map(Vec::as_slice).collect())
}

/// One walk per line; raw nodes as unified ids, attribute nodes as `a<attr>`.
pub fn write_corpus<W: Write>(corpus: &Corpus, g: &AugmentedGraph, mut w: W) -> Result<()> {
    for walk in corpus.iter() {
        for (i, &u) in walk.iter().enumerate() {
            if i > 0 {
                w.write_all(b" ")?;
            }
            match g.kind(u) {
                NodeKind::Raw(v) => write!(w, "{}", v.0)?,
                NodeKind::Attribute(a) => write!(w, "{a}")?,
            }
        }
        w.write_all(b"\n")?;
    }
    Ok(())
}

pub fn read_corpus<R: BufRead>(reader: R, g: &AugmentedGraph) -> Result<Corpus> {
    let mut corpus = Corpus::new();
    let mut walk = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        walk.clear();
        for token in line.split_whitespace() {
            let u = match token.strip_prefix('a') {
                Some(a) => a
                    .parse()
                    .ok()
                    .and_then(|a| g.node_of_attr(AttrId(a)))
                    .ok_or_else(|| Error::parse(i + 1, format!("unknown attribute node {token:?}")))?,
                None => token
                    .parse::<u32>()
                    .ok()
                    .filter(|&v| (v as usize) < g.n_raw())
                    .ok_or_else(|| Error::parse(i + 1, format!("unknown node {token:?}")))?,
            };
            walk.push(u);
        }
        corpus.push(&walk);
    }
    Ok(corpus)
}
