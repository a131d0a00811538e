use std::collections::HashMap;

use crate::walk::{AliasTable, Corpus};
use crate::{Error, Result};

/// Distinct tokens of a corpus in order of first appearance, with counts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vocabulary {
    tokens: Vec<u32>,
    counts: Vec<u64>,
    index: HashMap<u32, u32>,
}

pub fn build_vocabulary(corpus: &Corpus) -> Result<Vocabulary> {
    let mut v = Vocabulary {
        tokens: Vec::new(),
        counts: Vec::new(),
        index: HashMap::new(),
    };
    for walk in corpus.iter() {
        for &t in walk {
            let next = v.tokens.len() as u32;
            let i = *v.index.entry(t).or_insert(next);
            if i == next {
                v.tokens.push(t);
                v.counts.push(0);
            }
            v.counts[i as usize] += 1;
        }
    }
    if v.tokens.is_empty() {
        return Err(Error::Empty("walk corpus"));
    }
    Ok(v)
}

impl Vocabulary {
    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// Token at vocabulary position `i`.
    pub fn token(&self, i: usize) -> u32 {
        self.tokens[i]
    }

    pub fn tokens(&self) -> &[u32] {
        &self.tokens
    }

    pub fn index_of(&self, token: u32) -> Option<usize> {
        self.index.get(&token).map(|&i| i as usize)
    }

    pub fn count(&self, token: u32) -> u64 {
        self.index_of(token).map_or(0, |i| self.counts[i])
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Normalized `count^exponent`, by vocabulary position.
    pub fn noise_distribution(&self, exponent: f64) -> Vec<f64> {
        let w: Vec<f64> = self.counts.iter().map(|&c| (c as f64).powf(exponent)).collect();
        let z: f64 = w.iter().sum();
        w.into_iter().map(|x| x / z).collect()
    }

    pub(crate) fn noise_table(&self, exponent: f64) -> AliasTable {
        AliasTable::new(&self.noise_distribution(exponent)).expect("vocabulary is non-empty")
    }
}
