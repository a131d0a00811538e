use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;

use rand::Rng;

use super::sgns::{sgns_step, SharedMatrix};
use super::vocab::{build_vocabulary, Vocabulary};
use crate::rng::{self, Domain};
use crate::walk::Corpus;
use crate::{Error, Result};

const NOISE_EXPONENT: f64 = 0.75;
const NEGATIVE_RETRIES: usize = 10;

#[derive(Clone, Debug, PartialEq)]
pub struct TrainParams {
    pub dim: usize,
    /// Context size `k`.
    pub window: usize,
    pub negatives: usize,
    pub epochs: usize,
    pub lr: f64,
    /// Learning rate reached at the end of training.
    pub min_lr: f64,
    pub seed: u64,
    /// 1 gives deterministic sequential training.
    pub workers: usize,
    /// Draw each center's window uniformly from `1..=window`.
    pub dynamic_window: bool,
    /// Frequent-token subsampling threshold.
    pub subsample: Option<f64>,
}

impl Default for TrainParams {
    fn default() -> Self {
        Self {
            dim: 128,
            window: 10,
            negatives: 5,
            epochs: 5,
            lr: 0.025,
            min_lr: 1e-4,
            seed: 0,
            workers: 1,
            dynamic_window: true,
            subsample: None,
        }
    }
}

impl TrainParams {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("dimension", self.dim),
            ("window", self.window),
            ("negatives", self.negatives),
            ("epochs", self.epochs),
            ("workers", self.workers),
        ] {
            if v == 0 {
                return Err(Error::param(format!("{name} must be at least 1")));
            }
        }
        if !(self.lr > 0.0 && self.lr.is_finite()) || !(self.min_lr > 0.0 && self.min_lr <= self.lr) {
            return Err(Error::param("learning rates must satisfy 0 < min_lr <= lr"));
        }
        if let Some(t) = self.subsample {
            if !(t > 0.0 && t.is_finite()) {
                return Err(Error::param("subsampling threshold must be positive"));
            }
        }
        Ok(())
    }
}

/// Result of [`train`].
#[derive(Clone, Debug, PartialEq)]
pub struct Trained {
    /// Tokens in ascending order, one per row of `vectors`.
    pub ids: Vec<u32>,
    pub dim: usize,
    /// Input vectors, row-major.
    pub vectors: Vec<f64>,
    /// Mean pair loss of each epoch.
    pub epoch_losses: Vec<f64>,
}

impl Trained {
    pub fn n_rows(&self) -> usize {
        self.ids.len()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.vectors[i * self.dim..(i + 1) * self.dim]
    }

    pub fn row_of(&self, token: u32) -> Option<&[f64]> {
        self.ids.binary_search(&token).ok().map(|i| self.row(i))
    }
}

struct Shared<'a> {
    params: &'a TrainParams,
    vocab: Vocabulary,
    noise: crate::walk::AliasTable,
    keep: Option<Vec<f64>>,
    input: SharedMatrix,
    output: SharedMatrix,
    done: AtomicU64,
    total: u64,
}

impl Shared<'_> {
    fn lr(&self) -> f64 {
        let progress = (self.done.load(Ordering::Relaxed) as f64 / self.total as f64).min(1.0);
        self.params.lr - (self.params.lr - self.params.min_lr) * progress
    }
}

/// Trains skip-gram vectors with negative sampling on `corpus`.
///
/// Rows are produced for every token present in the corpus.
pub fn train(corpus: &Corpus, params: &TrainParams) -> Result<Trained> {
    params.validate()?;
    let vocab = build_vocabulary(corpus)?;
    let d = params.dim;
    let n = vocab.len();

    let mut init = rng::stream(params.seed, 0, 0, Domain::EmbeddingInit);
    let half = 0.5 / d as f64;
    let input: Vec<f64> = (0..n * d).map(|_| init.random_range(-half..half)).collect();

    let keep = params.subsample.map(|t| {
        let threshold = t * vocab.total() as f64;
        vocab
            .counts()
            .iter()
            .map(|&c| ((c as f64 / threshold).sqrt() + 1.0) * threshold / c as f64)
            .collect()
    });
    let indexed: Vec<u32> = corpus
        .iter()
        .flatten()
        .map(|&t| vocab.index_of(t).expect("token in vocabulary") as u32)
        .collect();
    let corpus_idx = {
        let mut c = Corpus::new();
        let mut at = 0;
        for walk in corpus.iter() {
            c.push(&indexed[at..at + walk.len()]);
            at += walk.len();
        }
        c
    };

    let shared = Shared {
        params,
        noise: vocab.noise_table(NOISE_EXPONENT),
        vocab,
        keep,
        input: SharedMatrix::from_vec(input, d),
        output: SharedMatrix::zeros(n, d),
        done: AtomicU64::new(0),
        total: (params.epochs * corpus.n_tokens()) as u64,
    };

    let workers = params.workers.min(corpus.len()).max(1);
    let mut epoch_losses = Vec::with_capacity(params.epochs);
    for epoch in 0..params.epochs {
        let sums = Mutex::new((0.0, 0u64));
        let chunk = corpus.len().div_ceil(workers);
        std::thread::scope(|s| {
            for w in 0..workers {
                let (shared, corpus_idx, sums) = (&shared, &corpus_idx, &sums);
                let walks = w * chunk..((w + 1) * chunk).min(corpus.len());
                let job = move || {
                    let r = run_worker(shared, corpus_idx, walks, epoch, w);
                    let mut s = sums.lock().unwrap();
                    s.0 += r.0;
                    s.1 += r.1;
                };
                if workers == 1 {
                    job();
                } else {
                    s.spawn(job);
                }
            }
        });
        let (loss, pairs) = sums.into_inner().unwrap();
        let mean = if pairs > 0 { loss / pairs as f64 } else { 0.0 };
        log::debug!("epoch {}: mean pair loss {mean:.6} over {pairs} pairs", epoch + 1);
        epoch_losses.push(mean);
    }

    let Shared { vocab, input, .. } = shared;
    let input = input.into_vec();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_unstable_by_key(|&i| vocab.token(i));
    let mut vectors = Vec::with_capacity(n * d);
    for &i in &order {
        vectors.extend_from_slice(&input[i * d..(i + 1) * d]);
    }
    Ok(Trained {
        ids: order.iter().map(|&i| vocab.token(i)).collect(),
        dim: d,
        vectors,
        epoch_losses,
    })
}

/// Returns the summed loss and number of pairs.
fn run_worker(s: &Shared, corpus: &Corpus, walks: std::ops::Range<usize>, epoch: usize, worker: usize) -> (f64, u64) {
    let p = s.params;
    let mut rng = rng::stream(p.seed, epoch as u64, worker as u64, Domain::Training);
    let mut scratch = Vec::with_capacity(p.dim);
    let mut negatives = Vec::with_capacity(p.negatives);
    let mut sentence = Vec::new();
    let (mut loss, mut pairs) = (0.0, 0u64);
    for i in walks {
        let walk = corpus.get(i);
        sentence.clear();
        match &s.keep {
            Some(keep) => sentence.extend(
                walk.iter()
                    .filter(|&&t| keep[t as usize] >= 1.0 || rng.random::<f64>() < keep[t as usize]),
            ),
            None => sentence.extend_from_slice(walk),
        }
        let lr = s.lr();
        for (pos, &center) in sentence.iter().enumerate() {
            let b = if p.dynamic_window { rng.random_range(1..=p.window) } else { p.window };
            let lo = pos.saturating_sub(b);
            let hi = (pos + b).min(sentence.len() - 1);
            for (j, &context) in sentence.iter().enumerate().take(hi + 1).skip(lo) {
                if j == pos {
                    continue;
                }
                negatives.clear();
                for _ in 0..p.negatives {
                    let neg = (0..NEGATIVE_RETRIES)
                        .map(|_| s.noise.sample(&mut rng))
                        .find(|&x| x != context as usize);
                    negatives.extend(neg);
                }
                loss += sgns_step(&s.input, &s.output, center as usize, context as usize, &negatives, lr, &mut scratch);
                pairs += 1;
            }
        }
        s.done.fetch_add(walk.len() as u64, Ordering::Relaxed);
    }
    (loss, pairs)
}

/// Positive (center, context) pairs for a fixed window, in visiting order.
pub fn context_pairs(walk: &[u32], window: usize) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    for (i, &c) in walk.iter().enumerate() {
        let lo = i.saturating_sub(window);
        let hi = (i + window).min(walk.len().saturating_sub(1));
        for (j, &x) in walk.iter().enumerate().take(hi + 1).skip(lo) {
            if j != i {
                out.push((c, x));
            }
        }
    }
    out
}
