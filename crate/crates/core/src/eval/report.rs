use std::io::{BufRead, Write};

use rayon::prelude::*;

use super::metrics::{macro_f1, micro_f1};
use super::split::stratified_split;
use super::svm::{train_linear_svm, SvmOptions};
use crate::embed::Embedding;
use crate::graph::{load_labels, NodeNames};
use crate::{Error, Result};

/// Feature rows of the labeled raw nodes of an embedding.
#[derive(Clone, Debug, PartialEq)]
pub struct LabeledData {
    pub ids: Vec<String>,
    pub dim: usize,
    pub features: Vec<f64>,
    pub classes: Vec<u32>,
    pub class_names: Vec<String>,
}

impl LabeledData {
    pub fn new(ids: Vec<String>, dim: usize, features: Vec<f64>, classes: Vec<u32>, class_names: Vec<String>) -> Self {
        assert_eq!(features.len(), ids.len() * dim);
        assert_eq!(classes.len(), ids.len());
        Self {
            ids,
            dim,
            features,
            classes,
            class_names,
        }
    }

    /// Joins `node class` lines with the raw-node rows of `embedding`.
    /// Attribute rows never become features.
    pub fn from_embedding<R: BufRead>(embedding: &Embedding, labels: R) -> Result<Self> {
        let mut names = NodeNames::new();
        let mut rows = Vec::new();
        for i in 0..embedding.n_rows() {
            if !embedding.is_attribute_row(i) {
                names.intern(embedding.label(i));
                rows.push(i);
            }
        }
        let labels = load_labels(labels, &names)?;
        if labels.is_empty() {
            return Err(Error::Empty("labels; evaluation needs labeled nodes"));
        }
        let mut data = Self {
            ids: Vec::new(),
            dim: embedding.dim(),
            features: Vec::new(),
            classes: Vec::new(),
            class_names: (0..labels.n_classes())
                .map(|c| labels.class_name(crate::graph::ClassId(c as u32)).to_owned())
                .collect(),
        };
        for (node, class) in labels.iter() {
            let row = rows[node.index()];
            data.ids.push(embedding.label(row).to_owned());
            data.features.extend_from_slice(embedding.row(row));
            data.classes.push(class.0);
        }
        Ok(data)
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    fn gather(&self, idx: &[usize]) -> (Vec<f64>, Vec<u32>) {
        let mut x = Vec::with_capacity(idx.len() * self.dim);
        for &i in idx {
            x.extend_from_slice(&self.features[i * self.dim..(i + 1) * self.dim]);
        }
        (x, idx.iter().map(|&i| self.classes[i]).collect())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EvalSpec {
    pub ratios: Vec<f64>,
    pub reps: usize,
    pub seed: u64,
    pub c: f64,
    pub iterations: usize,
}

impl Default for EvalSpec {
    fn default() -> Self {
        Self {
            ratios: (1..=9).map(|i| i as f64 / 10.0).collect(),
            reps: 10,
            seed: 0,
            c: 1.0,
            iterations: SvmOptions::default().iterations,
        }
    }
}

/// One (ratio, repetition, C, d) evaluation.
#[derive(Clone, Debug, PartialEq)]
pub struct Record {
    pub ratio: f64,
    pub rep: usize,
    pub c: f64,
    pub d: usize,
    pub micro_f1: f64,
    pub macro_f1: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RatioSummary {
    pub ratio: f64,
    pub micro_mean: f64,
    pub micro_std: f64,
    pub macro_mean: f64,
    pub macro_std: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClassificationReport {
    pub c: f64,
    pub seed: u64,
    pub records: Vec<Record>,
}

fn mean_std(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    let var = if v.len() > 1 {
        v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    (mean, var.sqrt())
}

impl ClassificationReport {
    /// Mean and sample standard deviation per training ratio.
    pub fn summary(&self) -> Vec<RatioSummary> {
        let mut ratios: Vec<f64> = self.records.iter().map(|r| r.ratio).collect();
        ratios.dedup();
        ratios
            .into_iter()
            .map(|ratio| {
                let rs: Vec<&Record> = self.records.iter().filter(|r| r.ratio == ratio).collect();
                let (micro_mean, micro_std) = mean_std(&rs.iter().map(|r| r.micro_f1).collect::<Vec<_>>());
                let (macro_mean, macro_std) = mean_std(&rs.iter().map(|r| r.macro_f1).collect::<Vec<_>>());
                RatioSummary {
                    ratio,
                    micro_mean,
                    micro_std,
                    macro_mean,
                    macro_std,
                }
            })
            .collect()
    }

    pub fn mean_micro_f1(&self, ratio: f64) -> Option<f64> {
        self.summary().into_iter().find(|s| s.ratio == ratio).map(|s| s.micro_mean)
    }
}

/// Trains and scores the classifier on `spec.reps` stratified splits per
/// training ratio.
pub fn evaluate(data: &LabeledData, spec: &EvalSpec) -> Result<ClassificationReport> {
    if data.is_empty() {
        return Err(Error::Empty("labels; evaluation needs labeled nodes"));
    }
    if spec.reps == 0 || spec.ratios.is_empty() {
        return Err(Error::param("evaluation needs at least one ratio and one repetition"));
    }
    let cells: Vec<(f64, usize)> = spec
        .ratios
        .iter()
        .flat_map(|&r| (0..spec.reps).map(move |rep| (r, rep)))
        .collect();
    let records = cells
        .par_iter()
        .map(|&(ratio, rep)| {
            let split = stratified_split(&data.classes, ratio, spec.seed, rep as u64)?;
            let (x, y) = data.gather(&split.train);
            let svm = train_linear_svm(
                &x,
                data.dim,
                &y,
                &SvmOptions {
                    c: spec.c,
                    iterations: spec.iterations,
                },
            )?;
            let (tx, ty) = data.gather(&split.test);
            let pred = svm.predict(&tx);
            Ok(Record {
                ratio,
                rep,
                c: spec.c,
                d: data.dim,
                micro_f1: micro_f1(&pred, &ty)?,
                macro_f1: macro_f1(&pred, &ty)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ClassificationReport {
        c: spec.c,
        seed: spec.seed,
        records,
    })
}

/// Evaluates every (d, C) cell; `data` holds one labeled set per dimension.
pub fn sweep(data: &[LabeledData], c_grid: &[f64], spec: &EvalSpec) -> Result<Vec<Record>> {
    let mut out = Vec::new();
    for d in data {
        for &c in c_grid {
            out.extend(evaluate(d, &EvalSpec { c, ..spec.clone() })?.records);
        }
    }
    Ok(out)
}

pub fn write_records_csv<W: Write>(mut w: W, records: &[Record]) -> Result<()> {
    writeln!(w, "ratio,rep,C,d,micro_f1,macro_f1")?;
    for r in records {
        writeln!(w, "{},{},{},{},{},{}", r.ratio, r.rep, r.c, r.d, r.micro_f1, r.macro_f1)?;
    }
    Ok(())
}
