use std::collections::BTreeMap;

use crate::{Error, Result};

#[derive(Clone, Copy, Debug, Default)]
struct Counts {
    tp: u64,
    fp: u64,
    fn_: u64,
}

fn per_class(pred: &[u32], truth: &[u32]) -> Result<BTreeMap<u32, Counts>> {
    if pred.len() != truth.len() {
        return Err(Error::Invalid(format!(
            "{} predictions for {} true labels",
            pred.len(),
            truth.len()
        )));
    }
    if pred.is_empty() {
        return Err(Error::Empty("predictions"));
    }
    let mut m: BTreeMap<u32, Counts> = BTreeMap::new();
    for (&p, &t) in pred.iter().zip(truth) {
        if p == t {
            m.entry(p).or_default().tp += 1;
        } else {
            m.entry(p).or_default().fp += 1;
            m.entry(t).or_default().fn_ += 1;
        }
    }
    Ok(m)
}

fn f1(c: Counts) -> f64 {
    let denom = 2 * c.tp + c.fp + c.fn_;
    if denom == 0 {
        0.0
    } else {
        2.0 * c.tp as f64 / denom as f64
    }
}

/// F1 over counts pooled across classes.
pub fn micro_f1(pred: &[u32], truth: &[u32]) -> Result<f64> {
    let total = per_class(pred, truth)?
        .into_values()
        .fold(Counts::default(), |a, c| Counts {
            tp: a.tp + c.tp,
            fp: a.fp + c.fp,
            fn_: a.fn_ + c.fn_,
        });
    Ok(f1(total))
}

/// Unweighted mean of per-class F1 over every class that occurs in either
/// the predictions or the truth.
pub fn macro_f1(pred: &[u32], truth: &[u32]) -> Result<f64> {
    let m = per_class(pred, truth)?;
    Ok(m.values().map(|&c| f1(c)).sum::<f64>() / m.len() as f64)
}
