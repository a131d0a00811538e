use rand::seq::SliceRandom;

use crate::rng::{self, Domain};
use crate::{Error, Result};

/// Train and test positions into a label vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Split {
    pub train: Vec<usize>,
    pub test: Vec<usize>,
}

/// Per-class train counts: proportional shares rounded by largest
/// remainder, then raised to at least one per class.
pub fn train_quotas(class_sizes: &[usize], ratio: f64) -> Vec<usize> {
    let n: usize = class_sizes.iter().sum();
    let target = ((ratio * n as f64).round() as usize).clamp(1, n.saturating_sub(1).max(1));
    let exact: Vec<f64> = class_sizes.iter().map(|&s| ratio * s as f64).collect();
    let mut quota: Vec<usize> = exact.iter().map(|x| x.floor() as usize).collect();
    let mut order: Vec<usize> = (0..class_sizes.len()).collect();
    order.sort_by(|&a, &b| {
        let (ra, rb) = (exact[a] - exact[a].floor(), exact[b] - exact[b].floor());
        rb.total_cmp(&ra).then(a.cmp(&b))
    });
    let mut left = target.saturating_sub(quota.iter().sum());
    for &c in order.iter().cycle().take(order.len() * 2) {
        if left == 0 {
            break;
        }
        if quota[c] < class_sizes[c] {
            quota[c] += 1;
            left -= 1;
        }
    }
    for (q, &s) in quota.iter_mut().zip(class_sizes) {
        if *q == 0 && s > 0 {
            *q = 1;
        }
    }
    quota
}

/// Stratified split of the positions of `classes` (dense class ids).
///
/// Repetition `rep` of a given seed always yields the same split.
pub fn stratified_split(classes: &[u32], ratio: f64, seed: u64, rep: u64) -> Result<Split> {
    if !(ratio > 0.0 && ratio < 1.0) {
        return Err(Error::param(format!("training ratio must lie in (0, 1), got {ratio}")));
    }
    if classes.is_empty() {
        return Err(Error::Empty("labels"));
    }
    let k = *classes.iter().max().unwrap() as usize + 1;
    let mut members = vec![Vec::new(); k];
    for (i, &c) in classes.iter().enumerate() {
        members[c as usize].push(i);
    }
    let sizes: Vec<usize> = members.iter().map(Vec::len).collect();
    let quota = train_quotas(&sizes, ratio);
    let mut split = Split {
        train: Vec::new(),
        test: Vec::new(),
    };
    for (c, m) in members.iter_mut().enumerate() {
        if m.len() == 1 {
            log::warn!("class {c} has a single labeled node; it always goes to the training set");
        }
        m.shuffle(&mut rng::stream(seed, rep, c as u64, Domain::Split));
        split.train.extend_from_slice(&m[..quota[c]]);
        split.test.extend_from_slice(&m[quota[c]..]);
    }
    split.train.sort_unstable();
    split.test.sort_unstable();
    Ok(split)
}
