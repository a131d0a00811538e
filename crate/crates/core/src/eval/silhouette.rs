use crate::{Error, Result};

/// Mean silhouette coefficient of the rows of `x` under `groups`.
///
/// Points alone in their group score 0.
pub fn silhouette(x: &[f64], dim: usize, groups: &[u32]) -> Result<f64> {
    if dim == 0 || x.len() != groups.len() * dim {
        return Err(Error::Invalid("points and groups do not match".into()));
    }
    let k = groups.iter().max().map_or(0, |&g| g as usize + 1);
    let mut sizes = vec![0usize; k];
    groups.iter().for_each(|&g| sizes[g as usize] += 1);
    if sizes.iter().filter(|&&s| s > 0).count() < 2 {
        return Err(Error::Invalid("silhouette needs at least two groups".into()));
    }
    let n = groups.len();
    let row = |i: usize| &x[i * dim..(i + 1) * dim];
    let mut sums = vec![0.0; k];
    let mut total = 0.0;
    for i in 0..n {
        sums.iter_mut().for_each(|s| *s = 0.0);
        for j in 0..n {
            if j != i {
                let d: f64 = row(i).iter().zip(row(j)).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
                sums[groups[j] as usize] += d;
            }
        }
        let own = groups[i] as usize;
        if sizes[own] < 2 {
            continue;
        }
        let a = sums[own] / (sizes[own] - 1) as f64;
        let b = (0..k)
            .filter(|&g| g != own && sizes[g] > 0)
            .map(|g| sums[g] / sizes[g] as f64)
            .fold(f64::INFINITY, f64::min);
        let m = a.max(b);
        if m > 0.0 {
            total += (b - a) / m;
        }
    }
    Ok(total / n as f64)
}
