use rand::Rng;

use crate::rng::{self, Domain};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct KMeansOptions {
    pub max_iterations: usize,
    /// Stop once inertia improves by less than this fraction.
    pub tolerance: f64,
}

impl Default for KMeansOptions {
    fn default() -> Self {
        Self {
            max_iterations: 300,
            tolerance: 1e-6,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct KMeans {
    pub assignments: Vec<usize>,
    /// `k` rows of `dim` values.
    pub centroids: Vec<f64>,
    /// Inertia after each assignment step.
    pub inertia: Vec<f64>,
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Lloyd's algorithm with k-means++ seeding on the rows of `x`.
pub fn kmeans(x: &[f64], dim: usize, k: usize, seed: u64, options: &KMeansOptions) -> Result<KMeans> {
    if dim == 0 || x.len() % dim != 0 {
        return Err(Error::Invalid("point matrix has the wrong shape".into()));
    }
    let n = x.len() / dim;
    if k == 0 || k > n {
        return Err(Error::param(format!("k = {k} needs 1 <= k <= {n} points")));
    }
    let row = |i: usize| &x[i * dim..(i + 1) * dim];
    let mut rng = rng::stream(seed, k as u64, 0, Domain::KMeans);

    let mut centroids = Vec::with_capacity(k * dim);
    centroids.extend_from_slice(row(rng.random_range(0..n)));
    let mut nearest: Vec<f64> = (0..n).map(|i| sq_dist(row(i), &centroids[..dim])).collect();
    for _ in 1..k {
        let total: f64 = nearest.iter().sum();
        let pick = if total > 0.0 {
            let mut target = rng.random::<f64>() * total;
            nearest
                .iter()
                .position(|&d| {
                    target -= d;
                    target < 0.0
                })
                .unwrap_or_else(|| nearest.iter().rposition(|&d| d > 0.0).unwrap())
        } else {
            rng.random_range(0..n)
        };
        let start = centroids.len();
        centroids.extend_from_slice(row(pick));
        for (i, d) in nearest.iter_mut().enumerate() {
            *d = d.min(sq_dist(row(i), &centroids[start..]));
        }
    }

    let mut assignments = vec![0; n];
    let mut cost = vec![0.0; n];
    let mut inertia = Vec::new();
    for _ in 0..options.max_iterations {
        for i in 0..n {
            let (c, d) = centroids
                .chunks_exact(dim)
                .map(|c| sq_dist(row(i), c))
                .enumerate()
                .fold((0, f64::INFINITY), |best, (j, d)| if d < best.1 { (j, d) } else { best });
            assignments[i] = c;
            cost[i] = d;
        }
        // an empty cluster takes over the point farthest from its centroid
        let mut sizes = vec![0usize; k];
        assignments.iter().for_each(|&c| sizes[c] += 1);
        for c in 0..k {
            if sizes[c] == 0 {
                let far = (0..n)
                    .filter(|&i| sizes[assignments[i]] > 1)
                    .max_by(|&a, &b| cost[a].total_cmp(&cost[b]))
                    .expect("k <= n leaves a cluster with two points");
                sizes[assignments[far]] -= 1;
                sizes[c] = 1;
                assignments[far] = c;
                cost[far] = 0.0;
                centroids[c * dim..(c + 1) * dim].copy_from_slice(row(far));
            }
        }
        let current: f64 = cost.iter().sum();
        let converged = inertia
            .last()
            .is_some_and(|&prev: &f64| prev - current <= options.tolerance * prev);
        inertia.push(current);
        if converged {
            break;
        }
        centroids.iter_mut().for_each(|v| *v = 0.0);
        for (i, &c) in assignments.iter().enumerate() {
            for (v, x) in centroids[c * dim..(c + 1) * dim].iter_mut().zip(row(i)) {
                *v += x;
            }
        }
        for (c, &s) in sizes.iter().enumerate() {
            centroids[c * dim..(c + 1) * dim].iter_mut().for_each(|v| *v /= s as f64);
        }
    }
    Ok(KMeans {
        assignments,
        centroids,
        inertia,
    })
}
