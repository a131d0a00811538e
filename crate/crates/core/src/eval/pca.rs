//! Principal components by block power (subspace) iteration on the
//! covariance matrix.

use rand::Rng;

use crate::rng::{self, Domain};
use crate::{Error, Result};

const OVERSAMPLE: usize = 8;
const MAX_ITERATIONS: usize = 10_000;

#[derive(Clone, Debug, PartialEq)]
pub struct Pca {
    pub mean: Vec<f64>,
    /// `k` unit rows of length `dim`, by decreasing variance.
    pub components: Vec<f64>,
    /// Variance along each component.
    pub variances: Vec<f64>,
    /// Total variance of the data.
    pub total_variance: f64,
    pub dim: usize,
}

impl Pca {
    pub fn n_components(&self) -> usize {
        self.variances.len()
    }

    pub fn component(&self, i: usize) -> &[f64] {
        &self.components[i * self.dim..(i + 1) * self.dim]
    }

    pub fn explained_variance_ratio(&self) -> Vec<f64> {
        self.variances.iter().map(|v| v / self.total_variance).collect()
    }

    /// Coordinates of the rows of `x` in component space, row-major.
    pub fn transform(&self, x: &[f64]) -> Vec<f64> {
        let mut out = Vec::with_capacity(x.len() / self.dim * self.n_components());
        for row in x.chunks_exact(self.dim) {
            for c in 0..self.n_components() {
                out.push(
                    self.component(c)
                        .iter()
                        .zip(row.iter().zip(&self.mean))
                        .map(|(w, (x, m))| w * (x - m))
                        .sum(),
                );
            }
        }
        out
    }

    /// Mean squared distance between rows and their rank-`k` reconstruction.
    pub fn reconstruction_error(&self, x: &[f64]) -> f64 {
        let z = self.transform(x);
        let k = self.n_components();
        let n = x.len() / self.dim;
        let mut err = 0.0;
        for (i, row) in x.chunks_exact(self.dim).enumerate() {
            for j in 0..self.dim {
                let rec = self.mean[j] + (0..k).map(|c| z[i * k + c] * self.component(c)[j]).sum::<f64>();
                err += (row[j] - rec).powi(2);
            }
        }
        err / n as f64
    }
}

/// Covariance with `1/n` normalization and the column means.
pub fn covariance(x: &[f64], dim: usize) -> (Vec<f64>, Vec<f64>) {
    let n = x.len() / dim;
    let mut mean = vec![0.0; dim];
    for row in x.chunks_exact(dim) {
        mean.iter_mut().zip(row).for_each(|(m, v)| *m += v);
    }
    mean.iter_mut().for_each(|m| *m /= n as f64);
    let mut cov = vec![0.0; dim * dim];
    let mut centered = vec![0.0; dim];
    for row in x.chunks_exact(dim) {
        centered.iter_mut().zip(row.iter().zip(&mean)).for_each(|(c, (v, m))| *c = v - m);
        for a in 0..dim {
            for b in a..dim {
                cov[a * dim + b] += centered[a] * centered[b];
            }
        }
    }
    for a in 0..dim {
        for b in a..dim {
            let v = cov[a * dim + b] / n as f64;
            cov[a * dim + b] = v;
            cov[b * dim + a] = v;
        }
    }
    (cov, mean)
}

/// Eigen-decomposition of a small symmetric matrix by cyclic Jacobi
/// rotations. Returns eigenvalues and eigenvectors as columns.
fn jacobi_eigen(mut a: Vec<f64>, m: usize) -> (Vec<f64>, Vec<f64>) {
    let mut v = vec![0.0; m * m];
    (0..m).for_each(|i| v[i * m + i] = 1.0);
    let scale: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    for _ in 0..100 {
        let off: f64 = (0..m)
            .flat_map(|i| (0..m).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i * m + j].powi(2))
            .sum::<f64>()
            .sqrt();
        if off <= 1e-15 * scale {
            break;
        }
        for p in 0..m {
            for q in p + 1..m {
                let apq = a[p * m + q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q * m + q] - a[p * m + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..m {
                    let (akp, akq) = (a[k * m + p], a[k * m + q]);
                    a[k * m + p] = c * akp - s * akq;
                    a[k * m + q] = s * akp + c * akq;
                }
                for k in 0..m {
                    let (apk, aqk) = (a[p * m + k], a[q * m + k]);
                    a[p * m + k] = c * apk - s * aqk;
                    a[q * m + k] = s * apk + c * aqk;
                }
                for k in 0..m {
                    let (vkp, vkq) = (v[k * m + p], v[k * m + q]);
                    v[k * m + p] = c * vkp - s * vkq;
                    v[k * m + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    ((0..m).map(|i| a[i * m + i]).collect(), v)
}

/// Orthonormalizes the `p` columns of the `dim x p` matrix `q` in place,
/// replacing dependent columns with basis vectors.
fn orthonormalize(q: &mut [f64], dim: usize, p: usize) {
    let mut basis = 0;
    for j in 0..p {
        loop {
            for _ in 0..2 {
                for i in 0..j {
                    let proj: f64 = (0..dim).map(|r| q[r * p + i] * q[r * p + j]).sum();
                    (0..dim).for_each(|r| q[r * p + j] -= proj * q[r * p + i]);
                }
            }
            let norm: f64 = (0..dim).map(|r| q[r * p + j].powi(2)).sum::<f64>().sqrt();
            if norm > 1e-10 {
                (0..dim).for_each(|r| q[r * p + j] /= norm);
                break;
            }
            (0..dim).for_each(|r| q[r * p + j] = if r == basis % dim { 1.0 } else { 0.0 });
            basis += 1;
        }
    }
}

/// Leading `k` eigenpairs of the symmetric `dim x dim` matrix `c`, by
/// decreasing eigenvalue. Eigenvectors are returned as rows.
pub fn top_eigen(c: &[f64], dim: usize, k: usize, seed: u64) -> (Vec<f64>, Vec<f64>) {
    let p = (k + OVERSAMPLE).min(dim);
    let mut rng = rng::stream(seed, dim as u64, k as u64, Domain::EmbeddingInit);
    let mut q: Vec<f64> = (0..dim * p).map(|_| rng.random::<f64>() - 0.5).collect();
    orthonormalize(&mut q, dim, p);
    let norm: f64 = c.iter().map(|x| x * x).sum::<f64>().sqrt();
    let mut z = vec![0.0; dim * p];
    let mut values = vec![0.0; p];
    for _ in 0..MAX_ITERATIONS {
        // z = C q, then Rayleigh-Ritz on span(z)
        mat_mul(c, &q, &mut z, dim, dim, p);
        orthonormalize(&mut z, dim, p);
        let mut cz = vec![0.0; dim * p];
        mat_mul(c, &z, &mut cz, dim, dim, p);
        let mut h = vec![0.0; p * p];
        for a in 0..p {
            for b in 0..p {
                h[a * p + b] = (0..dim).map(|r| z[r * p + a] * cz[r * p + b]).sum();
            }
        }
        let (vals, vecs) = jacobi_eigen(h, p);
        let mut order: Vec<usize> = (0..p).collect();
        order.sort_by(|&a, &b| vals[b].total_cmp(&vals[a]));
        for r in 0..dim {
            for (col, &o) in order.iter().enumerate() {
                q[r * p + col] = (0..p).map(|s| z[r * p + s] * vecs[s * p + o]).sum();
            }
        }
        values = order.iter().map(|&o| vals[o]).collect();
        // residual of the wanted pairs
        mat_mul(c, &q, &mut cz, dim, dim, p);
        let resid: f64 = (0..k)
            .map(|j| (0..dim).map(|r| (cz[r * p + j] - values[j] * q[r * p + j]).powi(2)).sum::<f64>())
            .sum::<f64>()
            .sqrt();
        if resid <= 1e-13 * norm.max(f64::MIN_POSITIVE) {
            break;
        }
    }
    let mut vectors = Vec::with_capacity(k * dim);
    for j in 0..k {
        let mut col: Vec<f64> = (0..dim).map(|r| q[r * p + j]).collect();
        let big = col.iter().copied().fold(0.0f64, |m, x| if x.abs() > m.abs() { x } else { m });
        if big < 0.0 {
            col.iter_mut().for_each(|x| *x = -*x);
        }
        vectors.extend(col);
    }
    (values[..k].to_vec(), vectors)
}

fn mat_mul(a: &[f64], b: &[f64], out: &mut [f64], rows: usize, inner: usize, cols: usize) {
    for i in 0..rows {
        for j in 0..cols {
            out[i * cols + j] = (0..inner).map(|s| a[i * inner + s] * b[s * cols + j]).sum();
        }
    }
}

/// The first `k` principal components of the rows of `x`.
pub fn pca(x: &[f64], dim: usize, k: usize) -> Result<Pca> {
    if dim == 0 || x.is_empty() || x.len() % dim != 0 {
        return Err(Error::Invalid("point matrix has the wrong shape".into()));
    }
    if k == 0 || k > dim {
        return Err(Error::param(format!("cannot take {k} components of {dim}-dimensional data")));
    }
    let (cov, mean) = covariance(x, dim);
    let total_variance: f64 = (0..dim).map(|i| cov[i * dim + i]).sum();
    if !(total_variance > 0.0) {
        return Err(Error::Invalid("data has zero variance".into()));
    }
    let (variances, components) = top_eigen(&cov, dim, k, 0);
    Ok(Pca {
        mean,
        components,
        variances: variances.into_iter().map(|v| v.max(0.0)).collect(),
        total_variance,
        dim,
    })
}

/// Projection onto the first two principal components.
pub fn project_2d(x: &[f64], dim: usize) -> Result<(Vec<(f64, f64)>, Pca)> {
    if dim < 2 {
        return Err(Error::param("projection needs at least two dimensions"));
    }
    let p = pca(x, dim, 2)?;
    let z = p.transform(x);
    Ok((z.chunks_exact(2).map(|c| (c[0], c[1])).collect(), p))
}
