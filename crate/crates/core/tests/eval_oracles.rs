use fane_core::eval::{
    kmeans, macro_f1, micro_f1, pca, project_2d, stratified_split, train_linear_svm, KMeansOptions, SvmOptions,
};
use fane_core::rng::{stream, Domain};
use nalgebra::{DMatrix, SymmetricEigen};
use proptest::prelude::*;
use rand::Rng;
use rand_distr_free::normal;

mod rand_distr_free {
    use rand::Rng;

    /// Box-Muller standard normal.
    pub fn normal<R: Rng>(rng: &mut R) -> f64 {
        let (u, v): (f64, f64) = (rng.random::<f64>().max(1e-300), rng.random());
        (-2.0 * u.ln()).sqrt() * (std::f64::consts::TAU * v).cos()
    }
}

fn anisotropic(seed: u64, n: usize, scales: &[f64]) -> Vec<f64> {
    let mut rng = stream(seed, 0, 0, Domain::Synthetic);
    let d = scales.len();
    // rotate by a random orthogonal matrix so the axes are not aligned
    let q = DMatrix::from_fn(d, d, |_, _| normal(&mut rng)).qr().q();
    let mut x = Vec::with_capacity(n * d);
    for _ in 0..n {
        let z = nalgebra::DVector::from_iterator(d, scales.iter().map(|s| s * normal(&mut rng) + 1.5));
        x.extend((&q * z).iter());
    }
    x
}

fn oracle_eigen(x: &[f64], d: usize) -> (Vec<f64>, DMatrix<f64>) {
    let n = x.len() / d;
    let m = DMatrix::from_row_slice(n, d, x);
    let mean = m.row_mean();
    let centered = DMatrix::from_fn(n, d, |i, j| m[(i, j)] - mean[j]);
    let cov = centered.transpose() * &centered / n as f64;
    let e = SymmetricEigen::new(cov);
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| e.eigenvalues[b].total_cmp(&e.eigenvalues[a]));
    let values = order.iter().map(|&i| e.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(d, d, |r, c| e.eigenvectors[(r, order[c])]);
    (values, vectors)
}

#[test]
fn pca_matches_dense_eigendecomposition() {
    let scales = [5.0, 3.0, 2.0, 1.0, 0.5, 0.25];
    let d = scales.len();
    let x = anisotropic(1, 400, &scales);
    let (values, vectors) = oracle_eigen(&x, d);
    for k in 1..=d {
        let p = pca(&x, d, k).unwrap();
        for c in 0..k {
            assert!((p.variances[c] - values[c]).abs() <= 1e-8 * values[0], "{k} {c}");
            let dot: f64 = p.component(c).iter().zip(vectors.column(c).iter()).map(|(a, b)| a * b).sum();
            assert!((dot.abs() - 1.0).abs() < 1e-8, "{k} {c}: {dot}");
        }
        let discarded: f64 = values[k..].iter().sum();
        assert!((p.reconstruction_error(&x) - discarded).abs() <= 1e-8, "{k}");
    }
}

#[test]
fn projection_of_planar_data_is_an_isometry() {
    let x = anisotropic_plane(3, 60);
    let (z, _) = project_2d(&x, 5).unwrap();
    let n = z.len();
    for i in 0..n {
        for j in i + 1..n {
            let a: f64 = x[i * 5..i * 5 + 5].iter().zip(&x[j * 5..j * 5 + 5]).map(|(a, b)| (a - b).powi(2)).sum();
            let b = (z[i].0 - z[j].0).powi(2) + (z[i].1 - z[j].1).powi(2);
            assert!((a.sqrt() - b.sqrt()).abs() < 1e-9, "{i} {j}");
        }
    }
}

/// Points on a random 2-plane through a random offset in five dimensions.
fn anisotropic_plane(seed: u64, n: usize) -> Vec<f64> {
    let mut rng = stream(seed, 0, 0, Domain::Synthetic);
    let q = DMatrix::from_fn(5, 5, |_, _| normal(&mut rng)).qr().q();
    let offset: Vec<f64> = (0..5).map(|_| normal(&mut rng)).collect();
    let mut x = Vec::new();
    for _ in 0..n {
        let (a, b) = (3.0 * normal(&mut rng), normal(&mut rng));
        for r in 0..5 {
            x.push(offset[r] + a * q[(r, 0)] + b * q[(r, 1)]);
        }
    }
    x
}

const SIX: [(f64, f64, u32); 6] = [
    (0.0, 2.0, 1),
    (1.0, 3.0, 1),
    (-1.0, 2.5, 1),
    (0.5, 0.0, 0),
    (2.0, 0.5, 0),
    (-1.5, 0.2, 0),
];

/// Maximum-margin separator by exhaustive search over unit directions.
fn brute_force_separator() -> (f64, f64, f64) {
    let mut best = (f64::NEG_INFINITY, 0.0, 0.0, 0.0);
    for step in 0..360_000 {
        let t = step as f64 / 360_000.0 * std::f64::consts::TAU;
        let (wx, wy) = (t.cos(), t.sin());
        let proj = |(x, y, _): (f64, f64, u32)| wx * x + wy * y;
        let lo_pos = SIX.iter().filter(|p| p.2 == 1).map(|&p| proj(p)).fold(f64::INFINITY, f64::min);
        let hi_neg = SIX.iter().filter(|p| p.2 == 0).map(|&p| proj(p)).fold(f64::NEG_INFINITY, f64::max);
        let margin = (lo_pos - hi_neg) / 2.0;
        if margin > best.0 {
            best = (margin, wx, wy, -(lo_pos + hi_neg) / 2.0);
        }
    }
    assert!(best.0 > 0.0);
    (best.1, best.2, best.3)
}

#[test]
fn svm_agrees_with_brute_force_max_margin_away_from_the_boundary() {
    let (wx, wy, b) = brute_force_separator();
    let x: Vec<f64> = SIX.iter().flat_map(|p| [p.0, p.1]).collect();
    let y: Vec<u32> = SIX.iter().map(|p| p.2).collect();
    let svm = train_linear_svm(&x, 2, &y, &SvmOptions { c: 100.0, iterations: 1000 }).unwrap();
    assert_eq!(svm.predict(&x), y);
    // the separator normal matches the oracle direction
    let m0 = svm.margins(&[0.0, 0.0]);
    let (mx, my) = (svm.margins(&[1.0, 0.0]), svm.margins(&[0.0, 1.0]));
    let (ux, uy) = (mx[1] - m0[1], my[1] - m0[1]);
    let cos = (ux * wx + uy * wy) / (ux * ux + uy * uy).sqrt();
    assert!(cos > 0.999, "{cos}");
    let mut checked = 0;
    // the box around the data, where the two separators should coincide
    for i in 0..=110 {
        for j in 0..=100 {
            let (px, py) = (-2.5 + i as f64 * 0.05, -1.0 + j as f64 * 0.05);
            let s = wx * px + wy * py + b;
            if s.abs() < 0.3 {
                continue;
            }
            assert_eq!(svm.predict_one(&[px, py]), (s > 0.0) as u32, "({px}, {py})");
            checked += 1;
        }
    }
    assert!(checked > 1000);
}

#[test]
fn svm_is_invariant_to_feature_scaling_with_matching_c() {
    let mut rng = stream(4, 0, 0, Domain::Synthetic);
    let n = 90;
    let y: Vec<u32> = (0..n).map(|i| (i % 3) as u32).collect();
    let x: Vec<f64> = y.iter().flat_map(|&c| (0..4).map(move |k| (k == c as usize) as u32 as f64)).zip(0..).map(|(v, _)| v + 0.8 * normal(&mut rng)).collect();
    let s = 4.0;
    let scaled: Vec<f64> = x.iter().map(|v| v * s).collect();
    let a = train_linear_svm(&x, 4, &y, &SvmOptions { c: 0.5, iterations: 300 }).unwrap();
    let b = train_linear_svm(&scaled, 4, &y, &SvmOptions { c: 0.5 / (s * s), iterations: 300 }).unwrap();
    assert_eq!(a.predict(&x), b.predict(&scaled));
    for (r, rs) in x.chunks(4).zip(scaled.chunks(4)) {
        for (m, ms) in a.margins(r).iter().zip(b.margins(rs)) {
            assert!((m - ms).abs() <= 1e-9 * (1.0 + m.abs()));
        }
    }
}

#[test]
fn kmeans_recovers_separated_blobs() {
    let mut rng = stream(5, 0, 0, Domain::Synthetic);
    let centers = [(0.0, 0.0), (10.0, 0.0), (0.0, 10.0), (10.0, 10.0)];
    let mut x = Vec::new();
    let mut truth = Vec::new();
    for (c, &(cx, cy)) in centers.iter().enumerate() {
        for _ in 0..50 {
            x.extend([cx + normal(&mut rng), cy + normal(&mut rng)]);
            truth.push(c);
        }
    }
    let runs: Vec<_> = (0..5).map(|seed| kmeans(&x, 2, 4, seed, &KMeansOptions::default()).unwrap()).collect();
    // every run ends at a Lloyd fixed point
    for km in &runs {
        for (i, &a) in km.assignments.iter().enumerate() {
            let d = |c: usize| (x[2 * i] - km.centroids[2 * c]).powi(2) + (x[2 * i + 1] - km.centroids[2 * c + 1]).powi(2);
            assert!((0..4).all(|c| d(a) <= d(c) + 1e-12));
        }
    }
    // and the best of a few restarts is the planted partition
    {
        let km = runs.iter().min_by(|a, b| a.inertia.last().unwrap().total_cmp(b.inertia.last().unwrap())).unwrap();
        let seed = "best";
        let mut map = [usize::MAX; 4];
        for (&t, &a) in truth.iter().zip(&km.assignments) {
            assert!(map[t] == usize::MAX || map[t] == a, "seed {seed}: blob {t} split");
            map[t] = a;
        }
        let mut used = map.to_vec();
        used.sort();
        used.dedup();
        assert_eq!(used.len(), 4, "seed {seed}: blobs merged");
    }
}

proptest! {
    #[test]
    fn micro_f1_is_accuracy(truth in prop::collection::vec(0u32..4, 1..60), noise in prop::collection::vec(0u32..4, 60)) {
        let pred: Vec<u32> = truth.iter().zip(&noise).map(|(&t, &n)| if n == 0 { (t + 1) % 4 } else { t }).collect();
        let acc = truth.iter().zip(&pred).filter(|(a, b)| a == b).count() as f64 / truth.len() as f64;
        prop_assert!((micro_f1(&pred, &truth).unwrap() - acc).abs() < 1e-12);
        let m = macro_f1(&pred, &truth).unwrap();
        prop_assert!((0.0..=1.0).contains(&m));
    }

    #[test]
    fn majority_predictor_scores(sizes in prop::collection::vec(1usize..20, 2..5)) {
        let truth: Vec<u32> = sizes.iter().enumerate().flat_map(|(c, &s)| std::iter::repeat_n(c as u32, s)).collect();
        let major = (0..sizes.len()).max_by_key(|&c| (sizes[c], std::cmp::Reverse(c))).unwrap();
        let pred = vec![major as u32; truth.len()];
        let (m, n) = (sizes[major] as f64, truth.len() as f64);
        prop_assert!((micro_f1(&pred, &truth).unwrap() - m / n).abs() < 1e-12);
        let want = 2.0 * m / (m + n) / sizes.len() as f64;
        prop_assert!((macro_f1(&pred, &truth).unwrap() - want).abs() < 1e-12);
    }

    #[test]
    fn splits_partition_and_stratify(
        sizes in prop::collection::vec(2usize..30, 1..6),
        ratio in 0.05f64..0.95,
        seed in 0u64..1000,
    ) {
        let classes: Vec<u32> = sizes.iter().enumerate().flat_map(|(c, &s)| std::iter::repeat_n(c as u32, s)).collect();
        let s = stratified_split(&classes, ratio, seed, 0).unwrap();
        let mut all: Vec<usize> = s.train.iter().chain(&s.test).copied().collect();
        all.sort();
        prop_assert_eq!(all, (0..classes.len()).collect::<Vec<_>>());
        for c in 0..sizes.len() as u32 {
            prop_assert!(s.train.iter().any(|&i| classes[i] == c));
        }
        prop_assert_eq!(&s, &stratified_split(&classes, ratio, seed, 0).unwrap());
    }
}

#[test]
fn random_features_stay_near_chance() {
    let mut rng = stream(6, 0, 0, Domain::Synthetic);
    let n = 600;
    let y: Vec<u32> = (0..n).map(|_| rng.random_range(0..3)).collect();
    let x: Vec<f64> = (0..n * 4).map(|_| normal(&mut rng)).collect();
    let split = stratified_split(&y, 0.5, 1, 0).unwrap();
    let pick = |idx: &[usize]| -> (Vec<f64>, Vec<u32>) {
        (idx.iter().flat_map(|&i| x[i * 4..i * 4 + 4].to_vec()).collect(), idx.iter().map(|&i| y[i]).collect())
    };
    let (xt, yt) = pick(&split.train);
    let (xs, ys) = pick(&split.test);
    let svm = train_linear_svm(&xt, 4, &yt, &SvmOptions::default()).unwrap();
    let f1 = micro_f1(&svm.predict(&xs), &ys).unwrap();
    assert!(f1 < 0.45, "{f1}");
}
