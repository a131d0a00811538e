//! Embedding time against graph size on synthetic Erdos-Renyi graphs.

use std::io::Write;
use std::time::{Duration, Instant};

use crate::embed::{train, TrainParams};
use crate::graph::{build_augmented, AttrEdgeWeight, AttributedGraph};
use crate::synth::{attach_random_attributes, erdos_renyi};
use crate::walk::{generate_corpus, preprocess_transitions, ModelOptions, WalkParams};
use crate::{Error, Result};

pub const STAGES: [&str; 5] = ["construct", "preprocess", "walk", "train", "total"];

#[derive(Clone, Debug, PartialEq)]
pub struct BenchSpec {
    pub node_sizes: Vec<usize>,
    pub degree: f64,
    /// Attributes per node for the attribute series.
    pub attr_counts: Vec<usize>,
    /// Node count of the attribute series.
    pub attr_series_nodes: usize,
    /// Attributes are drawn from `0..attr_universe`.
    pub attr_universe: usize,
    pub reps: usize,
    pub seed: u64,
    /// A point whose first repetition runs longer ends its series.
    pub timeout: Option<Duration>,
    pub walk: WalkParams,
    pub model: ModelOptions,
    pub train: TrainParams,
}

impl Default for BenchSpec {
    fn default() -> Self {
        Self {
            node_sizes: vec![100, 1_000, 10_000, 25_000, 50_000, 75_000, 100_000],
            degree: 10.0,
            attr_counts: vec![10, 100, 1_000, 2_500, 5_000, 10_000],
            attr_series_nodes: 1_000,
            attr_universe: 10_000,
            reps: 3,
            seed: 0,
            timeout: None,
            walk: WalkParams {
                walk_length: 20,
                walks_per_node: 1,
                ..Default::default()
            },
            model: ModelOptions {
                tau: 16,
                ..Default::default()
            },
            train: TrainParams {
                dim: 8,
                window: 5,
                epochs: 1,
                ..Default::default()
            },
        }
    }
}

impl BenchSpec {
    pub fn validate(&self) -> Result<()> {
        if self.reps == 0 {
            return Err(Error::param("at least one repetition is needed"));
        }
        if self.node_sizes.iter().chain([&self.attr_series_nodes]).any(|&n| n < 2) {
            return Err(Error::param("node counts must be at least 2"));
        }
        if self.attr_counts.iter().any(|&a| a == 0 || a > self.attr_universe) {
            return Err(Error::param("attribute counts must lie in 1..=universe"));
        }
        self.walk.validate()?;
        self.train.validate()
    }
}

/// Seconds spent in each pipeline stage.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct StageTimes {
    pub construct: f64,
    pub preprocess: f64,
    pub walk: f64,
    pub train: f64,
}

impl StageTimes {
    pub fn total(&self) -> f64 {
        self.construct + self.preprocess + self.walk + self.train
    }

    fn get(&self, stage: &str) -> f64 {
        match stage {
            "construct" => self.construct,
            "preprocess" => self.preprocess,
            "walk" => self.walk,
            "train" => self.train,
            _ => self.total(),
        }
    }
}

/// Runs and times the embedding pipeline on an in-memory graph.
pub fn time_pipeline(g: &AttributedGraph, walk: &WalkParams, model: &ModelOptions, train_params: &TrainParams) -> Result<StageTimes> {
    let t = Instant::now();
    let aug = build_augmented(g, &AttrEdgeWeight::Value);
    let construct = t.elapsed().as_secs_f64();
    let t = Instant::now();
    let m = preprocess_transitions(&aug, walk, model)?;
    let preprocess = t.elapsed().as_secs_f64();
    let t = Instant::now();
    let corpus = generate_corpus(&aug, &m, walk)?;
    let walk_secs = t.elapsed().as_secs_f64();
    drop(m);
    let t = Instant::now();
    let trained = train(&corpus, train_params)?;
    let train_secs = t.elapsed().as_secs_f64();
    debug_assert!(trained.vectors.iter().all(|x| x.is_finite()));
    Ok(StageTimes {
        construct,
        preprocess,
        walk: walk_secs,
        train: train_secs,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct Point {
    /// Node count or virtual-edge count, depending on the series.
    pub size: usize,
    /// Median over repetitions, per stage.
    pub median: StageTimes,
    pub median_total: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
}

/// Ordinary least squares of `y` on `x`; `None` with fewer than two
/// distinct `x` values.
pub fn ols(x: &[f64], y: &[f64]) -> Option<LinearFit> {
    let n = x.len() as f64;
    if x.len() < 2 || x.len() != y.len() {
        return None;
    }
    let (mx, my) = (x.iter().sum::<f64>() / n, y.iter().sum::<f64>() / n);
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sst: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    let sse: f64 = x.iter().zip(y).map(|(a, b)| (b - intercept - slope * a).powi(2)).sum();
    let r2 = if sst == 0.0 { 1.0 } else { 1.0 - sse / sst };
    Some(LinearFit { slope, intercept, r2 })
}

#[derive(Clone, Debug, PartialEq)]
pub struct Series {
    pub name: String,
    pub points: Vec<Point>,
    /// Total time against size.
    pub fit: Option<LinearFit>,
    /// Why the series stopped early, if it did.
    pub aborted: Option<String>,
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        (v[m - 1] + v[m]) / 2.0
    }
}

fn run_series(
    name: &str,
    spec: &BenchSpec,
    items: &[usize],
    mut make: impl FnMut(usize) -> Result<(usize, AttributedGraph)>,
) -> Result<Series> {
    let mut series = Series {
        name: name.to_owned(),
        points: Vec::new(),
        fit: None,
        aborted: None,
    };
    'points: for &item in items {
        let (size, g) = make(item)?;
        let mut runs = Vec::with_capacity(spec.reps);
        for rep in 0..spec.reps {
            let walk = WalkParams {
                seed: spec.seed.wrapping_add(rep as u64),
                ..spec.walk.clone()
            };
            let t = time_pipeline(&g, &walk, &spec.model, &spec.train)?;
            log::info!("{name} {size}: rep {rep} took {:.3}s", t.total());
            if rep == 0 && spec.timeout.is_some_and(|limit| t.total() > limit.as_secs_f64()) {
                series.aborted = Some(format!("point {size} took {:.1}s, over the timeout", t.total()));
                break 'points;
            }
            runs.push(t);
        }
        let med = |f: fn(&StageTimes) -> f64| median(runs.iter().map(f).collect());
        series.points.push(Point {
            size,
            median: StageTimes {
                construct: med(|t| t.construct),
                preprocess: med(|t| t.preprocess),
                walk: med(|t| t.walk),
                train: med(|t| t.train),
            },
            median_total: med(StageTimes::total),
        });
    }
    let xs: Vec<f64> = series.points.iter().map(|p| p.size as f64).collect();
    let ys: Vec<f64> = series.points.iter().map(|p| p.median_total).collect();
    series.fit = ols(&xs, &ys);
    Ok(series)
}

/// Total time against node count at fixed mean degree, without attributes.
pub fn run_node_series(spec: &BenchSpec) -> Result<Series> {
    spec.validate()?;
    run_series("nodes", spec, &spec.node_sizes, |n| Ok((n, erdos_renyi(n, spec.degree, spec.seed)?)))
}

/// Total time against virtual-edge count at a fixed node count.
pub fn run_attr_series(spec: &BenchSpec) -> Result<Series> {
    spec.validate()?;
    let n = spec.attr_series_nodes;
    let base = erdos_renyi(n, spec.degree.min((n - 1) as f64 / 2.0), spec.seed)?;
    run_series("virtual_edges", spec, &spec.attr_counts, |a| {
        let g = attach_random_attributes(base.clone(), a, spec.attr_universe, spec.seed)?;
        Ok((n * a, g))
    })
}

/// `size,stage,median_seconds,workers` rows.
pub fn write_timings_csv<W: Write>(mut w: W, series: &Series, workers: usize) -> Result<()> {
    writeln!(w, "size,stage,median_seconds,workers")?;
    for p in &series.points {
        for stage in STAGES {
            let secs = if stage == "total" { p.median_total } else { p.median.get(stage) };
            writeln!(w, "{},{stage},{secs},{workers}", p.size)?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ols_exact_line() {
        let f = ols(&[1.0, 2.0, 3.0], &[3.0, 5.0, 7.0]).unwrap();
        assert!((f.slope - 2.0).abs() < 1e-12 && (f.intercept - 1.0).abs() < 1e-12);
        assert!((f.r2 - 1.0).abs() < 1e-12);
        assert!(ols(&[1.0], &[2.0]).is_none());
        assert!(ols(&[1.0, 1.0], &[2.0, 3.0]).is_none());
    }

    #[test]
    fn ols_r2_by_hand() {
        let x = [0.0, 1.0, 2.0, 3.0];
        let y = [0.0, 2.0, 2.0, 5.0];
        let f = ols(&x, &y).unwrap();
        // slope = sxy/sxx = 7.5/5 = 1.5, intercept = 2.25 - 2.25 = 0
        assert!((f.slope - 1.5).abs() < 1e-12);
        assert!(f.intercept.abs() < 1e-12);
        // sse = 0 + 0.25 + 1 + 0.25 = 1.5, sst = 12.75
        assert!((f.r2 - (1.0 - 1.5 / 12.75)).abs() < 1e-12);
    }

    fn tiny() -> BenchSpec {
        BenchSpec {
            node_sizes: vec![50],
            attr_counts: vec![2, 4],
            attr_series_nodes: 40,
            attr_universe: 20,
            reps: 3,
            degree: 4.0,
            ..Default::default()
        }
    }

    #[test]
    fn single_point_skips_fit_but_keeps_table() {
        let s = run_node_series(&tiny()).unwrap();
        assert_eq!(s.points.len(), 1);
        assert!(s.fit.is_none());
        let mut buf = Vec::new();
        write_timings_csv(&mut buf, &s, 1).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 1 + STAGES.len());
        assert!(text.lines().nth(1).unwrap().starts_with("50,construct,"));
    }

    #[test]
    fn attribute_series_sizes_are_virtual_edges() {
        let s = run_attr_series(&tiny()).unwrap();
        assert_eq!(s.points.iter().map(|p| p.size).collect::<Vec<_>>(), [80, 160]);
        assert!(s.fit.is_some());
    }

    #[test]
    fn timeout_aborts_gracefully() {
        let spec = BenchSpec {
            node_sizes: vec![50, 60],
            timeout: Some(Duration::ZERO),
            ..tiny()
        };
        let s = run_node_series(&spec).unwrap();
        assert!(s.points.is_empty());
        assert!(s.aborted.is_some());
    }

    #[test]
    fn medians() {
        assert_eq!(median(vec![3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(vec![4.0, 1.0]), 2.5);
    }
}
