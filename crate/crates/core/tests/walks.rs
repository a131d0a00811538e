mod common;

use std::collections::HashMap;

use common::{chi_square_p, five_node_fixture, random_attributed_graph};
use fane_core::graph::{build_augmented, AttrEdgeWeight, AttrId, AttributeMatrix, AttributedGraph, NodeId, NodeNames};
use fane_core::rng::{stream, Domain};
use fane_core::walk::{
    first_step_distribution, generate_corpus, generate_walk, preprocess_transitions, transition_distribution,
    walk_rng, write_corpus, ModelOptions, Strategy, WalkParams,
};
use rand::Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF};

fn fixture_params() -> WalkParams {
    WalkParams {
        p: 2.0,
        q: 0.5,
        r: 0.25,
        strategy: Strategy::TargetFocused,
        walk_length: 40,
        walks_per_node: 4,
        seed: 11,
        ..Default::default()
    }
}

#[test]
fn sampled_moves_fit_the_analytic_distribution_in_both_modes() {
    let g = build_augmented(&random_attributed_graph(3, 30, 40, 6, 2), &AttrEdgeWeight::Value);
    let params = WalkParams {
        p: 0.5,
        q: 2.0,
        r: 0.3,
        ..Default::default()
    };
    let mut pick = stream(99, 0, 0, Domain::Synthetic);
    let states: Vec<(u32, usize)> = (0..20)
        .map(|_| loop {
            let u = pick.random_range(0..g.n_nodes() as u32);
            if g.degree(u) > 0 {
                let slot = g.slots(u).start + pick.random_range(0..g.degree(u));
                break (u, slot);
            }
        })
        .collect();
    for options in [ModelOptions::precompute_all(), ModelOptions::on_demand()] {
        let model = preprocess_transitions(&g, &params, &options).unwrap();
        for (i, &(u, slot)) in states.iter().enumerate() {
            let v = g.slot_target(slot);
            let expected = transition_distribution(&g, &params, u, v).unwrap();
            // with 40 tests at 1% a chance miss is likely; a miss is retried once on a fresh stream
            let p = (0..2)
                .map(|attempt| {
                    let mut counts = vec![0u64; g.degree(v)];
                    let mut rng = stream(5 + attempt, i as u64, options.tau as u64, Domain::Walk);
                    let mut scratch = Vec::new();
                    for _ in 0..100_000 {
                        let s = model.sample(&g, Some((u, slot)), v, &mut rng, &mut scratch).unwrap();
                        counts[s - g.slots(v).start] += 1;
                    }
                    chi_square_p(&counts, &expected)
                })
                .find(|&p| p > 0.01)
                .unwrap_or(0.0);
            assert!(p > 0.01, "state ({u}, {v}) tau={}: p = {p}", options.tau);
        }
    }
}

#[test]
fn first_steps_fit_the_analytic_distribution() {
    let g = five_node_fixture();
    let params = fixture_params();
    for options in [ModelOptions::precompute_all(), ModelOptions::on_demand()] {
        let model = preprocess_transitions(&g, &params, &options).unwrap();
        for v in 0..g.n_nodes() as u32 {
            let expected = first_step_distribution(&g, &params, v).unwrap();
            let mut counts = vec![0u64; g.degree(v)];
            let mut rng = stream(6, v as u64, options.tau as u64, Domain::Walk);
            for _ in 0..100_000 {
                let s = model.sample(&g, None, v, &mut rng, &mut Vec::new()).unwrap();
                counts[s - g.slots(v).start] += 1;
            }
            assert!(chi_square_p(&counts, &expected) > 0.01);
        }
    }
}

#[test]
fn precomputed_and_on_demand_walks_agree() {
    // two-sample chi-square over next-node counts from the same state
    let g = five_node_fixture();
    let params = fixture_params();
    let pre = preprocess_transitions(&g, &params, &ModelOptions::precompute_all()).unwrap();
    let lazy = preprocess_transitions(&g, &params, &ModelOptions::on_demand()).unwrap();
    let (u, v) = (0u32, 2u32);
    let slot = g.slots(u).start + g.position(u, v).unwrap();
    let count = |m: &fane_core::TransitionModel, seed| {
        let mut c = vec![0u64; g.degree(v)];
        let mut rng = stream(seed, 0, 0, Domain::Walk);
        for _ in 0..100_000 {
            c[m.sample(&g, Some((u, slot)), v, &mut rng, &mut Vec::new()).unwrap() - g.slots(v).start] += 1;
        }
        c
    };
    let (a, b) = (count(&pre, 1), count(&lazy, 2));
    let (na, nb) = (a.iter().sum::<u64>() as f64, b.iter().sum::<u64>() as f64);
    let mut stat = 0.0;
    for (&x, &y) in a.iter().zip(&b) {
        let pooled = (x + y) as f64 / (na + nb);
        stat += (x as f64 - na * pooled).powi(2) / (na * pooled) + (y as f64 - nb * pooled).powi(2) / (nb * pooled);
    }
    let p = ChiSquared::new((a.len() - 1) as f64).unwrap().sf(stat);
    assert!(p > 0.01, "p = {p}");
}

#[test]
fn walk_bigrams_fit_the_transition_kernel() {
    let g = five_node_fixture();
    let params = WalkParams {
        walk_length: 1000,
        ..fixture_params()
    };
    let model = preprocess_transitions(&g, &params, &ModelOptions::default()).unwrap();
    let mut counts: HashMap<(u32, u32), Vec<u64>> = HashMap::new();
    let mut steps = 0;
    let mut i = 0;
    while steps < 1_000_000 {
        let start = (i % g.n_nodes()) as u32;
        let w = generate_walk(&g, &model, start, &params, &mut walk_rng(21, start, i as u64)).unwrap().0;
        for t in w.windows(3) {
            let slot = g.position(t[1], t[2]).unwrap();
            counts.entry((t[0], t[1])).or_insert_with(|| vec![0; g.degree(t[1])])[slot] += 1;
        }
        steps += w.len() - 1;
        i += 1;
    }
    // pooled Pearson statistic over every second-order state
    let (mut stat, mut df) = (0.0, 0.0);
    for ((u, v), c) in &counts {
        let expected = transition_distribution(&g, &params, *u, *v).unwrap();
        let n: u64 = c.iter().sum();
        for (&o, &e) in c.iter().zip(&expected) {
            stat += (o as f64 - e * n as f64).powi(2) / (e * n as f64);
        }
        df += (c.len() - 1) as f64;
    }
    assert_eq!(counts.len(), g.n_slots());
    let p = ChiSquared::new(df).unwrap().sf(stat);
    assert!(p > 0.01, "p = {p}");
}

#[test]
fn corpus_bytes_do_not_depend_on_thread_count() {
    let g = five_node_fixture();
    let params = fixture_params();
    let model = preprocess_transitions(&g, &params, &ModelOptions::default()).unwrap();
    let render = |threads| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        let corpus = pool.install(|| generate_corpus(&g, &model, &params).unwrap());
        let mut buf = Vec::new();
        write_corpus(&corpus, &g, &mut buf).unwrap();
        buf
    };
    let one = render(1);
    assert_eq!(one, render(2));
    assert_eq!(one, render(4));
}

#[test]
fn corpus_covers_every_node_w_times() {
    let g = five_node_fixture();
    let params = fixture_params();
    let model = preprocess_transitions(&g, &params, &ModelOptions::default()).unwrap();
    let c = generate_corpus(&g, &model, &params).unwrap();
    assert_eq!(c.len(), params.walks_per_node * g.n_nodes());
    let mut starts = vec![0; g.n_nodes()];
    for w in c.iter() {
        starts[w[0] as usize] += 1;
        assert_eq!(w.len(), params.walk_length);
    }
    assert!(starts.iter().all(|&s| s == params.walks_per_node));
}

#[test]
fn huge_r_keeps_walks_off_attribute_bridges() {
    // two raw triangles joined only through attribute node a0
    let g = AttributedGraph::from_edges(
        NodeNames::identity(6),
        [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)].map(|(a, b)| (NodeId(a), NodeId(b), 1.0)),
    )
    .with_attributes(AttributeMatrix::from_entries(1, vec![(NodeId(0), AttrId(0), 1.0), (NodeId(3), AttrId(0), 1.0)]).unwrap());
    let g = build_augmented(&g, &AttrEdgeWeight::Value);
    let params = WalkParams {
        r: 1e6,
        strategy: Strategy::TargetFocused,
        walk_length: 10,
        walks_per_node: 100_000 / 7 + 1,
        ..Default::default()
    };
    let model = preprocess_transitions(&g, &params, &ModelOptions::default()).unwrap();
    let c = generate_corpus(&g, &model, &params).unwrap();
    assert!(c.len() >= 100_000);
    let (mut steps, mut on_attr) = (0u64, 0u64);
    for w in c.iter() {
        for &x in &w[1..] {
            steps += 1;
            on_attr += g.is_attribute(x) as u64;
        }
    }
    assert!((on_attr as f64) < 1e-3 * steps as f64, "{on_attr} of {steps}");
}
