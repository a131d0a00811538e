use std::fs::{self, File};
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};
use std::time::Duration;

use anyhow::anyhow;
use fane_core::embed::{
    read_embedding, read_embedding_binary, train, write_embedding, write_embedding_binary, Embedding, TrainParams,
};
use fane_core::eval::{
    evaluate, kmeans, line_chart_svg, project_2d, scatter_svg, write_records_csv, write_scatter_csv, ClassificationReport,
    EvalSpec, KMeansOptions, LabeledData,
};
use fane_core::graph::{
    build_augmented, load_attr_scales, load_attributes, load_edge_list, load_labels, read_dump, read_node_names,
    write_dump, write_labels, write_node_names, AttrEdgeWeight, AttributedGraph, AugmentedGraph, EdgeListOptions,
    NodeNames,
};
use fane_core::pipeline::label_rows;
use fane_core::scaling::{run_attr_series, run_node_series, write_timings_csv, BenchSpec, Series};
use fane_core::walk::{generate_corpus, preprocess_transitions, read_corpus, write_corpus, Corpus, ModelOptions, WalkParams};

use crate::args::*;
use crate::config::render_manifest;
use crate::output::write_file;
use crate::ranges::{parse_ratios, parse_sizes};
use crate::{CmdResult, Failure, StageExt};

fn open(path: &Path, stage: &'static str) -> CmdResult<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| Failure::input(stage, anyhow!("{}: {e}", path.display())))
}

fn create_dir(dir: &Path, stage: &'static str) -> CmdResult<()> {
    fs::create_dir_all(dir).map_err(|e| Failure::stage(stage, anyhow!("{}: {e}", dir.display())))
}

fn output(path: &Path, stage: &'static str, f: impl FnOnce(&mut crate::output::Output) -> anyhow::Result<()>) -> CmdResult<()> {
    write_file(path, f).map_err(|e| Failure::stage(stage, e))
}

fn with_pool<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> CmdResult<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Failure::stage("setup", e.into()))?;
    Ok(pool.install(f))
}

fn load_graph(args: &GraphArgs) -> CmdResult<AttributedGraph> {
    const STAGE: &str = "build";
    let options = EdgeListOptions { num_nodes: args.num_nodes };
    let mut g = load_edge_list(open(&args.edges, STAGE)?, &options)
        .stage_in(STAGE, format!("edges {}", args.edges.display()))?;
    if let Some(path) = &args.attributes {
        let m = load_attributes(open(path, STAGE)?, &g.names, args.attr_format, args.num_attrs)
            .stage_in(STAGE, format!("attributes {}", path.display()))?;
        g = g.with_attributes(m);
    }
    if let Some(path) = &args.labels {
        let l = load_labels(open(path, STAGE)?, &g.names)
            .stage_in(STAGE, format!("labels {}", path.display()))?;
        g = g.with_labels(l);
    }
    log::info!("loaded {} nodes, {} edges, {} attribute entries", g.n_nodes(), g.n_edges(), g.attributes.nnz());
    Ok(g)
}

fn weight_rule(args: &GraphArgs, g: &AttributedGraph) -> CmdResult<AttrEdgeWeight> {
    if let Some(path) = &args.attr_scales {
        if args.attr_weight != "value" {
            return Err(Failure::input("build", anyhow!("--attr-scales combines only with --attr-weight value")));
        }
        let scales = load_attr_scales(open(path, "build")?, g.attributes.n_attrs()).stage("build")?;
        return Ok(AttrEdgeWeight::Scaled(scales));
    }
    match args.attr_weight.as_str() {
        "value" => Ok(AttrEdgeWeight::Value),
        w => {
            let w: f64 = w
                .parse()
                .map_err(|_| Failure::input("build", anyhow!("--attr-weight takes `value` or a number, got {w:?}")))?;
            AttrEdgeWeight::uniform(w).stage("build")
        }
    }
}

fn write_graph_dir(dir: &Path, g: &AttributedGraph, aug: &AugmentedGraph) -> CmdResult<()> {
    create_dir(dir, "build")?;
    output(&dir.join("graph.dump"), "build", |w| Ok(write_dump(aug, w)?))?;
    output(&dir.join("nodes.txt"), "build", |w| Ok(write_node_names(&g.names, w)?))?;
    output(&dir.join("stats.txt"), "build", |w| Ok(write!(w, "{}", aug.stats())?))?;
    if !g.labels.is_empty() {
        output(&dir.join("labels.txt"), "build", |w| Ok(write_labels(g, w)?))?;
    }
    Ok(())
}

fn read_graph_dir(dir: &Path, stage: &'static str) -> CmdResult<(AugmentedGraph, NodeNames)> {
    let aug = read_dump(open(&dir.join("graph.dump"), stage)?).stage(stage)?;
    let names = read_node_names(open(&dir.join("nodes.txt"), stage)?).stage(stage)?;
    if names.len() != aug.n_raw() {
        return Err(Failure::input(stage, anyhow!("{} lists {} nodes but the graph has {}", dir.display(), names.len(), aug.n_raw())));
    }
    Ok((aug, names))
}

pub fn build(args: &BuildArgs) -> CmdResult<()> {
    let g = load_graph(&args.graph)?;
    let aug = build_augmented(&g, &weight_rule(&args.graph, &g)?);
    write_graph_dir(&args.out, &g, &aug)?;
    print!("{}", aug.stats());
    Ok(())
}

fn walk_params(w: &WalkArgs, seed: u64) -> (WalkParams, ModelOptions) {
    (
        WalkParams {
            p: w.p,
            q: w.q,
            r: w.r,
            strategy: w.strategy,
            beta_graph: w.beta_graph,
            walk_length: w.walk_length,
            walks_per_node: w.walks_per_node,
            seed,
            raw_starts_only: w.raw_starts_only,
        },
        ModelOptions {
            tau: w.tau,
            max_entries: w.max_entries,
        },
    )
}

fn make_corpus(aug: &AugmentedGraph, w: &WalkArgs, seed: u64, workers: usize) -> CmdResult<Corpus> {
    let (params, options) = walk_params(w, seed);
    params.validate().stage("walk")?;
    with_pool(workers, || {
        let model = preprocess_transitions(aug, &params, &options)?;
        log::info!("stored {} transition entries", model.stored_entries());
        generate_corpus(aug, &model, &params)
    })?
    .stage("walk")
}

pub fn walk(args: &WalkCmd) -> CmdResult<()> {
    let (aug, _) = read_graph_dir(&args.graph, "walk")?;
    let corpus = make_corpus(&aug, &args.walk, args.seed.seed, args.workers)?;
    output(&args.out, "walk", |w| Ok(write_corpus(&corpus, &aug, w)?))?;
    log::info!("wrote {} walks, {} tokens", corpus.len(), corpus.n_tokens());
    Ok(())
}

fn train_params(t: &TrainArgs, seed: u64) -> TrainParams {
    TrainParams {
        dim: t.dim,
        window: t.window,
        negatives: t.negatives,
        epochs: t.epochs,
        lr: t.lr,
        min_lr: t.min_lr,
        seed,
        workers: if t.deterministic { 1 } else { t.workers.max(1) },
        dynamic_window: !t.fixed_window,
        subsample: t.subsample,
    }
}

fn make_embedding(corpus: &Corpus, aug: &AugmentedGraph, names: &NodeNames, t: &TrainArgs, seed: u64) -> CmdResult<Embedding> {
    let params = train_params(t, seed);
    params.validate().stage("embed")?;
    let trained = train(corpus, &params).stage("embed")?;
    for (i, loss) in trained.epoch_losses.iter().enumerate() {
        log::info!("epoch {}: mean loss {loss:.5}", i + 1);
    }
    label_rows(&trained, aug, names).stage("embed")
}

fn save_embedding(path: &Path, e: &Embedding, binary: bool, stage: &'static str) -> CmdResult<()> {
    output(path, stage, |w| {
        if binary {
            write_embedding_binary(e, w)?
        } else {
            write_embedding(e, w)?
        }
        Ok(())
    })
}

pub fn embed(args: &EmbedCmd) -> CmdResult<()> {
    let (aug, names) = read_graph_dir(&args.graph, "embed")?;
    let corpus = read_corpus(open(&args.corpus, "embed")?, &aug).stage("embed")?;
    let e = make_embedding(&corpus, &aug, &names, &args.train, args.seed.seed)?;
    save_embedding(&args.out, &e, args.binary, "embed")
}

fn load_embedding(path: &Path, stage: &'static str) -> CmdResult<Embedding> {
    let reader = open(path, stage)?;
    let binary = path.extension().is_some_and(|x| x == "bin");
    if binary { read_embedding_binary(reader) } else { read_embedding(reader) }
        .stage_in(stage, format!("embeddings {}", path.display()))
}

fn eval_spec(e: &EvalArgs, seed: u64) -> CmdResult<EvalSpec> {
    Ok(EvalSpec {
        ratios: parse_ratios(&e.ratios).map_err(|err| Failure::input("eval", err))?,
        reps: e.reps,
        seed,
        c: e.c,
        iterations: e.iterations,
    })
}

fn summary_table(report: &ClassificationReport) -> String {
    let mut s = String::from("ratio  micro_f1        macro_f1\n");
    for r in report.summary() {
        s += &format!(
            "{:<5}  {:.4} ± {:.4}  {:.4} ± {:.4}\n",
            r.ratio, r.micro_mean, r.micro_std, r.macro_mean, r.macro_std
        );
    }
    s
}

fn run_eval(data: &LabeledData, spec: &EvalSpec, workers: usize, out: &Path) -> CmdResult<ClassificationReport> {
    let report = with_pool(workers, || evaluate(data, spec))?.stage("eval")?;
    output(out, "eval", |w| Ok(write_records_csv(w, &report.records)?))?;
    print!("{}", summary_table(&report));
    Ok(report)
}

pub fn eval(args: &EvalCmd) -> CmdResult<()> {
    let e = load_embedding(&args.embeddings, "eval")?;
    let data = LabeledData::from_embedding(&e, open(&args.labels, "eval")?).stage("eval")?;
    let spec = eval_spec(&args.eval, args.seed.seed)?;
    run_eval(&data, &spec, args.workers, &args.out)?;
    Ok(())
}

/// Groups of the rows of `e` for coloring, with the group names.
fn color_groups(args: &VizCmd, e: &Embedding) -> CmdResult<(Vec<u32>, Vec<String>)> {
    const STAGE: &str = "viz";
    let mut names: Vec<String> = Vec::new();
    let mut intern = |s: &str| -> u32 {
        match names.iter().position(|n| n == s) {
            Some(i) => i as u32,
            None => {
                names.push(s.to_owned());
                (names.len() - 1) as u32
            }
        }
    };
    let groups = match args.color_by {
        ColorBy::Label => {
            let path = args
                .labels
                .as_ref()
                .ok_or_else(|| Failure::input(STAGE, anyhow!("--color-by label needs --labels")))?;
            let mut node_names = NodeNames::new();
            for i in 0..e.n_rows() {
                node_names.intern(e.label(i));
            }
            let labels = load_labels(open(path, STAGE)?, &node_names).stage(STAGE)?;
            (0..e.n_rows())
                .map(|i| match labels.get(fane_core::NodeId(i as u32)) {
                    Some(c) => intern(labels.class_name(c)),
                    None if e.is_attribute_row(i) => intern("attribute"),
                    None => intern("unlabeled"),
                })
                .collect()
        }
        ColorBy::Attribute => match &args.graph {
            // each raw node takes its lowest-id attribute; attribute nodes their own
            Some(dir) => {
                let (aug, node_names) = read_graph_dir(dir, STAGE)?;
                (0..e.n_rows())
                    .map(|i| {
                        let label = e.label(i);
                        if e.is_attribute_row(i) {
                            return intern(label);
                        }
                        let first = node_names
                            .get(label)
                            .and_then(|v| aug.neighbors(v.0).iter().copied().find(|&x| aug.is_attribute(x)));
                        match first {
                            Some(x) => intern(&aug.node_label(x, &node_names)),
                            None => intern("none"),
                        }
                    })
                    .collect()
            }
            None => (0..e.n_rows())
                .map(|i| intern(if e.is_attribute_row(i) { "attribute node" } else { "raw node" }))
                .collect(),
        },
        ColorBy::Cluster => {
            let k = args
                .k
                .ok_or_else(|| Failure::input(STAGE, anyhow!("--color-by cluster needs --k")))?;
            let km = kmeans(e.data(), e.dim(), k, args.seed.seed, &KMeansOptions::default()).stage(STAGE)?;
            let groups: Vec<u32> = km.assignments.iter().map(|&a| a as u32).collect();
            names = (0..k).map(|c| format!("cluster {c}")).collect();
            return Ok((groups, names));
        }
    };
    Ok((groups, names))
}

pub fn viz(args: &VizCmd) -> CmdResult<()> {
    let e = load_embedding(&args.embeddings, "viz")?;
    let (points, pca) = project_2d(e.data(), e.dim()).stage("viz")?;
    let ratio = pca.explained_variance_ratio();
    log::info!("explained variance {:.3} + {:.3}", ratio[0], ratio[1]);
    let (groups, names) = color_groups(args, &e)?;
    let classes: Vec<String> = groups.iter().map(|&g| names[g as usize].clone()).collect();
    let path = |ext: &str| {
        let mut p = args.out.as_os_str().to_owned();
        p.push(ext);
        PathBuf::from(p)
    };
    output(&path(".csv"), "viz", |w| Ok(write_scatter_csv(w, e.labels(), &points, &classes)?))?;
    let title = format!("PCA projection ({:.0}% of variance)", 100.0 * (ratio[0] + ratio[1]));
    output(&path(".svg"), "viz", |w| Ok(w.write_all(scatter_svg(&title, &points, &groups, &names).as_bytes())?))
}

fn describe(s: &Series) -> String {
    let fit = s.fit.map_or("no fit".to_owned(), |f| {
        format!("slope {:.3e} s/unit, intercept {:.3} s, R^2 {:.4}", f.slope, f.intercept, f.r2)
    });
    match &s.aborted {
        Some(why) => format!("{}: {fit} (stopped early: {why})", s.name),
        None => format!("{}: {fit}", s.name),
    }
}

pub fn bench(args: &BenchCmd) -> CmdResult<()> {
    let defaults = BenchSpec::default();
    let bad = |e: anyhow::Error| Failure::input("bench", e);
    let spec = BenchSpec {
        node_sizes: parse_sizes(&args.nodes, &defaults.node_sizes).map_err(bad)?,
        degree: args.degree,
        attr_counts: parse_sizes(&args.attrs, &defaults.attr_counts).map_err(bad)?,
        attr_series_nodes: args.attr_nodes,
        attr_universe: args.attr_universe,
        reps: args.reps,
        seed: args.seed.seed,
        timeout: args.timeout.map(Duration::from_secs_f64),
        train: TrainParams {
            workers: args.workers.max(1),
            ..defaults.train.clone()
        },
        ..defaults
    };
    spec.validate().stage("bench")?;
    let (nodes, attrs) = with_pool(args.workers, || -> fane_core::Result<_> {
        Ok((run_node_series(&spec)?, run_attr_series(&spec)?))
    })?
    .stage("bench")?;
    let attrs_path = {
        let stem = args.out.file_stem().unwrap_or_default().to_string_lossy();
        let ext = args.out.extension().map_or(String::new(), |x| format!(".{}", x.to_string_lossy()));
        args.out.with_file_name(format!("{stem}_attrs{ext}"))
    };
    output(&args.out, "bench", |w| Ok(write_timings_csv(w, &nodes, args.workers)?))?;
    output(&attrs_path, "bench", |w| Ok(write_timings_csv(w, &attrs, args.workers)?))?;
    let chart = |s: &Series, x: &str| {
        let pts = s.points.iter().map(|p| (p.size as f64, p.median_total)).collect();
        line_chart_svg(&format!("Embedding time against {x}"), x, "seconds", &[("total".to_owned(), pts)])
    };
    output(&args.out.with_extension("svg"), "bench", |w| Ok(w.write_all(chart(&nodes, "nodes").as_bytes())?))?;
    output(&attrs_path.with_extension("svg"), "bench", |w| {
        Ok(w.write_all(chart(&attrs, "virtual edges").as_bytes())?)
    })?;
    println!("{}", describe(&nodes));
    println!("{}", describe(&attrs));
    Ok(())
}

pub fn run(args: &RunCmd) -> CmdResult<()> {
    create_dir(&args.out, "setup")?;
    output(&args.out.join("manifest.txt"), "setup", |w| Ok(w.write_all(render_manifest(args).as_bytes())?))?;
    if args.dry_run {
        println!("{}", args.out.join("manifest.txt").display());
        return Ok(());
    }
    let seed = args.seed.seed;
    let workers = args.train.workers.max(1);
    let g = load_graph(&args.graph)?;
    // validate every stage's settings before doing any work
    walk_params(&args.walk, seed).0.validate().stage("walk")?;
    train_params(&args.train, seed).validate().stage("embed")?;
    let spec = if g.labels.is_empty() { None } else { Some(eval_spec(&args.eval, seed)?) };

    let aug = build_augmented(&g, &weight_rule(&args.graph, &g)?);
    write_graph_dir(&args.out.join("graph"), &g, &aug)?;
    let corpus = make_corpus(&aug, &args.walk, seed, workers)?;
    if args.write_corpus {
        output(&args.out.join("corpus.txt"), "walk", |w| Ok(write_corpus(&corpus, &aug, w)?))?;
    }
    let e = with_pool(workers, || make_embedding(&corpus, &aug, &g.names, &args.train, seed))??;
    drop(corpus);
    save_embedding(&args.out.join("embeddings.txt"), &e, false, "embed")?;

    if let Some(spec) = spec {
        let data = fane_core::pipeline::labeled_features(&g, &e).stage("eval")?;
        run_eval(&data, &spec, workers, &args.out.join("report.csv"))?;
        let (points, _) = project_2d(&data.features, data.dim).stage("viz")?;
        let classes: Vec<String> = data.classes.iter().map(|&c| data.class_names[c as usize].clone()).collect();
        output(&args.out.join("scatter.csv"), "viz", |w| Ok(write_scatter_csv(w, &data.ids, &points, &classes)?))?;
        let svg = scatter_svg("PCA projection of labeled nodes", &points, &data.classes, &data.class_names);
        output(&args.out.join("scatter.svg"), "viz", |w| Ok(w.write_all(svg.as_bytes())?))?;
    }
    log::info!("outputs in {}", args.out.display());
    Ok(())
}
