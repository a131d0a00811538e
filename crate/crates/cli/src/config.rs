//! Flat `key=value` configuration files. Each key is a long flag name of
//! the subcommand; values from the command line win over the file.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::Path;

use anyhow::{bail, Context, Result};

use crate::args::RunCmd;

pub fn parse_config(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            bail!("line {}: expected key=value", i + 1);
        };
        let k = k.trim();
        if k.is_empty() || k.starts_with('-') {
            bail!("line {}: bad key {k:?}", i + 1);
        }
        out.push((k.to_owned(), v.trim().to_owned()));
    }
    Ok(out)
}

/// Replaces `--config FILE` with the file's settings as flags placed
/// directly after the subcommand, ahead of anything typed by the user.
pub fn expand_config(args: Vec<OsString>, subcommands: &[&str]) -> Result<Vec<OsString>> {
    let mut rest = Vec::with_capacity(args.len());
    let mut file = None;
    let mut it = args.into_iter();
    while let Some(a) = it.next() {
        if a == "--config" {
            file = Some(it.next().context("--config needs a file")?);
        } else if let Some(path) = a.to_str().and_then(|s| s.strip_prefix("--config=")) {
            file = Some(path.into());
        } else {
            rest.push(a);
        }
    }
    let Some(file) = file else {
        return Ok(rest);
    };
    let path = Path::new(&file);
    let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
    let settings = parse_config(&text).with_context(|| format!("config {}", path.display()))?;
    let at = rest
        .iter()
        .position(|a| a.to_str().is_some_and(|s| subcommands.contains(&s)))
        .context("--config needs a subcommand")?;
    let flags = settings.into_iter().map(|(k, v)| OsString::from(format!("--{k}={v}")));
    rest.splice(at + 1..at + 1, flags);
    Ok(rest)
}

/// Effective settings of a run, readable back through `--config`.
pub fn render_manifest(cmd: &RunCmd) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# fane {}", env!("CARGO_PKG_VERSION"));
    let mut put = |k: &str, v: String| {
        let _ = writeln!(s, "{k}={v}");
    };
    let g = &cmd.graph;
    put("edges", g.edges.display().to_string());
    if let Some(a) = &g.attributes {
        put("attributes", a.display().to_string());
    }
    put(
        "attr-format",
        match g.attr_format {
            fane_core::graph::AttrFormat::Dense => "dense",
            fane_core::graph::AttrFormat::Triplet => "triplet",
        }
        .into(),
    );
    if let Some(m) = g.num_attrs {
        put("num-attrs", m.to_string());
    }
    if let Some(l) = &g.labels {
        put("labels", l.display().to_string());
    }
    if let Some(n) = g.num_nodes {
        put("num-nodes", n.to_string());
    }
    put("attr-weight", g.attr_weight.clone());
    if let Some(f) = &g.attr_scales {
        put("attr-scales", f.display().to_string());
    }
    let w = &cmd.walk;
    put("p", w.p.to_string());
    put("q", w.q.to_string());
    put("r", w.r.to_string());
    put("strategy", w.strategy.to_string());
    put("walk-length", w.walk_length.to_string());
    put("walks-per-node", w.walks_per_node.to_string());
    put("tau", w.tau.to_string());
    put("max-entries", w.max_entries.to_string());
    put("beta-graph", w.beta_graph.to_string());
    put("raw-starts-only", w.raw_starts_only.to_string());
    let t = &cmd.train;
    put("dim", t.dim.to_string());
    put("window", t.window.to_string());
    put("negatives", t.negatives.to_string());
    put("epochs", t.epochs.to_string());
    put("lr", t.lr.to_string());
    put("min-lr", t.min_lr.to_string());
    put("workers", t.workers.to_string());
    put("deterministic", t.deterministic.to_string());
    put("fixed-window", t.fixed_window.to_string());
    if let Some(x) = t.subsample {
        put("subsample", x.to_string());
    }
    let e = &cmd.eval;
    put("ratios", e.ratios.clone());
    put("C", e.c.to_string());
    put("reps", e.reps.to_string());
    put("iterations", e.iterations.to_string());
    put("seed", cmd.seed.seed.to_string());
    put("write-corpus", cmd.write_corpus.to_string());
    put("out", cmd.out.display().to_string());
    s
}
