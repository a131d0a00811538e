use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fane_core::graph::AttrFormat;
use fane_core::walk::{BetaGraph, Strategy};

#[derive(Parser, Debug)]
#[command(name = "fane", version, about = "Attributed network embedding with virtual attribute nodes")]
#[command(args_override_self = true)]
pub struct Cli {
    /// Log level (error, warn, info, debug, trace).
    #[arg(long, global = true, default_value = "info")]
    pub log_level: String,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Load a raw graph and write the augmented graph.
    Build(BuildArgs),
    /// Generate a random-walk corpus over an augmented graph.
    Walk(WalkCmd),
    /// Train skip-gram embeddings on a corpus.
    Embed(EmbedCmd),
    /// Node classification over training ratios.
    Eval(EvalCmd),
    /// 2D projection scatter of an embedding.
    Viz(VizCmd),
    /// Time the pipeline on synthetic graphs of growing size.
    Bench(BenchCmd),
    /// Every stage in one go, with a manifest of the effective settings.
    Run(RunCmd),
}

#[derive(Args, Debug, Clone)]
pub struct GraphArgs {
    /// Edge list: `src dst [weight]` lines.
    #[arg(long)]
    pub edges: PathBuf,
    /// Attribute file.
    #[arg(long)]
    pub attributes: Option<PathBuf>,
    #[arg(long, default_value = "triplet", value_parser = parse_attr_format)]
    pub attr_format: AttrFormat,
    /// Attribute count; inferred from the file when omitted.
    #[arg(long)]
    pub num_attrs: Option<usize>,
    /// Labels: `node class` lines.
    #[arg(long)]
    pub labels: Option<PathBuf>,
    /// Registers nodes `0..N` up front so isolated nodes are kept.
    #[arg(long)]
    pub num_nodes: Option<usize>,
    /// Virtual edge weight: `value` or a positive constant.
    #[arg(long, default_value = "value")]
    pub attr_weight: String,
    /// Per-attribute weight scales: `attr scale` lines.
    #[arg(long)]
    pub attr_scales: Option<PathBuf>,
}

fn parse_attr_format(s: &str) -> Result<AttrFormat, String> {
    s.parse().map_err(|e: fane_core::Error| e.to_string())
}

#[derive(Args, Debug, Clone)]
pub struct WalkArgs {
    /// Return parameter.
    #[arg(long, default_value_t = 1.0)]
    pub p: f64,
    /// In-out parameter for raw nodes.
    #[arg(long, default_value_t = 1.0)]
    pub q: f64,
    /// In-out parameter for attribute nodes.
    #[arg(long, default_value_t = 1.0)]
    pub r: f64,
    #[arg(long, default_value = "tf", value_parser = parse_strategy)]
    pub strategy: Strategy,
    #[arg(long, default_value_t = 80)]
    pub walk_length: usize,
    #[arg(long, default_value_t = 10)]
    pub walks_per_node: usize,
    /// Nodes up to this degree get precomputed alias tables; 0 samples everything on demand.
    #[arg(long, default_value_t = 1024)]
    pub tau: usize,
    /// Cap on stored alias entries.
    #[arg(long, default_value_t = 100_000_000)]
    pub max_entries: u64,
    /// Graph in which the distance-one test is made.
    #[arg(long, default_value = "augmented", value_parser = parse_beta_graph)]
    pub beta_graph: BetaGraph,
    /// Start walks from raw nodes only.
    #[arg(long, num_args = 0..=1, default_value_t = false, default_missing_value = "true", action = clap::ArgAction::Set)]
    pub raw_starts_only: bool,
}

fn parse_strategy(s: &str) -> Result<Strategy, String> {
    s.parse().map_err(|e: fane_core::Error| e.to_string())
}

fn parse_beta_graph(s: &str) -> Result<BetaGraph, String> {
    s.parse().map_err(|e: fane_core::Error| e.to_string())
}

#[derive(Args, Debug, Clone)]
pub struct TrainArgs {
    #[arg(long, default_value_t = 128)]
    pub dim: usize,
    /// Context size.
    #[arg(long, default_value_t = 10)]
    pub window: usize,
    #[arg(long, default_value_t = 5)]
    pub negatives: usize,
    #[arg(long, default_value_t = 5)]
    pub epochs: usize,
    #[arg(long, default_value_t = 0.025)]
    pub lr: f64,
    #[arg(long, default_value_t = 1e-4)]
    pub min_lr: f64,
    /// Threads for walking, training and evaluation.
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
    /// Sequential training regardless of --workers.
    #[arg(long, num_args = 0..=1, default_value_t = false, default_missing_value = "true", action = clap::ArgAction::Set)]
    pub deterministic: bool,
    /// Use the full window for every center instead of a random shrink.
    #[arg(long, num_args = 0..=1, default_value_t = false, default_missing_value = "true", action = clap::ArgAction::Set)]
    pub fixed_window: bool,
    /// Frequent-token subsampling threshold.
    #[arg(long)]
    pub subsample: Option<f64>,
}

#[derive(Args, Debug, Clone)]
pub struct SeedArg {
    #[arg(long, env = "FANE_SEED", default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Debug, Clone)]
pub struct EvalArgs {
    /// Training ratios as `start:end:step` or a comma list.
    #[arg(long, default_value = "0.1:0.9:0.1")]
    pub ratios: String,
    /// Inverse regularization strength of the classifier.
    #[arg(long = "C", default_value_t = 1.0)]
    pub c: f64,
    #[arg(long, default_value_t = 10)]
    pub reps: usize,
    /// Subgradient iterations per binary classifier.
    #[arg(long, default_value_t = 1000)]
    pub iterations: usize,
}

#[derive(Args, Debug)]
pub struct BuildArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct WalkCmd {
    /// Directory written by `fane build`.
    #[arg(long)]
    pub graph: PathBuf,
    #[command(flatten)]
    pub walk: WalkArgs,
    #[command(flatten)]
    pub seed: SeedArg,
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
    /// Corpus file.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct EmbedCmd {
    /// Directory written by `fane build`.
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long)]
    pub corpus: PathBuf,
    #[command(flatten)]
    pub train: TrainArgs,
    #[command(flatten)]
    pub seed: SeedArg,
    /// Write little-endian f32 instead of text.
    #[arg(long, num_args = 0..=1, default_value_t = false, default_missing_value = "true", action = clap::ArgAction::Set)]
    pub binary: bool,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct EvalCmd {
    #[arg(long)]
    pub embeddings: PathBuf,
    #[arg(long)]
    pub labels: PathBuf,
    #[command(flatten)]
    pub eval: EvalArgs,
    #[command(flatten)]
    pub seed: SeedArg,
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
    /// Report CSV.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum VizMode {
    Pca,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ColorBy {
    Label,
    Attribute,
    Cluster,
}

#[derive(Args, Debug)]
pub struct VizCmd {
    #[arg(long)]
    pub embeddings: PathBuf,
    #[arg(long, value_enum, default_value = "pca")]
    pub mode: VizMode,
    #[arg(long, value_enum, default_value = "label")]
    pub color_by: ColorBy,
    /// Needed for `--color-by label`.
    #[arg(long)]
    pub labels: Option<PathBuf>,
    /// Directory written by `fane build`; lets `--color-by attribute`
    /// color raw nodes by attribute instead of by node kind.
    #[arg(long)]
    pub graph: Option<PathBuf>,
    /// Clusters for `--color-by cluster`.
    #[arg(long)]
    pub k: Option<usize>,
    #[command(flatten)]
    pub seed: SeedArg,
    /// Writes `<out>.csv` and `<out>.svg`.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct BenchCmd {
    /// Node counts as `lo:hi` over the default ladder, `lo:hi:step`, or a comma list.
    #[arg(long, default_value = "100:100000")]
    pub nodes: String,
    #[arg(long, default_value_t = 10.0)]
    pub degree: f64,
    /// Attributes per node for the virtual-edge series.
    #[arg(long, default_value = "10:10000")]
    pub attrs: String,
    /// Node count of the virtual-edge series.
    #[arg(long, default_value_t = 1000)]
    pub attr_nodes: usize,
    /// Attributes are drawn from this many candidates.
    #[arg(long, default_value_t = 10_000)]
    pub attr_universe: usize,
    #[arg(long, default_value_t = 3)]
    pub reps: usize,
    /// Stop a series once a point takes longer than this many seconds.
    #[arg(long)]
    pub timeout: Option<f64>,
    #[command(flatten)]
    pub seed: SeedArg,
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
    /// Timings CSV; the virtual-edge series goes to `<stem>_attrs.csv`.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct RunCmd {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[command(flatten)]
    pub walk: WalkArgs,
    #[command(flatten)]
    pub train: TrainArgs,
    #[command(flatten)]
    pub eval: EvalArgs,
    #[command(flatten)]
    pub seed: SeedArg,
    /// Keep the walk corpus.
    #[arg(long, num_args = 0..=1, default_value_t = false, default_missing_value = "true", action = clap::ArgAction::Set)]
    pub write_corpus: bool,
    /// Write the manifest and stop.
    #[arg(long)]
    pub dry_run: bool,
    #[arg(long)]
    pub out: PathBuf,
}
