//! Node classification, clustering and 2D projection of embeddings.

mod kmeans;
mod metrics;
mod pca;
mod plot;
mod report;
mod silhouette;
mod split;
mod svm;

pub use kmeans::{kmeans, KMeans, KMeansOptions};
pub use metrics::{macro_f1, micro_f1};
pub use pca::{covariance, pca, project_2d, top_eigen, Pca};
pub use plot::{line_chart_svg, scatter_svg, write_scatter_csv};
pub use report::{evaluate, sweep, write_records_csv, ClassificationReport, EvalSpec, LabeledData, RatioSummary, Record};
pub use silhouette::silhouette;
pub use split::{stratified_split, train_quotas, Split};
pub use svm::{train_linear_svm, LinearSvm, SvmOptions};
