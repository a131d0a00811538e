//! Graph to embedding in one call: augment, preprocess, walk, train.

use crate::embed::{train, Embedding, TrainParams, Trained};
use crate::eval::{project_2d, silhouette, LabeledData};
use crate::graph::{build_augmented, AttrEdgeWeight, AttributedGraph, AugmentedGraph, ClassId, NodeNames};
use crate::walk::{generate_corpus, preprocess_transitions, Corpus, ModelOptions, WalkParams};
use crate::{Error, Result};

#[derive(Clone, Debug, Default, PartialEq)]
pub struct PipelineConfig {
    pub weight_rule: AttrEdgeWeight,
    pub walk: WalkParams,
    pub model: ModelOptions,
    pub train: TrainParams,
}

pub struct PipelineOutput {
    pub graph: AugmentedGraph,
    pub corpus: Corpus,
    pub trained: Trained,
    pub embedding: Embedding,
}

/// Labels trained rows with raw node names and `a<attr>` for attribute nodes.
pub fn label_rows(trained: &Trained, g: &AugmentedGraph, names: &NodeNames) -> Result<Embedding> {
    let labels = trained.ids.iter().map(|&u| g.node_label(u, names)).collect();
    Embedding::new(labels, trained.dim, trained.vectors.clone())
}

pub fn embed_graph(g: &AttributedGraph, config: &PipelineConfig) -> Result<PipelineOutput> {
    let graph = build_augmented(g, &config.weight_rule);
    let model = preprocess_transitions(&graph, &config.walk, &config.model)?;
    let corpus = generate_corpus(&graph, &model, &config.walk)?;
    drop(model);
    let trained = train(&corpus, &config.train)?;
    let embedding = label_rows(&trained, &graph, &g.names)?;
    Ok(PipelineOutput {
        graph,
        corpus,
        trained,
        embedding,
    })
}

/// Embedding rows of the labeled raw nodes of `g`, with their classes.
pub fn labeled_features(g: &AttributedGraph, embedding: &Embedding) -> Result<LabeledData> {
    let mut ids = Vec::new();
    let mut features = Vec::new();
    let mut classes = Vec::new();
    for (node, class) in g.labels.iter() {
        let name = g.names.name(node);
        let row = embedding
            .find(name)
            .ok_or_else(|| Error::Invalid(format!("node {name:?} has no embedding row")))?;
        ids.push(name.to_owned());
        features.extend_from_slice(embedding.row(row));
        classes.push(class.0);
    }
    if ids.is_empty() {
        return Err(Error::Empty("labels; evaluation needs labeled nodes"));
    }
    let class_names = (0..g.labels.n_classes())
        .map(|c| g.labels.class_name(ClassId(c as u32)).to_owned())
        .collect();
    Ok(LabeledData::new(ids, embedding.dim(), features, classes, class_names))
}

/// Silhouette of the classes after projecting the features to 2D.
pub fn projection_silhouette(data: &LabeledData) -> Result<f64> {
    let (points, _) = project_2d(&data.features, data.dim)?;
    let flat: Vec<f64> = points.iter().flat_map(|&(x, y)| [x, y]).collect();
    silhouette(&flat, 2, &data.classes)
}
