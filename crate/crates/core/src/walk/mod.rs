//! Biased second-order random walks over the augmented graph.

mod alias;
mod bias;
mod corpus;
mod model;
mod params;

pub use alias::AliasTable;
pub use bias::{alpha, beta, first_step_distribution, hop_distance, transition_distribution, HopDistance};
pub use corpus::{generate_corpus, generate_walk, read_corpus, visit_order, walk_rng, write_corpus, Corpus, Walk};
pub use model::{count_entries, preprocess_transitions, ModelOptions, SamplingMode, TransitionModel};
pub use params::{BetaGraph, Bias, Strategy, WalkParams};
