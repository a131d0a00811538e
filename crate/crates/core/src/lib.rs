//! Flexible attributed network embedding.
//!
//! Attributes become virtual nodes linked to the raw nodes that carry them
//! ([`graph`]). Biased second-order random walks over that augmented graph
//! ([`walk`]) feed a skip-gram model with negative sampling ([`embed`]), and
//! the resulting vectors are evaluated by node classification, clustering
//! and 2D projection ([`eval`]).

pub mod datasets;
pub mod embed;
mod error;
pub mod eval;
pub mod graph;
pub mod pipeline;
pub mod rng;
pub mod scaling;
pub mod synth;
pub mod walk;

pub use error::{Error, Result};
pub use graph::{AttrEdgeWeight, AttrId, AttributedGraph, AugmentedGraph, NodeId};
pub use walk::{Strategy, TransitionModel, WalkParams};
