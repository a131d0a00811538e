//! Skip-gram training over walk corpora.

mod format;
mod sgns;
mod train;
mod vocab;

pub use format::{read_embedding, read_embedding_binary, write_embedding, write_embedding_binary, Embedding};
pub use sgns::{sgns_gradients, sgns_loss, sgns_step, sigmoid, SgnsGradients, SharedMatrix};
pub use train::{context_pairs, train, Trained, TrainParams};
pub use vocab::{build_vocabulary, Vocabulary};
