use std::fmt;
use std::str::FromStr;

use crate::{Error, Result};

/// Where the `1/r` attribute factor applies.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Strategy {
    /// When the current node is an attribute node.
    SourceFocused,
    /// When the candidate next node is an attribute node.
    #[default]
    TargetFocused,
    /// When either endpoint is an attribute node.
    SourceTargetFocused,
}

impl Strategy {
    pub const ALL: [Strategy; 3] = [
        Strategy::SourceFocused,
        Strategy::TargetFocused,
        Strategy::SourceTargetFocused,
    ];

    pub(crate) fn source_focused(self) -> bool {
        matches!(self, Strategy::SourceFocused | Strategy::SourceTargetFocused)
    }

    pub(crate) fn target_focused(self) -> bool {
        matches!(self, Strategy::TargetFocused | Strategy::SourceTargetFocused)
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sf" => Ok(Strategy::SourceFocused),
            "tf" => Ok(Strategy::TargetFocused),
            "stf" => Ok(Strategy::SourceTargetFocused),
            other => Err(Error::param(format!("unknown strategy {other:?} (sf, tf, stf)"))),
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::SourceFocused => "sf",
            Strategy::TargetFocused => "tf",
            Strategy::SourceTargetFocused => "stf",
        })
    }
}

/// Graph in which the previous-node distance `d_ux` is measured.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum BetaGraph {
    /// Virtual edges count as adjacency.
    #[default]
    Augmented,
    /// Only raw edges count as adjacency.
    Raw,
}

impl FromStr for BetaGraph {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "augmented" => Ok(BetaGraph::Augmented),
            "raw" => Ok(BetaGraph::Raw),
            other => Err(Error::param(format!("unknown beta graph {other:?} (augmented, raw)"))),
        }
    }
}

impl fmt::Display for BetaGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BetaGraph::Augmented => "augmented",
            BetaGraph::Raw => "raw",
        })
    }
}

/// The parameters that shape transition probabilities.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bias {
    pub p: f64,
    pub q: f64,
    pub r: f64,
    pub strategy: Strategy,
    pub beta_graph: BetaGraph,
}

impl Default for Bias {
    fn default() -> Self {
        Self {
            p: 1.0,
            q: 1.0,
            r: 1.0,
            strategy: Strategy::default(),
            beta_graph: BetaGraph::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct WalkParams {
    /// Return parameter.
    pub p: f64,
    /// In-out parameter among raw nodes.
    pub q: f64,
    /// In-out parameter towards attribute nodes.
    pub r: f64,
    pub strategy: Strategy,
    pub beta_graph: BetaGraph,
    /// Nodes per walk, including the start.
    pub walk_length: usize,
    pub walks_per_node: usize,
    pub seed: u64,
    /// Start walks from raw nodes only instead of every node.
    pub raw_starts_only: bool,
}

impl Default for WalkParams {
    fn default() -> Self {
        Self {
            p: 1.0,
            q: 1.0,
            r: 1.0,
            strategy: Strategy::default(),
            beta_graph: BetaGraph::default(),
            walk_length: 80,
            walks_per_node: 10,
            seed: 0,
            raw_starts_only: false,
        }
    }
}

impl WalkParams {
    pub fn bias(&self) -> Bias {
        Bias {
            p: self.p,
            q: self.q,
            r: self.r,
            strategy: self.strategy,
            beta_graph: self.beta_graph,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("p", self.p), ("q", self.q), ("r", self.r)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::param(format!("{name} must be positive and finite, got {v}")));
            }
        }
        if self.walk_length < 2 {
            return Err(Error::param("walk length must be at least 2"));
        }
        if self.walks_per_node < 1 {
            return Err(Error::param("walks per node must be at least 1"));
        }
        Ok(())
    }
}
