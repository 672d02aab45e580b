//! Restricted Boltzmann machines with binary units, one-step contrastive
//! divergence, and greedy layer-wise stacking into a deep belief network
//! that maps sparse binary answer vectors to dense representations.
//!
//! Conventions: a layer's weight matrix is `n_visible × n_hidden`, so
//! `p(h_j = 1 | a) = σ(b_j + Σ_i a_i W_ij)` and
//! `p(a_i = 1 | h) = σ(b_i + Σ_j W_ij h_j)`. Batches are row-major: one
//! example per row.

mod dbn;
mod exact;
mod persist;
mod rbm;
mod train;

pub use dbn::{train_dbn, DbnModel};
pub use exact::{exact_rbm_statistics, MAX_EXACT_UNITS};
pub use persist::{DBN_MAGIC, DBN_FORMAT_VERSION};
pub use rbm::{sample_bernoulli, sigmoid, RbmLayer};
pub use train::{cd1_step, train_rbm, CdStatistics, TrainHyper, TrainLog, Velocity};

use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum BeliefError {
    #[error("{what}: expected dimension {expected}, found {found}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("invalid training hyperparameters: {0}")]
    InvalidHyper(String),
    #[error("invalid layout: {0}")]
    InvalidLayout(String),
    #[error("training data is empty")]
    EmptyData,
    #[error("non-finite parameter update")]
    NonFiniteUpdate,
    #[error("non-finite parameter update at level {level}, epoch {epoch}, batch {batch}")]
    NonFiniteAt { level: usize, epoch: usize, batch: usize },
    #[error("exact enumeration limited to {limit} units, layer has {units}")]
    TooLarge { units: usize, limit: usize },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Format { path: PathBuf, message: String },
}
