//! Classifiers, evaluation metrics, feature ranking and significance tests.

mod logreg;
mod metrics;
mod nb;
mod ranking;
mod report;
mod ttest;

pub use logreg::{loss_and_gradient, predict_quality, train_logreg, LogRegConfig, LogRegModel};
pub use metrics::{auc, prf1, Prf1};
pub use nb::{train_nb, NbModel};
pub use ranking::{chi_squared_rank, distribution_report, FeatureRanking, GroupRatio, RankEntry};
pub use report::{EvalReport, FoldMetrics, Metric, MetricSummary, DECISION_THRESHOLD};
pub use ttest::{paired_ttest, TTest};

pub use crate::pipeline::cross_validate;

use ndarray::{Array2, ArrayView1};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::Label;

#[derive(Debug, Error)]
pub enum LearnError {
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("both classes must be present")]
    SingleClass,
    #[error("feature matrix has no rows")]
    Empty,
    #[error("non-finite feature at row {row}, column {col}")]
    NonFinite { row: usize, col: usize },
    #[error("expected {expected} features, got {found}")]
    Dimension { expected: usize, found: usize },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

fn check_training(x: &Array2<f64>, y: &[Label]) -> Result<(), LearnError> {
    if x.nrows() == 0 {
        return Err(LearnError::Empty);
    }
    if x.nrows() != y.len() {
        return Err(LearnError::LengthMismatch { left: x.nrows(), right: y.len() });
    }
    if !(y.iter().any(|l| l.is_high()) && y.iter().any(|l| !l.is_high())) {
        return Err(LearnError::SingleClass);
    }
    if let Some(((row, col), _)) = x.indexed_iter().find(|(_, v)| !v.is_finite()) {
        return Err(LearnError::NonFinite { row, col });
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClassifierKind {
    #[default]
    Logreg,
    Nb,
}

/// A fitted classifier of either family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Classifier {
    Logreg(LogRegModel),
    Nb(NbModel),
}

impl Classifier {
    pub fn fit(kind: ClassifierKind, x: &Array2<f64>, y: &[Label], cfg: &LogRegConfig) -> Result<Self, LearnError> {
        Ok(match kind {
            ClassifierKind::Logreg => Classifier::Logreg(train_logreg(x, y, cfg)?),
            ClassifierKind::Nb => Classifier::Nb(train_nb(x, y)?),
        })
    }

    pub fn dim(&self) -> usize {
        match self {
            Classifier::Logreg(m) => m.weights.len(),
            Classifier::Nb(m) => m.dim(),
        }
    }

    /// Log-odds of High; used for ranking metrics.
    pub fn score(&self, x: ArrayView1<f64>) -> Result<f64, LearnError> {
        match self {
            Classifier::Logreg(m) => m.decision(x),
            Classifier::Nb(m) => m.log_odds(x),
        }
    }

    /// Probability of High.
    pub fn probability(&self, x: ArrayView1<f64>) -> Result<f64, LearnError> {
        self.score(x).map(crate::beliefnet::sigmoid)
    }

    pub fn predict(&self, x: ArrayView1<f64>) -> Result<(f64, Label), LearnError> {
        let p = self.probability(x)?;
        Ok((p, if p > DECISION_THRESHOLD { Label::High } else { Label::Low }))
    }
}
