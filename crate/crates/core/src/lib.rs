//! Answer-quality prediction for expert health question answering.
//!
//! The crate learns dense representations of short answers with a stack of
//! restricted Boltzmann machines, fuses them with surface-linguistic and
//! social features, and evaluates a logistic-regression quality classifier
//! under repeated stratified cross-validation.
//!
//! Module map:
//!
//! - [`corpus`]: loading, filtering, balancing, folds, synthetic corpora
//! - [`textfeat`]: tokenization, vocabularies, binary and CHI-TFIDF encodings
//! - [`topicmodel`]: collapsed-Gibbs LDA topic features
//! - [`beliefnet`]: RBM conditionals, CD-1 training, DBN stacking and encoding
//! - [`handfeat`]: slf1–slf14, sf1–sf26, normalization and fusion
//! - [`learner`]: classifiers, metrics, rankings, t-test and cross-validation
//! - [`pipeline`]: end-to-end configuration, fitting and scoring

pub mod beliefnet;
pub mod corpus;
pub mod fsio;
pub mod handfeat;
pub mod learner;
pub mod pipeline;
pub mod seed;
pub mod textfeat;
pub mod topicmodel;

pub use corpus::{Corpus, Label, PhysicianProfile, QaPair};
pub use pipeline::PipelineConfig;
