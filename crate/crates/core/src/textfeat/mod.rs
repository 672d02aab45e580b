//! Tokenization, vocabularies and the two bag-of-words encodings
//! (binary presence and CHI-selected TF-IDF).

mod tokenize;
mod vocab;

pub use tokenize::{load_term_list, tokenize, Tokenizer, TokenizerConfig, TokenizerMode};
pub use vocab::{
    build_vocabulary, chi_tfidf_vocabulary, encode_binary, encode_tfidf, presence_chi_squared,
    term_chi_squared, Selection, SparseTextVector, Vocabulary,
};

use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum TextError {
    #[error("cannot read term list {path}: {source}")]
    TermList {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("training split is empty")]
    EmptyTraining,
    #[error("vocabulary size must be at least 1")]
    ZeroSize,
    #[error("chi-squared selection needs both classes in the training split")]
    DegenerateClasses,
    #[error("invalid vocabulary: {0}")]
    InvalidVocabulary(String),
}
