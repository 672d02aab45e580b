//! LDA topic features fitted by collapsed Gibbs sampling.

use std::path::PathBuf;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::Corpus;
use crate::seed::rng_from_seed;
use crate::textfeat::{Tokenizer, Vocabulary};

#[derive(Debug, Error)]
pub enum TopicError {
    #[error("need at least two topics, got {0}")]
    TooFewTopics(usize),
    #[error("no training token is in the vocabulary")]
    EmptyDocuments,
    #[error("invalid hyperparameter: {0}")]
    InvalidHyper(String),
    #[error("invalid topic model: {0}")]
    InvalidModel(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LdaConfig {
    pub k: usize,
    /// Symmetric document-topic prior; `None` means `50 / k`.
    pub alpha: Option<f64>,
    pub beta: f64,
    pub n_iterations: usize,
    pub n_infer_iterations: usize,
}

impl Default for LdaConfig {
    fn default() -> Self {
        LdaConfig {
            k: 25,
            alpha: None,
            beta: 0.01,
            n_iterations: 1000,
            n_infer_iterations: 100,
        }
    }
}

impl LdaConfig {
    pub fn alpha(&self) -> f64 {
        self.alpha.unwrap_or(50.0 / self.k as f64)
    }

    fn validate(&self) -> Result<(), TopicError> {
        if self.k < 2 {
            return Err(TopicError::TooFewTopics(self.k));
        }
        let alpha = self.alpha();
        if !(alpha.is_finite() && alpha > 0.0) || !(self.beta.is_finite() && self.beta > 0.0) {
            return Err(TopicError::InvalidHyper(format!("alpha {alpha} and beta {} must be positive", self.beta)));
        }
        Ok(())
    }
}

/// Sampler state over token-topic assignments.
pub struct GibbsState {
    k: usize,
    v: usize,
    alpha: f64,
    beta: f64,
    docs: Vec<Vec<usize>>,
    assignments: Vec<Vec<usize>>,
    doc_topic: Vec<Vec<u32>>,
    topic_word: Vec<u32>,
    topic_totals: Vec<u32>,
    rng: ChaCha8Rng,
    weights: Vec<f64>,
}

fn draw(weights: &[f64], rng: &mut ChaCha8Rng) -> usize {
    let total: f64 = weights.iter().sum();
    let mut u = rng.random::<f64>() * total;
    for (k, &w) in weights.iter().enumerate() {
        if u < w {
            return k;
        }
        u -= w;
    }
    weights.len() - 1
}

impl GibbsState {
    /// Random initial assignment of every token. `docs` hold vocabulary
    /// positions `< v`.
    pub fn new(docs: Vec<Vec<usize>>, k: usize, v: usize, alpha: f64, beta: f64, seed: u64) -> Self {
        let mut rng = rng_from_seed(seed);
        let mut doc_topic = vec![vec![0u32; k]; docs.len()];
        let mut topic_word = vec![0u32; k * v];
        let mut topic_totals = vec![0u32; k];
        let assignments = docs
            .iter()
            .enumerate()
            .map(|(d, doc)| {
                doc.iter()
                    .map(|&w| {
                        let t = rng.random_range(0..k);
                        doc_topic[d][t] += 1;
                        topic_word[t * v + w] += 1;
                        topic_totals[t] += 1;
                        t
                    })
                    .collect()
            })
            .collect();
        GibbsState {
            k,
            v,
            alpha,
            beta,
            docs,
            assignments,
            doc_topic,
            topic_word,
            topic_totals,
            rng,
            weights: vec![0.0; k],
        }
    }

    /// Resample every token once, in document order.
    pub fn sweep(&mut self) {
        let vbeta = self.v as f64 * self.beta;
        for d in 0..self.docs.len() {
            for n in 0..self.docs[d].len() {
                let w = self.docs[d][n];
                let old = self.assignments[d][n];
                self.doc_topic[d][old] -= 1;
                self.topic_word[old * self.v + w] -= 1;
                self.topic_totals[old] -= 1;
                for t in 0..self.k {
                    self.weights[t] = (self.doc_topic[d][t] as f64 + self.alpha)
                        * (self.topic_word[t * self.v + w] as f64 + self.beta)
                        / (self.topic_totals[t] as f64 + vbeta);
                }
                let new = draw(&self.weights, &mut self.rng);
                self.assignments[d][n] = new;
                self.doc_topic[d][new] += 1;
                self.topic_word[new * self.v + w] += 1;
                self.topic_totals[new] += 1;
            }
        }
    }

    /// Recount everything from the assignments and compare with the
    /// incrementally maintained tables.
    pub fn check_consistency(&self) -> Result<(), String> {
        let mut topic_word = vec![0u32; self.k * self.v];
        let mut totals = vec![0u32; self.k];
        for (d, doc) in self.docs.iter().enumerate() {
            let mut counts = vec![0u32; self.k];
            for (n, &w) in doc.iter().enumerate() {
                let t = self.assignments[d][n];
                counts[t] += 1;
                topic_word[t * self.v + w] += 1;
                totals[t] += 1;
            }
            if counts != self.doc_topic[d] {
                return Err(format!("document {d} topic counts drifted"));
            }
            if counts.iter().sum::<u32>() as usize != doc.len() {
                return Err(format!("document {d} counts do not sum to its length"));
            }
        }
        if topic_word != self.topic_word {
            return Err("topic-word counts drifted".into());
        }
        for (t, &total) in totals.iter().enumerate() {
            let row: u32 = self.topic_word[t * self.v..(t + 1) * self.v].iter().sum();
            if row != total || total != self.topic_totals[t] {
                return Err(format!("topic {t} totals drifted"));
            }
        }
        Ok(())
    }

    pub fn assignments(&self) -> &[Vec<usize>] {
        &self.assignments
    }

    /// Smoothed `θ_d = (n_dk + α) / (n_d + Kα)` from the current state.
    pub fn doc_topic_distribution(&self, d: usize) -> Vec<f64> {
        smoothed(&self.doc_topic[d], self.alpha)
    }
}

fn smoothed(counts: &[u32], alpha: f64) -> Vec<f64> {
    let total: u32 = counts.iter().sum();
    let denom = total as f64 + counts.len() as f64 * alpha;
    counts.iter().map(|&c| (c as f64 + alpha) / denom).collect()
}

/// Fitted LDA model with frozen topic-word counts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopicModel {
    pub k: usize,
    pub alpha: f64,
    pub beta: f64,
    pub vocabulary: Vocabulary,
    /// `k × |vocabulary|`, row-major.
    pub topic_word_counts: Vec<u32>,
    pub seed: u64,
    pub n_iterations: usize,
    pub n_infer_iterations: usize,
}

impl TopicModel {
    /// Fit on pre-tokenized training documents; out-of-vocabulary tokens are
    /// dropped before sampling.
    pub fn fit_tokens(docs: &[Vec<String>], vocabulary: Vocabulary, cfg: &LdaConfig, seed: u64) -> Result<Self, TopicError> {
        cfg.validate()?;
        let mapped: Vec<Vec<usize>> = docs
            .iter()
            .map(|d| d.iter().filter_map(|t| vocabulary.position(t)).collect())
            .collect();
        if mapped.iter().all(Vec::is_empty) {
            return Err(TopicError::EmptyDocuments);
        }
        let mut state = GibbsState::new(mapped, cfg.k, vocabulary.len(), cfg.alpha(), cfg.beta, seed);
        for _ in 0..cfg.n_iterations {
            state.sweep();
        }
        Ok(TopicModel {
            k: cfg.k,
            alpha: cfg.alpha(),
            beta: cfg.beta,
            vocabulary,
            topic_word_counts: state.topic_word,
            seed,
            n_iterations: cfg.n_iterations,
            n_infer_iterations: cfg.n_infer_iterations,
        })
    }

    fn v(&self) -> usize {
        self.vocabulary.len()
    }

    pub fn validate(&self) -> Result<(), TopicError> {
        if self.k < 2 {
            return Err(TopicError::TooFewTopics(self.k));
        }
        if self.topic_word_counts.len() != self.k * self.v() {
            return Err(TopicError::InvalidModel(format!(
                "{} counts for {} topics × {} terms",
                self.topic_word_counts.len(),
                self.k,
                self.v()
            )));
        }
        Ok(())
    }

    pub fn topic_totals(&self) -> Vec<u64> {
        self.topic_word_counts
            .chunks(self.v().max(1))
            .map(|row| row.iter().map(|&c| c as u64).sum())
            .collect()
    }

    /// `φ_k = (n_kw + β) / (n_k + Vβ)` for every topic.
    pub fn topic_word_distribution(&self) -> Vec<Vec<f64>> {
        let v = self.v();
        let vbeta = v as f64 * self.beta;
        self.topic_word_counts
            .chunks(v)
            .map(|row| {
                let total: u64 = row.iter().map(|&c| c as u64).sum();
                row.iter().map(|&c| (c as f64 + self.beta) / (total as f64 + vbeta)).collect()
            })
            .collect()
    }

    /// Topic mixture of a new document by Gibbs sampling its assignments
    /// against the frozen topic-word counts. An all-OOV document returns
    /// the prior mean (uniform).
    pub fn infer_tokens(&self, tokens: &[String], n_iterations: usize, seed: u64) -> Vec<f64> {
        let words: Vec<usize> = tokens.iter().filter_map(|t| self.vocabulary.position(t)).collect();
        let mut counts = vec![0u32; self.k];
        if words.is_empty() {
            return smoothed(&counts, self.alpha);
        }
        let v = self.v();
        let vbeta = v as f64 * self.beta;
        let totals = self.topic_totals();
        let mut rng = rng_from_seed(seed);
        let mut z: Vec<usize> = words
            .iter()
            .map(|_| {
                let t = rng.random_range(0..self.k);
                counts[t] += 1;
                t
            })
            .collect();
        let mut weights = vec![0.0; self.k];
        for _ in 0..n_iterations {
            for (n, &w) in words.iter().enumerate() {
                counts[z[n]] -= 1;
                for t in 0..self.k {
                    weights[t] = (counts[t] as f64 + self.alpha) * (self.topic_word_counts[t * v + w] as f64 + self.beta)
                        / (totals[t] as f64 + vbeta);
                }
                z[n] = draw(&weights, &mut rng);
                counts[z[n]] += 1;
            }
        }
        smoothed(&counts, self.alpha)
    }

    pub fn infer(&self, answer: &str, tok: &Tokenizer, seed: u64) -> Vec<f64> {
        self.infer_tokens(&tok.tokenize(answer), self.n_infer_iterations, seed)
    }

    pub fn save_json(&self, path: &std::path::Path) -> Result<(), TopicError> {
        let bytes = serde_json::to_vec(self).expect("model serializes");
        crate::fsio::write_atomic(path, &bytes).map_err(|source| TopicError::Io {
            path: path.to_path_buf(),
            source,
        })
    }

    pub fn load_json(path: &std::path::Path) -> Result<Self, TopicError> {
        let bytes = std::fs::read(path).map_err(|source| TopicError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let model: TopicModel = serde_json::from_slice(&bytes).map_err(|e| TopicError::InvalidModel(format!("{}: {e}", path.display())))?;
        model.validate()?;
        Ok(model)
    }
}

/// Fit on the answers of a training split.
pub fn fit_lda(train: &Corpus, tok: &Tokenizer, vocabulary: Vocabulary, cfg: &LdaConfig, seed: u64) -> Result<TopicModel, TopicError> {
    let docs: Vec<Vec<String>> = train.pairs.iter().map(|p| tok.tokenize(&p.answer_text)).collect();
    TopicModel::fit_tokens(&docs, vocabulary, cfg, seed)
}

/// Inferred topic mixture of one answer.
pub fn infer_topics(answer: &str, model: &TopicModel, tok: &Tokenizer, n_infer_iterations: usize, seed: u64) -> Vec<f64> {
    model.infer_tokens(&tok.tokenize(answer), n_infer_iterations, seed)
}
