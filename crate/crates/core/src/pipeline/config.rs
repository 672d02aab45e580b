use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::PipelineError;
use crate::beliefnet::TrainHyper;
use crate::handfeat::BlockMask;
use crate::learner::{ClassifierKind, LogRegConfig};
use crate::textfeat::TokenizerConfig;
use crate::topicmodel::LdaConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Featurizer {
    WordBinary,
    WordChiTfidf,
    Topic,
    #[default]
    Dbn,
}

impl Featurizer {
    pub const ALL: [Featurizer; 4] = [Featurizer::WordBinary, Featurizer::WordChiTfidf, Featurizer::Topic, Featurizer::Dbn];

    pub fn name(self) -> &'static str {
        match self {
            Featurizer::WordBinary => "word_binary",
            Featurizer::WordChiTfidf => "word_chi_tfidf",
            Featurizer::Topic => "topic",
            Featurizer::Dbn => "dbn",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|f| f.name() == s)
    }
}

/// Which hand-crafted blocks join the textual block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NonTextual {
    pub slf: bool,
    pub sf: bool,
}

impl NonTextual {
    pub fn mask(self) -> BlockMask {
        BlockMask { textual: true, slf: self.slf, sf: self.sf }
    }

    pub fn from_mask(m: BlockMask) -> Self {
        NonTextual { slf: m.slf, sf: m.sf }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LexiconPaths {
    pub stopwords: Option<PathBuf>,
    pub domain_words: Option<PathBuf>,
    pub keywords: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub featurizer: Featurizer,
    pub non_textual: NonTextual,
    pub classifier: ClassifierKind,
    pub tokenizer: TokenizerConfig,
    pub lexicons: LexiconPaths,
    /// Width of word-based textual vectors; shorter vocabularies are
    /// zero-padded to it.
    pub vocab_size: usize,
    pub lda: LdaConfig,
    /// Unit counts, input first; `dbn_layout[0]` must equal `vocab_size`.
    pub dbn_layout: Vec<usize>,
    pub rbm: TrainHyper,
    pub logreg: LogRegConfig,
    pub k: usize,
    pub n_trials: usize,
    pub seed: u64,
    pub balance_per_class: Option<usize>,
    pub rank_bins: usize,
    pub parallel: bool,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            featurizer: Featurizer::default(),
            non_textual: NonTextual::default(),
            classifier: ClassifierKind::default(),
            tokenizer: TokenizerConfig::default(),
            lexicons: LexiconPaths::default(),
            vocab_size: 1904,
            lda: LdaConfig::default(),
            dbn_layout: vec![1904, 1904, 1500, 1000],
            rbm: TrainHyper::default(),
            logreg: LogRegConfig::default(),
            k: 5,
            n_trials: 5,
            seed: 0,
            balance_per_class: None,
            rank_bins: 10,
            parallel: true,
        }
    }
}

impl PipelineConfig {
    pub fn from_json(text: &str) -> Result<Self, PipelineError> {
        let cfg: PipelineConfig = serde_json::from_str(text).map_err(|e| PipelineError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// SHA-256 over the compact JSON form.
    pub fn fingerprint(&self) -> String {
        let bytes = serde_json::to_vec(self).expect("config serializes");
        hex::encode(Sha256::digest(&bytes))
    }

    pub fn validate(&self) -> Result<(), PipelineError> {
        let bad = |m: String| Err(PipelineError::Config(m));
        if self.vocab_size == 0 {
            return bad("vocab_size must be positive".into());
        }
        if self.featurizer == Featurizer::Dbn {
            if self.dbn_layout.len() < 2 {
                return bad(format!("dbn_layout {:?} needs at least two levels", self.dbn_layout));
            }
            if self.dbn_layout[0] != self.vocab_size {
                return bad(format!("dbn_layout[0] = {} but vocab_size = {}", self.dbn_layout[0], self.vocab_size));
            }
            self.rbm.validate().map_err(|e| PipelineError::Config(e.to_string()))?;
        }
        if self.featurizer == Featurizer::Topic && self.lda.k < 2 {
            return bad(format!("lda.k = {} must be at least 2", self.lda.k));
        }
        if self.k < 2 || self.n_trials == 0 {
            return bad(format!("need k >= 2 and n_trials >= 1, got k = {} and n_trials = {}", self.k, self.n_trials));
        }
        if self.rank_bins < 2 {
            return bad("rank_bins must be at least 2".into());
        }
        for p in [&self.lexicons.stopwords, &self.lexicons.domain_words, &self.lexicons.keywords, &self.tokenizer.stopword_path]
            .into_iter()
            .flatten()
        {
            if !p.exists() {
                return bad(format!("{} does not exist", p.display()));
            }
        }
        Ok(())
    }

    pub fn mask(&self) -> BlockMask {
        self.non_textual.mask()
    }

    pub fn with_featurizer(&self, f: Featurizer) -> Self {
        PipelineConfig { featurizer: f, ..self.clone() }
    }

    pub fn with_mask(&self, m: BlockMask) -> Self {
        PipelineConfig { non_textual: NonTextual::from_mask(m), ..self.clone() }
    }

    pub fn run_name(&self) -> String {
        format!("{} {}", self.featurizer.name(), self.mask().name())
    }
}
