//! End-to-end pipeline: configuration, per-split fitting, cross-validated
//! evaluation over block masks, feature ranking and persisted artifacts.

mod artifact;
mod config;

pub use artifact::{ARTIFACT_FILES, CONFIG_FILE};
pub use config::{Featurizer, LexiconPaths, NonTextual, PipelineConfig};

use std::collections::BTreeSet;

use ndarray::{s, Array2, ArrayView1, Axis};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::beliefnet::{train_dbn, BeliefError, DbnModel};
use crate::corpus::{balanced_sample, make_folds, Corpus, CorpusError, CorpusMeta, FoldPlan, Label, PhysicianProfile, QaPair};
use crate::handfeat::{
    social_features, surface_features, unify, BlockMask, FeatureError, Lexicons, Normalizer, SF_COUNT, SF_NAMES, SLF_COUNT,
    SLF_NAMES,
};
use crate::learner::{auc, chi_squared_rank, prf1, Classifier, EvalReport, FeatureRanking, FoldMetrics, LearnError};
use crate::seed::derive_seed;
use crate::textfeat::{load_term_list, TextError, Tokenizer, TokenizerMode, Vocabulary};
use crate::topicmodel::{TopicError, TopicModel};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("trial {trial}, fold {fold}: {source}")]
    Cell {
        trial: usize,
        fold: usize,
        #[source]
        source: Box<PipelineError>,
    },
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error(transparent)]
    Text(#[from] TextError),
    #[error(transparent)]
    Topic(#[from] TopicError),
    #[error(transparent)]
    Belief(#[from] BeliefError),
    #[error(transparent)]
    Feature(#[from] FeatureError),
    #[error(transparent)]
    Learn(#[from] LearnError),
    #[error("{path}: {message}")]
    Artifact { path: std::path::PathBuf, message: String },
}

/// Width of the hand-crafted block (`slf1..slf14 ‖ sf1..sf26`).
pub const HAND_COUNT: usize = SLF_COUNT + SF_COUNT;

/// Trial and fold index used for seeds of fits on a whole corpus.
pub const FULL_CORPUS: u64 = u64::MAX;

pub fn hand_feature_names() -> Vec<String> {
    SLF_NAMES.iter().chain(SF_NAMES.iter()).map(|s| s.to_string()).collect()
}

/// Seed of the fold plan for `trial`.
pub fn fold_seed(master: u64, trial: usize) -> u64 {
    derive_seed(master, "folds", trial as u64, 0)
}

/// Tokenizer and lexicons resolved from a configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(from = "ResourcesRepr", into = "ResourcesRepr")]
pub struct Resources {
    pub mode: TokenizerMode,
    pub lowercase: bool,
    /// Stopwords removed before textual features.
    pub stopwords: Vec<String>,
    pub lexicons: Lexicons,
    tok: Tokenizer,
}

#[derive(Serialize, Deserialize)]
struct ResourcesRepr {
    mode: TokenizerMode,
    lowercase: bool,
    stopwords: Vec<String>,
    lexicons: Lexicons,
}

impl From<ResourcesRepr> for Resources {
    fn from(r: ResourcesRepr) -> Self {
        Resources::new(r.mode, r.lowercase, r.stopwords, r.lexicons)
    }
}

impl From<Resources> for ResourcesRepr {
    fn from(r: Resources) -> Self {
        ResourcesRepr {
            mode: r.mode,
            lowercase: r.lowercase,
            stopwords: r.stopwords,
            lexicons: r.lexicons,
        }
    }
}

impl Resources {
    pub fn new(mode: TokenizerMode, lowercase: bool, stopwords: Vec<String>, lexicons: Lexicons) -> Self {
        let tok = Tokenizer::new(mode, lowercase).with_stopwords(&stopwords);
        Resources { mode, lowercase, stopwords, lexicons, tok }
    }

    /// Read lexicon files. Tokenizer stopwords are the union of the
    /// tokenizer's own list and the lexicon stopwords.
    pub fn load(cfg: &PipelineConfig) -> Result<Self, PipelineError> {
        let lexicons = Lexicons::load(
            cfg.lexicons.stopwords.as_deref(),
            cfg.lexicons.domain_words.as_deref(),
            cfg.lexicons.keywords.as_deref(),
        )?;
        let mut stop: BTreeSet<String> = lexicons.stopwords.clone();
        if let Some(p) = &cfg.tokenizer.stopword_path {
            stop.extend(load_term_list(p)?);
        }
        Ok(Resources::new(cfg.tokenizer.mode, cfg.tokenizer.lowercase, stop.into_iter().collect(), lexicons))
    }

    pub fn tokenizer(&self) -> &Tokenizer {
        &self.tok
    }
}

/// `slf1..slf14 ‖ sf1..sf26` for one pair, before normalization.
pub fn hand_features(
    pair: &QaPair,
    profile: Option<&PhysicianProfile>,
    meta: &CorpusMeta,
    res: &Resources,
) -> Result<[f64; HAND_COUNT], PipelineError> {
    let slf = surface_features(pair, &res.lexicons, res.tokenizer());
    let sf = social_features(profile, pair, meta.collection_time, meta.launch_time)?;
    let mut out = [0.0; HAND_COUNT];
    out[..SLF_COUNT].copy_from_slice(&slf.to_array());
    out[SLF_COUNT..].copy_from_slice(&sf.values);
    Ok(out)
}

pub fn hand_matrix(corpus: &Corpus, res: &Resources) -> Result<Array2<f64>, PipelineError> {
    let mut m = Array2::zeros((corpus.len(), HAND_COUNT));
    for (i, p) in corpus.pairs.iter().enumerate() {
        let row = hand_features(p, corpus.profile_for(p), &corpus.meta, res)?;
        m.row_mut(i).assign(&ArrayView1::from(&row[..]));
    }
    Ok(m)
}

fn vocabulary_id(v: &Vocabulary) -> String {
    let mut h = Sha256::new();
    for t in v.terms() {
        h.update(t.as_bytes());
        h.update([0]);
    }
    format!("sha256:{}", hex::encode(h.finalize()))
}

/// The fitted textual featurizer of one run.
#[derive(Debug, Clone, PartialEq)]
pub enum TextualModel {
    WordBinary { vocabulary: Vocabulary, width: usize },
    WordChiTfidf { vocabulary: Vocabulary, width: usize },
    Topic { model: TopicModel, infer_seed: u64 },
    Dbn { vocabulary: Vocabulary, dbn: DbnModel },
}

fn padded(mut v: Vec<f64>, width: usize) -> Vec<f64> {
    v.resize(width, 0.0);
    v
}

impl TextualModel {
    /// Fit on the training split only.
    pub fn fit(train: &Corpus, cfg: &PipelineConfig, res: &Resources, trial: u64, fold: u64) -> Result<Self, PipelineError> {
        let tok = res.tokenizer();
        let docs: Vec<Vec<String>> = train.pairs.iter().map(|p| tok.tokenize(&p.answer_text)).collect();
        let width = cfg.vocab_size;
        Ok(match cfg.featurizer {
            Featurizer::WordBinary => TextualModel::WordBinary {
                vocabulary: Vocabulary::from_frequency(&docs, width)?,
                width,
            },
            Featurizer::WordChiTfidf => TextualModel::WordChiTfidf {
                vocabulary: Vocabulary::from_chi_squared(&docs, &train.labels(), width)?,
                width,
            },
            Featurizer::Topic => {
                let vocabulary = Vocabulary::from_frequency(&docs, width)?;
                let model = TopicModel::fit_tokens(&docs, vocabulary, &cfg.lda, derive_seed(cfg.seed, "lda", trial, fold))?;
                TextualModel::Topic {
                    model,
                    infer_seed: derive_seed(cfg.seed, "lda-infer", trial, fold),
                }
            }
            Featurizer::Dbn => {
                let vocabulary = Vocabulary::from_frequency(&docs, width)?;
                let mut data = Array2::zeros((docs.len(), width));
                for (i, d) in docs.iter().enumerate() {
                    for &j in &vocabulary.encode_binary_tokens(d).indices {
                        data[[i, j]] = 1.0;
                    }
                }
                let hyper = crate::beliefnet::TrainHyper {
                    seed: derive_seed(cfg.seed, "dbn", trial, fold),
                    ..cfg.rbm.clone()
                };
                let mut dbn = train_dbn(data.view(), &cfg.dbn_layout, &hyper)?;
                dbn.input_vocabulary = Some(vocabulary_id(&vocabulary));
                TextualModel::Dbn { vocabulary, dbn }
            }
        })
    }

    pub fn featurizer(&self) -> Featurizer {
        match self {
            TextualModel::WordBinary { .. } => Featurizer::WordBinary,
            TextualModel::WordChiTfidf { .. } => Featurizer::WordChiTfidf,
            TextualModel::Topic { .. } => Featurizer::Topic,
            TextualModel::Dbn { .. } => Featurizer::Dbn,
        }
    }

    pub fn vocabulary(&self) -> &Vocabulary {
        match self {
            TextualModel::WordBinary { vocabulary, .. }
            | TextualModel::WordChiTfidf { vocabulary, .. }
            | TextualModel::Dbn { vocabulary, .. } => vocabulary,
            TextualModel::Topic { model, .. } => &model.vocabulary,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            TextualModel::WordBinary { width, .. } | TextualModel::WordChiTfidf { width, .. } => *width,
            TextualModel::Topic { model, .. } => model.k,
            TextualModel::Dbn { dbn, .. } => dbn.output_dim(),
        }
    }

    pub fn encode_all<'a, I>(&self, answers: I, tok: &Tokenizer) -> Result<Array2<f64>, PipelineError>
    where
        I: IntoIterator<Item = &'a str>,
    {
        let rows: Vec<Vec<f64>> = answers
            .into_iter()
            .map(|a| {
                let tokens = tok.tokenize(a);
                match self {
                    TextualModel::WordBinary { vocabulary, width } => padded(vocabulary.encode_binary_tokens(&tokens).to_dense(), *width),
                    TextualModel::WordChiTfidf { vocabulary, width } => padded(vocabulary.encode_tfidf_tokens(&tokens).to_dense(), *width),
                    TextualModel::Topic { model, infer_seed } => model.infer_tokens(&tokens, model.n_infer_iterations, *infer_seed),
                    TextualModel::Dbn { vocabulary, dbn } => padded(vocabulary.encode_binary_tokens(&tokens).to_dense(), dbn.input_dim()),
                }
            })
            .collect();
        let width = match self {
            TextualModel::Dbn { dbn, .. } => dbn.input_dim(),
            _ => self.dim(),
        };
        let mut m = Array2::zeros((rows.len(), width));
        for (i, r) in rows.iter().enumerate() {
            m.row_mut(i).assign(&ArrayView1::from(&r[..]));
        }
        if let TextualModel::Dbn { dbn, .. } = self {
            return Ok(dbn.encode_batch(m.view())?);
        }
        Ok(m)
    }
}

/// Assemble classifier inputs from a textual block and a normalized
/// hand-crafted block.
pub fn assemble(textual: &Array2<f64>, hand: &Array2<f64>, mask: BlockMask, provenance: &[&str]) -> Result<Array2<f64>, PipelineError> {
    let n = textual.nrows();
    let mut rows = Vec::with_capacity(n);
    for i in 0..n {
        let t = textual.row(i);
        let h = hand.row(i);
        let u = unify(
            t.as_slice().expect("standard layout"),
            h.slice(s![..SLF_COUNT]).as_slice().expect("standard layout"),
            h.slice(s![SLF_COUNT..]).as_slice().expect("standard layout"),
            mask,
            provenance,
        )?;
        rows.push(u.values);
    }
    let width = rows.first().map_or(0, Vec::len);
    Ok(Array2::from_shape_vec((n, width), rows.concat()).expect("rows share a width"))
}

/// Everything fitted on one training split.
#[derive(Debug, Clone, PartialEq)]
pub struct FittedPipeline {
    pub config: PipelineConfig,
    pub resources: Resources,
    pub textual: TextualModel,
    pub normalizer: Normalizer,
    pub classifier: Classifier,
    pub meta: CorpusMeta,
}

impl FittedPipeline {
    /// Fit on a training split. `trial` and `fold` only select seeds.
    pub fn fit_cell(train: &Corpus, cfg: &PipelineConfig, res: &Resources, trial: u64, fold: u64) -> Result<Self, PipelineError> {
        let textual = TextualModel::fit(train, cfg, res, trial, fold)?;
        let text_x = textual.encode_all(train.pairs.iter().map(|p| p.answer_text.as_str()), res.tokenizer())?;
        let hand = hand_matrix(train, res)?;
        let normalizer = Normalizer::fit(&hand)?;
        let x = assemble(&text_x, &normalizer.apply(&hand)?, cfg.mask(), &[cfg.featurizer.name()])?;
        let classifier = Classifier::fit(cfg.classifier, &x, &train.labels(), &cfg.logreg)?;
        Ok(FittedPipeline {
            config: cfg.clone(),
            resources: res.clone(),
            textual,
            normalizer,
            classifier,
            meta: train.meta.clone(),
        })
    }

    /// Fit on a whole corpus.
    pub fn fit(corpus: &Corpus, cfg: &PipelineConfig, res: &Resources) -> Result<Self, PipelineError> {
        cfg.validate()?;
        Self::fit_cell(corpus, cfg, res, FULL_CORPUS, FULL_CORPUS)
    }

    /// `(probability of High, label)` for every pair, in order. Profiles
    /// are looked up in `corpus`.
    pub fn score(&self, corpus: &Corpus) -> Result<Vec<(f64, Label)>, PipelineError> {
        let text_x = self
            .textual
            .encode_all(corpus.pairs.iter().map(|p| p.answer_text.as_str()), self.resources.tokenizer())?;
        let mut hand = Array2::zeros((corpus.len(), HAND_COUNT));
        for (i, p) in corpus.pairs.iter().enumerate() {
            let row = hand_features(p, corpus.profile_for(p), &self.meta, &self.resources)?;
            hand.row_mut(i).assign(&ArrayView1::from(&row[..]));
        }
        let x = assemble(&text_x, &self.normalizer.apply(&hand)?, self.config.mask(), &[self.config.featurizer.name()])?;
        x.rows()
            .into_iter()
            .map(|r| self.classifier.predict(r).map_err(PipelineError::from))
            .collect()
    }
}

fn fold_indices(plan: &FoldPlan, corpus: &Corpus, fold: usize) -> (Vec<usize>, Vec<usize>) {
    (0..corpus.len()).partition(|&i| plan.fold_of(&corpus.pairs[i].id) != Some(fold))
}

/// Models fitted inside one (trial, fold) cell, with the row indices of
/// its split.
#[derive(Debug, Clone, PartialEq)]
pub struct FoldFit {
    pub textual: TextualModel,
    pub normalizer: Normalizer,
    pub train: Vec<usize>,
    pub test: Vec<usize>,
}

/// Split `corpus` by `plan` and fit the textual model and normalizer on the
/// training rows only. `hand_all` is [`hand_matrix`] of `corpus`.
pub fn fit_fold(
    corpus: &Corpus,
    hand_all: &Array2<f64>,
    plan: &FoldPlan,
    cfg: &PipelineConfig,
    res: &Resources,
    trial: usize,
    fold: usize,
) -> Result<FoldFit, PipelineError> {
    let (train_idx, test_idx) = fold_indices(plan, corpus, fold);
    let train = corpus.with_pairs(train_idx.iter().map(|&i| corpus.pairs[i].clone()).collect());
    let textual = TextualModel::fit(&train, cfg, res, trial as u64, fold as u64)?;
    let normalizer = Normalizer::fit(&hand_all.select(Axis(0), &train_idx))?;
    Ok(FoldFit { textual, normalizer, train: train_idx, test: test_idx })
}

#[allow(clippy::too_many_arguments)]
fn run_cell(
    corpus: &Corpus,
    hand_all: &Array2<f64>,
    plan: &FoldPlan,
    cfg: &PipelineConfig,
    res: &Resources,
    masks: &[BlockMask],
    trial: usize,
    fold: usize,
) -> Result<Vec<FoldMetrics>, PipelineError> {
    let fit = fit_fold(corpus, hand_all, plan, cfg, res, trial, fold)?;
    let tok = res.tokenizer();
    let answers = |idx: &[usize]| idx.iter().map(|&i| corpus.pairs[i].answer_text.as_str()).collect::<Vec<_>>();
    let labels = |idx: &[usize]| idx.iter().map(|&i| corpus.pairs[i].label).collect::<Vec<_>>();
    let text_train = fit.textual.encode_all(answers(&fit.train), tok)?;
    let text_test = fit.textual.encode_all(answers(&fit.test), tok)?;
    let hand_train = fit.normalizer.apply(&hand_all.select(Axis(0), &fit.train))?;
    let hand_test = fit.normalizer.apply(&hand_all.select(Axis(0), &fit.test))?;
    let (y_train, y_test) = (labels(&fit.train), labels(&fit.test));
    let provenance = [cfg.featurizer.name()];
    masks
        .iter()
        .map(|&mask| {
            let x_train = assemble(&text_train, &hand_train, mask, &provenance)?;
            let x_test = assemble(&text_test, &hand_test, mask, &provenance)?;
            let clf = Classifier::fit(cfg.classifier, &x_train, &y_train, &cfg.logreg)?;
            let mut scores = Vec::with_capacity(x_test.nrows());
            let mut predicted = Vec::with_capacity(x_test.nrows());
            for row in x_test.rows() {
                scores.push(clf.score(row)?);
                predicted.push(clf.predict(row)?.1);
            }
            let m = prf1(&predicted, &y_test)?;
            Ok(FoldMetrics {
                trial,
                fold,
                precision: m.precision,
                recall: m.recall,
                f1: m.f1,
                auc: auc(&scores, &y_test)?,
            })
        })
        .collect()
}

/// Apply the configured class balancing, if any.
pub fn prepare(corpus: &Corpus, cfg: &PipelineConfig) -> Result<Corpus, PipelineError> {
    cfg.validate()?;
    match cfg.balance_per_class {
        Some(n) => Ok(balanced_sample(corpus, n, derive_seed(cfg.seed, "balance", 0, 0))?),
        None => Ok(corpus.clone()),
    }
}

/// Repeated stratified k-fold evaluation of one featurizer under several
/// block masks. Textual features are fitted once per (trial, fold) and
/// shared across masks; every mask's report equals a standalone run with
/// that mask.
pub fn evaluate_masks(corpus: &Corpus, cfg: &PipelineConfig, masks: &[BlockMask], res: &Resources) -> Result<Vec<EvalReport>, PipelineError> {
    let corpus = prepare(corpus, cfg)?;
    let hand_all = hand_matrix(&corpus, res)?;
    let plans: Vec<FoldPlan> = (0..cfg.n_trials)
        .map(|t| make_folds(&corpus, cfg.k, fold_seed(cfg.seed, t)))
        .collect::<Result<_, _>>()?;
    let cells: Vec<(usize, usize)> = (0..cfg.n_trials).flat_map(|t| (0..cfg.k).map(move |f| (t, f))).collect();
    let work = |&(t, f): &(usize, usize)| {
        run_cell(&corpus, &hand_all, &plans[t], cfg, res, masks, t, f).map_err(|e| PipelineError::Cell {
            trial: t,
            fold: f,
            source: Box::new(e),
        })
    };
    let results: Vec<Vec<FoldMetrics>> = if cfg.parallel {
        cells.par_iter().map(work).collect::<Result<_, _>>()?
    } else {
        cells.iter().map(work).collect::<Result<_, _>>()?
    };
    Ok(masks
        .iter()
        .enumerate()
        .map(|(m, &mask)| {
            let run = cfg.with_mask(mask);
            let rows = results.iter().map(|r| r[m]).collect();
            EvalReport::new(run.run_name(), rows, cfg.n_trials, cfg.k, run.fingerprint())
        })
        .collect())
}

/// The evaluation protocol for one configuration.
pub fn cross_validate(corpus: &Corpus, cfg: &PipelineConfig, k: usize, n_trials: usize, seed: u64) -> Result<EvalReport, PipelineError> {
    let cfg = PipelineConfig { k, n_trials, seed, ..cfg.clone() };
    let res = Resources::load(&cfg)?;
    let mut reports = evaluate_masks(corpus, &cfg, &[cfg.mask()], &res)?;
    Ok(reports.remove(0))
}

/// χ² ranking of all 40 hand-crafted features.
pub fn rank_hand_features(corpus: &Corpus, res: &Resources, n_bins: usize) -> Result<FeatureRanking, PipelineError> {
    let m = hand_matrix(corpus, res)?;
    let features: Vec<(String, Vec<f64>)> = hand_feature_names()
        .into_iter()
        .enumerate()
        .map(|(j, name)| (name, m.column(j).to_vec()))
        .collect();
    Ok(chi_squared_rank(&features, &corpus.labels(), n_bins)?)
}
