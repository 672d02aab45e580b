//! Command implementations. Each returns the text printed on success.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use hqa_core::corpus::{
    filter_min_answer_length, generate_synthetic, load_corpus, load_profiles, Corpus, CorpusMeta, Label, QaPair, Reject,
    SynthSpec, META_FILE, PAIRS_FILE, PROFILES_FILE,
};
use hqa_core::fsio::write_atomic;
use hqa_core::handfeat::BlockMask;
use hqa_core::learner::{distribution_report, paired_ttest, ClassifierKind, EvalReport, Metric};
use hqa_core::pipeline::{evaluate_masks, hand_matrix, hand_feature_names, rank_hand_features, Featurizer, FittedPipeline, NonTextual, Resources};
use hqa_core::PipelineConfig;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::CliError;
use crate::{CorpusArgs, EvaluateArgs, GlobalArgs, IngestArgs, PredictArgs, SynthArgs, TrainArgs};

/// Lexicon files written next to a synthetic corpus and picked up
/// automatically when the configuration names none.
pub const DOMAIN_WORDS_FILE: &str = "domain_words.txt";
pub const STOPWORDS_FILE: &str = "stopwords.txt";

/// Features whose group distributions `rank` reports.
pub const DISTRIBUTION_FEATURES: [&str; 6] = ["slf12", "slf14", "slf1", "sf12", "sf9", "sf1"];

fn io_err(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::runtime(format!("{}: {e}", path.display()))
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(|e| io_err(parent, e))?;
    }
    write_atomic(path, bytes).map_err(|e| io_err(path, e))
}

fn write_json(path: &Path, value: &impl Serialize) -> Result<(), CliError> {
    let mut bytes = serde_json::to_vec_pretty(value).map_err(|e| io_err(path, e))?;
    bytes.push(b'\n');
    write_file(path, &bytes)
}

fn write_corpus(dir: &Path, corpus: &Corpus) -> Result<(), CliError> {
    let (pairs, profiles, meta) = corpus.to_jsonl();
    write_file(&dir.join(PAIRS_FILE), pairs.as_bytes())?;
    write_file(&dir.join(PROFILES_FILE), profiles.as_bytes())?;
    write_file(&dir.join(META_FILE), meta.as_bytes())
}

fn load_config(g: &GlobalArgs) -> Result<PipelineConfig, CliError> {
    let mut cfg = match &g.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
            PipelineConfig::from_json(&text).map_err(|e| CliError::validation(format!("{}: {e}", path.display())))?
        }
        None => PipelineConfig::default(),
    };
    if let Some(seed) = g.seed {
        cfg.seed = seed;
    }
    Ok(cfg)
}

/// Fill unset lexicon paths from files sitting in the corpus directory.
fn with_corpus_lexicons(mut cfg: PipelineConfig, corpus_dir: &Path) -> PipelineConfig {
    let local = |name: &str| Some(corpus_dir.join(name)).filter(|p| p.exists());
    if cfg.lexicons.stopwords.is_none() {
        cfg.lexicons.stopwords = local(STOPWORDS_FILE);
    }
    if cfg.lexicons.domain_words.is_none() {
        cfg.lexicons.domain_words = local(DOMAIN_WORDS_FILE);
    }
    cfg
}

fn load_corpus_dir(g: &GlobalArgs, dir: &Path) -> Result<Corpus, CliError> {
    let loaded = Corpus::load_dir(dir)?;
    if !loaded.rejects.is_empty() {
        let msg = format!("{}: {} rejected records", dir.display(), loaded.rejects.len());
        if g.strict {
            return Err(CliError::validation(msg));
        }
        eprintln!("warning: {msg}");
    }
    Ok(loaded.records)
}

fn setup(g: &GlobalArgs, c: &CorpusArgs) -> Result<(PipelineConfig, Corpus, Resources), CliError> {
    let cfg = with_corpus_lexicons(load_config(g)?, &c.corpus);
    cfg.validate()?;
    let corpus = load_corpus_dir(g, &c.corpus)?;
    let res = Resources::load(&cfg)?;
    Ok((cfg, corpus, res))
}

fn finish(g: &GlobalArgs, summary: Value, text: String) -> String {
    if g.json {
        format!("{}\n", serde_json::to_string_pretty(&summary).expect("summary serializes"))
    } else {
        text
    }
}

#[derive(Serialize)]
struct RejectReport<'a> {
    file: String,
    rejects: &'a [Reject],
}

pub fn ingest(g: &GlobalArgs, a: &IngestArgs) -> Result<String, CliError> {
    let pairs = load_corpus(&a.input)?;
    let profiles = match &a.profiles {
        Some(p) => Some(load_profiles(p)?),
        None => None,
    };
    let meta: CorpusMeta = match &a.meta {
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| io_err(p, e))?;
            serde_json::from_str(&text).map_err(|e| CliError::validation(format!("{}: {e}", p.display())))?
        }
        None => CorpusMeta::default(),
    };
    let mut reports = vec![RejectReport { file: a.input.display().to_string(), rejects: &pairs.rejects }];
    if let (Some(path), Some(p)) = (&a.profiles, &profiles) {
        reports.push(RejectReport { file: path.display().to_string(), rejects: &p.rejects });
    }
    let n_rejects: usize = reports.iter().map(|r| r.rejects.len()).sum();
    let raw = Corpus::new(pairs.records.clone(), profiles.as_ref().map(|p| p.records.clone()).unwrap_or_default(), meta);
    let corpus = filter_min_answer_length(&raw, a.min_chars);
    write_corpus(&g.out_dir, &corpus)?;
    write_json(&g.out_dir.join("rejects.json"), &reports)?;
    let summary = json!({
        "accepted": corpus.len(),
        "too_short": raw.len() - corpus.len(),
        "rejected": n_rejects,
        "high": corpus.count(Label::High),
        "low": corpus.count(Label::Low),
        "missing_profiles": corpus.missing_profiles().len(),
        "out_dir": g.out_dir,
    });
    if g.strict && n_rejects > 0 {
        return Err(CliError::validation(format!("{n_rejects} records rejected; see {}", g.out_dir.join("rejects.json").display())));
    }
    let text = format!(
        "accepted {} pairs ({} high, {} low); {} shorter than {} chars dropped; {} records rejected\n",
        corpus.len(),
        corpus.count(Label::High),
        corpus.count(Label::Low),
        raw.len() - corpus.len(),
        a.min_chars,
        n_rejects
    );
    Ok(finish(g, summary, text))
}

pub fn synth(g: &GlobalArgs, a: &SynthArgs) -> Result<String, CliError> {
    let spec = match &a.spec {
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| io_err(p, e))?;
            SynthSpec::from_json(&text)?
        }
        None => SynthSpec::default(),
    };
    let seed = g.seed.unwrap_or(spec.seed);
    let out = generate_synthetic(&spec, seed)?;
    write_corpus(&g.out_dir, &out.corpus)?;
    write_file(&g.out_dir.join(DOMAIN_WORDS_FILE), (out.domain_words.join("\n") + "\n").as_bytes())?;
    write_file(&g.out_dir.join(STOPWORDS_FILE), (out.stopwords.join("\n") + "\n").as_bytes())?;
    let c = &out.corpus;
    let summary = json!({ "pairs": c.len(), "high": c.count(Label::High), "low": c.count(Label::Low), "seed": seed });
    let text = format!("wrote {} pairs ({} high, {} low) to {}\n", c.len(), c.count(Label::High), c.count(Label::Low), g.out_dir.display());
    Ok(finish(g, summary, text))
}

fn parse_non_textual(s: &str) -> Result<NonTextual, CliError> {
    let mut nt = NonTextual::default();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        match part {
            "slf" => nt.slf = true,
            "sf" => nt.sf = true,
            "none" => {}
            other => return Err(CliError::validation(format!("unknown non-textual block {other:?}; expected slf, sf or none"))),
        }
    }
    Ok(nt)
}

fn render_report_text(reports: &[&EvalReport], cfg: &PipelineConfig) -> String {
    format!(
        "{}\nthreshold 0.5; std is the sample (n-1) standard deviation over {} folds x {} trials\n\neffective config:\n{}\n",
        EvalReport::render_table(reports),
        cfg.k,
        cfg.n_trials,
        cfg.to_json_pretty()
    )
}

pub fn evaluate(g: &GlobalArgs, a: &EvaluateArgs) -> Result<String, CliError> {
    let (mut cfg, corpus, res) = setup(g, &a.corpus)?;
    if let Some(f) = &a.featurizer {
        cfg.featurizer = Featurizer::parse(f).ok_or_else(|| CliError::validation(format!("unknown featurizer {f:?}")))?;
    }
    if let Some(nt) = &a.non_textual {
        cfg.non_textual = parse_non_textual(nt)?;
    }
    if let Some(c) = &a.classifier {
        cfg.classifier = match c.as_str() {
            "logreg" => ClassifierKind::Logreg,
            "nb" => ClassifierKind::Nb,
            other => return Err(CliError::validation(format!("unknown classifier {other:?}"))),
        };
    }
    cfg.k = a.k.unwrap_or(cfg.k);
    cfg.n_trials = a.trials.unwrap_or(cfg.n_trials);
    let sweep: Vec<Option<usize>> = if a.lda_k.is_empty() { vec![None] } else { a.lda_k.iter().map(|&k| Some(k)).collect() };
    let mut outputs = Vec::new();
    for k in sweep {
        let mut run = cfg.clone();
        if let Some(k) = k {
            run.lda.k = k;
        }
        run.validate()?;
        let report = evaluate_masks(&corpus, &run, &[run.mask()], &res)?.remove(0);
        let stem = match k {
            Some(k) if a.lda_k.len() > 1 => format!("report-k{k}"),
            _ => "report".to_string(),
        };
        write_json(&g.out_dir.join(format!("{stem}.json")), &json!({ "config": run, "report": report }))?;
        write_file(&g.out_dir.join(format!("{stem}.txt")), render_report_text(&[&report], &run).as_bytes())?;
        outputs.push((run, report));
    }
    let reports: Vec<&EvalReport> = outputs.iter().map(|(_, r)| r).collect();
    let text = EvalReport::render_table(&reports);
    let summary = json!(outputs.iter().map(|(c, r)| json!({ "lda_k": c.lda.k, "report": r })).collect::<Vec<_>>());
    Ok(finish(g, summary, text))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TTestMatrix {
    pub mask: String,
    pub metric: Metric,
    pub methods: Vec<String>,
    pub t: Vec<Vec<Option<f64>>>,
    pub p: Vec<Vec<f64>>,
}

fn ttest_matrix(mask: BlockMask, metric: Metric, reports: &[(Featurizer, &EvalReport)]) -> Result<TTestMatrix, CliError> {
    let n = reports.len();
    let mut t = vec![vec![None; n]; n];
    let mut p = vec![vec![1.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let r = paired_ttest(&reports[i].1.values(metric), &reports[j].1.values(metric)).map_err(|e| CliError::runtime(e.to_string()))?;
            t[i][j] = r.t.is_finite().then_some(r.t);
            p[i][j] = r.p;
        }
    }
    Ok(TTestMatrix {
        mask: mask.name(),
        metric,
        methods: reports.iter().map(|(f, _)| f.name().to_string()).collect(),
        t,
        p,
    })
}

fn render_ttest(m: &TTestMatrix) -> String {
    let w = m.methods.iter().map(String::len).max().unwrap_or(8).max(8);
    let mut out = format!("paired t-test p-values, {} {}\n{:<w$}", m.mask, m.metric.short(), "");
    for name in &m.methods {
        out.push_str(&format!("  {name:>w$}"));
    }
    out.push('\n');
    for (i, name) in m.methods.iter().enumerate() {
        out.push_str(&format!("{name:<w$}"));
        for p in &m.p[i] {
            out.push_str(&format!("  {:>w$}", format!("{p:.4e}")));
        }
        out.push('\n');
    }
    out
}

pub fn ablate(g: &GlobalArgs, a: &CorpusArgs) -> Result<String, CliError> {
    let (cfg, corpus, res) = setup(g, a)?;
    let mut grid: Vec<(Featurizer, Vec<EvalReport>)> = Vec::new();
    for f in Featurizer::ALL {
        let run = cfg.with_featurizer(f);
        run.validate()?;
        grid.push((f, evaluate_masks(&corpus, &run, &BlockMask::ABLATIONS, &res)?));
    }
    let mut ttests = Vec::new();
    for (m, mask) in BlockMask::ABLATIONS.iter().enumerate() {
        let column: Vec<(Featurizer, &EvalReport)> = grid.iter().map(|(f, rs)| (*f, &rs[m])).collect();
        for metric in Metric::ALL {
            ttests.push(ttest_matrix(*mask, metric, &column)?);
        }
    }
    let cells: Vec<&EvalReport> = grid.iter().flat_map(|(_, rs)| rs.iter()).collect();
    let mut text = EvalReport::render_table(&cells);
    for m in &ttests {
        text.push('\n');
        text.push_str(&render_ttest(m));
    }
    let doc = json!({ "config": cfg, "cells": cells, "ttests": ttests });
    write_json(&g.out_dir.join("ablation.json"), &doc)?;
    write_file(&g.out_dir.join("ablation.txt"), format!("{text}\neffective config:\n{}\n", cfg.to_json_pretty()).as_bytes())?;
    Ok(finish(g, doc, text))
}

pub fn rank(g: &GlobalArgs, a: &CorpusArgs) -> Result<String, CliError> {
    let (cfg, corpus, res) = setup(g, a)?;
    let ranking = rank_hand_features(&corpus, &res, cfg.rank_bins)?;
    let m = hand_matrix(&corpus, &res)?;
    let names = hand_feature_names();
    let labels = corpus.labels();
    let mut distributions = BTreeMap::new();
    let mut text = ranking.render();
    text.push_str(&format!("\n{}\n", ranking.note));
    for feat in DISTRIBUTION_FEATURES {
        let j = names.iter().position(|n| n == feat).expect("known feature");
        let groups = distribution_report(&m.column(j).to_vec(), &labels, 10).map_err(|e| CliError::runtime(e.to_string()))?;
        text.push_str(&format!("\n{feat}: high-quality ratio per equal-frequency group\n"));
        for (i, gr) in groups.iter().enumerate() {
            text.push_str(&format!("  {:>2}  [{:>12.3}, {:>12.3}]  n={:<5} high={:.3}\n", i + 1, gr.lower, gr.upper, gr.size, gr.high_ratio));
        }
        distributions.insert(feat, groups);
    }
    let doc = json!({ "ranking": ranking, "distributions": distributions });
    write_json(&g.out_dir.join("ranking.json"), &doc)?;
    write_file(&g.out_dir.join("ranking.txt"), text.as_bytes())?;
    Ok(finish(g, doc, text))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    pub id: String,
    pub probability: f64,
    pub label: Label,
}

fn write_predictions(path: &Path, corpus: &Corpus, scores: &[(f64, Label)]) -> Result<(), CliError> {
    let mut out = String::new();
    for (p, (prob, label)) in corpus.pairs.iter().zip(scores) {
        let rec = Prediction { id: p.id.clone(), probability: *prob, label: *label };
        out.push_str(&serde_json::to_string(&rec).expect("prediction serializes"));
        out.push('\n');
    }
    write_file(path, out.as_bytes())
}

fn model_dir(g: &GlobalArgs, a: &TrainArgs) -> PathBuf {
    a.model_dir.clone().unwrap_or_else(|| g.out_dir.join("model"))
}

pub fn train(g: &GlobalArgs, a: &TrainArgs) -> Result<String, CliError> {
    let (cfg, corpus, res) = setup(g, &a.corpus)?;
    let fitted = FittedPipeline::fit(&corpus, &cfg, &res)?;
    let dir = model_dir(g, a);
    fitted.save(&dir)?;
    let scores = fitted.score(&corpus)?;
    write_predictions(&g.out_dir.join("train_scores.jsonl"), &corpus, &scores)?;
    let summary = json!({ "model_dir": dir, "fingerprint": cfg.fingerprint(), "pairs": corpus.len() });
    let text = format!("trained {} on {} pairs; model saved to {}\n", cfg.run_name(), corpus.len(), dir.display());
    Ok(finish(g, summary, text))
}

/// A pair to score; the label is optional.
#[derive(Debug, Deserialize)]
struct PredictRecord {
    id: String,
    #[serde(rename = "question")]
    question_text: String,
    #[serde(rename = "answer")]
    answer_text: String,
    label: Option<Label>,
    physician_id: String,
    question_time: i64,
    answer_time: i64,
}

pub fn predict(g: &GlobalArgs, a: &PredictArgs) -> Result<String, CliError> {
    let fitted = FittedPipeline::load(&a.model_dir)?;
    let text = fs::read_to_string(&a.input).map_err(|e| io_err(&a.input, e))?;
    let mut pairs = Vec::new();
    for (i, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
        let r: PredictRecord =
            serde_json::from_str(line).map_err(|e| CliError::validation(format!("{}:{}: {e}", a.input.display(), i + 1)))?;
        let pair = QaPair {
            id: r.id,
            question_text: r.question_text,
            answer_text: r.answer_text,
            label: r.label.unwrap_or(Label::Low),
            physician_id: r.physician_id,
            question_time: r.question_time,
            answer_time: r.answer_time,
        };
        pair.validate()?;
        pairs.push(pair);
    }
    let profiles = match &a.profiles {
        Some(p) => load_profiles(p)?.records,
        None => BTreeMap::new(),
    };
    let corpus = Corpus::new(pairs, profiles, fitted.meta.clone());
    let scores = fitted.score(&corpus)?;
    let out = g.out_dir.join("predictions.jsonl");
    write_predictions(&out, &corpus, &scores)?;
    let summary = json!({ "predictions": out, "pairs": corpus.len(), "high": scores.iter().filter(|s| s.1.is_high()).count() });
    let mut text = String::new();
    for (p, (prob, label)) in corpus.pairs.iter().zip(&scores) {
        text.push_str(&format!("{}\t{prob:.6}\t{label}\n", p.id));
    }
    Ok(finish(g, summary, text))
}
