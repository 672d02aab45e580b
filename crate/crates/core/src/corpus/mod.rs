//! Labeled QA corpora: loading, validation, filtering, class balancing,
//! stratified folds and synthetic generation.

mod folds;
mod profile;
mod synth;

pub use folds::{make_folds, FoldPlan};
pub use profile::{EducationGrade, HospitalGrade, PhysicianGrade, PhysicianProfile};
pub use synth::{generate_synthetic, SynthSpec};

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::fs;
use std::io::{BufRead, BufReader};
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::seed::rng_from_seed;

/// File names inside a canonical corpus directory.
pub const PAIRS_FILE: &str = "corpus.jsonl";
pub const PROFILES_FILE: &str = "profiles.jsonl";
pub const META_FILE: &str = "meta.json";

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed {path}: {message}")]
    Format { path: PathBuf, message: String },
    #[error("class {class} has {available} members, {requested} requested")]
    InsufficientClass {
        class: Label,
        available: usize,
        requested: usize,
    },
    #[error("cannot build {k} folds: smallest class has {smallest} members")]
    TooManyFolds { k: usize, smallest: usize },
    #[error("invalid synthetic spec: {0}")]
    InvalidSpec(String),
    #[error("invalid record {id}: {message}")]
    InvalidRecord { id: String, message: String },
}

/// Binary answer-quality label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    High,
    Low,
}

impl Label {
    pub const ALL: [Label; 2] = [Label::High, Label::Low];

    /// 1.0 for High, 0.0 for Low.
    pub fn as_target(self) -> f64 {
        match self {
            Label::High => 1.0,
            Label::Low => 0.0,
        }
    }

    pub fn is_high(self) -> bool {
        self == Label::High
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::High => f.write_str("high"),
            Label::Low => f.write_str("low"),
        }
    }
}

/// One question, its answer and the quality label of the answer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QaPair {
    pub id: String,
    #[serde(rename = "question")]
    pub question_text: String,
    #[serde(rename = "answer")]
    pub answer_text: String,
    pub label: Label,
    pub physician_id: String,
    /// Epoch seconds.
    pub question_time: i64,
    /// Epoch seconds.
    pub answer_time: i64,
}

impl QaPair {
    pub fn validate(&self) -> Result<(), CorpusError> {
        if self.answer_time < self.question_time {
            return Err(CorpusError::InvalidRecord {
                id: self.id.clone(),
                message: format!(
                    "answer_time {} precedes question_time {}",
                    self.answer_time, self.question_time
                ),
            });
        }
        Ok(())
    }

    /// Answer length in Unicode scalar values.
    pub fn answer_chars(&self) -> usize {
        self.answer_text.chars().count()
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct CorpusMeta {
    pub source: String,
    /// When the profiles were collected (epoch seconds); anchors sf17.
    pub collection_time: i64,
    /// When the QA service went online (epoch seconds); anchors sf18.
    pub launch_time: i64,
}

/// A line that failed to parse or validate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Reject {
    /// 1-based line number in the source file.
    pub line: usize,
    pub reason: String,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Corpus {
    pub pairs: Vec<QaPair>,
    pub profiles: BTreeMap<String, PhysicianProfile>,
    pub meta: CorpusMeta,
}

/// Result of parsing a JSON-lines file: the accepted records plus every
/// rejected line.
#[derive(Debug, Clone)]
pub struct Loaded<T> {
    pub records: T,
    pub rejects: Vec<Reject>,
}

impl Corpus {
    pub fn new(pairs: Vec<QaPair>, profiles: BTreeMap<String, PhysicianProfile>, meta: CorpusMeta) -> Self {
        Corpus { pairs, profiles, meta }
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn count(&self, label: Label) -> usize {
        self.pairs.iter().filter(|p| p.label == label).count()
    }

    pub fn profile_for(&self, pair: &QaPair) -> Option<&PhysicianProfile> {
        self.profiles.get(&pair.physician_id)
    }

    /// Ids of pairs whose physician has no profile. Such pairs are kept;
    /// their social features are imputed downstream.
    pub fn missing_profiles(&self) -> Vec<&str> {
        self.pairs
            .iter()
            .filter(|p| !self.profiles.contains_key(&p.physician_id))
            .map(|p| p.id.as_str())
            .collect()
    }

    /// Same profiles and metadata, different pairs.
    pub fn with_pairs(&self, pairs: Vec<QaPair>) -> Corpus {
        Corpus {
            pairs,
            profiles: self.profiles.clone(),
            meta: self.meta.clone(),
        }
    }

    pub fn labels(&self) -> Vec<Label> {
        self.pairs.iter().map(|p| p.label).collect()
    }

    /// Load `corpus.jsonl`, and `profiles.jsonl` / `meta.json` when present,
    /// from a canonical corpus directory.
    pub fn load_dir(dir: &Path) -> Result<Loaded<Corpus>, CorpusError> {
        let pairs = load_corpus(&dir.join(PAIRS_FILE))?;
        let mut rejects = pairs.rejects;
        let profiles_path = dir.join(PROFILES_FILE);
        let profiles = if profiles_path.exists() {
            let loaded = load_profiles(&profiles_path)?;
            rejects.extend(loaded.rejects);
            loaded.records
        } else {
            BTreeMap::new()
        };
        let meta_path = dir.join(META_FILE);
        let meta = if meta_path.exists() {
            let text = read_to_string(&meta_path)?;
            serde_json::from_str(&text).map_err(|e| CorpusError::Format {
                path: meta_path.clone(),
                message: e.to_string(),
            })?
        } else {
            CorpusMeta::default()
        };
        Ok(Loaded {
            records: Corpus::new(pairs.records, profiles, meta),
            rejects,
        })
    }

    /// Serialize to JSON-lines text: (pairs, profiles, meta).
    pub fn to_jsonl(&self) -> (String, String, String) {
        let mut pairs = String::new();
        for p in &self.pairs {
            pairs.push_str(&serde_json::to_string(p).expect("pair serializes"));
            pairs.push('\n');
        }
        let mut profiles = String::new();
        for p in self.profiles.values() {
            profiles.push_str(&serde_json::to_string(p).expect("profile serializes"));
            profiles.push('\n');
        }
        let meta = serde_json::to_string_pretty(&self.meta).expect("meta serializes") + "\n";
        (pairs, profiles, meta)
    }
}

fn read_to_string(path: &Path) -> Result<String, CorpusError> {
    fs::read_to_string(path).map_err(|source| CorpusError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn for_each_line(
    path: &Path,
    mut f: impl FnMut(usize, &str),
) -> Result<(), CorpusError> {
    let file = fs::File::open(path).map_err(|source| CorpusError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|source| CorpusError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        if line.trim().is_empty() {
            continue;
        }
        f(i + 1, &line);
    }
    Ok(())
}

/// Parse a corpus file (one QA pair per line). Lines that are malformed,
/// miss a required key, carry an unknown label, duplicate an earlier id or
/// violate `answer_time >= question_time` are reported as rejects.
pub fn load_corpus(path: &Path) -> Result<Loaded<Vec<QaPair>>, CorpusError> {
    let mut pairs = Vec::new();
    let mut rejects = Vec::new();
    let mut seen = HashSet::new();
    for_each_line(path, |line_no, line| {
        let outcome = serde_json::from_str::<QaPair>(line)
            .map_err(|e| e.to_string())
            .and_then(|pair| pair.validate().map(|_| pair).map_err(|e| e.to_string()))
            .and_then(|pair| {
                if seen.insert(pair.id.clone()) {
                    Ok(pair)
                } else {
                    Err(format!("duplicate id {:?}", pair.id))
                }
            });
        match outcome {
            Ok(pair) => pairs.push(pair),
            Err(reason) => rejects.push(Reject { line: line_no, reason }),
        }
    })?;
    Ok(Loaded { records: pairs, rejects })
}

/// Parse a profile file keyed by `physician_id`.
pub fn load_profiles(
    path: &Path,
) -> Result<Loaded<BTreeMap<String, PhysicianProfile>>, CorpusError> {
    let mut profiles = BTreeMap::new();
    let mut rejects = Vec::new();
    for_each_line(path, |line_no, line| {
        let outcome = serde_json::from_str::<PhysicianProfile>(line)
            .map_err(|e| e.to_string())
            .and_then(|p| p.validate().map(|_| p))
            .and_then(|p| {
                if profiles.contains_key(&p.physician_id) {
                    Err(format!("duplicate physician_id {:?}", p.physician_id))
                } else {
                    Ok(p)
                }
            });
        match outcome {
            Ok(p) => {
                profiles.insert(p.physician_id.clone(), p);
            }
            Err(reason) => rejects.push(Reject { line: line_no, reason }),
        }
    })?;
    Ok(Loaded { records: profiles, rejects })
}

/// Keep pairs whose answer has at least `min_chars` Unicode scalar values.
pub fn filter_min_answer_length(corpus: &Corpus, min_chars: usize) -> Corpus {
    let pairs = corpus
        .pairs
        .iter()
        .filter(|p| p.answer_chars() >= min_chars)
        .cloned()
        .collect();
    corpus.with_pairs(pairs)
}

/// Draw exactly `n_per_class` pairs of each label without replacement.
///
/// The output lists the sampled High pairs first, then the Low pairs, each
/// in draw order.
pub fn balanced_sample(corpus: &Corpus, n_per_class: usize, seed: u64) -> Result<Corpus, CorpusError> {
    let mut rng = rng_from_seed(seed);
    let mut pairs = Vec::with_capacity(2 * n_per_class);
    for label in Label::ALL {
        let mut members: Vec<&QaPair> = corpus.pairs.iter().filter(|p| p.label == label).collect();
        if members.len() < n_per_class {
            return Err(CorpusError::InsufficientClass {
                class: label,
                available: members.len(),
                requested: n_per_class,
            });
        }
        let (chosen, _) = members.partial_shuffle(&mut rng, n_per_class);
        pairs.extend(chosen.iter().map(|p| (*p).clone()));
    }
    Ok(corpus.with_pairs(pairs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    pub(crate) fn pair(id: &str, answer: &str, label: Label) -> QaPair {
        QaPair {
            id: id.to_string(),
            question_text: "question".to_string(),
            answer_text: answer.to_string(),
            label,
            physician_id: "doc".to_string(),
            question_time: 0,
            answer_time: 10,
        }
    }

    fn write_lines(lines: &[&str]) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        for l in lines {
            writeln!(f, "{l}").unwrap();
        }
        f
    }

    const OK1: &str = r#"{"id":"a","question":"q","answer":"fine answer","label":"high","physician_id":"d1","question_time":1,"answer_time":2}"#;
    const OK2: &str = r#"{"id":"b","question":"q","answer":"another","label":"low","physician_id":"d1","question_time":1,"answer_time":1}"#;
    const OK3: &str = r#"{"id":"c","question":"q","answer":"third","label":"high","physician_id":"d2","question_time":5,"answer_time":9}"#;

    #[test]
    fn loads_three_valid_lines() {
        let f = write_lines(&[OK1, OK2, OK3]);
        let loaded = load_corpus(f.path()).unwrap();
        assert_eq!(loaded.records.len(), 3);
        assert!(loaded.rejects.is_empty());
    }

    #[test]
    fn missing_label_is_rejected_with_line_number() {
        let bad = r#"{"id":"x","question":"q","answer":"a","physician_id":"d1","question_time":1,"answer_time":2}"#;
        let f = write_lines(&[OK1, bad, OK2]);
        let loaded = load_corpus(f.path()).unwrap();
        assert_eq!(loaded.records.len(), 2);
        assert_eq!(loaded.rejects.len(), 1);
        assert_eq!(loaded.rejects[0].line, 2);
        assert!(loaded.rejects[0].reason.contains("label"));
    }

    #[test]
    fn unknown_label_duplicate_id_and_time_order_are_rejected() {
        let unknown = r#"{"id":"u","question":"q","answer":"a","label":"medium","physician_id":"d1","question_time":1,"answer_time":2}"#;
        let backwards = r#"{"id":"t","question":"q","answer":"a","label":"low","physician_id":"d1","question_time":9,"answer_time":2}"#;
        let f = write_lines(&[OK1, unknown, OK1, backwards]);
        let loaded = load_corpus(f.path()).unwrap();
        assert_eq!(loaded.records.len(), 1);
        let lines: Vec<usize> = loaded.rejects.iter().map(|r| r.line).collect();
        assert_eq!(lines, vec![2, 3, 4]);
        assert!(loaded.rejects[1].reason.contains("duplicate"));
    }

    #[test]
    fn empty_file_is_an_empty_corpus() {
        let f = write_lines(&[]);
        let loaded = load_corpus(f.path()).unwrap();
        assert!(loaded.records.is_empty());
        assert!(loaded.rejects.is_empty());
    }

    #[test]
    fn unreadable_file_is_an_error() {
        let err = load_corpus(Path::new("/nonexistent/corpus.jsonl")).unwrap_err();
        assert!(matches!(err, CorpusError::Io { .. }));
    }

    #[test]
    fn length_filter_counts_scalar_values() {
        let c = Corpus::new(
            vec![
                pair("14", &"x".repeat(14), Label::High),
                pair("15", &"x".repeat(15), Label::High),
                // 15 CJK characters, 45 bytes
                pair("cjk", &"好".repeat(15), Label::Low),
            ],
            BTreeMap::new(),
            CorpusMeta::default(),
        );
        let kept: Vec<String> = filter_min_answer_length(&c, 15).pairs.into_iter().map(|p| p.id).collect();
        assert_eq!(kept, vec!["15", "cjk"]);
        assert_eq!(filter_min_answer_length(&c, 0).pairs, c.pairs);
    }

    #[test]
    fn length_filter_on_three_lengths() {
        let c = Corpus::new(
            vec![
                pair("a", &"x".repeat(3), Label::High),
                pair("b", &"x".repeat(20), Label::High),
                pair("c", &"x".repeat(40), Label::Low),
            ],
            BTreeMap::new(),
            CorpusMeta::default(),
        );
        assert_eq!(filter_min_answer_length(&c, 15).len(), 2);
    }

    fn skewed(n_high: usize, n_low: usize) -> Corpus {
        let mut pairs = Vec::new();
        for i in 0..n_high {
            pairs.push(pair(&format!("h{i}"), "answer text", Label::High));
        }
        for i in 0..n_low {
            pairs.push(pair(&format!("l{i}"), "answer text", Label::Low));
        }
        Corpus::new(pairs, BTreeMap::new(), CorpusMeta::default())
    }

    #[test]
    fn balanced_sample_at_full_scale() {
        let c = skewed(13_500, 1_700);
        let s = balanced_sample(&c, 1600, 7).unwrap();
        assert_eq!(s.len(), 3200);
        assert_eq!(s.count(Label::High), 1600);
        assert_eq!(s.count(Label::Low), 1600);
        let ids: HashSet<&str> = s.pairs.iter().map(|p| p.id.as_str()).collect();
        assert_eq!(ids.len(), 3200);
    }

    #[test]
    fn balanced_sample_is_deterministic_and_handles_zero() {
        let c = skewed(50, 20);
        let a = balanced_sample(&c, 10, 3).unwrap();
        let b = balanced_sample(&c, 10, 3).unwrap();
        assert_eq!(a.pairs, b.pairs);
        assert!(balanced_sample(&c, 0, 3).unwrap().is_empty());
    }

    #[test]
    fn balanced_sample_names_the_deficient_class() {
        let c = skewed(50, 20);
        match balanced_sample(&c, 30, 3) {
            Err(CorpusError::InsufficientClass { class, available, requested }) => {
                assert_eq!(class, Label::Low);
                assert_eq!(available, 20);
                assert_eq!(requested, 30);
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
