use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use super::{TextError, Tokenizer};
use crate::corpus::{Corpus, Label};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Selection {
    Frequency,
    ChiTfidf,
}

#[derive(Serialize, Deserialize)]
struct VocabularyRepr {
    terms: Vec<String>,
    doc_freq: Vec<usize>,
    n_docs: usize,
    selection: Selection,
    requested_size: usize,
}

/// Ordered term list fitted on a training split.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "VocabularyRepr", into = "VocabularyRepr")]
pub struct Vocabulary {
    terms: Vec<String>,
    index: HashMap<String, usize>,
    doc_freq: Vec<usize>,
    n_docs: usize,
    selection: Selection,
    requested_size: usize,
}

impl TryFrom<VocabularyRepr> for Vocabulary {
    type Error = TextError;

    fn try_from(r: VocabularyRepr) -> Result<Self, TextError> {
        Vocabulary::new(r.terms, r.doc_freq, r.n_docs, r.selection, r.requested_size)
    }
}

impl From<Vocabulary> for VocabularyRepr {
    fn from(v: Vocabulary) -> Self {
        VocabularyRepr {
            terms: v.terms,
            doc_freq: v.doc_freq,
            n_docs: v.n_docs,
            selection: v.selection,
            requested_size: v.requested_size,
        }
    }
}

impl Vocabulary {
    pub fn new(
        terms: Vec<String>,
        doc_freq: Vec<usize>,
        n_docs: usize,
        selection: Selection,
        requested_size: usize,
    ) -> Result<Self, TextError> {
        if terms.len() != doc_freq.len() {
            return Err(TextError::InvalidVocabulary(format!(
                "{} terms but {} document frequencies",
                terms.len(),
                doc_freq.len()
            )));
        }
        if let Some(pos) = doc_freq.iter().position(|&df| df == 0 || df > n_docs) {
            return Err(TextError::InvalidVocabulary(format!(
                "doc_freq of {:?} is {} with n_docs {}",
                terms[pos], doc_freq[pos], n_docs
            )));
        }
        let mut index = HashMap::with_capacity(terms.len());
        for (i, t) in terms.iter().enumerate() {
            if index.insert(t.clone(), i).is_some() {
                return Err(TextError::InvalidVocabulary(format!("duplicate term {t:?}")));
            }
        }
        Ok(Vocabulary {
            terms,
            index,
            doc_freq,
            n_docs,
            selection,
            requested_size,
        })
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[String] {
        &self.terms
    }

    pub fn position(&self, term: &str) -> Option<usize> {
        self.index.get(term).copied()
    }

    pub fn contains(&self, term: &str) -> bool {
        self.index.contains_key(term)
    }

    pub fn doc_freq(&self, position: usize) -> usize {
        self.doc_freq[position]
    }

    pub fn n_docs(&self) -> usize {
        self.n_docs
    }

    pub fn selection(&self) -> Selection {
        self.selection
    }

    /// Size asked for at build time; `len()` is smaller when the training
    /// split had fewer distinct tokens.
    pub fn requested_size(&self) -> usize {
        self.requested_size
    }

    /// The `size` terms with the highest collection frequency, ties broken
    /// lexicographically.
    pub fn from_frequency(docs: &[Vec<String>], size: usize) -> Result<Self, TextError> {
        check_inputs(docs, size)?;
        let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
        for doc in docs {
            for t in doc {
                *counts.entry(t.as_str()).or_default() += 1;
            }
        }
        let mut ranked: Vec<(&str, usize)> = counts.into_iter().collect();
        // BTreeMap order is lexicographic, and the sort is stable.
        ranked.sort_by_key(|&(_, c)| std::cmp::Reverse(c));
        let terms: Vec<String> = ranked.into_iter().take(size).map(|(t, _)| t.to_string()).collect();
        Self::with_doc_freq(docs, terms, Selection::Frequency, size)
    }

    /// The `size` terms with the largest presence-vs-class chi-squared
    /// statistic, ties broken lexicographically.
    pub fn from_chi_squared(docs: &[Vec<String>], labels: &[Label], size: usize) -> Result<Self, TextError> {
        check_inputs(docs, size)?;
        let scores = term_chi_squared(docs, labels)?;
        let mut ranked: Vec<(&String, f64)> = scores.iter().map(|(t, &s)| (t, s)).collect();
        ranked.sort_by(|a, b| b.1.total_cmp(&a.1));
        let terms = ranked.into_iter().take(size).map(|(t, _)| t.clone()).collect();
        Self::with_doc_freq(docs, terms, Selection::ChiTfidf, size)
    }

    fn with_doc_freq(docs: &[Vec<String>], terms: Vec<String>, selection: Selection, size: usize) -> Result<Self, TextError> {
        let mut df = vec![0usize; terms.len()];
        let index: HashMap<&str, usize> = terms.iter().enumerate().map(|(i, t)| (t.as_str(), i)).collect();
        for doc in docs {
            let present: BTreeSet<usize> = doc.iter().filter_map(|t| index.get(t.as_str()).copied()).collect();
            for i in present {
                df[i] += 1;
            }
        }
        Vocabulary::new(terms, df, docs.len(), selection, size)
    }

    /// Presence vector over vocabulary positions; out-of-vocabulary tokens
    /// are ignored.
    pub fn encode_binary_tokens(&self, tokens: &[String]) -> SparseTextVector {
        let indices: BTreeSet<usize> = tokens.iter().filter_map(|t| self.position(t)).collect();
        let indices: Vec<usize> = indices.into_iter().collect();
        let values = vec![1.0; indices.len()];
        SparseTextVector {
            indices,
            values,
            dim: self.len(),
        }
    }

    /// `tf(t) * ln(n_docs / doc_freq(t))` with raw in-document counts.
    pub fn encode_tfidf_tokens(&self, tokens: &[String]) -> SparseTextVector {
        let mut tf: BTreeMap<usize, usize> = BTreeMap::new();
        for t in tokens {
            if let Some(i) = self.position(t) {
                *tf.entry(i).or_default() += 1;
            }
        }
        let (indices, values) = tf
            .into_iter()
            .map(|(i, count)| {
                let idf = (self.n_docs as f64 / self.doc_freq[i] as f64).ln();
                (i, count as f64 * idf)
            })
            .unzip();
        SparseTextVector {
            indices,
            values,
            dim: self.len(),
        }
    }
}

fn check_inputs(docs: &[Vec<String>], size: usize) -> Result<(), TextError> {
    if docs.is_empty() {
        return Err(TextError::EmptyTraining);
    }
    if size == 0 {
        return Err(TextError::ZeroSize);
    }
    Ok(())
}

/// Chi-squared statistic of a 2×2 presence table
/// `[[present & High, present & Low], [absent & High, absent & Low]]`,
/// `N (ad − bc)² / ((a+b)(c+d)(a+c)(b+d))`, and 0 when a margin is empty.
pub fn presence_chi_squared(a: u64, b: u64, c: u64, d: u64) -> f64 {
    let n = (a + b + c + d) as u128;
    let margins = [(a + b) as u128, (c + d) as u128, (a + c) as u128, (b + d) as u128];
    if margins.contains(&0) {
        return 0.0;
    }
    let cross = (a as i128 * d as i128 - b as i128 * c as i128).unsigned_abs();
    let numerator = n * cross * cross;
    let denominator: u128 = margins.iter().product();
    numerator as f64 / denominator as f64
}

/// Per-term presence chi-squared over the tokenized training documents.
pub fn term_chi_squared(docs: &[Vec<String>], labels: &[Label]) -> Result<BTreeMap<String, f64>, TextError> {
    assert_eq!(docs.len(), labels.len(), "one label per document");
    let n_high = labels.iter().filter(|l| l.is_high()).count() as u64;
    let n_low = labels.len() as u64 - n_high;
    if n_high == 0 || n_low == 0 {
        return Err(TextError::DegenerateClasses);
    }
    let mut present: BTreeMap<&str, (u64, u64)> = BTreeMap::new();
    for (doc, label) in docs.iter().zip(labels) {
        let unique: BTreeSet<&str> = doc.iter().map(String::as_str).collect();
        for t in unique {
            let e = present.entry(t).or_default();
            if label.is_high() {
                e.0 += 1;
            } else {
                e.1 += 1;
            }
        }
    }
    Ok(present
        .into_iter()
        .map(|(t, (a, b))| (t.to_string(), presence_chi_squared(a, b, n_high - a, n_low - b)))
        .collect())
}

fn tokenize_answers(train: &Corpus, tok: &Tokenizer) -> Vec<Vec<String>> {
    train.pairs.iter().map(|p| tok.tokenize(&p.answer_text)).collect()
}

/// Frequency vocabulary over the training answers.
pub fn build_vocabulary(train: &Corpus, size: usize, tok: &Tokenizer) -> Result<Vocabulary, TextError> {
    Vocabulary::from_frequency(&tokenize_answers(train, tok), size)
}

/// CHI-selected vocabulary over the training answers.
pub fn chi_tfidf_vocabulary(train: &Corpus, size: usize, tok: &Tokenizer) -> Result<Vocabulary, TextError> {
    Vocabulary::from_chi_squared(&tokenize_answers(train, tok), &train.labels(), size)
}

pub fn encode_binary(answer: &str, v: &Vocabulary, tok: &Tokenizer) -> SparseTextVector {
    v.encode_binary_tokens(&tok.tokenize(answer))
}

pub fn encode_tfidf(answer: &str, v: &Vocabulary, tok: &Tokenizer) -> SparseTextVector {
    v.encode_tfidf_tokens(&tok.tokenize(answer))
}

/// Sparse vector over vocabulary positions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SparseTextVector {
    pub indices: Vec<usize>,
    pub values: Vec<f64>,
    pub dim: usize,
}

impl SparseTextVector {
    pub fn to_dense(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        for (&i, &v) in self.indices.iter().zip(&self.values) {
            out[i] = v;
        }
        out
    }

    pub fn nnz(&self) -> usize {
        self.indices.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn docs(texts: &[&str]) -> Vec<Vec<String>> {
        texts
            .iter()
            .map(|t| t.split_whitespace().map(str::to_string).collect())
            .collect()
    }

    #[test]
    fn frequency_ties_break_lexicographically() {
        let d = docs(&["b b b a a c", "b b a a a c"]);
        let v = Vocabulary::from_frequency(&d, 2).unwrap();
        assert_eq!(v.terms(), ["a", "b"]);
        assert_eq!(v.selection(), Selection::Frequency);
    }

    #[test]
    fn frequency_vocabulary_truncates_to_available_terms() {
        let d = docs(&["x y", "z x"]);
        let v = Vocabulary::from_frequency(&d, 10).unwrap();
        assert_eq!(v.len(), 3);
        assert_eq!(v.requested_size(), 10);
        assert_eq!(v.terms(), ["x", "y", "z"]);
        assert_eq!(v.doc_freq(0), 2);
    }

    #[test]
    fn empty_training_and_zero_size_are_errors() {
        assert!(matches!(Vocabulary::from_frequency(&[], 3), Err(TextError::EmptyTraining)));
        assert!(matches!(Vocabulary::from_frequency(&docs(&["a"]), 0), Err(TextError::ZeroSize)));
    }

    #[test]
    fn binary_encoding_marks_presence_once() {
        let v = Vocabulary::new(
            vec!["pain".into(), "fever".into(), "rash".into()],
            vec![1, 1, 1],
            3,
            Selection::Frequency,
            3,
        )
        .unwrap();
        let tok = Tokenizer::default();
        let x = encode_binary("fever and fever", &v, &tok);
        assert_eq!(x.indices, vec![1]);
        assert_eq!(x.values, vec![1.0]);
        assert_eq!(encode_binary("nothing here", &v, &tok).nnz(), 0);
        assert_eq!(encode_binary("rash pain fever", &v, &tok).to_dense(), vec![1.0; 3]);
    }

    #[test]
    fn tfidf_closed_form() {
        let v = Vocabulary::new(vec!["t".into(), "u".into()], vec![10, 100], 100, Selection::ChiTfidf, 2).unwrap();
        let x = v.encode_tfidf_tokens(&["t".into(), "t".into(), "u".into()]);
        assert_eq!(x.indices, vec![0, 1]);
        assert!((x.values[0] - 2.0 * 10f64.ln()).abs() < 1e-12);
        assert!((x.values[0] - 4.60517).abs() < 1e-5);
        // df = n_docs: idf vanishes
        assert_eq!(x.values[1], 0.0);
        assert_eq!(v.encode_tfidf_tokens(&["zzz".into()]).nnz(), 0);
    }

    fn twenty_doc_corpus() -> (Vec<Vec<String>>, Vec<Label>) {
        let mut d = Vec::new();
        let mut labels = Vec::new();
        for i in 0..10 {
            let extra = if i % 2 == 0 { " even" } else { "" };
            d.push(format!("good common{extra}"));
            labels.push(Label::High);
        }
        for i in 0..10 {
            let extra = if i % 2 == 0 { " even" } else { "" };
            let rare = if i < 3 { " rareword" } else { "" };
            d.push(format!("common{extra}{rare}"));
            labels.push(Label::Low);
        }
        let refs: Vec<&str> = d.iter().map(String::as_str).collect();
        (docs(&refs), labels)
    }

    /// Chi-squared as Σ (O − E)² / E over a tabulated presence table.
    fn oracle_chi(docs: &[Vec<String>], labels: &[Label], term: &str) -> f64 {
        let mut table = [[0.0f64; 2]; 2];
        for (d, l) in docs.iter().zip(labels) {
            let row = if d.iter().any(|t| t == term) { 0 } else { 1 };
            let col = if *l == Label::High { 0 } else { 1 };
            table[row][col] += 1.0;
        }
        let n: f64 = table.iter().flatten().sum();
        let mut chi = 0.0;
        for r in 0..2 {
            for c in 0..2 {
                let e = (table[r][0] + table[r][1]) * (table[0][c] + table[1][c]) / n;
                if e > 0.0 {
                    chi += (table[r][c] - e).powi(2) / e;
                }
            }
        }
        chi
    }

    /// Same table counted by brute force, scored with the 2×2 shortcut.
    fn oracle_chi_shortcut(docs: &[Vec<String>], labels: &[Label], term: &str) -> f64 {
        let (mut a, mut b, mut c, mut d) = (0u64, 0u64, 0u64, 0u64);
        for (doc, l) in docs.iter().zip(labels) {
            match (doc.iter().any(|t| t == term), l.is_high()) {
                (true, true) => a += 1,
                (true, false) => b += 1,
                (false, true) => c += 1,
                (false, false) => d += 1,
            }
        }
        let n = (a + b + c + d) as u128;
        let den = (a + b) as u128 * (c + d) as u128 * (a + c) as u128 * (b + d) as u128;
        if den == 0 {
            return 0.0;
        }
        let cross = (a as i128 * d as i128 - b as i128 * c as i128).unsigned_abs();
        (n * cross * cross) as f64 / den as f64
    }

    #[test]
    fn chi_squared_matches_contingency_oracles_on_every_term() {
        let (d, labels) = twenty_doc_corpus();
        let scores = term_chi_squared(&d, &labels).unwrap();
        assert_eq!(scores.len(), 4);
        for (term, &s) in &scores {
            assert_eq!(s, oracle_chi_shortcut(&d, &labels, term), "term {term}");
            let o = oracle_chi(&d, &labels, term);
            assert!((s - o).abs() <= 1e-12 * o.max(1.0), "term {term}: {s} vs {o}");
        }
        assert_eq!(scores["good"], 20.0);
        assert_eq!(scores["even"], 0.0);
        assert_eq!(scores["common"], 0.0);
    }

    #[test]
    fn chi_selection_orders_by_statistic() {
        let (d, labels) = twenty_doc_corpus();
        let v = Vocabulary::from_chi_squared(&d, &labels, 4).unwrap();
        assert_eq!(v.terms()[0], "good");
        assert_eq!(v.terms()[1], "rareword");
        // χ² = 0 ties fall back to lexicographic order
        assert_eq!(&v.terms()[2..], ["common", "even"]);
        assert_eq!(v.selection(), Selection::ChiTfidf);
    }

    #[test]
    fn chi_selection_needs_both_classes() {
        let d = docs(&["a", "b"]);
        assert!(matches!(
            Vocabulary::from_chi_squared(&d, &[Label::High, Label::High], 2),
            Err(TextError::DegenerateClasses)
        ));
    }

    #[test]
    fn vocabulary_json_round_trip_and_validation() {
        let v = Vocabulary::from_frequency(&docs(&["a b", "b c"]), 3).unwrap();
        let text = serde_json::to_string(&v).unwrap();
        let back: Vocabulary = serde_json::from_str(&text).unwrap();
        assert_eq!(back, v);
        assert_eq!(back.position("b"), Some(0));
        let bad = r#"{"terms":["a","a"],"doc_freq":[1,1],"n_docs":2,"selection":"frequency","requested_size":2}"#;
        assert!(serde_json::from_str::<Vocabulary>(bad).is_err());
    }

    proptest! {
        #[test]
        fn encodings_are_well_formed(words in proptest::collection::vec(0usize..12, 0..40)) {
            let training = docs(&["w0 w1 w2 w3", "w2 w3 w4 w5 w6", "w6 w7 w8"]);
            let v = Vocabulary::from_frequency(&training, 6).unwrap();
            let tokens: Vec<String> = words.iter().map(|w| format!("w{w}")).collect();
            let b = v.encode_binary_tokens(&tokens);
            let t = v.encode_tfidf_tokens(&tokens);
            for x in [&b, &t] {
                prop_assert!(x.indices.windows(2).all(|w| w[0] < w[1]));
                prop_assert!(x.indices.iter().all(|&i| i < x.dim));
            }
            prop_assert!(b.values.iter().all(|&v| v == 1.0));
            prop_assert!(t.values.iter().all(|&v| v >= 0.0));
            let mut rev = tokens.clone();
            rev.reverse();
            prop_assert_eq!(v.encode_tfidf_tokens(&rev), t);
        }
    }
}
