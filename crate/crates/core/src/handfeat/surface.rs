use std::collections::{BTreeSet, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::corpus::QaPair;
use crate::textfeat::{load_term_list, TextError, Tokenizer};

pub const SLF_COUNT: usize = 14;
pub const SLF_NAMES: [&str; SLF_COUNT] = [
    "slf1", "slf2", "slf3", "slf4", "slf5", "slf6", "slf7", "slf8", "slf9", "slf10", "slf11", "slf12", "slf13", "slf14",
];

const TERMINATORS: [char; 6] = ['。', '！', '？', '.', '!', '?'];

/// Term sets matched against tokenizer output.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Lexicons {
    pub stopwords: BTreeSet<String>,
    pub domain_words: BTreeSet<String>,
    /// Used by slf6; defaults to the domain words.
    pub keywords: BTreeSet<String>,
}

impl Lexicons {
    pub fn new<S: AsRef<str>>(stopwords: &[S], domain_words: &[S], keywords: Option<&[S]>) -> Self {
        let set = |xs: &[S]| xs.iter().map(|s| s.as_ref().to_string()).collect::<BTreeSet<_>>();
        let domain_words = set(domain_words);
        Lexicons {
            stopwords: set(stopwords),
            keywords: keywords.map(set).unwrap_or_else(|| domain_words.clone()),
            domain_words,
        }
    }

    pub fn load(
        stopwords: Option<&std::path::Path>,
        domain_words: Option<&std::path::Path>,
        keywords: Option<&std::path::Path>,
    ) -> Result<Self, TextError> {
        let read = |p: Option<&std::path::Path>| p.map(load_term_list).transpose();
        let stop = read(stopwords)?.unwrap_or_default();
        let domain = read(domain_words)?.unwrap_or_default();
        let keys = read(keywords)?;
        Ok(Lexicons::new(&stop, &domain, keys.as_deref()))
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct SurfaceFeatures {
    pub slf1: f64,
    pub slf2: f64,
    pub slf3: f64,
    pub slf4: f64,
    pub slf5: f64,
    pub slf6: f64,
    pub slf7: f64,
    pub slf8: f64,
    pub slf9: f64,
    pub slf10: f64,
    pub slf11: f64,
    pub slf12: f64,
    pub slf13: f64,
    pub slf14: f64,
}

impl SurfaceFeatures {
    pub fn to_array(&self) -> [f64; SLF_COUNT] {
        [
            self.slf1, self.slf2, self.slf3, self.slf4, self.slf5, self.slf6, self.slf7, self.slf8, self.slf9,
            self.slf10, self.slf11, self.slf12, self.slf13, self.slf14,
        ]
    }
}

fn ratio(num: f64, den: f64) -> f64 {
    if den == 0.0 {
        0.0
    } else {
        num / den
    }
}

fn chars(tokens: &[String]) -> usize {
    tokens.iter().map(|t| t.chars().count()).sum()
}

fn sentence_count(text: &str) -> usize {
    text.split(TERMINATORS)
        .filter(|s| !s.trim().is_empty())
        .count()
        .max(1)
}

fn shared_types(a: &[String], b: &[String]) -> usize {
    let a: HashSet<&str> = a.iter().map(String::as_str).collect();
    let b: HashSet<&str> = b.iter().map(String::as_str).collect();
    a.intersection(&b).count()
}

fn term_counts(xs: &[String]) -> HashMap<&str, u64> {
    let mut m = HashMap::new();
    for x in xs {
        *m.entry(x.as_str()).or_default() += 1;
    }
    m
}

fn tf_cosine(a: &[String], b: &[String]) -> f64 {
    let (ta, tb) = (term_counts(a), term_counts(b));
    let dot: u64 = ta.iter().map(|(k, &v)| v * tb.get(k).copied().unwrap_or(0)).sum();
    let na: u64 = ta.values().map(|v| v * v).sum();
    let nb: u64 = tb.values().map(|v| v * v).sum();
    if na == 0 || nb == 0 {
        return 0.0;
    }
    (dot as f64 / ((na as f64) * (nb as f64)).sqrt()).clamp(0.0, 1.0)
}

pub fn surface_features(qa: &QaPair, lex: &Lexicons, tok: &Tokenizer) -> SurfaceFeatures {
    let drop_stop = |ts: &[String]| -> Vec<String> {
        ts.iter()
            .filter(|t| !lex.stopwords.contains(*t) && !tok.is_stopword(t))
            .cloned()
            .collect()
    };
    let a_all = tok.split(&qa.answer_text);
    let q_all = tok.split(&qa.question_text);
    let a = drop_stop(&a_all);
    let q = drop_stop(&q_all);

    let slf1 = qa.answer_text.chars().count() as f64;
    let slf2 = a_all.len() as f64;
    let slf3 = a.len() as f64;
    let slf4 = a.iter().collect::<HashSet<_>>().len() as f64;
    let keyword_chars: usize = a_all.iter().filter(|t| lex.keywords.contains(*t)).map(|t| t.chars().count()).sum();
    let slf7 = sentence_count(&qa.answer_text) as f64;
    let q_chars = qa.question_text.chars().count() as f64;

    SurfaceFeatures {
        slf1,
        slf2,
        slf3,
        slf4,
        slf5: ratio(slf1, slf3),
        slf6: ratio(keyword_chars as f64, slf1).min(1.0),
        slf7,
        slf8: slf1 / slf7,
        slf9: a_all.iter().filter(|t| lex.domain_words.contains(*t)).count() as f64,
        slf10: ratio(q_chars, slf1),
        slf11: ratio(chars(&q) as f64, chars(&a) as f64),
        slf12: shared_types(&q_all, &a_all) as f64,
        slf13: shared_types(&q, &a) as f64,
        slf14: tf_cosine(&q, &a),
    }
}
