use std::collections::HashSet;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use unicode_segmentation::UnicodeSegmentation;

use super::TextError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TokenizerMode {
    /// Unicode word boundaries (UAX #29); punctuation is dropped and CJK
    /// ideographs become single-character tokens.
    #[default]
    UnicodeWords,
    /// Whitespace split with leading/trailing punctuation trimmed.
    Whitespace,
    /// Text already segmented externally; whitespace-separated tokens are
    /// taken verbatim.
    Pretokenized,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TokenizerConfig {
    pub mode: TokenizerMode,
    pub lowercase: bool,
    pub stopword_path: Option<PathBuf>,
}

impl Default for TokenizerConfig {
    fn default() -> Self {
        TokenizerConfig {
            mode: TokenizerMode::UnicodeWords,
            lowercase: true,
            stopword_path: None,
        }
    }
}

/// A configured tokenizer with its stopword set loaded.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Tokenizer {
    mode: TokenizerMode,
    lowercase: bool,
    stopwords: HashSet<String>,
}

/// Read a UTF-8 term list: one term per line, blank lines skipped,
/// duplicates dropped (first occurrence wins).
pub fn load_term_list(path: &Path) -> Result<Vec<String>, TextError> {
    let text = fs::read_to_string(path).map_err(|source| TextError::TermList {
        path: path.to_path_buf(),
        source,
    })?;
    let mut seen = HashSet::new();
    Ok(text
        .lines()
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .filter(|t| seen.insert(t.to_string()))
        .map(str::to_string)
        .collect())
}

impl Tokenizer {
    pub fn new(mode: TokenizerMode, lowercase: bool) -> Self {
        Tokenizer {
            mode,
            lowercase,
            stopwords: HashSet::new(),
        }
    }

    pub fn from_config(cfg: &TokenizerConfig) -> Result<Self, TextError> {
        let tok = Tokenizer::new(cfg.mode, cfg.lowercase);
        match &cfg.stopword_path {
            Some(path) => Ok(tok.with_stopwords(load_term_list(path)?)),
            None => Ok(tok),
        }
    }

    pub fn with_stopwords<I, S>(mut self, words: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        self.stopwords = words.into_iter().map(|w| self.normalize(w.as_ref())).collect();
        self
    }

    pub fn stopwords(&self) -> &HashSet<String> {
        &self.stopwords
    }

    pub fn is_stopword(&self, token: &str) -> bool {
        self.stopwords.contains(token)
    }

    fn normalize(&self, token: &str) -> String {
        if self.lowercase {
            token.to_lowercase()
        } else {
            token.to_string()
        }
    }

    /// Tokens before stopword removal.
    pub fn split(&self, text: &str) -> Vec<String> {
        match self.mode {
            TokenizerMode::UnicodeWords => text.unicode_words().map(|w| self.normalize(w)).collect(),
            TokenizerMode::Whitespace => text
                .split_whitespace()
                .map(|w| w.trim_matches(|c: char| !c.is_alphanumeric()))
                .filter(|w| !w.is_empty())
                .map(|w| self.normalize(w))
                .collect(),
            TokenizerMode::Pretokenized => text.split_whitespace().map(|w| self.normalize(w)).collect(),
        }
    }

    /// Tokens with configured stopwords removed.
    pub fn tokenize(&self, text: &str) -> Vec<String> {
        let mut tokens = self.split(text);
        if !self.stopwords.is_empty() {
            tokens.retain(|t| !self.stopwords.contains(t));
        }
        tokens
    }
}

/// One-shot tokenization from a configuration (loads the stopword file).
pub fn tokenize(text: &str, cfg: &TokenizerConfig) -> Result<Vec<String>, TextError> {
    Ok(Tokenizer::from_config(cfg)?.tokenize(text))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    #[test]
    fn lowercases_words() {
        let cfg = TokenizerConfig::default();
        assert_eq!(tokenize("High blood pressure", &cfg).unwrap(), vec!["high", "blood", "pressure"]);
        assert!(tokenize("", &cfg).unwrap().is_empty());
    }

    #[test]
    fn removes_stopwords_from_file() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(f, "a\nof\nthe\n").unwrap();
        let cfg = TokenizerConfig {
            stopword_path: Some(f.path().to_path_buf()),
            ..Default::default()
        };
        assert_eq!(tokenize("a of the pain", &cfg).unwrap(), vec!["pain"]);
    }

    #[test]
    fn unreadable_stopword_file_is_an_error() {
        let cfg = TokenizerConfig {
            stopword_path: Some("/nonexistent/stop.txt".into()),
            ..Default::default()
        };
        assert!(matches!(tokenize("x", &cfg), Err(TextError::TermList { .. })));
    }

    #[test]
    fn modes_differ_on_punctuation() {
        let text = "Take rest. Drink water!";
        assert_eq!(Tokenizer::new(TokenizerMode::UnicodeWords, true).split(text), ["take", "rest", "drink", "water"]);
        assert_eq!(Tokenizer::new(TokenizerMode::Whitespace, true).split(text), ["take", "rest", "drink", "water"]);
        assert_eq!(Tokenizer::new(TokenizerMode::Pretokenized, false).split(text), ["Take", "rest.", "Drink", "water!"]);
    }

    #[test]
    fn cjk_text_splits_into_ideographs() {
        let tok = Tokenizer::new(TokenizerMode::UnicodeWords, true);
        assert_eq!(tok.split("多喝水。"), ["多", "喝", "水"]);
    }
}
