use std::fmt;

use hqa_core::beliefnet::BeliefError;
use hqa_core::corpus::CorpusError;
use hqa_core::pipeline::PipelineError;
use serde::Serialize;

/// Validation failures exit with 1, runtime failures with 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ErrorKind {
    Validation,
    Runtime,
}

#[derive(Debug)]
pub struct CliError {
    pub kind: ErrorKind,
    pub message: String,
}

impl CliError {
    pub fn validation(message: impl Into<String>) -> Self {
        CliError { kind: ErrorKind::Validation, message: message.into() }
    }

    pub fn runtime(message: impl Into<String>) -> Self {
        CliError { kind: ErrorKind::Runtime, message: message.into() }
    }

    pub fn exit_code(&self) -> i32 {
        match self.kind {
            ErrorKind::Validation => 1,
            ErrorKind::Runtime => 2,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::json!({
            "error": { "kind": self.kind, "message": self.message, "exit_code": self.exit_code() }
        })
        .to_string()
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

fn corpus_kind(e: &CorpusError) -> ErrorKind {
    match e {
        CorpusError::Io { .. } => ErrorKind::Runtime,
        _ => ErrorKind::Validation,
    }
}

impl From<CorpusError> for CliError {
    fn from(e: CorpusError) -> Self {
        CliError { kind: corpus_kind(&e), message: e.to_string() }
    }
}

impl From<PipelineError> for CliError {
    fn from(e: PipelineError) -> Self {
        let kind = match &e {
            PipelineError::Config(_) => ErrorKind::Validation,
            PipelineError::Corpus(c) => corpus_kind(c),
            PipelineError::Cell { source, .. } => match source.as_ref() {
                PipelineError::Corpus(c) => corpus_kind(c),
                _ => ErrorKind::Runtime,
            },
            _ => ErrorKind::Runtime,
        };
        CliError { kind, message: e.to_string() }
    }
}

impl From<BeliefError> for CliError {
    fn from(e: BeliefError) -> Self {
        CliError::runtime(e.to_string())
    }
}
