//! The `hqa` command-line tool: corpus ingestion and synthesis, evaluation,
//! ablation, feature ranking, training and prediction.

pub mod commands;
pub mod error;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use error::{CliError, ErrorKind};

#[derive(Debug, Parser)]
#[command(name = "hqa", version, about = "Answer-quality classification for health question answering")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalArgs {
    /// Master seed; overrides the seed in the config or spec file.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Pipeline configuration (JSON, every field optional).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Directory for outputs.
    #[arg(long, global = true, default_value = "out")]
    pub out_dir: PathBuf,
    /// Print results and errors as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    /// Treat rejected input records as a validation failure.
    #[arg(long, global = true)]
    pub strict: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate and filter raw records into a canonical corpus directory.
    Ingest(IngestArgs),
    /// Generate a synthetic corpus directory.
    Synth(SynthArgs),
    /// Cross-validate one pipeline configuration.
    Evaluate(EvaluateArgs),
    /// Evaluate every featurizer under every block mask, with paired t-tests.
    Ablate(CorpusArgs),
    /// Rank the hand-crafted features by chi-squared.
    Rank(CorpusArgs),
    /// Fit on a whole corpus and save a model directory.
    Train(TrainArgs),
    /// Score QA pairs with a saved model.
    Predict(PredictArgs),
}

#[derive(Debug, Clone, Args)]
pub struct IngestArgs {
    /// QA pairs, one JSON object per line.
    #[arg(long)]
    pub input: PathBuf,
    /// Physician profiles, one JSON object per line.
    #[arg(long)]
    pub profiles: Option<PathBuf>,
    /// Corpus metadata (source, collection_time, launch_time).
    #[arg(long)]
    pub meta: Option<PathBuf>,
    /// Drop answers shorter than this many characters.
    #[arg(long, default_value_t = 15)]
    pub min_chars: usize,
}

#[derive(Debug, Clone, Args)]
pub struct SynthArgs {
    /// Generator spec (JSON with a mandatory `seed`); defaults otherwise.
    #[arg(long)]
    pub spec: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct CorpusArgs {
    /// Canonical corpus directory.
    #[arg(long)]
    pub corpus: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct EvaluateArgs {
    #[command(flatten)]
    pub corpus: CorpusArgs,
    /// word_binary, word_chi_tfidf, topic or dbn.
    #[arg(long)]
    pub featurizer: Option<String>,
    /// Comma-separated subset of `slf,sf`; `none` for the textual baseline.
    #[arg(long)]
    pub non_textual: Option<String>,
    /// logreg or nb.
    #[arg(long)]
    pub classifier: Option<String>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub trials: Option<usize>,
    /// Comma-separated topic counts; one report per value.
    #[arg(long, value_delimiter = ',')]
    pub lda_k: Vec<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct TrainArgs {
    #[command(flatten)]
    pub corpus: CorpusArgs,
    /// Model directory; defaults to `<out-dir>/model`.
    #[arg(long)]
    pub model_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct PredictArgs {
    #[arg(long)]
    pub model_dir: PathBuf,
    /// QA pairs to score, one JSON object per line; `label` is optional.
    #[arg(long)]
    pub input: PathBuf,
    /// Profiles for the answering physicians.
    #[arg(long)]
    pub profiles: Option<PathBuf>,
}

/// Run a parsed command; returns the text printed on success.
pub fn run(cli: &Cli) -> Result<String, CliError> {
    let g = &cli.global;
    match &cli.command {
        Command::Ingest(a) => commands::ingest(g, a),
        Command::Synth(a) => commands::synth(g, a),
        Command::Evaluate(a) => commands::evaluate(g, a),
        Command::Ablate(a) => commands::ablate(g, a),
        Command::Rank(a) => commands::rank(g, a),
        Command::Train(a) => commands::train(g, a),
        Command::Predict(a) => commands::predict(g, a),
    }
}
