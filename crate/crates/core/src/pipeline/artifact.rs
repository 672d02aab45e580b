//! A fitted pipeline persisted as a directory of files.

use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use super::{FittedPipeline, PipelineConfig, PipelineError, Resources, TextualModel};
use crate::beliefnet::DbnModel;
use crate::corpus::CorpusMeta;
use crate::fsio::write_atomic;
use crate::handfeat::Normalizer;
use crate::learner::Classifier;
use crate::textfeat::Vocabulary;
use crate::topicmodel::TopicModel;

pub const CONFIG_FILE: &str = "config.json";
const RESOURCES_FILE: &str = "resources.json";
const TEXTUAL_FILE: &str = "textual.json";
const DBN_FILE: &str = "dbn.bin";
const NORMALIZER_FILE: &str = "normalizer.json";
const CLASSIFIER_FILE: &str = "classifier.json";
const META_FILE: &str = "meta.json";

/// Files a saved model directory may contain.
pub const ARTIFACT_FILES: [&str; 7] = [CONFIG_FILE, RESOURCES_FILE, TEXTUAL_FILE, DBN_FILE, NORMALIZER_FILE, CLASSIFIER_FILE, META_FILE];

#[derive(Serialize, Deserialize)]
struct ConfigRecord {
    fingerprint: String,
    config: PipelineConfig,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "featurizer", rename_all = "snake_case")]
enum TextualRecord {
    WordBinary { vocabulary: Vocabulary, width: usize },
    WordChiTfidf { vocabulary: Vocabulary, width: usize },
    Topic { model: TopicModel, infer_seed: u64 },
    /// Layers live in the binary container.
    Dbn { vocabulary: Vocabulary },
}

fn artifact_err(path: &Path, message: impl ToString) -> PipelineError {
    PipelineError::Artifact {
        path: path.to_path_buf(),
        message: message.to_string(),
    }
}

fn write_json<T: Serialize>(dir: &Path, name: &str, value: &T) -> Result<(), PipelineError> {
    let path = dir.join(name);
    let mut bytes = serde_json::to_vec_pretty(value).map_err(|e| artifact_err(&path, e))?;
    bytes.push(b'\n');
    write_atomic(&path, &bytes).map_err(|e| artifact_err(&path, e))
}

fn read_json<T: DeserializeOwned>(dir: &Path, name: &str) -> Result<T, PipelineError> {
    let path = dir.join(name);
    let bytes = fs::read(&path).map_err(|e| artifact_err(&path, e))?;
    serde_json::from_slice(&bytes).map_err(|e| artifact_err(&path, e))
}

impl FittedPipeline {
    pub fn save(&self, dir: &Path) -> Result<(), PipelineError> {
        fs::create_dir_all(dir).map_err(|e| artifact_err(dir, e))?;
        write_json(
            dir,
            CONFIG_FILE,
            &ConfigRecord {
                fingerprint: self.config.fingerprint(),
                config: self.config.clone(),
            },
        )?;
        write_json(dir, RESOURCES_FILE, &self.resources)?;
        let record = match &self.textual {
            TextualModel::WordBinary { vocabulary, width } => TextualRecord::WordBinary { vocabulary: vocabulary.clone(), width: *width },
            TextualModel::WordChiTfidf { vocabulary, width } => TextualRecord::WordChiTfidf { vocabulary: vocabulary.clone(), width: *width },
            TextualModel::Topic { model, infer_seed } => TextualRecord::Topic { model: model.clone(), infer_seed: *infer_seed },
            TextualModel::Dbn { vocabulary, dbn } => {
                dbn.save(&dir.join(DBN_FILE))?;
                TextualRecord::Dbn { vocabulary: vocabulary.clone() }
            }
        };
        write_json(dir, TEXTUAL_FILE, &record)?;
        write_json(dir, NORMALIZER_FILE, &self.normalizer)?;
        write_json(dir, CLASSIFIER_FILE, &self.classifier)?;
        write_json(dir, META_FILE, &self.meta)
    }

    pub fn load(dir: &Path) -> Result<Self, PipelineError> {
        let record: ConfigRecord = read_json(dir, CONFIG_FILE)?;
        if record.config.fingerprint() != record.fingerprint {
            return Err(artifact_err(&dir.join(CONFIG_FILE), "fingerprint does not match the stored configuration"));
        }
        let textual = match read_json::<TextualRecord>(dir, TEXTUAL_FILE)? {
            TextualRecord::WordBinary { vocabulary, width } => TextualModel::WordBinary { vocabulary, width },
            TextualRecord::WordChiTfidf { vocabulary, width } => TextualModel::WordChiTfidf { vocabulary, width },
            TextualRecord::Topic { model, infer_seed } => {
                model.validate()?;
                TextualModel::Topic { model, infer_seed }
            }
            TextualRecord::Dbn { vocabulary } => TextualModel::Dbn {
                vocabulary,
                dbn: DbnModel::load(&dir.join(DBN_FILE))?,
            },
        };
        let normalizer: Normalizer = read_json(dir, NORMALIZER_FILE)?;
        let classifier: Classifier = read_json(dir, CLASSIFIER_FILE)?;
        let meta: CorpusMeta = read_json(dir, META_FILE)?;
        let resources: Resources = read_json(dir, RESOURCES_FILE)?;
        Ok(FittedPipeline {
            config: record.config,
            resources,
            textual,
            normalizer,
            classifier,
            meta,
        })
    }
}
