use ndarray::{Array1, Array2, ArrayView1, ArrayView2};
use serde::{Deserialize, Serialize};

use super::rbm::{check_len, RbmLayer};
use super::train::{train_rbm_level, TrainHyper, TrainLog};
use super::BeliefError;
use crate::seed::derive_seed;

/// A greedily trained stack of RBMs.
#[derive(Debug, Clone, PartialEq)]
pub struct DbnModel {
    pub layers: Vec<RbmLayer>,
    /// Unit counts per level, input first; `layers.len() + 1` entries.
    pub layout: Vec<usize>,
    pub hyper: TrainHyper,
    /// Identifier of the vocabulary that produced the input vectors.
    pub input_vocabulary: Option<String>,
    pub logs: Vec<TrainLog>,
}

/// Seed for the RBM at `level`. Level 0 uses the configured seed itself, so
/// a one-layer stack reproduces [`train_rbm`](super::train_rbm) exactly.
pub fn level_seed(seed: u64, level: usize) -> u64 {
    if level == 0 {
        seed
    } else {
        derive_seed(seed, "dbn-level", level as u64, 0)
    }
}

fn check_layout(layout: &[usize]) -> Result<(), BeliefError> {
    if layout.len() < 2 {
        return Err(BeliefError::InvalidLayout(format!(
            "need at least two levels, got {layout:?}"
        )));
    }
    if layout.contains(&0) {
        return Err(BeliefError::InvalidLayout(format!("zero-width level in {layout:?}")));
    }
    Ok(())
}

/// Greedy layer-wise training. Level `ℓ + 1` is trained on the hidden
/// activation probabilities of level `ℓ` (never on samples); every level
/// runs the full `hyper.n_epochs`.
pub fn train_dbn(data: ArrayView2<f64>, layout: &[usize], hyper: &TrainHyper) -> Result<DbnModel, BeliefError> {
    check_layout(layout)?;
    check_len("input width", layout[0], data.ncols())?;
    hyper.validate()?;
    let mut layers = Vec::with_capacity(layout.len() - 1);
    let mut logs = Vec::with_capacity(layout.len() - 1);
    let mut current: Option<Array2<f64>> = None;
    for (level, &n_hidden) in layout[1..].iter().enumerate() {
        let input = current.as_ref().map(|a| a.view()).unwrap_or(data);
        let (layer, log) = train_rbm_level(input, n_hidden, hyper, level_seed(hyper.seed, level), level)?;
        if level + 2 < layout.len() {
            current = Some(layer.hidden_probabilities_batch(input)?);
        }
        layers.push(layer);
        logs.push(log);
    }
    Ok(DbnModel {
        layers,
        layout: layout.to_vec(),
        hyper: hyper.clone(),
        input_vocabulary: None,
        logs,
    })
}

/// Header fields shared by the binary container and its JSON sidecar.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DbnHeader {
    pub format_version: u32,
    pub layout: Vec<usize>,
    pub hyper: TrainHyper,
    pub input_vocabulary: Option<String>,
    #[serde(default)]
    pub logs: Vec<TrainLog>,
}

impl DbnModel {
    pub fn from_layers(layers: Vec<RbmLayer>, hyper: TrainHyper) -> Result<Self, BeliefError> {
        let first = layers
            .first()
            .ok_or_else(|| BeliefError::InvalidLayout("no layers".into()))?;
        let mut layout = vec![first.n_visible()];
        for (i, layer) in layers.iter().enumerate() {
            check_len(
                if i == 0 { "layer visible width" } else { "stacked layer visible width" },
                *layout.last().unwrap(),
                layer.n_visible(),
            )?;
            layout.push(layer.n_hidden());
        }
        Ok(DbnModel {
            layers,
            layout,
            hyper,
            input_vocabulary: None,
            logs: Vec::new(),
        })
    }

    pub fn input_dim(&self) -> usize {
        self.layout[0]
    }

    pub fn output_dim(&self) -> usize {
        *self.layout.last().expect("non-empty layout")
    }

    /// Deterministic forward pass of hidden probabilities through every level.
    pub fn encode(&self, a: ArrayView1<f64>) -> Result<Array1<f64>, BeliefError> {
        check_len("encoder input", self.input_dim(), a.len())?;
        let mut x = a.to_owned();
        for layer in &self.layers {
            x = layer.hidden_probabilities(x.view())?;
        }
        Ok(x)
    }

    /// Row-wise [`encode`](Self::encode).
    pub fn encode_batch(&self, a: ArrayView2<f64>) -> Result<Array2<f64>, BeliefError> {
        check_len("encoder input width", self.input_dim(), a.ncols())?;
        let mut x = a.to_owned();
        for layer in &self.layers {
            x = layer.hidden_probabilities_batch(x.view())?;
        }
        Ok(x)
    }

    pub fn header(&self) -> DbnHeader {
        DbnHeader {
            format_version: super::persist::DBN_FORMAT_VERSION,
            layout: self.layout.clone(),
            hyper: self.hyper.clone(),
            input_vocabulary: self.input_vocabulary.clone(),
            logs: self.logs.clone(),
        }
    }
}
