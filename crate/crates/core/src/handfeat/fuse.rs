use std::ops::Range;

use ndarray::{Array2, Axis};
use serde::{Deserialize, Serialize};

use super::{FeatureError, SF_COUNT, SLF_COUNT};

/// Per-column z-score fitted on a training matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Normalizer {
    pub mean: Vec<f64>,
    /// Population standard deviation.
    pub std: Vec<f64>,
}

impl Normalizer {
    pub fn fit(train: &Array2<f64>) -> Result<Self, FeatureError> {
        if train.nrows() == 0 {
            return Err(FeatureError::EmptyMatrix);
        }
        let mean = train.mean_axis(Axis(0)).expect("non-empty");
        let std = train.std_axis(Axis(0), 0.0);
        Ok(Normalizer {
            mean: mean.to_vec(),
            std: std.to_vec(),
        })
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    pub fn apply(&self, m: &Array2<f64>) -> Result<Array2<f64>, FeatureError> {
        if m.ncols() != self.dim() {
            return Err(FeatureError::Dimension {
                block: "normalized",
                expected: self.dim(),
                found: m.ncols(),
            });
        }
        let mut out = m.clone();
        for (j, mut col) in out.axis_iter_mut(Axis(1)).enumerate() {
            let (mu, sd) = (self.mean[j], self.std[j]);
            col.mapv_inplace(|x| if sd > 0.0 { (x - mu) / sd } else { 0.0 });
        }
        Ok(out)
    }

    pub fn apply_row(&self, row: &[f64]) -> Vec<f64> {
        row.iter()
            .zip(self.mean.iter().zip(&self.std))
            .map(|(&x, (&mu, &sd))| if sd > 0.0 { (x - mu) / sd } else { 0.0 })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Block {
    Textual,
    Slf,
    Sf,
}

/// Which blocks enter the unified vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BlockMask {
    pub textual: bool,
    pub slf: bool,
    pub sf: bool,
}

impl BlockMask {
    pub const BASELINE: BlockMask = BlockMask { textual: true, slf: false, sf: false };
    pub const WITH_SLF: BlockMask = BlockMask { textual: true, slf: true, sf: false };
    pub const WITH_SF: BlockMask = BlockMask { textual: true, slf: false, sf: true };
    pub const WITH_BOTH: BlockMask = BlockMask { textual: true, slf: true, sf: true };
    pub const NON_TEXTUAL: BlockMask = BlockMask { textual: false, slf: true, sf: true };
    /// Ablation order used in reports.
    pub const ABLATIONS: [BlockMask; 4] = [Self::BASELINE, Self::WITH_SLF, Self::WITH_SF, Self::WITH_BOTH];

    pub fn name(&self) -> String {
        let mut parts = Vec::new();
        if self.textual {
            parts.push("baseline");
        }
        if self.slf {
            parts.push("slf");
        }
        if self.sf {
            parts.push("sf");
        }
        match (self.textual, parts.len()) {
            (_, 0) => "none".into(),
            (true, 1) => "baseline".into(),
            (true, _) => format!("+{}", parts[1..].join("+")),
            (false, _) => parts.join("+"),
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        let mut m = BlockMask { textual: false, slf: false, sf: false };
        let s = s.trim();
        if s == "baseline" {
            return Some(Self::BASELINE);
        }
        if let Some(rest) = s.strip_prefix('+') {
            m.textual = true;
            for part in rest.split('+') {
                match part {
                    "slf" => m.slf = true,
                    "sf" => m.sf = true,
                    _ => return None,
                }
            }
            return Some(m);
        }
        for part in s.split('+') {
            match part {
                "textual" | "baseline" => m.textual = true,
                "slf" => m.slf = true,
                "sf" => m.sf = true,
                _ => return None,
            }
        }
        Some(m)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnifiedVector {
    pub values: Vec<f64>,
    pub block_map: Vec<(Block, Range<usize>)>,
    pub provenance: Vec<String>,
}

impl UnifiedVector {
    pub fn span(&self, block: Block) -> Option<Range<usize>> {
        self.block_map.iter().find(|(b, _)| *b == block).map(|(_, r)| r.clone())
    }
}

/// Concatenate the selected blocks as `textual ‖ slf ‖ sf`.
pub fn unify(
    textual: &[f64],
    slf: &[f64],
    sf: &[f64],
    mask: BlockMask,
    provenance: &[&str],
) -> Result<UnifiedVector, FeatureError> {
    if !(mask.textual || mask.slf || mask.sf) {
        return Err(FeatureError::EmptyMask);
    }
    if mask.slf && slf.len() != SLF_COUNT {
        return Err(FeatureError::Dimension { block: "slf", expected: SLF_COUNT, found: slf.len() });
    }
    if mask.sf && sf.len() != SF_COUNT {
        return Err(FeatureError::Dimension { block: "sf", expected: SF_COUNT, found: sf.len() });
    }
    let mut values = Vec::with_capacity(textual.len() + SLF_COUNT + SF_COUNT);
    let mut block_map = Vec::new();
    for (on, block, part) in [(mask.textual, Block::Textual, textual), (mask.slf, Block::Slf, slf), (mask.sf, Block::Sf, sf)] {
        if on {
            let start = values.len();
            values.extend_from_slice(part);
            block_map.push((block, start..values.len()));
        }
    }
    Ok(UnifiedVector {
        values,
        block_map,
        provenance: provenance.iter().map(|s| s.to_string()).collect(),
    })
}
