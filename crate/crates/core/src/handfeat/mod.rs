//! Hand-crafted surface-linguistic and social features, normalization and
//! fusion with a textual block.

mod fuse;
mod social;
mod surface;

pub use fuse::{unify, Block, BlockMask, Normalizer, UnifiedVector};
pub use social::{social_features, SocialFeatures, SF_COUNT, SF_NAMES};
pub use surface::{surface_features, Lexicons, SurfaceFeatures, SLF_COUNT, SLF_NAMES};

use std::io::Write;

use crate::corpus::Label;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FeatureError {
    #[error("{block} block has {found} values, expected {expected}")]
    Dimension {
        block: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("cannot fit a normalizer on an empty matrix")]
    EmptyMatrix,
    #[error("at least one block must be selected")]
    EmptyMask,
    #[error(transparent)]
    Record(#[from] crate::corpus::CorpusError),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

/// One exported row of hand-crafted features.
pub struct FeatureRow<'a> {
    pub id: &'a str,
    pub label: Label,
    pub slf: &'a SurfaceFeatures,
    pub sf: &'a SocialFeatures,
}

/// Write `id,label,slf1..slf14,sf1..sf26` CSV.
pub fn write_feature_csv<W: Write>(out: W, rows: &[FeatureRow<'_>]) -> Result<(), FeatureError> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["id".to_string(), "label".to_string()];
    header.extend(SLF_NAMES.iter().chain(SF_NAMES.iter()).map(|s| s.to_string()));
    w.write_record(&header)?;
    for row in rows {
        let mut rec = vec![row.id.to_string(), row.label.to_string()];
        rec.extend(row.slf.to_array().iter().chain(row.sf.values.iter()).map(|v| v.to_string()));
        w.write_record(&rec)?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}
