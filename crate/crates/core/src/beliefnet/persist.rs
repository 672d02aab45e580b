//! Versioned binary container for trained stacks.
//!
//! Layout (all integers little-endian):
//!
//! ```text
//! magic            8 bytes  "HQADBN\r\n"
//! format version   u32
//! header length    u32
//! header           UTF-8 JSON (layout, hyper, input vocabulary, logs)
//! per level        W (n_visible × n_hidden, row-major), visible bias, hidden bias as f64
//! ```
//!
//! `save` also writes `<file>.json`, a pretty-printed copy of the header.

use std::path::{Path, PathBuf};

use ndarray::{Array1, Array2};

use super::dbn::{DbnHeader, DbnModel};
use super::rbm::RbmLayer;
use super::BeliefError;
use crate::fsio::write_atomic;

pub const DBN_MAGIC: [u8; 8] = *b"HQADBN\r\n";
pub const DBN_FORMAT_VERSION: u32 = 1;

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
    path: &'a Path,
}

impl<'a> Reader<'a> {
    fn fail<T>(&self, message: impl Into<String>) -> Result<T, BeliefError> {
        Err(BeliefError::Format {
            path: self.path.to_path_buf(),
            message: message.into(),
        })
    }

    fn take(&mut self, n: usize) -> Result<&'a [u8], BeliefError> {
        if self.bytes.len() - self.pos < n {
            return self.fail(format!("truncated at byte {} (wanted {n} more)", self.pos));
        }
        let out = &self.bytes[self.pos..self.pos + n];
        self.pos += n;
        Ok(out)
    }

    fn u32(&mut self) -> Result<u32, BeliefError> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn f64s(&mut self, n: usize) -> Result<Vec<f64>, BeliefError> {
        let raw = self.take(n.checked_mul(8).ok_or(BeliefError::Format {
            path: self.path.to_path_buf(),
            message: "matrix size overflow".into(),
        })?)?;
        Ok(raw.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().unwrap())).collect())
    }
}

fn push_f64s<'a>(out: &mut Vec<u8>, values: impl Iterator<Item = &'a f64>) {
    for v in values {
        out.extend_from_slice(&v.to_le_bytes());
    }
}

impl DbnModel {
    pub fn to_bytes(&self) -> Vec<u8> {
        let header = serde_json::to_vec(&self.header()).expect("header serializes");
        let mut out = Vec::new();
        out.extend_from_slice(&DBN_MAGIC);
        out.extend_from_slice(&DBN_FORMAT_VERSION.to_le_bytes());
        out.extend_from_slice(&(header.len() as u32).to_le_bytes());
        out.extend_from_slice(&header);
        for layer in &self.layers {
            // iter() walks in logical (row-major) order regardless of memory layout
            push_f64s(&mut out, layer.weights.iter());
            push_f64s(&mut out, layer.visible_bias.iter());
            push_f64s(&mut out, layer.hidden_bias.iter());
        }
        out
    }

    /// Parse a container; `path` is only used in error messages.
    pub fn from_bytes(bytes: &[u8], path: &Path) -> Result<Self, BeliefError> {
        let mut r = Reader { bytes, pos: 0, path };
        if r.take(8)? != DBN_MAGIC {
            return r.fail("bad magic: not a DBN model file");
        }
        let version = r.u32()?;
        if version != DBN_FORMAT_VERSION {
            return r.fail(format!("unsupported format version {version}"));
        }
        let header_len = r.u32()? as usize;
        let header: DbnHeader = match serde_json::from_slice(r.take(header_len)?) {
            Ok(h) => h,
            Err(e) => return r.fail(format!("bad header: {e}")),
        };
        if header.layout.len() < 2 {
            return r.fail(format!("layout {:?} has fewer than two levels", header.layout));
        }
        let mut layers = Vec::with_capacity(header.layout.len() - 1);
        for pair in header.layout.windows(2) {
            let (nv, nh) = (pair[0], pair[1]);
            let w = Array2::from_shape_vec((nv, nh), r.f64s(nv * nh)?).expect("shape matches length");
            let bv = Array1::from(r.f64s(nv)?);
            let bh = Array1::from(r.f64s(nh)?);
            layers.push(RbmLayer::from_parts(w, bv, bh).or_else(|e| r.fail(e.to_string()))?);
        }
        if r.pos != bytes.len() {
            return r.fail(format!("{} trailing bytes", bytes.len() - r.pos));
        }
        let mut model = DbnModel::from_layers(layers, header.hyper).or_else(|e| r.fail(e.to_string()))?;
        model.input_vocabulary = header.input_vocabulary;
        model.logs = header.logs;
        Ok(model)
    }

    pub fn sidecar_path(path: &Path) -> PathBuf {
        let mut name = path.as_os_str().to_owned();
        name.push(".json");
        PathBuf::from(name)
    }

    pub fn save(&self, path: &Path) -> Result<(), BeliefError> {
        let io = |source| BeliefError::Io {
            path: path.to_path_buf(),
            source,
        };
        write_atomic(path, &self.to_bytes()).map_err(io)?;
        let sidecar = serde_json::to_vec_pretty(&self.header()).expect("header serializes");
        write_atomic(&Self::sidecar_path(path), &sidecar).map_err(io)
    }

    pub fn load(path: &Path) -> Result<Self, BeliefError> {
        let bytes = std::fs::read(path).map_err(|source| BeliefError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_bytes(&bytes, path)
    }
}
