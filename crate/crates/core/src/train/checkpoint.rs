//! Binary checkpoint container.
//!
//! Layout, little-endian throughout:
//!
//! ```text
//! "H2GN"                      magic
//! u32                         format version
//! u32 len, len bytes          JSON metadata (config, dataset, validation score, iteration)
//! u32                         tensor count
//! per tensor:
//!   u32 len, len bytes        name (UTF-8)
//!   u32 ndim, ndim × u64      shape
//!   numel × f64               row-major values
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::TrainConfig;
use crate::autodiff::ParamStore;
use crate::error::{Error, Result};

pub const MAGIC: &[u8; 4] = b"H2GN";
pub const CHECKPOINT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct Meta {
    config: TrainConfig,
    dataset: String,
    validation_score: Option<f64>,
    iteration: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Checkpoint {
    pub config: TrainConfig,
    pub dataset: String,
    /// Score that selected this checkpoint (validation MRR or accuracy).
    pub validation_score: Option<f64>,
    /// Iteration or epoch of the selected parameters.
    pub iteration: usize,
    pub tensors: Vec<(String, Vec<usize>, Vec<f64>)>,
}

impl Checkpoint {
    pub fn from_store(
        config: &TrainConfig,
        dataset: &str,
        validation_score: Option<f64>,
        iteration: usize,
        store: &ParamStore,
    ) -> Self {
        Checkpoint {
            config: config.clone(),
            dataset: dataset.to_string(),
            validation_score,
            iteration,
            tensors: store
                .tensors()
                .iter()
                .map(|t| (t.name.clone(), t.shape.clone(), t.value.clone()))
                .collect(),
        }
    }

    /// Copies the stored values into a store built for the same model.
    pub fn load_into(&self, store: &mut ParamStore) -> Result<()> {
        store.load_values(&self.tensors)
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        out.extend_from_slice(MAGIC);
        out.extend_from_slice(&CHECKPOINT_VERSION.to_le_bytes());
        let meta = serde_json::to_vec(&Meta {
            config: self.config.clone(),
            dataset: self.dataset.clone(),
            validation_score: self.validation_score,
            iteration: self.iteration,
        })
        .expect("metadata serializes");
        put_bytes(&mut out, &meta);
        out.extend_from_slice(&(self.tensors.len() as u32).to_le_bytes());
        for (name, shape, values) in &self.tensors {
            put_bytes(&mut out, name.as_bytes());
            out.extend_from_slice(&(shape.len() as u32).to_le_bytes());
            for &d in shape {
                out.extend_from_slice(&(d as u64).to_le_bytes());
            }
            for v in values {
                out.extend_from_slice(&v.to_le_bytes());
            }
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut r = Reader { bytes, pos: 0 };
        if r.take(4)? != MAGIC {
            return Err(Error::Checkpoint(
                "bad magic, not an H2GN checkpoint".into(),
            ));
        }
        let version = r.u32()?;
        if version != CHECKPOINT_VERSION {
            return Err(Error::CheckpointVersion {
                found: version,
                expected: CHECKPOINT_VERSION,
            });
        }
        let len = r.u32()? as usize;
        let meta: Meta = serde_json::from_slice(r.take(len)?)
            .map_err(|e| Error::Checkpoint(format!("unreadable metadata: {e}")))?;
        let count = r.u32()? as usize;
        let mut tensors = Vec::with_capacity(count);
        for _ in 0..count {
            let len = r.u32()? as usize;
            let name = String::from_utf8(r.take(len)?.to_vec())
                .map_err(|_| Error::Checkpoint("tensor name is not UTF-8".into()))?;
            let ndim = r.u32()? as usize;
            let shape = (0..ndim)
                .map(|_| r.u64().map(|d| d as usize))
                .collect::<Result<Vec<_>>>()?;
            let numel: usize = shape.iter().product();
            let values = (0..numel).map(|_| r.f64()).collect::<Result<Vec<_>>>()?;
            tensors.push((name, shape, values));
        }
        if r.pos != bytes.len() {
            return Err(Error::Checkpoint(format!(
                "{} trailing bytes",
                bytes.len() - r.pos
            )));
        }
        Ok(Checkpoint {
            config: meta.config,
            dataset: meta.dataset,
            validation_score: meta.validation_score,
            iteration: meta.iteration,
            tensors,
        })
    }
}

fn put_bytes(out: &mut Vec<u8>, b: &[u8]) {
    out.extend_from_slice(&(b.len() as u32).to_le_bytes());
    out.extend_from_slice(b);
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self
            .pos
            .checked_add(n)
            .filter(|&e| e <= self.bytes.len())
            .ok_or_else(|| Error::Checkpoint("truncated file".into()))?;
        let s = &self.bytes[self.pos..end];
        self.pos = end;
        Ok(s)
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
}

pub fn write_checkpoint(path: &Path, ckpt: &Checkpoint) -> Result<()> {
    std::fs::write(path, ckpt.to_bytes()).map_err(|e| Error::io(path, e))
}

pub fn read_checkpoint(path: &Path) -> Result<Checkpoint> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    Checkpoint::from_bytes(&bytes)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Checkpoint {
        let mut store = ParamStore::new();
        store
            .insert(
                "entity",
                &[2, 3],
                vec![0.5, -1.0, 2.0, 1e-300, f64::MAX, -0.0],
            )
            .unwrap();
        store
            .insert("layer0.w_h.b_prime", &[1], vec![0.25])
            .unwrap();
        Checkpoint::from_store(
            &TrainConfig::link_prediction(),
            "toy",
            Some(0.5),
            150,
            &store,
        )
    }

    #[test]
    fn roundtrip_is_bit_exact() {
        let c = sample();
        let back = Checkpoint::from_bytes(&c.to_bytes()).unwrap();
        assert_eq!(back, c);
        assert_eq!(back.tensors[0].2[5].to_bits(), (-0.0f64).to_bits());
    }

    #[test]
    fn header_layout() {
        let b = sample().to_bytes();
        assert_eq!(&b[..4], b"H2GN");
        assert_eq!(
            u32::from_le_bytes(b[4..8].try_into().unwrap()),
            CHECKPOINT_VERSION
        );
    }

    #[test]
    fn corrupt_inputs() {
        let mut b = sample().to_bytes();
        b[0] = b'X';
        assert!(matches!(
            Checkpoint::from_bytes(&b),
            Err(Error::Checkpoint(_))
        ));
        let mut b = sample().to_bytes();
        b[4..8].copy_from_slice(&7u32.to_le_bytes());
        assert!(matches!(
            Checkpoint::from_bytes(&b),
            Err(Error::CheckpointVersion {
                found: 7,
                expected: 1
            })
        ));
        let b = sample().to_bytes();
        assert!(Checkpoint::from_bytes(&b[..b.len() - 3]).is_err());
    }
}
