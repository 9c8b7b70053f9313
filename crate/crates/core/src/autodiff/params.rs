use std::collections::HashMap;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ParamId(usize);

impl ParamId {
    pub fn index(self) -> usize {
        self.0
    }
}

/// A named, row-major parameter tensor with its gradient accumulator.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor {
    pub name: String,
    pub shape: Vec<usize>,
    pub value: Vec<f64>,
    pub grad: Vec<f64>,
}

/// Owns every trainable tensor of a model.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ParamStore {
    tensors: Vec<Tensor>,
    by_name: HashMap<String, ParamId>,
}

impl ParamStore {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, name: &str, shape: &[usize], value: Vec<f64>) -> Result<ParamId> {
        let numel: usize = shape.iter().product();
        if numel != value.len() {
            return Err(Error::Dimension {
                expected: numel,
                got: value.len(),
            });
        }
        if self.by_name.contains_key(name) {
            return Err(Error::Argument(format!(
                "duplicate parameter name `{name}`"
            )));
        }
        let id = ParamId(self.tensors.len());
        self.tensors.push(Tensor {
            name: name.to_string(),
            shape: shape.to_vec(),
            grad: vec![0.0; value.len()],
            value,
        });
        self.by_name.insert(name.to_string(), id);
        Ok(id)
    }

    pub fn id(&self, name: &str) -> Option<ParamId> {
        self.by_name.get(name).copied()
    }

    pub fn len(&self) -> usize {
        self.tensors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tensors.is_empty()
    }

    /// Total number of scalar entries.
    pub fn numel(&self) -> usize {
        self.tensors.iter().map(|t| t.value.len()).sum()
    }

    pub fn ids(&self) -> impl Iterator<Item = ParamId> {
        (0..self.tensors.len()).map(ParamId)
    }

    pub fn tensor(&self, id: ParamId) -> &Tensor {
        &self.tensors[id.0]
    }

    pub fn tensors(&self) -> &[Tensor] {
        &self.tensors
    }

    pub fn value(&self, id: ParamId) -> &[f64] {
        &self.tensors[id.0].value
    }

    pub fn value_mut(&mut self, id: ParamId) -> &mut [f64] {
        &mut self.tensors[id.0].value
    }

    pub fn grad(&self, id: ParamId) -> &[f64] {
        &self.tensors[id.0].grad
    }

    pub fn grad_mut(&mut self, id: ParamId) -> &mut [f64] {
        &mut self.tensors[id.0].grad
    }

    pub(crate) fn parts_mut(&mut self, id: ParamId) -> (&mut [f64], &mut [f64]) {
        let t = &mut self.tensors[id.0];
        (&mut t.value, &mut t.grad)
    }

    /// Trailing dimension (1 for scalars and vectors are their own row).
    pub fn cols(&self, id: ParamId) -> usize {
        let shape = &self.tensors[id.0].shape;
        match shape.len() {
            0 => 1,
            1 => shape[0],
            _ => *shape.last().unwrap(),
        }
    }

    pub fn row(&self, id: ParamId, row: usize) -> &[f64] {
        let cols = self.cols(id);
        &self.tensors[id.0].value[row * cols..(row + 1) * cols]
    }

    pub fn zero_grad(&mut self) {
        for t in &mut self.tensors {
            t.grad.iter_mut().for_each(|g| *g = 0.0);
        }
    }

    /// Copies every value, for later [`restore`](Self::restore).
    pub fn snapshot(&self) -> Vec<Vec<f64>> {
        self.tensors.iter().map(|t| t.value.clone()).collect()
    }

    pub fn restore(&mut self, snapshot: &[Vec<f64>]) {
        assert_eq!(snapshot.len(), self.tensors.len());
        for (t, s) in self.tensors.iter_mut().zip(snapshot) {
            t.value.copy_from_slice(s);
        }
    }

    /// Overwrites values by name. Every tensor of `self` must be present with the same shape.
    pub fn load_values(&mut self, named: &[(String, Vec<usize>, Vec<f64>)]) -> Result<()> {
        let lookup: HashMap<&str, (&Vec<usize>, &Vec<f64>)> =
            named.iter().map(|(n, s, v)| (n.as_str(), (s, v))).collect();
        for t in &mut self.tensors {
            let (shape, value) = lookup
                .get(t.name.as_str())
                .ok_or_else(|| Error::Checkpoint(format!("missing tensor `{}`", t.name)))?;
            if **shape != t.shape {
                return Err(Error::Checkpoint(format!(
                    "tensor `{}` has shape {:?}, expected {:?}",
                    t.name, shape, t.shape
                )));
            }
            t.value.copy_from_slice(value);
        }
        Ok(())
    }
}
