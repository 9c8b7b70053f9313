//! Adam with decoupled weight decay.

use crate::autodiff::params::ParamStore;
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct OptimizerState {
    pub learning_rate: f64,
    pub weight_decay: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
    step: u64,
    first: Vec<Vec<f64>>,
    second: Vec<Vec<f64>>,
}

impl OptimizerState {
    pub fn new(learning_rate: f64, weight_decay: f64) -> Result<Self> {
        if !(learning_rate > 0.0) || !learning_rate.is_finite() {
            return Err(Error::Argument(format!(
                "learning rate must be positive, got {learning_rate}"
            )));
        }
        if !(weight_decay >= 0.0) || !weight_decay.is_finite() {
            return Err(Error::Argument(format!(
                "weight decay must be non-negative, got {weight_decay}"
            )));
        }
        Ok(OptimizerState {
            learning_rate,
            weight_decay,
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
            step: 0,
            first: Vec::new(),
            second: Vec::new(),
        })
    }

    pub fn steps(&self) -> u64 {
        self.step
    }

    /// One update from the accumulated gradients, which are zeroed afterwards.
    pub fn step(&mut self, store: &mut ParamStore) {
        if self.first.len() != store.len() {
            self.first = store
                .tensors()
                .iter()
                .map(|t| vec![0.0; t.value.len()])
                .collect();
            self.second = self.first.clone();
        }
        self.step += 1;
        let t = self.step as i32;
        let c1 = 1.0 - self.beta1.powi(t);
        let c2 = 1.0 - self.beta2.powi(t);
        let ids: Vec<_> = store.ids().collect();
        for id in ids {
            let (value, grad) = store.parts_mut(id);
            let m = &mut self.first[id.index()];
            let v = &mut self.second[id.index()];
            for i in 0..value.len() {
                let g = grad[i];
                m[i] = self.beta1 * m[i] + (1.0 - self.beta1) * g;
                v[i] = self.beta2 * v[i] + (1.0 - self.beta2) * g * g;
                let update = (m[i] / c1) / ((v[i] / c2).sqrt() + self.eps);
                value[i] -= self.learning_rate * (update + self.weight_decay * value[i]);
                grad[i] = 0.0;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_gradient_is_a_fixed_point() {
        let mut store = ParamStore::new();
        let id = store.insert("w", &[3], vec![1.0, -2.0, 0.5]).unwrap();
        let mut opt = OptimizerState::new(0.01, 0.0).unwrap();
        for _ in 0..10 {
            opt.step(&mut store);
        }
        assert_eq!(store.value(id), &[1.0, -2.0, 0.5]);
        assert_eq!(opt.steps(), 10);
    }

    #[test]
    fn weight_decay_shrinks_magnitude() {
        let mut store = ParamStore::new();
        let id = store.insert("w", &[2], vec![1.0, -2.0]).unwrap();
        let mut opt = OptimizerState::new(0.01, 5e-5).unwrap();
        opt.step(&mut store);
        let w = store.value(id);
        assert!(w[0].abs() < 1.0 && w[1].abs() < 2.0);
    }

    #[test]
    fn converges_on_convex_bowl() {
        let mut store = ParamStore::new();
        let id = store.insert("theta", &[1], vec![0.0]).unwrap();
        let mut opt = OptimizerState::new(0.05, 0.0).unwrap();
        for _ in 0..500 {
            let theta = store.value(id)[0];
            store.grad_mut(id)[0] = 2.0 * (theta - 3.0);
            opt.step(&mut store);
            assert_eq!(store.grad(id)[0], 0.0);
        }
        assert!(
            (store.value(id)[0] - 3.0).abs() < 1e-2,
            "{}",
            store.value(id)[0]
        );
    }

    #[test]
    fn rejects_bad_hyperparameters() {
        assert!(OptimizerState::new(0.0, 0.0).is_err());
        assert!(OptimizerState::new(0.1, -1.0).is_err());
    }
}
