//! Losses, negative sampling, the two training drivers and checkpoints.

pub mod checkpoint;
pub mod classify;
pub mod gradgate;
pub mod link;
pub mod loss;
pub mod negatives;

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

pub use checkpoint::{read_checkpoint, write_checkpoint, Checkpoint, CHECKPOINT_VERSION};
pub use classify::{
    build_classify_model, evaluate_classification, train_classification, train_classification_with,
    Accuracies, ClassifyModel, ClassifyOutcome,
};
pub use gradgate::{check_pipeline_gradients, GradGateConfig, GRAD_TOLERANCE};
pub use link::{
    build_link_model, evaluate_link, train_link_prediction, train_link_prediction_with,
    LinkEvaluation, LinkModel, LinkOutcome,
};
pub use loss::{lp_loss, nll_loss};
pub use negatives::sample_negatives;

use crate::decoders::DecoderKind;
use crate::encoder::{EncoderConfig, TaskMode};
use crate::error::{Error, Result};
use crate::lorentz::{Activation, Curvature};

/// Hyperparameters of one run. [`TrainConfig::classification`] and
/// [`TrainConfig::link_prediction`] hold the defaults of each task.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub task: TaskMode,
    pub decoder: DecoderKind,
    pub learning_rate: f64,
    pub weight_decay: f64,
    pub dropout: f64,
    pub dim: usize,
    pub layers: usize,
    /// Full-graph epochs (classification).
    pub epochs: usize,
    /// Mini-batch iterations (link prediction).
    pub iterations: usize,
    pub batch_size: usize,
    /// Negatives per entity position.
    pub neg_ratio: usize,
    pub seed: u64,
    /// Iterations between validation passes (link prediction).
    pub eval_every: usize,
    /// Sum instead of mean over the batch.
    pub sum_reduction: bool,
    /// Decoders score with the encoder's relation table instead of their own.
    pub share_relations: bool,
    pub activation: Activation,
    pub curvature: f64,
    pub split_ratios: [f64; 3],
    /// Inductive classification: fraction of nodes withheld as unseen.
    pub unseen_fraction: Option<f64>,
}

impl TrainConfig {
    pub fn classification() -> Self {
        TrainConfig {
            task: TaskMode::Classification,
            decoder: DecoderKind::Softmax,
            learning_rate: 0.01,
            weight_decay: 5e-5,
            dropout: 0.5,
            dim: 8,
            layers: 2,
            epochs: 200,
            iterations: 0,
            batch_size: 0,
            neg_ratio: 0,
            seed: 0,
            eval_every: 1,
            sum_reduction: false,
            share_relations: false,
            activation: Activation::Relu,
            curvature: -1.0,
            split_ratios: [0.2, 0.4, 0.4],
            unseen_fraction: None,
        }
    }

    pub fn link_prediction() -> Self {
        TrainConfig {
            task: TaskMode::LinkPrediction,
            decoder: DecoderKind::MDistMult,
            learning_rate: 0.05,
            weight_decay: 0.0,
            dropout: 0.2,
            dim: 200,
            layers: 1,
            epochs: 0,
            iterations: 2000,
            batch_size: 128,
            neg_ratio: 10,
            seed: 0,
            eval_every: 50,
            sum_reduction: false,
            share_relations: false,
            activation: Activation::Identity,
            curvature: -1.0,
            split_ratios: [0.8, 0.1, 0.1],
            unseen_fraction: None,
        }
    }

    pub fn for_task(task: TaskMode) -> Self {
        match task {
            TaskMode::Classification => Self::classification(),
            TaskMode::LinkPrediction => Self::link_prediction(),
        }
    }

    /// Inductive classification defaults: 40 % unseen nodes, 20 % train and 40 % test.
    pub fn inductive() -> Self {
        TrainConfig {
            unseen_fraction: Some(0.4),
            split_ratios: [0.2, 0.0, 0.4],
            ..Self::classification()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if !(self.learning_rate > 0.0) {
            return bad(format!(
                "learning rate must be positive, got {}",
                self.learning_rate
            ));
        }
        if !(self.weight_decay >= 0.0) {
            return bad(format!(
                "weight decay must be non-negative, got {}",
                self.weight_decay
            ));
        }
        if !(0.0..1.0).contains(&self.dropout) {
            return bad(format!("dropout must lie in [0, 1), got {}", self.dropout));
        }
        if self.dim == 0 || self.layers == 0 {
            return bad("dimension and layer count must be positive".into());
        }
        if !(self.curvature < 0.0) {
            return bad(format!(
                "curvature must be negative, got {}",
                self.curvature
            ));
        }
        match self.task {
            TaskMode::Classification => {
                if self.decoder != DecoderKind::Softmax {
                    return bad(format!(
                        "node classification uses the softmax decoder, not {}",
                        self.decoder
                    ));
                }
            }
            TaskMode::LinkPrediction => {
                if !self.decoder.is_tuple_scorer() {
                    return bad("link prediction needs m-distmult, m-transh or hsimple".into());
                }
                if self.neg_ratio == 0 {
                    return bad("negative ratio must be at least 1".into());
                }
                if self.batch_size == 0 {
                    return bad("batch size must be positive".into());
                }
                if self.eval_every == 0 {
                    return bad("validation interval must be positive".into());
                }
            }
        }
        if let Some(f) = self.unseen_fraction {
            if !(f > 0.0 && f < 1.0) {
                return bad(format!("unseen fraction must lie in (0, 1), got {f}"));
            }
        }
        Ok(())
    }

    pub fn curvature(&self) -> Result<Curvature> {
        Curvature::new(self.curvature)
    }

    pub fn encoder_config(&self) -> Result<EncoderConfig> {
        Ok(EncoderConfig {
            layers: self.layers,
            dim: self.dim,
            dropout: self.dropout,
            k: self.curvature()?,
            mode: self.task,
            activation: self.activation,
        })
    }
}

/// One line of the metric log.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricRecord {
    pub iter: usize,
    pub split: String,
    pub metric: String,
    pub value: f64,
    pub seed: u64,
}

impl MetricRecord {
    pub fn new(iter: usize, split: &str, metric: &str, value: f64, seed: u64) -> Self {
        MetricRecord {
            iter,
            split: split.to_string(),
            metric: metric.to_string(),
            value,
            seed,
        }
    }
}

/// Writes one JSON object per line.
pub fn write_metric_log(path: &Path, records: &[MetricRecord]) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = std::io::BufWriter::new(file);
    for r in records {
        let line = serde_json::to_string(r).expect("metric records serialize");
        writeln!(w, "{line}").map_err(|e| Error::io(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}
