//! Full-graph node-classification training.

use super::checkpoint::Checkpoint;
use super::loss::{nll_tape, reduce};
use super::{MetricRecord, TrainConfig};
use crate::autodiff::{OptimizerState, ParamStore, Tape};
use crate::data::{ClassificationDataset, KnowledgeHypergraph};
use crate::decoders::SoftmaxClassifier;
use crate::encoder::{Encoder, HyperStarEncoder};
use crate::error::{Error, Result};
use crate::metrics::{accuracy, argmax};
use crate::rng::{seeded, Rng};

#[derive(Debug, Clone)]
pub struct ClassifyModel<E> {
    pub encoder: E,
    pub classifier: SoftmaxClassifier,
    pub store: ParamStore,
}

impl<E: Encoder> ClassifyModel<E> {
    pub fn new(encoder: E, classes: usize, rng: &mut Rng) -> Result<Self> {
        let classifier = SoftmaxClassifier {
            classes,
            dim: encoder.dim(),
        };
        let mut store = ParamStore::new();
        encoder.init_params(&mut store, rng)?;
        classifier.init_params(&mut store, rng)?;
        Ok(ClassifyModel {
            encoder,
            classifier,
            store,
        })
    }

    /// Evaluation-mode class probabilities of every node.
    pub fn probabilities(&self, graph: &KnowledgeHypergraph) -> Result<Vec<Vec<f64>>> {
        let mut tape = Tape::new();
        let vars = self
            .encoder
            .encode(&mut tape, &self.store, graph, false, &mut seeded(0))?;
        vars.into_iter()
            .map(|v| self.classifier.probabilities(&self.store, tape.value(v)))
            .collect()
    }

    pub fn predict(&self, graph: &KnowledgeHypergraph) -> Result<Vec<usize>> {
        Ok(self
            .probabilities(graph)?
            .iter()
            .map(|p| argmax(p))
            .collect())
    }

    pub fn checkpoint(
        &self,
        config: &TrainConfig,
        dataset: &str,
        score: Option<f64>,
        epoch: usize,
    ) -> Checkpoint {
        Checkpoint::from_store(config, dataset, score, epoch, &self.store)
    }
}

pub fn build_classify_model(
    ds: &ClassificationDataset,
    cfg: &TrainConfig,
    rng: &mut Rng,
) -> Result<ClassifyModel<HyperStarEncoder>> {
    cfg.validate()?;
    let encoder = HyperStarEncoder::for_classification(cfg.encoder_config()?, &ds.data)?;
    ClassifyModel::new(encoder, ds.data.num_classes, rng)
}

/// Accuracies of a classification model under a split.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Accuracies {
    pub valid: Option<f64>,
    pub test: Option<f64>,
    /// Labeled unseen nodes (inductive splits only).
    pub unseen: Option<f64>,
}

/// Predictions use the full hypergraph, so unseen nodes see their hyperedges here.
pub fn evaluate_classification<E: Encoder>(
    model: &ClassifyModel<E>,
    ds: &ClassificationDataset,
) -> Result<Accuracies> {
    let pred = model.predict(&ds.data.graph)?;
    let acc = |mask: &[usize]| -> Result<Option<f64>> {
        if mask.is_empty() {
            Ok(None)
        } else {
            accuracy(&pred, &ds.data.labels, mask).map(Some)
        }
    };
    Ok(Accuracies {
        valid: acc(&ds.split.valid)?,
        test: acc(&ds.split.test)?,
        unseen: acc(&ds.unseen_nodes())?,
    })
}

#[derive(Debug, Clone)]
pub struct ClassifyOutcome<E> {
    pub model: ClassifyModel<E>,
    pub config: TrainConfig,
    pub log: Vec<MetricRecord>,
    pub losses: Vec<f64>,
    pub best_epoch: usize,
    /// Scores of the selected checkpoint.
    pub accuracies: Accuracies,
}

impl<E: Encoder> ClassifyOutcome<E> {
    pub fn checkpoint(&self, dataset: &str) -> Checkpoint {
        self.model.checkpoint(
            &self.config,
            dataset,
            self.accuracies.valid,
            self.best_epoch,
        )
    }
}

pub fn train_classification(
    ds: &ClassificationDataset,
    cfg: &TrainConfig,
) -> Result<ClassifyOutcome<HyperStarEncoder>> {
    let mut rng = seeded(cfg.seed);
    let model = build_classify_model(ds, cfg, &mut rng)?;
    run(ds, cfg, model, rng)
}

pub fn train_classification_with<E: Encoder>(
    ds: &ClassificationDataset,
    cfg: &TrainConfig,
    encoder: E,
) -> Result<ClassifyOutcome<E>> {
    cfg.validate()?;
    let mut rng = seeded(cfg.seed);
    let model = ClassifyModel::new(encoder, ds.data.num_classes, &mut rng)?;
    run(ds, cfg, model, rng)
}

/// One full-graph step per epoch on the training view. The checkpoint with the best
/// validation accuracy is kept (earliest on ties); with no validation nodes, the last.
fn run<E: Encoder>(
    ds: &ClassificationDataset,
    cfg: &TrainConfig,
    mut model: ClassifyModel<E>,
    mut rng: Rng,
) -> Result<ClassifyOutcome<E>> {
    if ds.split.train.is_empty() {
        return Err(Error::Argument("no training nodes".into()));
    }
    let train_graph = ds.train_graph();
    let mut opt = OptimizerState::new(cfg.learning_rate, cfg.weight_decay)?;
    let mut log = Vec::new();
    let mut losses = Vec::with_capacity(cfg.epochs);

    let mut best: Option<(f64, usize, Vec<Vec<f64>>)> = None;
    let mut select =
        |model: &ClassifyModel<E>, epoch: usize, log: &mut Vec<MetricRecord>| -> Result<()> {
            if ds.split.valid.is_empty() {
                return Ok(());
            }
            let acc = evaluate_classification(model, ds)?
                .valid
                .expect("validation nodes exist");
            log.push(MetricRecord::new(epoch, "valid", "accuracy", acc, cfg.seed));
            if best.as_ref().is_none_or(|(b, _, _)| acc > *b) {
                best = Some((acc, epoch, model.store.snapshot()));
            }
            Ok(())
        };
    select(&model, 0, &mut log)?;

    for epoch in 1..=cfg.epochs {
        let mut tape = Tape::new();
        let x = model
            .encoder
            .encode(&mut tape, &model.store, &train_graph, true, &mut rng)?;
        let mut terms = Vec::with_capacity(ds.split.train.len());
        for &n in &ds.split.train {
            let gold = ds.data.labels[n].expect("split nodes are labeled");
            let logits = model
                .classifier
                .logits_tape(&mut tape, &model.store, x[n])?;
            terms.push(nll_tape(&mut tape, logits, gold));
        }
        let loss = reduce(&mut tape, &terms, cfg.sum_reduction);
        let value = tape.scalar_value(loss);
        if !value.is_finite() {
            return Err(Error::Geometry(format!(
                "loss became {value} at epoch {epoch}"
            )));
        }
        tape.backward(loss, &mut model.store)?;
        drop(tape);
        opt.step(&mut model.store);
        losses.push(value);
        log.push(MetricRecord::new(epoch, "train", "loss", value, cfg.seed));
        select(&model, epoch, &mut log)?;
    }

    let best_epoch = match best {
        Some((_, epoch, snap)) => {
            model.store.restore(&snap);
            epoch
        }
        None => cfg.epochs,
    };
    let accuracies = evaluate_classification(&model, ds)?;
    for (metric, v) in [
        ("accuracy", accuracies.test),
        ("unseen_accuracy", accuracies.unseen),
    ] {
        if let Some(v) = v {
            log.push(MetricRecord::new(best_epoch, "test", metric, v, cfg.seed));
        }
    }
    Ok(ClassifyOutcome {
        model,
        config: cfg.clone(),
        log,
        losses,
        best_epoch,
        accuracies,
    })
}
