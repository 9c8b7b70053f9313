//! Finite-difference check of the whole encode → decode → loss pipeline on the toy graph.

use super::link::link_loss;
use super::negatives::sample_negatives;
use super::TrainConfig;
use crate::autodiff::{finite_diff_check, GradCheckReport, ParamStore};
use crate::data::synthetic::toy_graph;
use crate::decoders::{DecoderKind, TupleDecoder};
use crate::encoder::{Encoder, HyperStarEncoder};
use crate::error::{Error, Result};
use crate::rng::seeded;

/// Largest relative error the gate accepts.
pub const GRAD_TOLERANCE: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GradGateConfig {
    pub dim: usize,
    /// Arity of the largest toy tuple (2 to 4).
    pub max_arity: usize,
    pub layers: usize,
    pub eps: f64,
    pub neg_ratio: usize,
    pub seed: u64,
}

impl Default for GradGateConfig {
    fn default() -> Self {
        GradGateConfig {
            dim: 4,
            max_arity: 4,
            layers: 2,
            eps: 1e-4,
            neg_ratio: 2,
            seed: 0,
        }
    }
}

/// Compares tape gradients of the link-prediction loss against central differences,
/// with every parameter of the encoder and of `decoder` perturbed.
pub fn check_pipeline_gradients(
    decoder: DecoderKind,
    cfg: &GradGateConfig,
) -> Result<GradCheckReport> {
    if !decoder.is_tuple_scorer() {
        return Err(Error::Config(format!("{decoder} does not score tuples")));
    }
    let graph = toy_graph(cfg.max_arity)?;
    let train = TrainConfig {
        dim: cfg.dim,
        layers: cfg.layers,
        decoder,
        seed: cfg.seed,
        ..TrainConfig::link_prediction()
    };
    train.validate()?;
    let encoder = HyperStarEncoder::for_link_prediction(
        train.encoder_config()?,
        graph.entity_count(),
        graph.relation_count(),
        graph.max_arity(),
    )?;
    let dec = TupleDecoder::new(
        decoder,
        graph.relation_count(),
        graph.max_arity(),
        cfg.dim,
        false,
    )?;

    let mut rng = seeded(cfg.seed);
    let mut store = ParamStore::new();
    encoder.init_params(&mut store, &mut rng)?;
    dec.init_params(&mut store, &mut rng)?;
    let batch = graph
        .tuples()
        .iter()
        .map(|t| {
            Ok((
                t.clone(),
                sample_negatives(t, cfg.neg_ratio, graph.entity_count(), &mut rng)?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut failure = None;
    let report = finite_diff_check(
        |tape, store| match link_loss(
            &encoder,
            &dec,
            tape,
            store,
            &graph,
            &batch,
            false,
            &mut seeded(0),
            false,
        ) {
            Ok(v) => v,
            Err(e) => {
                failure.get_or_insert(e);
                tape.scalar(f64::NAN)
            }
        },
        &mut store,
        cfg.eps,
    )?;
    match failure {
        Some(e) => Err(e),
        None => Ok(report),
    }
}
