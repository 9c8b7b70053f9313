//! Link-prediction training and filtered ranking evaluation.

use std::collections::HashSet;

use rand::seq::index;

use super::checkpoint::Checkpoint;
use super::loss::{lp_loss_tape, reduce};
use super::negatives::sample_negatives;
use super::{MetricRecord, TrainConfig};
use crate::autodiff::{OptimizerState, ParamStore, Tape, Var};
use crate::data::{KnowledgeHypergraph, KnowledgeTuple, LinkDataset};
use crate::decoders::TupleDecoder;
use crate::encoder::{Encoder, HyperStarEncoder};
use crate::error::{Error, Result};
use crate::metrics::{aggregate, rank_query, QueryRank, RankingReport};
use crate::rng::{seeded, Rng};

/// Encoder, tuple decoder and their parameters.
#[derive(Debug, Clone)]
pub struct LinkModel<E> {
    pub encoder: E,
    pub decoder: TupleDecoder,
    pub store: ParamStore,
}

impl<E: Encoder> LinkModel<E> {
    /// Initializes encoder then decoder parameters from `rng`.
    pub fn new(encoder: E, decoder: TupleDecoder, rng: &mut Rng) -> Result<Self> {
        let mut store = ParamStore::new();
        encoder.init_params(&mut store, rng)?;
        decoder.init_params(&mut store, rng)?;
        Ok(LinkModel {
            encoder,
            decoder,
            store,
        })
    }

    /// Evaluation-mode entity vectors over the message-passing `graph`.
    pub fn entity_vectors(&self, graph: &KnowledgeHypergraph) -> Result<Vec<Vec<f64>>> {
        let mut tape = Tape::new();
        let vars = self
            .encoder
            .encode(&mut tape, &self.store, graph, false, &mut seeded(0))?;
        Ok(vars.into_iter().map(|v| tape.value(v).to_vec()).collect())
    }

    pub fn score(&self, vectors: &[Vec<f64>], tuple: &KnowledgeTuple) -> Result<f64> {
        let refs: Vec<&[f64]> = tuple
            .entities
            .iter()
            .map(|&e| vectors[e].as_slice())
            .collect();
        self.decoder.score(&self.store, tuple.relation, &refs)
    }

    pub fn checkpoint(
        &self,
        config: &TrainConfig,
        dataset: &str,
        score: Option<f64>,
        iteration: usize,
    ) -> Checkpoint {
        Checkpoint::from_store(config, dataset, score, iteration, &self.store)
    }
}

/// Builds the hyper-star model described by `cfg` for the vocabulary of `ds`.
pub fn build_link_model(
    ds: &LinkDataset,
    cfg: &TrainConfig,
    rng: &mut Rng,
) -> Result<LinkModel<HyperStarEncoder>> {
    cfg.validate()?;
    let g = &ds.graph;
    let encoder = HyperStarEncoder::for_link_prediction(
        cfg.encoder_config()?,
        g.entity_count(),
        g.relation_count(),
        g.max_arity(),
    )?;
    let decoder = TupleDecoder::new(
        cfg.decoder,
        g.relation_count(),
        g.max_arity(),
        cfg.dim,
        cfg.share_relations,
    )?;
    LinkModel::new(encoder, decoder, rng)
}

/// Loss of positives against their negatives: one cross-entropy term per positive,
/// reduced by mean (or sum).
#[allow(clippy::too_many_arguments)]
pub fn link_loss<E: Encoder>(
    encoder: &E,
    decoder: &TupleDecoder,
    tape: &mut Tape,
    store: &ParamStore,
    graph: &KnowledgeHypergraph,
    batch: &[(KnowledgeTuple, Vec<KnowledgeTuple>)],
    train: bool,
    rng: &mut Rng,
    sum: bool,
) -> Result<Var> {
    if batch.is_empty() {
        return Err(Error::Argument("empty training batch".into()));
    }
    let ents = encoder.encode(tape, store, graph, train, rng)?;
    let score = |tape: &mut Tape, t: &KnowledgeTuple| {
        let vars: Vec<Var> = t.entities.iter().map(|&e| ents[e]).collect();
        decoder.score_tape(tape, store, t.relation, &vars)
    };
    let mut terms = Vec::with_capacity(batch.len());
    for (pos, negs) in batch {
        let p = score(tape, pos)?;
        let n = negs
            .iter()
            .map(|t| score(tape, t))
            .collect::<Result<Vec<_>>>()?;
        terms.push(lp_loss_tape(tape, p, &n));
    }
    Ok(reduce(tape, &terms, sum))
}

/// Filtered and raw ranks of every position of every tuple.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkEvaluation {
    pub filtered: RankingReport,
    pub raw: RankingReport,
    pub queries: Vec<QueryRank>,
}

/// Ranks each entity position of `tuples` against all entities, with entity vectors
/// computed over `graph`. `known` holds the facts removed in the filtered setting.
pub fn evaluate_link<E: Encoder>(
    model: &LinkModel<E>,
    graph: &KnowledgeHypergraph,
    tuples: &[KnowledgeTuple],
    known: &HashSet<KnowledgeTuple>,
) -> Result<LinkEvaluation> {
    let vectors = model.entity_vectors(graph)?;
    for t in tuples {
        // surfaces arity errors before the ranking loop
        model.score(&vectors, t)?;
    }
    let mut queries = Vec::new();
    for t in tuples {
        for position in 1..=t.arity() {
            let q = rank_query(
                t,
                position,
                graph.entity_count(),
                |c| model.score(&vectors, c).expect("arity checked above"),
                known,
            )?;
            queries.push(q);
        }
    }
    let filtered: Vec<usize> = queries.iter().map(|q| q.filtered).collect();
    let raw: Vec<usize> = queries.iter().map(|q| q.raw).collect();
    Ok(LinkEvaluation {
        filtered: aggregate(&filtered)?,
        raw: aggregate(&raw)?,
        queries,
    })
}

#[derive(Debug, Clone)]
pub struct LinkOutcome<E> {
    /// Parameters of the selected checkpoint.
    pub model: LinkModel<E>,
    pub config: TrainConfig,
    pub log: Vec<MetricRecord>,
    /// Training loss of every iteration.
    pub losses: Vec<f64>,
    pub best_iteration: usize,
    pub best_valid_mrr: Option<f64>,
    pub test: Option<LinkEvaluation>,
}

impl<E: Encoder> LinkOutcome<E> {
    pub fn checkpoint(&self, dataset: &str) -> Checkpoint {
        self.model.checkpoint(
            &self.config,
            dataset,
            self.best_valid_mrr,
            self.best_iteration,
        )
    }
}

pub fn train_link_prediction(
    ds: &LinkDataset,
    cfg: &TrainConfig,
) -> Result<LinkOutcome<HyperStarEncoder>> {
    let mut rng = seeded(cfg.seed);
    let model = build_link_model(ds, cfg, &mut rng)?;
    run(ds, cfg, model, rng)
}

/// Same loop with a caller-supplied encoder.
pub fn train_link_prediction_with<E: Encoder>(
    ds: &LinkDataset,
    cfg: &TrainConfig,
    encoder: E,
) -> Result<LinkOutcome<E>> {
    cfg.validate()?;
    let mut rng = seeded(cfg.seed);
    let g = &ds.graph;
    let decoder = TupleDecoder::new(
        cfg.decoder,
        g.relation_count(),
        g.max_arity(),
        encoder.dim(),
        cfg.share_relations,
    )?;
    let model = LinkModel::new(encoder, decoder, &mut rng)?;
    run(ds, cfg, model, rng)
}

/// Iterates mini-batches; every `eval_every` iterations (and at the end) the validation
/// MRR decides whether the current parameters become the selected checkpoint.
/// Without a validation split the final parameters are kept.
fn run<E: Encoder>(
    ds: &LinkDataset,
    cfg: &TrainConfig,
    mut model: LinkModel<E>,
    mut rng: Rng,
) -> Result<LinkOutcome<E>> {
    let train_graph = ds.train_graph();
    let train = ds.tuples_of(&ds.split.train);
    if train.is_empty() {
        return Err(Error::EmptyGraph("no training tuples".into()));
    }
    let valid = ds.tuples_of(&ds.split.valid);
    let test = ds.tuples_of(&ds.split.test);
    let known = ds.known_positives();
    let entity_count = ds.graph.entity_count();
    let mut opt = OptimizerState::new(cfg.learning_rate, cfg.weight_decay)?;

    let mut log = Vec::new();
    let mut losses = Vec::with_capacity(cfg.iterations);
    let mut best: Option<(f64, usize, Vec<Vec<f64>>)> = None;
    let mut validate =
        |model: &LinkModel<E>, it: usize, log: &mut Vec<MetricRecord>| -> Result<()> {
            if valid.is_empty() {
                return Ok(());
            }
            let mrr = evaluate_link(model, &train_graph, &valid, &known)?
                .filtered
                .mrr;
            log.push(MetricRecord::new(it, "valid", "mrr", mrr, cfg.seed));
            if best.as_ref().is_none_or(|(b, _, _)| mrr > *b) {
                best = Some((mrr, it, model.store.snapshot()));
            }
            Ok(())
        };
    validate(&model, 0, &mut log)?;

    for it in 1..=cfg.iterations {
        let batch: Vec<KnowledgeTuple> = if cfg.batch_size >= train.len() {
            train.clone()
        } else {
            index::sample(&mut rng, train.len(), cfg.batch_size)
                .into_iter()
                .map(|i| train[i].clone())
                .collect()
        };
        let batch = batch
            .into_iter()
            .map(|t| {
                let negs = sample_negatives(&t, cfg.neg_ratio, entity_count, &mut rng)?;
                Ok((t, negs))
            })
            .collect::<Result<Vec<_>>>()?;

        let mut tape = Tape::new();
        let loss = link_loss(
            &model.encoder,
            &model.decoder,
            &mut tape,
            &model.store,
            &train_graph,
            &batch,
            true,
            &mut rng,
            cfg.sum_reduction,
        )?;
        let value = tape.scalar_value(loss);
        if !value.is_finite() {
            return Err(Error::Geometry(format!(
                "loss became {value} at iteration {it}"
            )));
        }
        tape.backward(loss, &mut model.store)?;
        drop(tape);
        opt.step(&mut model.store);
        model.decoder.renormalize(&mut model.store)?;
        losses.push(value);
        log.push(MetricRecord::new(it, "train", "loss", value, cfg.seed));

        if it % cfg.eval_every == 0 || it == cfg.iterations {
            validate(&model, it, &mut log)?;
        }
    }

    let (best_valid_mrr, best_iteration) = match best {
        Some((mrr, it, snap)) => {
            model.store.restore(&snap);
            (Some(mrr), it)
        }
        None => (None, cfg.iterations),
    };
    let test = if test.is_empty() {
        None
    } else {
        let ev = evaluate_link(&model, &train_graph, &test, &known)?;
        for (metric, v) in [
            ("mrr", ev.filtered.mrr),
            ("hits1", ev.filtered.hits1),
            ("hits3", ev.filtered.hits3),
            ("hits10", ev.filtered.hits10),
        ] {
            log.push(MetricRecord::new(
                best_iteration,
                "test",
                metric,
                v,
                cfg.seed,
            ));
        }
        Some(ev)
    };
    Ok(LinkOutcome {
        model,
        config: cfg.clone(),
        log,
        losses,
        best_iteration,
        best_valid_mrr,
        test,
    })
}
