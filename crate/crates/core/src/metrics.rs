//! Ranking metrics for link prediction and accuracy for node classification.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::data::KnowledgeTuple;
use crate::error::{Error, Result};

/// Ranks of one query in both settings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QueryRank {
    pub raw: usize,
    pub filtered: usize,
}

/// Ranks the true entity at 1-based `position` of `tuple` against every entity
/// substituted there. `rank = 1 + #candidates scoring strictly higher`, so ties favor
/// the true entity. The filtered rank ignores candidates that form a tuple in `known`.
pub fn rank_query<F>(
    tuple: &KnowledgeTuple,
    position: usize,
    entity_count: usize,
    mut score: F,
    known: &HashSet<KnowledgeTuple>,
) -> Result<QueryRank>
where
    F: FnMut(&KnowledgeTuple) -> f64,
{
    if position == 0 || position > tuple.arity() {
        return Err(Error::Argument(format!(
            "position {position} outside 1..={} of the tuple",
            tuple.arity()
        )));
    }
    let slot = position - 1;
    let truth = tuple.entities[slot];
    let true_score = score(tuple);
    let mut rank = QueryRank {
        raw: 1,
        filtered: 1,
    };
    let mut candidate = tuple.clone();
    for e in (0..entity_count).filter(|&e| e != truth) {
        candidate.entities[slot] = e;
        if score(&candidate) > true_score {
            rank.raw += 1;
            if !known.contains(&candidate) {
                rank.filtered += 1;
            }
        }
    }
    Ok(rank)
}

/// Filtered rank (or raw when `known` is empty).
pub fn rank_entity<F>(
    tuple: &KnowledgeTuple,
    position: usize,
    entity_count: usize,
    score: F,
    known: &HashSet<KnowledgeTuple>,
) -> Result<usize>
where
    F: FnMut(&KnowledgeTuple) -> f64,
{
    rank_query(tuple, position, entity_count, score, known).map(|r| r.filtered)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankingReport {
    pub mrr: f64,
    pub hits1: f64,
    pub hits3: f64,
    pub hits10: f64,
    pub ranks: Vec<usize>,
}

impl RankingReport {
    /// Fraction of ranks `≤ k`.
    pub fn hits(&self, k: usize) -> f64 {
        self.ranks.iter().filter(|&&r| r <= k).count() as f64 / self.ranks.len() as f64
    }
}

pub fn aggregate(ranks: &[usize]) -> Result<RankingReport> {
    if ranks.is_empty() {
        return Err(Error::Argument(
            "cannot aggregate an empty rank list".into(),
        ));
    }
    if ranks.contains(&0) {
        return Err(Error::Argument("ranks start at 1".into()));
    }
    let n = ranks.len() as f64;
    let hits = |k: usize| ranks.iter().filter(|&&r| r <= k).count() as f64 / n;
    Ok(RankingReport {
        mrr: ranks.iter().map(|&r| 1.0 / r as f64).sum::<f64>() / n,
        hits1: hits(1),
        hits3: hits(3),
        hits10: hits(10),
        ranks: ranks.to_vec(),
    })
}

/// Fraction of the nodes in `mask` whose prediction equals the gold label.
/// Unlabeled nodes count as wrong.
pub fn accuracy(predictions: &[usize], gold: &[Option<usize>], mask: &[usize]) -> Result<f64> {
    if mask.is_empty() {
        return Err(Error::Argument("accuracy over an empty node set".into()));
    }
    let correct = mask
        .iter()
        .filter(|&&n| gold[n] == Some(predictions[n]))
        .count();
    Ok(correct as f64 / mask.len() as f64)
}

/// Index of the largest entry; the first one wins ties.
pub fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, v) in values.iter().enumerate() {
        if *v > values[best] {
            best = i;
        }
    }
    best
}

pub fn round4(x: f64) -> f64 {
    (x * 1e4).round() / 1e4
}

/// The JSON evaluation report for link prediction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub dataset: String,
    pub decoder: String,
    pub mrr: f64,
    pub hits1: f64,
    pub hits3: f64,
    pub hits10: f64,
    pub n_queries: usize,
    pub filtered: bool,
}

impl EvalReport {
    pub fn new(dataset: &str, decoder: &str, report: &RankingReport, filtered: bool) -> Self {
        EvalReport {
            dataset: dataset.to_string(),
            decoder: decoder.to_string(),
            mrr: report.mrr,
            hits1: report.hits1,
            hits3: report.hits3,
            hits10: report.hits10,
            n_queries: report.ranks.len(),
            filtered,
        }
    }
}
