//! Hyper-star expansion: each `(tuple, position)` membership becomes one bipartite
//! edge `entity -> tuple` labeled by a positional relation that encodes the pair
//! `(relation, position)`, e.g. `Roster-1`, `Roster-2`, `Roster-3`.

use super::hypergraph::{KnowledgeHypergraph, KnowledgeTuple};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct StarEdge {
    pub entity: usize,
    pub tuple: usize,
    pub positional_relation: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StarExpansion {
    pub edges: Vec<StarEdge>,
    pub entity_count: usize,
    pub relation_count: usize,
    pub tuple_count: usize,
    pub max_arity: usize,
}

/// `relation × max_arity + (position − 1)` for a 1-based position.
pub fn positional_relation(relation: usize, position: usize, max_arity: usize) -> usize {
    debug_assert!(position >= 1 && position <= max_arity);
    relation * max_arity + (position - 1)
}

/// Edges are emitted tuple by tuple, in position order.
pub fn hyper_star_expand(hg: &KnowledgeHypergraph) -> StarExpansion {
    let n = hg.max_arity();
    let edges = hg
        .tuples()
        .iter()
        .enumerate()
        .flat_map(|(ti, t)| {
            t.entities
                .iter()
                .enumerate()
                .map(move |(slot, &entity)| StarEdge {
                    entity,
                    tuple: ti,
                    positional_relation: positional_relation(t.relation, slot + 1, n),
                })
        })
        .collect();
    StarExpansion {
        edges,
        entity_count: hg.entity_count(),
        relation_count: hg.relation_count(),
        tuple_count: hg.len(),
        max_arity: n,
    }
}

impl StarExpansion {
    /// `(relation, 1-based position)` of a positional relation id.
    pub fn decode(&self, positional_relation: usize) -> (usize, usize) {
        (
            positional_relation / self.max_arity,
            positional_relation % self.max_arity + 1,
        )
    }

    /// Rebuilds the original hypergraph.
    pub fn reconstruct(&self) -> Result<KnowledgeHypergraph> {
        let mut slots: Vec<Option<(usize, Vec<Option<usize>>)>> = vec![None; self.tuple_count];
        for e in &self.edges {
            if e.tuple >= self.tuple_count || self.max_arity == 0 {
                return Err(Error::Consistency(format!(
                    "edge refers to tuple {}",
                    e.tuple
                )));
            }
            let (relation, position) = self.decode(e.positional_relation);
            let (rel, members) = slots[e.tuple].get_or_insert_with(|| (relation, Vec::new()));
            if *rel != relation {
                return Err(Error::Consistency(format!(
                    "tuple {} mixes relations",
                    e.tuple
                )));
            }
            if members.len() < position {
                members.resize(position, None);
            }
            if members[position - 1].replace(e.entity).is_some() {
                return Err(Error::Consistency(format!(
                    "tuple {} has two entities at position {position}",
                    e.tuple
                )));
            }
        }
        let tuples = slots
            .into_iter()
            .enumerate()
            .map(|(ti, slot)| {
                let (relation, members) =
                    slot.ok_or_else(|| Error::Consistency(format!("tuple {ti} has no edges")))?;
                let entities =
                    members
                        .into_iter()
                        .collect::<Option<Vec<_>>>()
                        .ok_or_else(|| {
                            Error::Consistency(format!("tuple {ti} has a gap in its positions"))
                        })?;
                Ok(KnowledgeTuple { relation, entities })
            })
            .collect::<Result<Vec<_>>>()?;
        KnowledgeHypergraph::new(self.entity_count, self.relation_count, tuples)
    }
}
