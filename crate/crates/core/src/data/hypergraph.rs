use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// One fact `(r, x₁, …, x_m)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KnowledgeTuple {
    pub relation: usize,
    pub entities: Vec<usize>,
}

impl KnowledgeTuple {
    pub fn new(relation: usize, entities: Vec<usize>) -> Self {
        KnowledgeTuple { relation, entities }
    }

    pub fn arity(&self) -> usize {
        self.entities.len()
    }

    /// Copy with the entity at 0-based `slot` replaced.
    pub fn with_entity(&self, slot: usize, entity: usize) -> Self {
        let mut t = self.clone();
        t.entities[slot] = entity;
        t
    }
}

/// Membership of an entity in a tuple; `position` is 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Incidence {
    pub tuple: usize,
    pub position: usize,
}

/// Typed hyperedges over a fixed entity and relation vocabulary, with the
/// entity → (tuple, position) incidence index kept in sync.
#[derive(Debug, Clone, PartialEq)]
pub struct KnowledgeHypergraph {
    entity_count: usize,
    relation_count: usize,
    tuples: Vec<KnowledgeTuple>,
    incidence: Vec<Vec<Incidence>>,
    max_arity: usize,
}

/// For each entity, every `(tuple index, 1-based position)` it occupies, in tuple order.
pub fn build_incidence(entity_count: usize, tuples: &[KnowledgeTuple]) -> Vec<Vec<Incidence>> {
    let mut incidence = vec![Vec::new(); entity_count];
    for (ti, t) in tuples.iter().enumerate() {
        for (slot, &e) in t.entities.iter().enumerate() {
            incidence[e].push(Incidence {
                tuple: ti,
                position: slot + 1,
            });
        }
    }
    incidence
}

impl KnowledgeHypergraph {
    /// Validates ids and arity (≥ 1) and builds the incidence index.
    pub fn new(
        entity_count: usize,
        relation_count: usize,
        tuples: Vec<KnowledgeTuple>,
    ) -> Result<Self> {
        for (i, t) in tuples.iter().enumerate() {
            if t.entities.is_empty() {
                return Err(Error::Consistency(format!("tuple {i} has no entities")));
            }
            if t.relation >= relation_count {
                return Err(Error::Consistency(format!(
                    "tuple {i}: relation {} outside vocabulary of {relation_count}",
                    t.relation
                )));
            }
            if let Some(&e) = t.entities.iter().find(|&&e| e >= entity_count) {
                return Err(Error::Consistency(format!(
                    "tuple {i}: entity {e} outside vocabulary of {entity_count}"
                )));
            }
        }
        Ok(Self::from_valid(entity_count, relation_count, tuples))
    }

    fn from_valid(entity_count: usize, relation_count: usize, tuples: Vec<KnowledgeTuple>) -> Self {
        let incidence = build_incidence(entity_count, &tuples);
        let max_arity = tuples.iter().map(KnowledgeTuple::arity).max().unwrap_or(0);
        KnowledgeHypergraph {
            entity_count,
            relation_count,
            tuples,
            incidence,
            max_arity,
        }
    }

    pub fn entity_count(&self) -> usize {
        self.entity_count
    }

    pub fn relation_count(&self) -> usize {
        self.relation_count
    }

    pub fn tuples(&self) -> &[KnowledgeTuple] {
        &self.tuples
    }

    pub fn tuple(&self, i: usize) -> &KnowledgeTuple {
        &self.tuples[i]
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn max_arity(&self) -> usize {
        self.max_arity
    }

    pub fn incidence(&self, entity: usize) -> &[Incidence] {
        &self.incidence[entity]
    }

    pub fn incidence_index(&self) -> &[Vec<Incidence>] {
        &self.incidence
    }

    /// Number of tuples per arity.
    pub fn arity_histogram(&self) -> BTreeMap<usize, usize> {
        let mut h = BTreeMap::new();
        for t in &self.tuples {
            *h.entry(t.arity()).or_insert(0) += 1;
        }
        h
    }

    /// The tuples at `indices`, over the same vocabulary.
    pub fn subgraph(&self, indices: &[usize]) -> KnowledgeHypergraph {
        let tuples = indices.iter().map(|&i| self.tuples[i].clone()).collect();
        Self::from_valid(self.entity_count, self.relation_count, tuples)
    }

    /// Drops every tuple touching a `removed` entity. Entities stay in the vocabulary.
    pub fn without_entities(&self, removed: &[bool]) -> KnowledgeHypergraph {
        let tuples = self
            .tuples
            .iter()
            .filter(|t| !t.entities.iter().any(|&e| removed[e]))
            .cloned()
            .collect();
        Self::from_valid(self.entity_count, self.relation_count, tuples)
    }

    /// Same graph with tuples in a different order.
    pub fn permuted(&self, order: &[usize]) -> KnowledgeHypergraph {
        self.subgraph(order)
    }
}

/// A single-relation hypergraph with node features and (partial) class labels.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledHypergraph {
    pub graph: KnowledgeHypergraph,
    /// `entity_count × feature_dim`, row-major.
    pub features: Vec<f64>,
    pub feature_dim: usize,
    pub labels: Vec<Option<usize>>,
    pub num_classes: usize,
}

impl LabeledHypergraph {
    pub fn new(
        graph: KnowledgeHypergraph,
        features: Vec<f64>,
        feature_dim: usize,
        labels: Vec<Option<usize>>,
    ) -> Result<Self> {
        let n = graph.entity_count();
        if features.len() != n * feature_dim {
            return Err(Error::Consistency(format!(
                "feature matrix has {} entries, expected {n} × {feature_dim}",
                features.len()
            )));
        }
        if labels.len() != n {
            return Err(Error::Consistency(format!(
                "{} labels for {n} nodes",
                labels.len()
            )));
        }
        let num_classes = labels.iter().flatten().max().map_or(0, |&c| c + 1);
        Ok(LabeledHypergraph {
            graph,
            features,
            feature_dim,
            labels,
            num_classes,
        })
    }

    pub fn node_count(&self) -> usize {
        self.graph.entity_count()
    }

    pub fn feature_row(&self, node: usize) -> &[f64] {
        &self.features[node * self.feature_dim..(node + 1) * self.feature_dim]
    }

    pub fn labeled_nodes(&self) -> Vec<usize> {
        (0..self.labels.len())
            .filter(|&i| self.labels[i].is_some())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn incidence_example() {
        let tuples = vec![
            KnowledgeTuple::new(0, vec![0, 1]),
            KnowledgeTuple::new(1, vec![1, 2]),
        ];
        let inc = build_incidence(4, &tuples);
        assert_eq!(
            inc[1],
            vec![
                Incidence {
                    tuple: 0,
                    position: 2
                },
                Incidence {
                    tuple: 1,
                    position: 1
                }
            ]
        );
        assert!(inc[3].is_empty());
    }

    #[test]
    fn validation() {
        assert!(KnowledgeHypergraph::new(2, 1, vec![KnowledgeTuple::new(0, vec![0, 2])]).is_err());
        assert!(KnowledgeHypergraph::new(3, 1, vec![KnowledgeTuple::new(1, vec![0, 2])]).is_err());
        assert!(KnowledgeHypergraph::new(3, 1, vec![KnowledgeTuple::new(0, vec![])]).is_err());
        let g = KnowledgeHypergraph::new(3, 1, vec![]).unwrap();
        assert_eq!(g.max_arity(), 0);
    }

    #[test]
    fn training_view_drops_touching_tuples() {
        let g = KnowledgeHypergraph::new(
            4,
            1,
            vec![
                KnowledgeTuple::new(0, vec![0, 1]),
                KnowledgeTuple::new(0, vec![1, 2, 3]),
                KnowledgeTuple::new(0, vec![0, 2]),
            ],
        )
        .unwrap();
        let view = g.without_entities(&[false, false, false, true]);
        assert_eq!(view.len(), 2);
        assert_eq!(view.entity_count(), 4);
        assert!(view.incidence(3).is_empty());
    }
}
