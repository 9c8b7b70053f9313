//! Small generated datasets used by tests, examples and the gradient self-check.

use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng as _;
use rand_distr::{Distribution, Normal};

use super::hypergraph::{KnowledgeHypergraph, KnowledgeTuple, LabeledHypergraph};
use super::split::SplitSpec;
use super::{ClassificationDataset, LinkDataset};
use crate::error::{Error, Result};
use crate::rng::{seeded, Rng};

/// Parent of every non-root node of the 100-node family tree: one root, 4 children,
/// 16 grandchildren and 79 great-grandchildren.
fn family_tree() -> Vec<Option<usize>> {
    let mut parent = vec![None; 100];
    for (i, p) in parent.iter_mut().enumerate().skip(1) {
        *p = Some(match i {
            1..=4 => 0,
            5..=20 => 1 + (i - 5) / 4,
            _ => 5 + (i - 21) / 5,
        });
    }
    parent
}

pub const HIERARCHY_RELATIONS: [&str; 5] =
    ["parent", "lineage", "ancestry", "uncle", "grandparent"];

/// Tuples of the family tree. `parent(x, p)` holds for every non-root node; the other
/// relations are anchored at the leaves `x`:
///
/// * `lineage(x, p, g)` with `g` the parent of `p`
/// * `ancestry(x, p, g, a)`, which holds iff `lineage(x, p, g)` and `parent(g, a)`
/// * `uncle(x, u)` for every other child `u` of `g`
/// * `grandparent(x, g)`, which holds iff `parent(x, p)` and `parent(p, g)`
///
/// Every relation is directional, and no permutation of a fact is another fact.
pub fn hierarchy_tuples() -> Vec<KnowledgeTuple> {
    let parent = family_tree();
    let up = |x: usize| parent[x];
    let mut out = Vec::new();
    for x in 0..parent.len() {
        let Some(p) = up(x) else { continue };
        out.push(KnowledgeTuple::new(0, vec![x, p]));
        let Some(g) = up(p) else { continue };
        let Some(a) = up(g) else { continue };
        out.push(KnowledgeTuple::new(1, vec![x, p, g]));
        out.push(KnowledgeTuple::new(2, vec![x, p, g, a]));
        for u in (0..parent.len()).filter(|&u| u != p && up(u) == Some(g)) {
            out.push(KnowledgeTuple::new(3, vec![x, u]));
        }
        out.push(KnowledgeTuple::new(4, vec![x, g]));
    }
    out
}

/// The family-tree link-prediction task: every `parent` fact is kept for training,
/// and 10 % of the remaining facts each go to validation and test.
pub fn hierarchy_link_dataset(seed: u64) -> LinkDataset {
    let tuples = hierarchy_tuples();
    let mut derived: Vec<usize> = (0..tuples.len())
        .filter(|&i| tuples[i].relation != 0)
        .collect();
    derived.shuffle(&mut seeded(seed));
    let held = derived.len() / 10;
    let mut valid = derived[..held].to_vec();
    let mut test = derived[held..2 * held].to_vec();
    let mut train: Vec<usize> = (0..tuples.len())
        .filter(|i| !valid.contains(i) && !test.contains(i))
        .collect();
    for v in [&mut train, &mut valid, &mut test] {
        v.sort_unstable();
    }
    let graph = KnowledgeHypergraph::new(100, HIERARCHY_RELATIONS.len(), tuples)
        .expect("valid by construction");
    let split = SplitSpec::from_parts(train, valid, test).expect("disjoint by construction");
    let mut ds = LinkDataset::from_parts("family-tree", graph, split);
    for e in 0..100 {
        ds.vocab.entities.intern(&format!("n{e}"));
    }
    for r in HIERARCHY_RELATIONS {
        ds.vocab.relations.intern(r);
    }
    ds
}

/// Two-class hypergraph of `nodes` nodes. Hyperedges (2 to 5 members) never mix
/// classes, every node sits in at least one hyperedge, and the 16-dimensional
/// features are unit Gaussians shifted by a weak class-dependent mean.
pub fn clustered_hypergraph(nodes: usize, seed: u64) -> Result<LabeledHypergraph> {
    if nodes < 4 {
        return Err(Error::Argument(format!(
            "need at least 4 nodes, got {nodes}"
        )));
    }
    const DIM: usize = 16;
    // a separate stream, so a split drawn with the same seed is not the class order
    let mut rng = seeded(seed);
    rng.set_stream(1);
    let mut order: Vec<usize> = (0..nodes).collect();
    order.shuffle(&mut rng);
    let mut labels = vec![None; nodes];
    let classes: [Vec<usize>; 2] = [order[..nodes / 2].to_vec(), order[nodes / 2..].to_vec()];
    for (c, members) in classes.iter().enumerate() {
        for &n in members {
            labels[n] = Some(c);
        }
    }

    let mut tuples = Vec::new();
    for members in &classes {
        let mut covered = vec![false; nodes];
        for _ in 0..(members.len() * 4 / 5) {
            let size = rng.random_range(2..=5.min(members.len()));
            let edge: Vec<usize> = members.choose_multiple(&mut rng, size).copied().collect();
            edge.iter().for_each(|&n| covered[n] = true);
            tuples.push(KnowledgeTuple::new(0, edge));
        }
        for &n in members {
            if !covered[n] {
                let other = *members
                    .iter()
                    .filter(|&&m| m != n)
                    .collect::<Vec<_>>()
                    .choose(&mut rng)
                    .unwrap();
                tuples.push(KnowledgeTuple::new(0, vec![n, *other]));
            }
        }
    }

    let signs: Vec<f64> = (0..DIM)
        .map(|_| if rng.random::<bool>() { 1.0 } else { -1.0 })
        .collect();
    let noise = Normal::new(0.0, 1.0).expect("unit normal");
    let mut features = Vec::with_capacity(nodes * DIM);
    for label in &labels {
        let sign = if *label == Some(0) { 1.0 } else { -1.0 };
        for s in &signs {
            features.push(0.3 * sign * s + noise.sample(&mut rng));
        }
    }
    let graph = KnowledgeHypergraph::new(nodes, 1, tuples)?;
    LabeledHypergraph::new(graph, features, DIM, labels)
}

/// 60-node two-cluster classification task with a seeded 20/40/40 split.
pub fn clustered_dataset(seed: u64) -> Result<ClassificationDataset> {
    let data = clustered_hypergraph(60, seed)?;
    let split = ClassificationDataset::derive_split(&data, [0.2, 0.4, 0.4], seed, None)?;
    ClassificationDataset::new("two-clusters", data, split)
}

/// Five entities, two relations, three tuples; the largest has arity `max_arity` (2..=4).
pub fn toy_graph(max_arity: usize) -> Result<KnowledgeHypergraph> {
    if !(2..=4).contains(&max_arity) {
        return Err(Error::Argument(format!(
            "toy graph supports arity 2 to 4, got {max_arity}"
        )));
    }
    let tuples = vec![
        KnowledgeTuple::new(0, (0..max_arity).collect()),
        KnowledgeTuple::new(1, vec![2, 4]),
        KnowledgeTuple::new(0, [4, 0, 3][..max_arity.min(3)].to_vec()),
    ];
    KnowledgeHypergraph::new(5, 2, tuples)
}

/// Random hypergraph with arities drawn uniformly from `2..=max_arity`.
pub fn random_hypergraph(
    rng: &mut Rng,
    entity_count: usize,
    relation_count: usize,
    tuple_count: usize,
    max_arity: usize,
) -> Result<KnowledgeHypergraph> {
    if entity_count == 0 || relation_count == 0 || max_arity < 2 {
        return Err(Error::Argument(
            "random hypergraph needs entities, relations and arity ≥ 2".into(),
        ));
    }
    let tuples = (0..tuple_count)
        .map(|_| {
            let arity = rng.random_range(2..=max_arity);
            let entities = (0..arity)
                .map(|_| rng.random_range(0..entity_count))
                .collect();
            KnowledgeTuple::new(rng.random_range(0..relation_count), entities)
        })
        .collect();
    KnowledgeHypergraph::new(entity_count, relation_count, tuples)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tree_shape() {
        let parent = family_tree();
        let children = |p: usize| parent.iter().filter(|&&q| q == Some(p)).count();
        assert_eq!(children(0), 4);
        assert!((1..=4).all(|p| children(p) == 4));
        assert_eq!((5..=20).map(children).sum::<usize>(), 79);
        assert_eq!(parent.iter().filter(|p| p.is_none()).count(), 1);
    }

    #[test]
    fn ancestry_is_composed_lineage() {
        let t = hierarchy_tuples();
        let lineage: Vec<&KnowledgeTuple> = t.iter().filter(|x| x.relation == 1).collect();
        for a in t.iter().filter(|x| x.relation == 2) {
            let e = &a.entities;
            assert!(lineage.iter().any(|l| l.entities == [e[0], e[1], e[2]]));
            assert!(t.contains(&KnowledgeTuple::new(0, vec![e[2], e[3]])));
        }
        let hist = KnowledgeHypergraph::new(100, 5, t)
            .unwrap()
            .arity_histogram();
        assert_eq!(hist.keys().copied().collect::<Vec<_>>(), vec![2, 3, 4]);
    }

    #[test]
    fn no_fact_is_a_permutation_of_another() {
        let t = hierarchy_tuples();
        let facts: std::collections::HashSet<_> = t.iter().cloned().collect();
        for x in &t {
            let mut rev = x.clone();
            rev.entities.reverse();
            assert!(!facts.contains(&rev));
            if x.arity() > 2 {
                let mut rot = x.clone();
                rot.entities.rotate_left(1);
                assert!(!facts.contains(&rot));
            }
        }
    }

    #[test]
    fn hierarchy_split_keeps_parents_in_train() {
        let ds = hierarchy_link_dataset(3);
        assert!(ds
            .split
            .valid
            .iter()
            .chain(&ds.split.test)
            .all(|&i| ds.graph.tuple(i).relation != 0));
        assert_eq!(ds.split.valid.len(), ds.split.test.len());
        assert_eq!(
            ds.split.train.len() + ds.split.valid.len() + ds.split.test.len(),
            ds.graph.len()
        );
        assert_eq!(ds, hierarchy_link_dataset(3));
    }

    #[test]
    fn clusters_are_label_pure_and_cover_nodes() {
        let data = clustered_hypergraph(60, 1).unwrap();
        assert_eq!(data.num_classes, 2);
        for t in data.graph.tuples() {
            let c = data.labels[t.entities[0]];
            assert!(t.entities.iter().all(|&n| data.labels[n] == c));
        }
        assert!((0..60).all(|n| !data.graph.incidence(n).is_empty()));
    }

    #[test]
    fn split_is_not_the_class_order() {
        for seed in 0..5 {
            let ds = clustered_dataset(seed).unwrap();
            let classes: std::collections::HashSet<_> =
                ds.split.train.iter().map(|&n| ds.data.labels[n]).collect();
            assert_eq!(classes.len(), 2, "seed {seed}");
        }
    }

    #[test]
    fn toy_graph_sizes() {
        let g = toy_graph(4).unwrap();
        assert_eq!((g.entity_count(), g.len(), g.max_arity()), (5, 3, 4));
        assert!(toy_graph(5).is_err());
    }
}
