//! Text formats.
//!
//! Knowledge-tuple files hold one fact per line, `<relation> <entity1> … <entityM>`,
//! separated by runs of spaces or tabs; `#` starts a comment line. Names are interned
//! to dense ids in first-seen order.
//!
//! Labeled hypergraphs use three files: hyperedges (node indices per line), features
//! (one row of reals per node) and labels (`<node> <class>` per line).

use std::collections::HashMap;
use std::fs;
use std::path::Path;

use super::hypergraph::{KnowledgeHypergraph, KnowledgeTuple, LabeledHypergraph};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Interner {
    names: Vec<String>,
    ids: HashMap<String, usize>,
}

impl Interner {
    pub fn intern(&mut self, name: &str) -> usize {
        if let Some(&id) = self.ids.get(name) {
            return id;
        }
        let id = self.names.len();
        self.names.push(name.to_string());
        self.ids.insert(name.to_string(), id);
        id
    }

    pub fn get(&self, name: &str) -> Option<usize> {
        self.ids.get(name).copied()
    }

    pub fn name(&self, id: usize) -> &str {
        &self.names[id]
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }
}

/// Entity and relation name tables shared by the files of one dataset.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Vocabulary {
    pub entities: Interner,
    pub relations: Interner,
}

impl Vocabulary {
    pub fn new() -> Self {
        Self::default()
    }

    /// Parses tuple text, interning names into `self`.
    pub fn parse_tuples(&mut self, text: &str, source: &str) -> Result<Vec<KnowledgeTuple>> {
        let mut tuples = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let tokens: Vec<&str> = line.split_whitespace().collect();
            if tokens.len() < 3 {
                return Err(Error::Parse {
                    path: source.to_string(),
                    line: i + 1,
                    msg: format!(
                        "expected a relation and at least two entities, found {} token(s)",
                        tokens.len()
                    ),
                });
            }
            let relation = self.relations.intern(tokens[0]);
            let entities = tokens[1..]
                .iter()
                .map(|t| self.entities.intern(t))
                .collect();
            tuples.push(KnowledgeTuple { relation, entities });
        }
        Ok(tuples)
    }

    pub fn parse_tuple_path(&mut self, path: &Path) -> Result<Vec<KnowledgeTuple>> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        self.parse_tuples(&text, &path.display().to_string())
    }
}

/// Reads a single knowledge-tuple file.
pub fn parse_tuple_file(path: impl AsRef<Path>) -> Result<(KnowledgeHypergraph, Vocabulary)> {
    let path = path.as_ref();
    let mut vocab = Vocabulary::new();
    let tuples = vocab.parse_tuple_path(path)?;
    if tuples.is_empty() {
        return Err(Error::EmptyGraph(format!(
            "{} contains no tuples",
            path.display()
        )));
    }
    let graph = KnowledgeHypergraph::new(vocab.entities.len(), vocab.relations.len(), tuples)?;
    Ok((graph, vocab))
}

/// Same as [`parse_tuple_file`] for in-memory text.
pub fn parse_tuple_str(text: &str) -> Result<(KnowledgeHypergraph, Vocabulary)> {
    let mut vocab = Vocabulary::new();
    let tuples = vocab.parse_tuples(text, "<input>")?;
    if tuples.is_empty() {
        return Err(Error::EmptyGraph("input contains no tuples".into()));
    }
    let graph = KnowledgeHypergraph::new(vocab.entities.len(), vocab.relations.len(), tuples)?;
    Ok((graph, vocab))
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn parse_num<T: std::str::FromStr>(tok: &str, path: &Path, line: usize) -> Result<T> {
    tok.parse().map_err(|_| Error::Parse {
        path: path.display().to_string(),
        line,
        msg: format!("cannot parse `{tok}`"),
    })
}

/// Reads a labeled hypergraph. Every hyperedge gets relation 0 and positions follow
/// the order of nodes on its line. Single-node hyperedges are kept.
pub fn parse_labeled_hypergraph(
    edge_path: impl AsRef<Path>,
    feature_path: impl AsRef<Path>,
    label_path: impl AsRef<Path>,
) -> Result<LabeledHypergraph> {
    let (edge_path, feature_path, label_path) = (
        edge_path.as_ref(),
        feature_path.as_ref(),
        label_path.as_ref(),
    );

    let mut features = Vec::new();
    let mut feature_dim = None;
    let mut rows = 0;
    for (i, line) in read(feature_path)?.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let row: Vec<f64> = line
            .split_whitespace()
            .map(|t| parse_num(t, feature_path, i + 1))
            .collect::<Result<_>>()?;
        match feature_dim {
            None => feature_dim = Some(row.len()),
            Some(d) if d != row.len() => {
                return Err(Error::Parse {
                    path: feature_path.display().to_string(),
                    line: i + 1,
                    msg: format!("row has {} values, expected {d}", row.len()),
                })
            }
            _ => {}
        }
        features.extend(row);
        rows += 1;
    }
    let feature_dim = feature_dim
        .ok_or_else(|| Error::EmptyGraph(format!("{} has no rows", feature_path.display())))?;

    let mut tuples = Vec::new();
    for (i, line) in read(edge_path)?.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let nodes: Vec<usize> = line
            .split_whitespace()
            .map(|t| parse_num(t, edge_path, i + 1))
            .collect::<Result<_>>()?;
        if let Some(&bad) = nodes.iter().find(|&&n| n >= rows) {
            return Err(Error::Consistency(format!(
                "{}:{}: node {bad} has no feature row ({rows} rows)",
                edge_path.display(),
                i + 1
            )));
        }
        tuples.push(KnowledgeTuple::new(0, nodes));
    }

    let mut labels = vec![None; rows];
    for (i, line) in read(label_path)?.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 2 {
            return Err(Error::Parse {
                path: label_path.display().to_string(),
                line: i + 1,
                msg: "expected `<node> <class>`".into(),
            });
        }
        let node: usize = parse_num(toks[0], label_path, i + 1)?;
        let class: usize = parse_num(toks[1], label_path, i + 1)?;
        if node >= rows {
            return Err(Error::Consistency(format!(
                "{}:{}: labeled node {node} has no feature row",
                label_path.display(),
                i + 1
            )));
        }
        labels[node] = Some(class);
    }

    let graph = KnowledgeHypergraph::new(rows, 1, tuples)?;
    LabeledHypergraph::new(graph, features, feature_dim, labels)
}

/// One non-negative index per line.
pub fn parse_index_file(path: impl AsRef<Path>) -> Result<Vec<usize>> {
    let path = path.as_ref();
    read(path)?
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| parse_num(l.trim(), path, i + 1))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_fact() {
        let (g, v) = parse_tuple_str("education hawking oxford ba\n").unwrap();
        assert_eq!(g.len(), 1);
        assert_eq!(g.max_arity(), 3);
        assert_eq!(g.entity_count(), 3);
        assert_eq!(g.relation_count(), 1);
        assert_eq!(v.entities.name(0), "hawking");
    }

    #[test]
    fn duplicates_are_kept() {
        let (g, _) = parse_tuple_str("r a b\nr a b\n").unwrap();
        assert_eq!(g.len(), 2);
        assert_eq!(g.incidence(0).len(), 2);
    }

    #[test]
    fn tabs_comments_and_blank_lines() {
        let (g, _) = parse_tuple_str("# header\n\nr\ta\t\tb  c\n").unwrap();
        assert_eq!(g.tuple(0).entities, vec![0, 1, 2]);
    }

    #[test]
    fn short_line_names_line_number() {
        let err = parse_tuple_str("r a b\nr a\n").unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn empty_input_is_an_error() {
        assert!(matches!(
            parse_tuple_str("# nothing\n"),
            Err(Error::EmptyGraph(_))
        ));
    }

    #[test]
    fn ids_follow_first_seen_order() {
        let text = "born x y\nlives y z w\n";
        let (a, va) = parse_tuple_str(text).unwrap();
        let (b, vb) = parse_tuple_str(text).unwrap();
        assert_eq!(a, b);
        assert_eq!(va, vb);
        assert_eq!(vb.entities.get("w"), Some(3));
        assert_eq!(vb.relations.get("lives"), Some(1));
    }

    #[test]
    fn labeled_hypergraph_files() {
        let dir = tempfile::tempdir().unwrap();
        let e = dir.path().join("edges.txt");
        let f = dir.path().join("features.txt");
        let l = dir.path().join("labels.txt");
        fs::write(&e, "0 1\n1 2 3\n2\n").unwrap();
        fs::write(&f, "1 0\n0 1\n1 1\n0 0\n").unwrap();
        fs::write(&l, "0 0\n1 1\n2 0\n3 1\n").unwrap();
        let lh = parse_labeled_hypergraph(&e, &f, &l).unwrap();
        assert_eq!(lh.num_classes, 2);
        assert_eq!(lh.graph.len(), 3);
        assert_eq!(lh.graph.tuple(2).arity(), 1);
        assert_eq!(lh.feature_row(2), &[1.0, 1.0]);

        fs::write(&e, "0 7\n").unwrap();
        assert!(matches!(
            parse_labeled_hypergraph(&e, &f, &l),
            Err(Error::Consistency(_))
        ));
    }
}
