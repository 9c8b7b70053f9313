//! Knowledge-hypergraph data model, file formats, splits and the hyper-star expansion.

pub mod expand;
pub mod hypergraph;
pub mod parse;
pub mod split;
pub mod synthetic;

use std::collections::HashSet;
use std::fs;
use std::path::Path;

pub use expand::{hyper_star_expand, positional_relation, StarEdge, StarExpansion};
pub use hypergraph::{
    build_incidence, Incidence, KnowledgeHypergraph, KnowledgeTuple, LabeledHypergraph,
};
pub use parse::{
    parse_index_file, parse_labeled_hypergraph, parse_tuple_file, parse_tuple_str, Interner,
    Vocabulary,
};
pub use split::{inductive_mask, inductive_split, make_splits, SplitSpec};

use crate::error::{Error, Result};

/// Tuples of a link-prediction dataset with their split.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkDataset {
    pub name: String,
    /// All tuples (train, valid and test) over one vocabulary.
    pub graph: KnowledgeHypergraph,
    pub split: SplitSpec,
    pub vocab: Vocabulary,
}

impl LinkDataset {
    /// Loads `train.txt` (plus `valid.txt` and `test.txt` when present) from a directory,
    /// or a single tuple file. Without explicit valid/test files the tuples are split
    /// with `ratios` and `seed`.
    pub fn load(path: impl AsRef<Path>, ratios: [f64; 3], seed: u64) -> Result<Self> {
        let path = path.as_ref();
        let name = path
            .file_name()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| path.display().to_string());
        let mut vocab = Vocabulary::new();
        if path.is_dir() {
            let train_path = path.join("train.txt");
            if !train_path.is_file() {
                return Err(Error::io(
                    &train_path,
                    std::io::Error::new(std::io::ErrorKind::NotFound, "missing training tuples"),
                ));
            }
            let train = vocab.parse_tuple_path(&train_path)?;
            let valid_path = path.join("valid.txt");
            let test_path = path.join("test.txt");
            if valid_path.is_file() && test_path.is_file() {
                let valid = vocab.parse_tuple_path(&valid_path)?;
                let test = vocab.parse_tuple_path(&test_path)?;
                let (a, b) = (train.len(), valid.len());
                let split = SplitSpec::from_parts(
                    (0..a).collect(),
                    (a..a + b).collect(),
                    (a + b..a + b + test.len()).collect(),
                )?;
                let tuples: Vec<_> = train.into_iter().chain(valid).chain(test).collect();
                return Self::assemble(name, vocab, tuples, split);
            }
            let split = make_splits(&(0..train.len()).collect::<Vec<_>>(), ratios, seed)?;
            Self::assemble(name, vocab, train, split)
        } else {
            let tuples = vocab.parse_tuple_path(path)?;
            let split = make_splits(&(0..tuples.len()).collect::<Vec<_>>(), ratios, seed)?;
            Self::assemble(name, vocab, tuples, split)
        }
    }

    fn assemble(
        name: String,
        vocab: Vocabulary,
        tuples: Vec<KnowledgeTuple>,
        split: SplitSpec,
    ) -> Result<Self> {
        if tuples.is_empty() {
            return Err(Error::EmptyGraph(format!("dataset `{name}` has no tuples")));
        }
        let graph = KnowledgeHypergraph::new(vocab.entities.len(), vocab.relations.len(), tuples)?;
        Ok(LinkDataset {
            name,
            graph,
            split,
            vocab,
        })
    }

    pub fn from_parts(name: &str, graph: KnowledgeHypergraph, split: SplitSpec) -> Self {
        LinkDataset {
            name: name.to_string(),
            graph,
            split,
            vocab: Vocabulary::new(),
        }
    }

    /// Message-passing graph: training tuples only.
    pub fn train_graph(&self) -> KnowledgeHypergraph {
        self.graph.subgraph(&self.split.train)
    }

    /// Writes `train.txt`, `valid.txt` and `test.txt` into `dir`, which [`LinkDataset::load`]
    /// reads back. Ids missing from the vocabulary are written as `e<id>` / `r<id>`.
    pub fn save(&self, dir: impl AsRef<Path>) -> Result<()> {
        let dir = dir.as_ref();
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let name = |table: &Interner, prefix: &str, id: usize| {
            if id < table.len() {
                table.name(id).to_string()
            } else {
                format!("{prefix}{id}")
            }
        };
        for (file, indices) in [
            ("train.txt", &self.split.train),
            ("valid.txt", &self.split.valid),
            ("test.txt", &self.split.test),
        ] {
            let mut text = String::new();
            for &i in indices {
                let t = self.graph.tuple(i);
                text.push_str(&name(&self.vocab.relations, "r", t.relation));
                for &e in &t.entities {
                    text.push(' ');
                    text.push_str(&name(&self.vocab.entities, "e", e));
                }
                text.push('\n');
            }
            let path = dir.join(file);
            fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
        }
        Ok(())
    }

    pub fn tuples_of(&self, indices: &[usize]) -> Vec<KnowledgeTuple> {
        indices
            .iter()
            .map(|&i| self.graph.tuple(i).clone())
            .collect()
    }

    /// Every tuple of every split, for filtered ranking.
    pub fn known_positives(&self) -> HashSet<KnowledgeTuple> {
        self.graph.tuples().iter().cloned().collect()
    }
}

/// A labeled hypergraph with its node split.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassificationDataset {
    pub name: String,
    pub data: LabeledHypergraph,
    pub split: SplitSpec,
}

impl ClassificationDataset {
    /// Reads `edges.txt`, `features.txt` and `labels.txt` from `dir`. Uses
    /// `train.idx` / `valid.idx` / `test.idx` when all three exist, otherwise a seeded
    /// split of the labeled nodes (inductive when `unseen_fraction` is given).
    pub fn load(
        dir: impl AsRef<Path>,
        ratios: [f64; 3],
        seed: u64,
        unseen_fraction: Option<f64>,
    ) -> Result<Self> {
        let dir = dir.as_ref();
        for f in ["edges.txt", "features.txt", "labels.txt"] {
            let p = dir.join(f);
            if !p.is_file() {
                return Err(Error::io(
                    &p,
                    std::io::Error::new(std::io::ErrorKind::NotFound, "missing dataset file"),
                ));
            }
        }
        let data = parse_labeled_hypergraph(
            dir.join("edges.txt"),
            dir.join("features.txt"),
            dir.join("labels.txt"),
        )?;
        let name = dir
            .file_name()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| dir.display().to_string());
        let idx = |f: &str| dir.join(f);
        let split = if unseen_fraction.is_none()
            && ["train.idx", "valid.idx", "test.idx"]
                .iter()
                .all(|f| idx(f).is_file())
        {
            SplitSpec::from_parts(
                parse_index_file(idx("train.idx"))?,
                parse_index_file(idx("valid.idx"))?,
                parse_index_file(idx("test.idx"))?,
            )?
        } else {
            Self::derive_split(&data, ratios, seed, unseen_fraction)?
        };
        Self::new(&name, data, split)
    }

    pub fn derive_split(
        data: &LabeledHypergraph,
        ratios: [f64; 3],
        seed: u64,
        unseen_fraction: Option<f64>,
    ) -> Result<SplitSpec> {
        let labeled = data.labeled_nodes();
        match unseen_fraction {
            Some(f) => inductive_split(data.node_count(), &labeled, f, ratios, seed),
            None => make_splits(&labeled, ratios, seed),
        }
    }

    pub fn new(name: &str, data: LabeledHypergraph, split: SplitSpec) -> Result<Self> {
        for &n in split.train.iter().chain(&split.valid).chain(&split.test) {
            if n >= data.node_count() || data.labels[n].is_none() {
                return Err(Error::Consistency(format!(
                    "split node {n} is not a labeled node"
                )));
            }
        }
        Ok(ClassificationDataset {
            name: name.to_string(),
            data,
            split,
        })
    }

    /// Message-passing graph used while training: hyperedges touching unseen nodes removed.
    pub fn train_graph(&self) -> KnowledgeHypergraph {
        match &self.split.unseen {
            Some(mask) => self.data.graph.without_entities(mask),
            None => self.data.graph.clone(),
        }
    }

    /// Writes the three data files and, for transductive splits, the three `.idx` files,
    /// in the layout [`ClassificationDataset::load`] reads.
    pub fn save(&self, dir: impl AsRef<Path>) -> Result<()> {
        let dir = dir.as_ref();
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let write = |file: &str, text: String| {
            let path = dir.join(file);
            fs::write(&path, text).map_err(|e| Error::io(&path, e))
        };
        let lines = |rows: Vec<String>| rows.into_iter().map(|r| r + "\n").collect::<String>();
        let join = |xs: &mut dyn Iterator<Item = String>| xs.collect::<Vec<_>>().join(" ");

        let d = &self.data;
        write(
            "edges.txt",
            lines(
                d.graph
                    .tuples()
                    .iter()
                    .map(|t| join(&mut t.entities.iter().map(|e| e.to_string())))
                    .collect(),
            ),
        )?;
        write(
            "features.txt",
            lines(
                (0..d.node_count())
                    .map(|n| join(&mut d.feature_row(n).iter().map(|x| x.to_string())))
                    .collect(),
            ),
        )?;
        write(
            "labels.txt",
            lines(
                (0..d.node_count())
                    .filter_map(|n| d.labels[n].map(|c| format!("{n} {c}")))
                    .collect(),
            ),
        )?;
        if self.split.unseen.is_none() {
            for (file, idx) in [
                ("train.idx", &self.split.train),
                ("valid.idx", &self.split.valid),
                ("test.idx", &self.split.test),
            ] {
                write(file, lines(idx.iter().map(|i| i.to_string()).collect()))?;
            }
        }
        Ok(())
    }

    /// Unseen nodes that carry a label.
    pub fn unseen_nodes(&self) -> Vec<usize> {
        match &self.split.unseen {
            Some(mask) => (0..mask.len())
                .filter(|&n| mask[n] && self.data.labels[n].is_some())
                .collect(),
            None => Vec::new(),
        }
    }
}
