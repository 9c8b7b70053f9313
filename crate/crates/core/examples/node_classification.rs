//! Transductive and inductive node classification on a two-class clustered hypergraph.
//!
//! `cargo run --release --example node_classification`

use h2gnn::data::synthetic::{clustered_dataset, clustered_hypergraph};
use h2gnn::data::ClassificationDataset;
use h2gnn::train::{train_classification, TrainConfig};

fn main() -> h2gnn::Result<()> {
    let ds = clustered_dataset(0)?;
    let cfg = TrainConfig::classification();
    let out = train_classification(&ds, &cfg)?;
    println!(
        "transductive: {} epochs, selected epoch {}, valid {:.4}, test {:.4}",
        cfg.epochs,
        out.best_epoch,
        out.accuracies.valid.unwrap_or(f64::NAN),
        out.accuracies.test.unwrap_or(f64::NAN)
    );

    // Unseen nodes and their hyperedges are hidden while training.
    let cfg = TrainConfig::inductive();
    let data = clustered_hypergraph(120, 5)?;
    let split = ClassificationDataset::derive_split(
        &data,
        cfg.split_ratios,
        cfg.seed,
        cfg.unseen_fraction,
    )?;
    let ds = ClassificationDataset::new("clusters-inductive", data, split)?;
    let out = train_classification(&ds, &cfg)?;
    println!(
        "inductive: {} unseen labeled nodes, test {:.4}, unseen {:.4}",
        ds.unseen_nodes().len(),
        out.accuracies.test.unwrap_or(f64::NAN),
        out.accuracies.unseen.unwrap_or(f64::NAN)
    );
    Ok(())
}
