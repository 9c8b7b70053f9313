//! Link prediction on the synthetic family tree, then a reload from the checkpoint.
//!
//! `cargo run --release --example link_prediction`

use h2gnn::data::synthetic::hierarchy_link_dataset;
use h2gnn::decoders::DecoderKind;
use h2gnn::rng::seeded;
use h2gnn::train::{build_link_model, evaluate_link, train_link_prediction, TrainConfig};

fn main() -> h2gnn::Result<()> {
    let ds = hierarchy_link_dataset(0);
    println!(
        "{}: {} entities, {} relations, {}/{}/{} tuples",
        ds.name,
        ds.graph.entity_count(),
        ds.graph.relation_count(),
        ds.split.train.len(),
        ds.split.valid.len(),
        ds.split.test.len()
    );

    // small task, so a narrow model and a larger step than the defaults
    let cfg = TrainConfig {
        dim: 32,
        iterations: 300,
        learning_rate: 0.2,
        decoder: DecoderKind::MDistMult,
        ..TrainConfig::link_prediction()
    };
    let out = train_link_prediction(&ds, &cfg)?;
    println!(
        "best validation MRR {:.4} at iteration {}",
        out.best_valid_mrr.unwrap_or(0.0),
        out.best_iteration
    );
    let test = out.test.as_ref().expect("the family tree has a test split");
    println!(
        "test filtered: MRR {:.4}  Hits@1 {:.4}  Hits@3 {:.4}  Hits@10 {:.4}",
        test.filtered.mrr, test.filtered.hits1, test.filtered.hits3, test.filtered.hits10
    );
    println!("test raw MRR {:.4}", test.raw.mrr);

    let ckpt = out.checkpoint(&ds.name);
    let mut model = build_link_model(&ds, &ckpt.config, &mut seeded(ckpt.config.seed))?;
    ckpt.load_into(&mut model.store)?;
    let again = evaluate_link(
        &model,
        &ds.train_graph(),
        &ds.tuples_of(&ds.split.test),
        &ds.known_positives(),
    )?;
    assert_eq!(again.filtered, test.filtered);
    println!("reloaded checkpoint reproduces the test metrics");
    Ok(())
}
