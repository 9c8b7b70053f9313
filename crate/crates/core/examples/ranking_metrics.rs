//! Filtered and raw ranks, MRR and Hits@k on a hand-scored toy.
//!
//! `cargo run --example ranking_metrics`

use std::collections::HashSet;

use h2gnn::data::KnowledgeTuple;
use h2gnn::metrics::{aggregate, rank_query};

fn main() -> h2gnn::Result<()> {
    // entity e scores 10 - e wherever it appears in position 2
    let score = |t: &KnowledgeTuple| 10.0 - t.entities[1] as f64;
    let query = KnowledgeTuple::new(0, vec![7, 3]);
    // (7, 1) is another true fact, so the filtered setting ignores it
    let known: HashSet<_> = [query.clone(), KnowledgeTuple::new(0, vec![7, 1])]
        .into_iter()
        .collect();

    let r = rank_query(&query, 2, 8, score, &known)?;
    println!("raw rank {}, filtered rank {}", r.raw, r.filtered);

    let report = aggregate(&[1, 2, 4, 12])?;
    println!(
        "ranks {:?}: MRR {:.4}  Hits@1 {:.2}  Hits@3 {:.2}  Hits@10 {:.2}",
        report.ranks, report.mrr, report.hits1, report.hits3, report.hits10
    );
    Ok(())
}
