//! Tape gradients against central differences, first on a hand-built loss and then
//! through the full encoder and every tuple decoder.
//!
//! `cargo run --example gradient_check`

use h2gnn::autodiff::{finite_diff_check, ParamStore};
use h2gnn::decoders::DecoderKind;
use h2gnn::lorentz::{diff, Curvature};
use h2gnn::train::{check_pipeline_gradients, GradGateConfig, GRAD_TOLERANCE};

fn main() -> h2gnn::Result<()> {
    let k = Curvature::STANDARD;
    let mut store = ParamStore::new();
    let u = store.insert("u", &[3], vec![0.2, -0.7, 1.1])?;
    let w = store.insert("w", &[3], vec![0.5, 0.1, -0.3])?;

    // squared distance between two lifted points
    let report = finite_diff_check(
        |t, s| {
            let a = t.param(s, u);
            let b = t.param(s, w);
            let a = diff::lift(t, a, k);
            let b = diff::lift(t, b, k);
            diff::squared_distance(t, a, b, k)
        },
        &mut store,
        1e-5,
    )?;
    println!(
        "distance loss: {} entries, max relative error {:.2e}",
        report.checked, report.max_rel_error
    );

    let cfg = GradGateConfig::default();
    for kind in [
        DecoderKind::MDistMult,
        DecoderKind::MTransH,
        DecoderKind::HSimplE,
    ] {
        let r = check_pipeline_gradients(kind, &cfg)?;
        let verdict = if r.max_rel_error < GRAD_TOLERANCE {
            "ok"
        } else {
            "too large"
        };
        println!(
            "{kind:10} {} entries, max relative error {:.2e} ({verdict})",
            r.checked, r.max_rel_error
        );
    }
    Ok(())
}
