//! Central finite-difference verification of tape gradients.

use crate::autodiff::params::ParamStore;
use crate::autodiff::tape::{Tape, Var};
use crate::error::{Error, Result};

/// One-sided slopes disagreeing by more than this (relative) mark a kink.
const KINK_TOL: f64 = 1e-2;

#[derive(Debug, Clone, PartialEq)]
pub struct GradCheckReport {
    pub eps: f64,
    pub max_rel_error: f64,
    /// Parameter name and flat index of the worst entry.
    pub worst: Option<(String, usize)>,
    pub checked: usize,
    pub kinks_excluded: usize,
}

/// Compares analytic gradients against `(L(θ+εeᵢ) − L(θ−εeᵢ)) / 2ε` for every entry.
///
/// The error for an entry is `|g_a − g_n| / max(1e-8, |g_a| + |g_n|)`. Entries whose
/// forward and backward one-sided slopes disagree are sitting within `ε` of a kink
/// (relu, abs, max) and are excluded. Gradients in `store` are zero on return.
pub fn finite_diff_check<F>(
    mut loss: F,
    store: &mut ParamStore,
    eps: f64,
) -> Result<GradCheckReport>
where
    F: FnMut(&mut Tape, &ParamStore) -> Var,
{
    if !(1e-7..=1e-3).contains(&eps) {
        return Err(Error::Argument(format!(
            "eps must lie in [1e-7, 1e-3], got {eps}"
        )));
    }
    store.zero_grad();
    let mut tape = Tape::new();
    let out = loss(&mut tape, store);
    let base = tape.scalar_value(out);
    tape.backward(out, store)?;
    drop(tape);
    let analytic: Vec<Vec<f64>> = store.tensors().iter().map(|t| t.grad.clone()).collect();
    store.zero_grad();
    let mut eval = |store: &ParamStore| {
        let mut tape = Tape::new();
        let out = loss(&mut tape, store);
        tape.scalar_value(out)
    };

    let mut report = GradCheckReport {
        eps,
        max_rel_error: 0.0,
        worst: None,
        checked: 0,
        kinks_excluded: 0,
    };
    let ids: Vec<_> = store.ids().collect();
    for id in ids {
        for i in 0..store.value(id).len() {
            let orig = store.value(id)[i];
            store.value_mut(id)[i] = orig + eps;
            let plus = eval(store);
            store.value_mut(id)[i] = orig - eps;
            let minus = eval(store);
            store.value_mut(id)[i] = orig;

            let forward = (plus - base) / eps;
            let backward = (base - minus) / eps;
            let scale = 1f64.max(forward.abs()).max(backward.abs());
            if (forward - backward).abs() > KINK_TOL * scale {
                report.kinks_excluded += 1;
                continue;
            }
            let numeric = (plus - minus) / (2.0 * eps);
            let ga = analytic[id.index()][i];
            let err = (ga - numeric).abs() / 1e-8f64.max(ga.abs() + numeric.abs());
            report.checked += 1;
            if report.worst.is_none() || err > report.max_rel_error {
                report.max_rel_error = err;
                report.worst = Some((store.tensor(id).name.clone(), i));
            }
        }
    }
    Ok(report)
}
