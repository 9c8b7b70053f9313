//! Cross-entropy over a positive and its negatives, and the node-classification NLL.

use crate::autodiff::{Tape, Var};
use crate::error::{Error, Result};

/// Probability floor inside the logarithm of the NLL.
pub const PROB_FLOOR: f64 = 1e-12;

fn logsumexp(xs: impl Iterator<Item = f64> + Clone) -> f64 {
    let m = xs.clone().fold(f64::NEG_INFINITY, f64::max);
    m + xs.map(|x| (x - m).exp()).sum::<f64>().ln()
}

/// `−log(e^{pos} / (e^{pos} + Σ e^{neg}))`
pub fn lp_loss(pos: f64, negs: &[f64]) -> f64 {
    let lse = logsumexp(std::iter::once(pos).chain(negs.iter().copied()));
    (lse - pos).max(0.0)
}

/// Mean of `−log max(p_gold, 1e-12)` over the nodes in `mask`.
pub fn nll_loss(probs: &[Vec<f64>], gold: &[Option<usize>], mask: &[usize]) -> Result<f64> {
    if mask.is_empty() {
        return Err(Error::Argument(
            "negative log-likelihood over an empty node set".into(),
        ));
    }
    let mut total = 0.0;
    for &n in mask {
        let g = gold[n].ok_or_else(|| Error::Argument(format!("node {n} has no label")))?;
        total -= probs[n][g].max(PROB_FLOOR).ln();
    }
    Ok(total / mask.len() as f64)
}

/// `logsumexp(v) − v[index]` with the maximum subtracted as a constant.
fn neg_log_softmax(t: &mut Tape, scores: Var, index: usize) -> Var {
    let m = t
        .value(scores)
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    let shift = t.scalar(-m);
    let z = t.add(scores, shift);
    let e = t.exp(z);
    let s = t.sum(e);
    let lse = t.log(s);
    let zi = t.index(z, index);
    t.sub(lse, zi)
}

/// Tape version of [`lp_loss`].
pub fn lp_loss_tape(t: &mut Tape, pos: Var, negs: &[Var]) -> Var {
    let mut all = Vec::with_capacity(negs.len() + 1);
    all.push(pos);
    all.extend_from_slice(negs);
    let scores = t.concat(&all);
    neg_log_softmax(t, scores, 0)
}

/// `−log softmax(logits)[gold]`. Below the probability floor the term is the constant
/// `−log 1e-12`.
pub fn nll_tape(t: &mut Tape, logits: Var, gold: usize) -> Var {
    let l = neg_log_softmax(t, logits, gold);
    if t.scalar_value(l) > -PROB_FLOOR.ln() {
        t.scalar(-PROB_FLOOR.ln())
    } else {
        l
    }
}

/// Mean or sum of per-item losses.
pub fn reduce(t: &mut Tape, terms: &[Var], sum: bool) -> Var {
    let total = t.add_n(terms);
    if sum {
        total
    } else {
        t.scale(total, 1.0 / terms.len() as f64)
    }
}
