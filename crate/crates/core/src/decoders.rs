//! Task heads on origin-tangent vectors: tuple scorers and the softmax classifier.
//!
//! * m-DistMult: `Σ_j r_j Π_i e_{i,j}`
//! * HSimplE: the same product after rotating entity `i` by `(i−1)·d/n` coordinates
//! * mTransH: `−‖Σ_i a_{r,i} (e_i − (w_r·e_i) w_r)‖²` with unit normals `w_r`

use std::fmt;
use std::str::FromStr;

use crate::autodiff::{ParamId, ParamStore, Tape, Var};
use crate::encoder::{gaussian_table, lookup};
use crate::error::{Error, Result};
use crate::lorentz::{self, Curvature, LorentzPoint};
use crate::rng::Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum DecoderKind {
    #[serde(rename = "m-distmult")]
    MDistMult,
    #[serde(rename = "m-transh")]
    MTransH,
    #[serde(rename = "hsimple")]
    HSimplE,
    #[serde(rename = "softmax")]
    Softmax,
}

impl DecoderKind {
    pub const ALL: [DecoderKind; 4] = [
        DecoderKind::MDistMult,
        DecoderKind::MTransH,
        DecoderKind::HSimplE,
        DecoderKind::Softmax,
    ];

    pub fn name(self) -> &'static str {
        match self {
            DecoderKind::MDistMult => "m-distmult",
            DecoderKind::MTransH => "m-transh",
            DecoderKind::HSimplE => "hsimple",
            DecoderKind::Softmax => "softmax",
        }
    }

    pub fn is_tuple_scorer(self) -> bool {
        self != DecoderKind::Softmax
    }
}

impl fmt::Display for DecoderKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DecoderKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        DecoderKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| {
                Error::Config(format!(
                    "unknown decoder `{s}` (m-distmult, m-transh, hsimple, softmax)"
                ))
            })
    }
}

/// Space part of `log_o(p)` after checking that `p` lies on the hyperboloid.
pub fn to_tangent(p: &LorentzPoint, k: Curvature) -> Result<Vec<f64>> {
    let checked = LorentzPoint::new(p.coords().to_vec(), k)?;
    Ok(lorentz::origin_log(&checked, k))
}

/// Factors of each coordinate are multiplied in sorted order, so the score is
/// bitwise identical under any permutation of `entities`.
pub fn score_mdistmult(r: &[f64], entities: &[&[f64]]) -> f64 {
    let mut factors = Vec::with_capacity(entities.len());
    (0..r.len())
        .map(|j| {
            factors.clear();
            factors.extend(entities.iter().map(|e| e[j]));
            factors.sort_unstable_by(f64::total_cmp);
            r[j] * factors.iter().product::<f64>()
        })
        .sum()
}

/// `shift(e, s)_j = e_{(j+s) mod d}`
pub fn shift(e: &[f64], s: usize) -> Vec<f64> {
    let d = e.len();
    (0..d).map(|j| e[(j + s) % d]).collect()
}

pub fn check_hsimple_dims(dim: usize, max_arity: usize) -> Result<()> {
    if max_arity == 0 || dim % max_arity != 0 {
        return Err(Error::Config(format!(
            "hsimple needs the dimension ({dim}) to be divisible by the maximum arity ({max_arity})"
        )));
    }
    Ok(())
}

pub fn score_hsimple(r: &[f64], entities: &[&[f64]], max_arity: usize) -> Result<f64> {
    let d = r.len();
    check_hsimple_dims(d, max_arity)?;
    let step = d / max_arity;
    let shifted: Vec<Vec<f64>> = entities
        .iter()
        .enumerate()
        .map(|(i, e)| shift(e, i * step))
        .collect();
    let refs: Vec<&[f64]> = shifted.iter().map(Vec::as_slice).collect();
    Ok(score_mdistmult(r, &refs))
}

/// `a` holds one weight per position (at least the tuple's arity).
pub fn score_mtransh(w: &[f64], a: &[f64], entities: &[&[f64]]) -> f64 {
    let mut acc = vec![0.0; w.len()];
    for (e, ai) in entities.iter().zip(a) {
        let proj: f64 = w.iter().zip(*e).map(|(x, y)| x * y).sum();
        for ((s, x), wj) in acc.iter_mut().zip(*e).zip(w) {
            *s += ai * (x - proj * wj);
        }
    }
    -acc.iter().map(|s| s * s).sum::<f64>()
}

/// Probabilities with max-subtraction.
pub fn softmax(logits: &[f64]) -> Vec<f64> {
    let m = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let e: Vec<f64> = logits.iter().map(|l| (l - m).exp()).collect();
    let s: f64 = e.iter().sum();
    e.into_iter().map(|x| x / s).collect()
}

/// `softmax(W x + b)` with `W` row-major `C × d`.
pub fn classify_softmax(x: &[f64], weight: &[f64], bias: &[f64]) -> Vec<f64> {
    let d = x.len();
    let logits: Vec<f64> = bias
        .iter()
        .enumerate()
        .map(|(c, b)| {
            b + weight[c * d..(c + 1) * d]
                .iter()
                .zip(x)
                .map(|(w, v)| w * v)
                .sum::<f64>()
        })
        .collect();
    softmax(&logits)
}

/// Tape versions of the scorers.
pub mod diff {
    use super::*;

    pub fn mdistmult(t: &mut Tape, r: Var, entities: &[Var]) -> Var {
        let mut prod = r;
        for &e in entities {
            prod = t.mul(prod, e);
        }
        t.sum(prod)
    }

    pub fn shift(t: &mut Tape, e: Var, s: usize) -> Var {
        let d = t.value(e).len();
        let s = s % d;
        if s == 0 {
            return e;
        }
        let head = t.slice(e, s, d - s);
        let tail = t.slice(e, 0, s);
        t.concat(&[head, tail])
    }

    pub fn hsimple(t: &mut Tape, r: Var, entities: &[Var], max_arity: usize) -> Var {
        let step = t.value(r).len() / max_arity;
        let shifted: Vec<Var> = entities
            .iter()
            .enumerate()
            .map(|(i, &e)| shift(t, e, i * step))
            .collect();
        mdistmult(t, r, &shifted)
    }

    /// `a` are scalar nodes, one per entity.
    pub fn mtransh(t: &mut Tape, w: Var, a: &[Var], entities: &[Var]) -> Var {
        let terms: Vec<Var> = entities
            .iter()
            .zip(a)
            .map(|(&e, &ai)| {
                let p = t.dot(w, e);
                let along = t.mul(w, p);
                let perp = t.sub(e, along);
                t.mul(perp, ai)
            })
            .collect();
        let s = t.add_n(&terms);
        let sq = t.dot(s, s);
        t.neg(sq)
    }

    /// Logits `W x + b`.
    pub fn logits(t: &mut Tape, weight: Var, classes: usize, bias: Var, x: Var) -> Var {
        let wx = t.matvec(weight, classes, x);
        t.add(wx, bias)
    }
}

/// Tuple scorer with its parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct TupleDecoder {
    kind: DecoderKind,
    relation_count: usize,
    max_arity: usize,
    dim: usize,
    share_relations: bool,
}

impl TupleDecoder {
    /// With `share_relations` the encoder's `relation` table doubles as the score table.
    pub fn new(
        kind: DecoderKind,
        relation_count: usize,
        max_arity: usize,
        dim: usize,
        share_relations: bool,
    ) -> Result<Self> {
        match kind {
            DecoderKind::Softmax => {
                return Err(Error::Config(
                    "softmax is a node classifier, not a tuple scorer".into(),
                ));
            }
            DecoderKind::HSimplE => check_hsimple_dims(dim, max_arity)?,
            _ => {}
        }
        Ok(TupleDecoder {
            kind,
            relation_count,
            max_arity,
            dim,
            share_relations,
        })
    }

    pub fn kind(&self) -> DecoderKind {
        self.kind
    }

    fn relation_table(&self, store: &ParamStore) -> Result<ParamId> {
        lookup(
            store,
            if self.share_relations {
                "relation"
            } else {
                "decoder.relation"
            },
        )
    }

    pub fn init_params(&self, store: &mut ParamStore, rng: &mut Rng) -> Result<()> {
        let (r, d, n) = (self.relation_count, self.dim, self.max_arity);
        match self.kind {
            DecoderKind::MTransH => {
                let mut normals = gaussian_table(r, d, 1.0, rng);
                normalize_rows(&mut normals, d);
                store.insert("decoder.normal", &[r, d], normals)?;
                store.insert(
                    "decoder.position_weight",
                    &[r, n],
                    gaussian_table(r, n, 1.0, rng),
                )?;
            }
            _ if !self.share_relations => {
                store.insert("decoder.relation", &[r, d], gaussian_table(r, d, 1.0, rng))?;
            }
            _ => {}
        }
        Ok(())
    }

    /// Keeps the mTransH normals on the unit sphere; called after every optimizer step.
    pub fn renormalize(&self, store: &mut ParamStore) -> Result<()> {
        if self.kind == DecoderKind::MTransH {
            let id = lookup(store, "decoder.normal")?;
            normalize_rows(store.value_mut(id), self.dim);
        }
        Ok(())
    }

    fn check_arity(&self, arity: usize) -> Result<()> {
        if arity == 0 || arity > self.max_arity {
            return Err(Error::Argument(format!(
                "tuple arity {arity} outside 1..={}",
                self.max_arity
            )));
        }
        Ok(())
    }

    pub fn score_tape(
        &self,
        tape: &mut Tape,
        store: &ParamStore,
        relation: usize,
        entities: &[Var],
    ) -> Result<Var> {
        self.check_arity(entities.len())?;
        Ok(match self.kind {
            DecoderKind::MTransH => {
                let w = tape.param_row(store, lookup(store, "decoder.normal")?, relation);
                let aid = lookup(store, "decoder.position_weight")?;
                let a: Vec<Var> = (0..entities.len())
                    .map(|i| tape.param_slice(store, aid, relation * self.max_arity + i, 1))
                    .collect();
                diff::mtransh(tape, w, &a, entities)
            }
            DecoderKind::HSimplE => {
                let r = tape.param_row(store, self.relation_table(store)?, relation);
                diff::hsimple(tape, r, entities, self.max_arity)
            }
            DecoderKind::MDistMult => {
                let r = tape.param_row(store, self.relation_table(store)?, relation);
                diff::mdistmult(tape, r, entities)
            }
            DecoderKind::Softmax => unreachable!("rejected in new"),
        })
    }

    pub fn score(&self, store: &ParamStore, relation: usize, entities: &[&[f64]]) -> Result<f64> {
        self.check_arity(entities.len())?;
        Ok(match self.kind {
            DecoderKind::MTransH => {
                let w = store.row(lookup(store, "decoder.normal")?, relation);
                let a = store.row(lookup(store, "decoder.position_weight")?, relation);
                score_mtransh(w, a, entities)
            }
            DecoderKind::HSimplE => score_hsimple(
                store.row(self.relation_table(store)?, relation),
                entities,
                self.max_arity,
            )?,
            DecoderKind::MDistMult => {
                score_mdistmult(store.row(self.relation_table(store)?, relation), entities)
            }
            DecoderKind::Softmax => unreachable!("rejected in new"),
        })
    }
}

fn normalize_rows(values: &mut [f64], d: usize) {
    for row in values.chunks_mut(d) {
        let n = row.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 0.0 {
            row.iter_mut().for_each(|x| *x /= n);
        } else {
            row[0] = 1.0;
        }
    }
}

/// Softmax classification head `C × d` plus bias.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SoftmaxClassifier {
    pub classes: usize,
    pub dim: usize,
}

impl SoftmaxClassifier {
    pub fn init_params(&self, store: &mut ParamStore, rng: &mut Rng) -> Result<()> {
        let std = (1.0 / self.dim as f64).sqrt();
        store.insert(
            "classifier.weight",
            &[self.classes, self.dim],
            gaussian_table(self.classes, self.dim, std, rng),
        )?;
        store.insert("classifier.bias", &[self.classes], vec![0.0; self.classes])?;
        Ok(())
    }

    pub fn logits_tape(&self, tape: &mut Tape, store: &ParamStore, x: Var) -> Result<Var> {
        let w = tape.param(store, lookup(store, "classifier.weight")?);
        let b = tape.param(store, lookup(store, "classifier.bias")?);
        Ok(diff::logits(tape, w, self.classes, b, x))
    }

    pub fn probabilities(&self, store: &ParamStore, x: &[f64]) -> Result<Vec<f64>> {
        let w = store.value(lookup(store, "classifier.weight")?);
        let b = store.value(lookup(store, "classifier.bias")?);
        Ok(classify_softmax(x, w, b))
    }
}
