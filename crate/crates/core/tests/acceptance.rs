//! Acceptance gate. Every test prints one `PASS`/`FAIL` line with its runtime; run with
//! `cargo test --test acceptance -- --nocapture --test-threads=1` to see them.

use std::collections::HashSet;
use std::time::{Duration, Instant};

use rand::Rng as _;
use rand_distr::{Distribution, Normal};

use h2gnn::autodiff::{ParamStore, Tape, Var};
use h2gnn::data::expand::hyper_star_expand;
use h2gnn::data::synthetic::{clustered_dataset, hierarchy_link_dataset, random_hypergraph};
use h2gnn::data::{KnowledgeHypergraph, KnowledgeTuple};
use h2gnn::decoders::{score_hsimple, score_mdistmult, score_mtransh, DecoderKind};
use h2gnn::encoder::{Encoder, EncoderConfig, HyperStarEncoder, TaskMode};
use h2gnn::lorentz::{
    centroid, exp_map, lift_from_euclidean, log_map, lorentz_linear, lorentz_norm, minkowski_inner,
    squared_lorentz_distance, Activation, Curvature, LorentzLinearParams, LorentzPoint,
    TangentVector,
};
use h2gnn::metrics::{aggregate, rank_query};
use h2gnn::rng::{seeded, Rng};
use h2gnn::train::{
    check_pipeline_gradients, sample_negatives, train_classification, train_link_prediction,
    train_link_prediction_with, GradGateConfig, TrainConfig, GRAD_TOLERANCE,
};

const K: Curvature = Curvature::STANDARD;

fn report(id: u32, name: &str, ok: bool, elapsed: Duration, limit: Option<Duration>, detail: &str) {
    let in_time = limit.is_none_or(|l| elapsed <= l);
    let verdict = if ok && in_time { "PASS" } else { "FAIL" };
    let bound = limit
        .map(|l| format!(" (limit {:.0?})", l))
        .unwrap_or_default();
    println!("[acceptance {id:>2}] {verdict} {name}: {detail}; {elapsed:.2?}{bound}");
    assert!(ok, "criterion {id} ({name}) failed: {detail}");
    assert!(
        in_time,
        "criterion {id} ({name}) exceeded its time bound: {elapsed:?}"
    );
}

fn gaussian(rng: &mut Rng, n: usize, std: f64) -> Vec<f64> {
    let d = Normal::new(0.0, std).unwrap();
    (0..n).map(|_| d.sample(rng)).collect()
}

fn random_point(rng: &mut Rng, dim: usize, std: f64) -> LorentzPoint {
    lift_from_euclidean(&gaussian(rng, dim, std), K)
}

/// Random tangent vector at `x` with Lorentzian norm `norm`.
fn random_tangent(rng: &mut Rng, x: &LorentzPoint, norm: f64) -> TangentVector {
    let u = gaussian(rng, x.coords().len(), 1.0);
    // u − ⟨x,u⟩/⟨x,x⟩ · x
    let c = minkowski_inner(x.coords(), &u).unwrap() / K.inv();
    let v: Vec<f64> = u.iter().zip(x.coords()).map(|(a, b)| a - c * b).collect();
    let n = lorentz_norm(&v);
    TangentVector::new(v.iter().map(|a| a * norm / n).collect())
}

#[test]
fn c01_geometry_suite() {
    let start = Instant::now();
    let mut rng = seeded(1);
    let mut worst_member = 0.0f64;
    let mut worst_roundtrip = 0.0f64;
    for _ in 0..1000 {
        let dim = rng.random_range(1..=16);
        let x = random_point(&mut rng, dim, 0.5);
        worst_member = worst_member.max(x.membership_error(K));

        let norm = rng.random_range(0.0..=5.0);
        let v = random_tangent(&mut rng, &x, norm);
        let y = exp_map(&x, &v, K);
        worst_member = worst_member.max(y.membership_error(K));
        let back = log_map(&x, &y, K).unwrap();
        let err = back
            .coords()
            .iter()
            .zip(v.coords())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        worst_roundtrip = worst_roundtrip.max(err);

        let m = rng.random_range(1..=8);
        let pts: Vec<LorentzPoint> = (0..m).map(|_| random_point(&mut rng, dim, 1.0)).collect();
        worst_member = worst_member.max(centroid(&pts, K).unwrap().membership_error(K));

        let rows = rng.random_range(1..=16);
        let cols = dim + 1;
        let params = LorentzLinearParams {
            weight: gaussian(&mut rng, rows * cols, 1.0),
            rows,
            v: gaussian(&mut rng, cols, 1.0),
            b: gaussian(&mut rng, rows, 1.0),
            b_prime: gaussian(&mut rng, 1, 1.0)[0],
            lambda: rng.random_range(0.1..5.0),
            activation: if rng.random() {
                Activation::Relu
            } else {
                Activation::Identity
            },
        };
        worst_member =
            worst_member.max(lorentz_linear(&params, &x, K).unwrap().membership_error(K));
    }
    report(
        1,
        "geometry suite",
        worst_member < 1e-9 && worst_roundtrip < 1e-6,
        start.elapsed(),
        Some(Duration::from_secs(5)),
        &format!("max membership error {worst_member:.2e} (< 1e-9), max exp/log roundtrip error {worst_roundtrip:.2e} (< 1e-6)"),
    );
}

#[test]
fn c02_centroid_optimality() {
    let start = Instant::now();
    let mut rng = seeded(2);
    let mut worst = f64::INFINITY;
    for _ in 0..100 {
        let dim = rng.random_range(1..=16);
        let m = rng.random_range(1..=8);
        let pts: Vec<LorentzPoint> = (0..m).map(|_| random_point(&mut rng, dim, 1.0)).collect();
        let c = centroid(&pts, K).unwrap();
        let cost = |w: &LorentzPoint| {
            pts.iter()
                .map(|p| squared_lorentz_distance(p, w, K))
                .sum::<f64>()
        };
        let base = cost(&c);
        for _ in 0..200 {
            let v = random_tangent(&mut rng, &c, 1e-2);
            worst = worst.min(cost(&exp_map(&c, &v, K)) - base);
        }
    }
    report(
        2,
        "centroid optimality",
        worst >= -1e-9,
        start.elapsed(),
        Some(Duration::from_secs(10)),
        &format!("smallest cost change under perturbation {worst:.3e} (>= -1e-9)"),
    );
}

#[test]
fn c03_gradient_gate() {
    let start = Instant::now();
    let cfg = GradGateConfig::default();
    let mut parts = Vec::new();
    let mut ok = true;
    for kind in [
        DecoderKind::MDistMult,
        DecoderKind::MTransH,
        DecoderKind::HSimplE,
    ] {
        let r = check_pipeline_gradients(kind, &cfg).unwrap();
        ok &= r.max_rel_error < GRAD_TOLERANCE;
        parts.push(format!("{kind} {:.2e}", r.max_rel_error));
    }
    report(
        3,
        "gradient gate",
        ok,
        start.elapsed(),
        Some(Duration::from_secs(30)),
        &format!(
            "eps {:e}, max relative error {} (< 1e-4)",
            cfg.eps,
            parts.join(", ")
        ),
    );
}

#[test]
fn c04_position_awareness() {
    let start = Instant::now();
    let mut rng = seeded(4);
    let d = 8;
    let tuple = KnowledgeTuple::new(0, vec![0, 1, 2]);
    let graph = KnowledgeHypergraph::new(4, 1, vec![tuple.clone()]).unwrap();
    let swapped =
        KnowledgeHypergraph::new(4, 1, vec![KnowledgeTuple::new(0, vec![1, 0, 2])]).unwrap();
    let cfg = EncoderConfig {
        layers: 1,
        dim: d,
        dropout: 0.0,
        k: K,
        mode: TaskMode::LinkPrediction,
        activation: Activation::Identity,
    };
    let enc = HyperStarEncoder::for_link_prediction(cfg, 4, 1, 4).unwrap();
    let mut store = ParamStore::new();
    enc.init_params(&mut store, &mut rng).unwrap();
    let a = enc.encode_points(&store, &graph).unwrap();
    let b = enc.encode_points(&store, &swapped).unwrap();
    let enc_delta = a
        .iter()
        .zip(&b)
        .flat_map(|(p, q)| {
            p.coords()
                .iter()
                .zip(q.coords())
                .map(|(s, t)| (s - t).abs())
        })
        .fold(0.0, f64::max);

    let e: Vec<Vec<f64>> = (0..3).map(|_| gaussian(&mut rng, d, 1.0)).collect();
    let fwd: Vec<&[f64]> = vec![&e[0], &e[1], &e[2]];
    let rev: Vec<&[f64]> = vec![&e[1], &e[0], &e[2]];
    let r = gaussian(&mut rng, d, 1.0);
    let mut w = gaussian(&mut rng, d, 1.0);
    let wn = w.iter().map(|x| x * x).sum::<f64>().sqrt();
    w.iter_mut().for_each(|x| *x /= wn);
    let pos_w = gaussian(&mut rng, 4, 1.0);
    let hs = (score_hsimple(&r, &fwd, 4).unwrap() - score_hsimple(&r, &rev, 4).unwrap()).abs();
    let th = (score_mtransh(&w, &pos_w, &fwd) - score_mtransh(&w, &pos_w, &rev)).abs();
    let dm_same = score_mdistmult(&r, &fwd) == score_mdistmult(&r, &rev);
    report(
        4,
        "position-awareness witness",
        enc_delta > 1e-6 && hs > 1e-6 && th > 1e-6 && dm_same,
        start.elapsed(),
        None,
        &format!(
            "encoder change {enc_delta:.3e}, hsimple change {hs:.3e}, m-transh change {th:.3e} (all > 1e-6), m-distmult unchanged: {dm_same}"
        ),
    );
}

#[test]
fn c05_expansion_losslessness() {
    let start = Instant::now();
    let mut rng = seeded(5);
    let mut exact = 0;
    for _ in 0..100 {
        let tuples = rng.random_range(0..=50);
        let max_arity = rng.random_range(2..=6);
        let g = random_hypergraph(&mut rng, 30, 4, tuples, max_arity).unwrap();
        if hyper_star_expand(&g).reconstruct().unwrap() == g {
            exact += 1;
        }
    }
    report(
        5,
        "expansion losslessness",
        exact == 100,
        start.elapsed(),
        None,
        &format!("{exact}/100 random hypergraphs reconstructed exactly"),
    );
}

/// Settings of the synthetic link-prediction task.
fn synthetic_lp_config(seed: u64) -> TrainConfig {
    TrainConfig {
        dim: 32,
        layers: 1,
        neg_ratio: 10,
        iterations: 500,
        learning_rate: 0.2,
        decoder: DecoderKind::MDistMult,
        seed,
        ..TrainConfig::link_prediction()
    }
}

#[test]
fn c06_synthetic_link_prediction() {
    let start = Instant::now();
    let ds = hierarchy_link_dataset(0);
    let out = train_link_prediction(&ds, &synthetic_lp_config(0)).unwrap();
    let mrr = out.best_valid_mrr.unwrap();
    report(
        6,
        "synthetic link prediction",
        mrr >= 0.9,
        start.elapsed(),
        Some(Duration::from_secs(120)),
        &format!(
            "best validation MRR {mrr:.4} at iteration {} (>= 0.9)",
            out.best_iteration
        ),
    );
}

#[test]
fn c07_synthetic_node_classification() {
    let start = Instant::now();
    let ds = clustered_dataset(0).unwrap();
    let cfg = TrainConfig::classification();
    assert_eq!(
        (cfg.layers, cfg.dim, cfg.dropout, cfg.epochs),
        (2, 8, 0.5, 200)
    );
    let out = train_classification(&ds, &cfg).unwrap();
    let acc = out.accuracies.test.unwrap();
    report(
        7,
        "synthetic node classification",
        acc >= 0.9,
        start.elapsed(),
        Some(Duration::from_secs(30)),
        &format!(
            "test accuracy {acc:.4} (>= 0.9), selected epoch {}",
            out.best_epoch
        ),
    );
}

#[test]
fn c08_sampling_contract() {
    let start = Instant::now();
    let mut rng = seeded(8);
    let mut ok = true;
    for _ in 0..1000 {
        let entity_count = rng.random_range(2..200);
        let arity = rng.random_range(2..=6);
        let x = KnowledgeTuple::new(
            0,
            (0..arity)
                .map(|_| rng.random_range(0..entity_count))
                .collect(),
        );
        let n = rng.random_range(1..=12);
        let seed = rng.random();
        let negs = sample_negatives(&x, n, entity_count, &mut seeded(seed)).unwrap();
        ok &= negs.len() == n * arity;
        ok &= negs.iter().all(|t| {
            t.relation == x.relation
                && t.entities
                    .iter()
                    .zip(&x.entities)
                    .filter(|(a, b)| a != b)
                    .count()
                    == 1
        });
        ok &= negs == sample_negatives(&x, n, entity_count, &mut seeded(seed)).unwrap();
    }
    report(
        8,
        "sampling contract",
        ok,
        start.elapsed(),
        None,
        "1000 tuples: N*arity negatives, Hamming distance 1, seed-reproducible",
    );
}

#[test]
fn c09_metric_arithmetic() {
    let start = Instant::now();
    let a = aggregate(&[1, 2, 4]).unwrap();
    let b = aggregate(&[1, 3, 12]).unwrap();

    let mut rng = seeded(9);
    let graph = random_hypergraph(&mut rng, 10, 2, 25, 3).unwrap();
    let known: HashSet<KnowledgeTuple> = graph.tuples().iter().cloned().collect();
    let emb: Vec<f64> = gaussian(&mut rng, 10, 1.0);
    let mut filtered_le_raw = true;
    let mut queries = 0;
    for t in graph.tuples() {
        for pos in 1..=t.arity() {
            let q = rank_query(
                t,
                pos,
                10,
                |c| c.entities.iter().map(|&e| emb[e]).sum::<f64>() + c.relation as f64,
                &known,
            )
            .unwrap();
            filtered_le_raw &= q.filtered <= q.raw;
            queries += 1;
        }
    }
    let ok = (a.mrr - 0.5833).abs() < 1e-4 && b.hits10 == 2.0 / 3.0 && filtered_le_raw;
    report(
        9,
        "metric arithmetic",
        ok,
        start.elapsed(),
        None,
        &format!(
            "MRR(1,2,4) = {:.4}, Hits@10(1,3,12) = {}, filtered <= raw on all {queries} queries: {filtered_le_raw}",
            a.mrr, b.hits10
        ),
    );
}

/// Same hyper-star wiring as the real encoder, with affine maps and arithmetic means in
/// place of Lorentz linear layers and centroids.
struct EuclideanStar {
    entities: usize,
    relations: usize,
    max_arity: usize,
    dim: usize,
    layers: usize,
    dropout: f64,
}

impl EuclideanStar {
    fn mean(tape: &mut Tape, xs: &[Var]) -> Var {
        let s = tape.add_n(xs);
        tape.scale(s, 1.0 / xs.len() as f64)
    }

    fn affine(tape: &mut Tape, store: &ParamStore, prefix: &str, d: usize, x: Var) -> Var {
        let w = tape.param(store, store.id(&format!("{prefix}.weight")).unwrap());
        let b = tape.param(store, store.id(&format!("{prefix}.b")).unwrap());
        let y = tape.matvec(w, d, x);
        tape.add(y, b)
    }
}

impl Encoder for EuclideanStar {
    fn dim(&self) -> usize {
        self.dim
    }

    fn init_params(&self, store: &mut ParamStore, rng: &mut Rng) -> h2gnn::Result<()> {
        let d = self.dim;
        store.insert(
            "entity",
            &[self.entities, d],
            gaussian(rng, self.entities * d, 0.1),
        )?;
        store.insert(
            "relation",
            &[self.relations, d],
            gaussian(rng, self.relations * d, 0.1),
        )?;
        let p = self.relations * self.max_arity;
        store.insert("position", &[p, d], gaussian(rng, p * d, 0.1))?;
        for l in 0..self.layers {
            for m in ["w_h", "w_r", "w_p"] {
                let std = (1.0 / (d as f64 + 1.0)).sqrt();
                store.insert(
                    &format!("layer{l}.{m}.weight"),
                    &[d, d],
                    gaussian(rng, d * d, std),
                )?;
                store.insert(&format!("layer{l}.{m}.b"), &[d], vec![0.0; d])?;
            }
        }
        Ok(())
    }

    fn encode(
        &self,
        tape: &mut Tape,
        store: &ParamStore,
        graph: &KnowledgeHypergraph,
        train: bool,
        rng: &mut Rng,
    ) -> h2gnn::Result<Vec<Var>> {
        let d = self.dim;
        let n = self.max_arity;
        let ent = store.id("entity").unwrap();
        let rel = store.id("relation").unwrap();
        let pos = store.id("position").unwrap();
        let mut x: Vec<Var> = (0..self.entities)
            .map(|e| tape.param_row(store, ent, e))
            .collect();
        for l in 0..self.layers {
            if train && self.dropout > 0.0 {
                for xi in x.iter_mut() {
                    let keep = 1.0 / (1.0 - self.dropout);
                    let mask: Vec<f64> = (0..d)
                        .map(|_| {
                            if rng.random::<f64>() < self.dropout {
                                0.0
                            } else {
                                keep
                            }
                        })
                        .collect();
                    let m = tape.constant(mask);
                    *xi = tape.mul(*xi, m);
                }
            }
            let edge_msgs: Vec<Var> = graph
                .tuples()
                .iter()
                .map(|t| {
                    let members: Vec<Var> = t.entities.iter().map(|&e| x[e]).collect();
                    let h = Self::mean(tape, &members);
                    Self::affine(tape, store, &format!("layer{l}.w_h"), d, h)
                })
                .collect();
            let mut next = Vec::with_capacity(x.len());
            for (i, &xi) in x.iter().enumerate() {
                let inc = graph.incidence(i);
                let mut parts = vec![xi];
                for m in inc {
                    let r = graph.tuple(m.tuple).relation;
                    let rv = tape.param_row(store, rel, r);
                    let rm = Self::affine(tape, store, &format!("layer{l}.w_r"), d, rv);
                    let pv = tape.param_row(store, pos, r * n + m.position - 1);
                    let pm = Self::affine(tape, store, &format!("layer{l}.w_p"), d, pv);
                    parts.push(Self::mean(tape, &[edge_msgs[m.tuple], rm, pm]));
                }
                next.push(Self::mean(tape, &parts));
            }
            x = next;
        }
        Ok(x)
    }
}

#[test]
fn c10_euclidean_ablation_direction() {
    let start = Instant::now();
    let seeds = [0u64, 1, 2, 3, 4];
    let (mut hyp, mut euc) = (Vec::new(), Vec::new());
    for &seed in &seeds {
        let ds = hierarchy_link_dataset(seed);
        let cfg = synthetic_lp_config(seed);
        hyp.push(
            train_link_prediction(&ds, &cfg)
                .unwrap()
                .best_valid_mrr
                .unwrap(),
        );
        let g = &ds.graph;
        let encoder = EuclideanStar {
            entities: g.entity_count(),
            relations: g.relation_count(),
            max_arity: g.max_arity(),
            dim: cfg.dim,
            layers: cfg.layers,
            dropout: cfg.dropout,
        };
        euc.push(
            train_link_prediction_with(&ds, &cfg, encoder)
                .unwrap()
                .best_valid_mrr
                .unwrap(),
        );
    }
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    let (h, e) = (mean(&hyp), mean(&euc));
    report(
        10,
        "Euclidean-ablation direction",
        h >= e,
        start.elapsed(),
        None,
        &format!("mean MRR over 5 seeds: hyperbolic {h:.4}, Euclidean {e:.4} (hyperbolic >= Euclidean); per seed {hyp:.3?} vs {euc:.3?}"),
    );
}

/// Runs only when `H2GNN_FB_AUTO` names a directory with FB-AUTO train/valid/test files.
#[test]
#[ignore = "multi-hour run on user-supplied FB-AUTO files"]
fn c11_fb_auto_extended() {
    let Ok(dir) = std::env::var("H2GNN_FB_AUTO") else {
        println!("[acceptance 11] SKIP FB-AUTO extended run: H2GNN_FB_AUTO is not set");
        return;
    };
    let start = Instant::now();
    let cfg = TrainConfig {
        decoder: DecoderKind::HSimplE,
        ..TrainConfig::link_prediction()
    };
    let ds = h2gnn::data::LinkDataset::load(&dir, cfg.split_ratios, cfg.seed).unwrap();
    let out = train_link_prediction(&ds, &cfg).unwrap();
    let test = out.test.expect("FB-AUTO has a test split");
    let within = (test.filtered.mrr - 0.757).abs() <= 0.10;
    let flag = if within {
        ""
    } else {
        " FLAG: outside 0.757 ± 0.10"
    };
    println!(
        "[acceptance 11] {} FB-AUTO extended run: filtered MRR {:.4}, Hits@10 {:.4}{flag}; {:.2?}",
        if within { "PASS" } else { "FAIL" },
        test.filtered.mrr,
        test.filtered.hits10,
        start.elapsed()
    );
}
