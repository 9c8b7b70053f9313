//! Hyper-star encoder.
//!
//! Each layer runs two stages over the current node points:
//!
//! 1. φ₁, per hyperedge: `h_e = centroid(members)`.
//! 2. φ₂, per node: `x_i ← centroid({x_i} ∪ {comp(e) : e ∋ x_i})` with
//!    `comp(e) = centroid(W_h h_e, W_r r_e, W_p h_p)` where `h_p` is the position
//!    feature of `(relation of e, position of x_i in e)`.
//!
//! The relation and position tables are shared by all layers; each layer owns its
//! own `W_h`, `W_r`, `W_p` Lorentz linear transforms.

use rand::Rng as _;
use rand_distr::{Distribution, Normal};

use crate::autodiff::{ParamId, ParamStore, Tape, Var};
use crate::data::{KnowledgeHypergraph, LabeledHypergraph};
use crate::error::{Error, Result};
use crate::lorentz::diff::{self, LinearVars};
use crate::lorentz::{self, Activation, Curvature, LorentzLinearParams, LorentzPoint};
use crate::rng::Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TaskMode {
    Classification,
    LinkPrediction,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EncoderConfig {
    pub layers: usize,
    pub dim: usize,
    pub dropout: f64,
    pub k: Curvature,
    pub mode: TaskMode,
    /// `h` inside the message-passing transforms.
    pub activation: Activation,
}

impl EncoderConfig {
    pub fn validate(&self) -> Result<()> {
        if self.layers == 0 {
            return Err(Error::Config("the encoder needs at least one layer".into()));
        }
        if self.dim == 0 {
            return Err(Error::Config("embedding dimension must be positive".into()));
        }
        if !(0.0..1.0).contains(&self.dropout) {
            return Err(Error::Config(format!(
                "dropout must lie in [0, 1), got {}",
                self.dropout
            )));
        }
        Ok(())
    }
}

/// Anything producing one origin-tangent vector per entity on a tape. The training
/// loops are generic over it so alternative encoders can be compared on equal terms.
pub trait Encoder {
    /// Width of the produced vectors.
    fn dim(&self) -> usize;

    fn init_params(&self, store: &mut ParamStore, rng: &mut Rng) -> Result<()>;

    /// `rng` is only consulted for dropout, which is active when `train` is set.
    fn encode(
        &self,
        tape: &mut Tape,
        store: &ParamStore,
        graph: &KnowledgeHypergraph,
        train: bool,
        rng: &mut Rng,
    ) -> Result<Vec<Var>>;
}

#[derive(Debug, Clone, PartialEq)]
enum Input {
    Table,
    /// Row-major node features, lifted to the hyperboloid and mapped to `dim` by an
    /// input Lorentz linear layer.
    Features {
        values: Vec<f64>,
        width: usize,
    },
}

/// Parameter names of one Lorentz linear layer.
fn linear_names(prefix: &str) -> [String; 5] {
    ["weight", "v", "b", "b_prime", "log_lambda"].map(|s| format!("{prefix}.{s}"))
}

#[derive(Debug, Clone, Copy)]
struct LinearIds {
    weight: ParamId,
    v: ParamId,
    b: ParamId,
    b_prime: ParamId,
    log_lambda: ParamId,
    rows: usize,
}

impl LinearIds {
    fn resolve(store: &ParamStore, prefix: &str) -> Result<Self> {
        let [w, v, b, bp, ll] = linear_names(prefix).map(|n| lookup(store, &n));
        let b = b?;
        Ok(LinearIds {
            weight: w?,
            v: v?,
            rows: store.value(b).len(),
            b,
            b_prime: bp?,
            log_lambda: ll?,
        })
    }

    fn vars(&self, tape: &mut Tape, store: &ParamStore, activation: Activation) -> LinearVars {
        let log_lambda = tape.param(store, self.log_lambda);
        LinearVars {
            weight: tape.param(store, self.weight),
            rows: self.rows,
            v: tape.param(store, self.v),
            b: tape.param(store, self.b),
            b_prime: tape.param(store, self.b_prime),
            lambda: tape.exp(log_lambda),
            activation,
        }
    }

    fn params(&self, store: &ParamStore, activation: Activation) -> LorentzLinearParams {
        LorentzLinearParams {
            weight: store.value(self.weight).to_vec(),
            rows: self.rows,
            v: store.value(self.v).to_vec(),
            b: store.value(self.b).to_vec(),
            b_prime: store.value(self.b_prime)[0],
            lambda: store.value(self.log_lambda)[0].exp(),
            activation,
        }
    }
}

pub(crate) fn lookup(store: &ParamStore, name: &str) -> Result<ParamId> {
    store
        .id(name)
        .ok_or_else(|| Error::Consistency(format!("parameter `{name}` is missing")))
}

/// Inserts a Lorentz linear layer `H^{in} → H^{out}` with Gaussian weights of variance
/// `1/(in+1)`, zero biases, zero gate and `λ = 2` (so `λσ(0) = 1`).
pub(crate) fn init_linear(
    store: &mut ParamStore,
    prefix: &str,
    input: usize,
    output: usize,
    rng: &mut Rng,
) -> Result<()> {
    let cols = input + 1;
    let normal = Normal::new(0.0, (1.0 / cols as f64).sqrt()).expect("positive variance");
    let weight: Vec<f64> = (0..output * cols).map(|_| normal.sample(rng)).collect();
    let [w, v, b, bp, ll] = linear_names(prefix);
    store.insert(&w, &[output, cols], weight)?;
    store.insert(&v, &[cols], vec![0.0; cols])?;
    store.insert(&b, &[output], vec![0.0; output])?;
    store.insert(&bp, &[1], vec![0.0])?;
    store.insert(&ll, &[1], vec![2f64.ln()])?;
    Ok(())
}

pub(crate) fn gaussian_table(rows: usize, cols: usize, std: f64, rng: &mut Rng) -> Vec<f64> {
    let normal = Normal::new(0.0, std).expect("positive std");
    (0..rows * cols).map(|_| normal.sample(rng)).collect()
}

/// The pure-value transforms of one layer.
#[derive(Debug, Clone, PartialEq)]
pub struct LayerParams {
    pub w_h: LorentzLinearParams,
    pub w_r: LorentzLinearParams,
    pub w_p: LorentzLinearParams,
}

/// One incident hyperedge as seen from a node: its φ₁ point, its relation point and
/// the position point of the node's slot.
#[derive(Debug, Clone, PartialEq)]
pub struct IncidentMessage {
    pub edge: LorentzPoint,
    pub relation: LorentzPoint,
    pub position: LorentzPoint,
}

/// Stage φ₁: centroid of the member points.
pub fn aggregate_edge(members: &[LorentzPoint], k: Curvature) -> Result<LorentzPoint> {
    lorentz::centroid(members, k)
}

/// `centroid(W_h h_e, W_r r, W_p h_p)`.
pub fn compose(msg: &IncidentMessage, layer: &LayerParams, k: Curvature) -> Result<LorentzPoint> {
    let parts = [
        lorentz::lorentz_linear(&layer.w_h, &msg.edge, k)?,
        lorentz::lorentz_linear(&layer.w_r, &msg.relation, k)?,
        lorentz::lorentz_linear(&layer.w_p, &msg.position, k)?,
    ];
    lorentz::centroid(&parts, k)
}

/// Stage φ₂: centroid of the node's own point and the composed message of every
/// incident hyperedge. A node without incident hyperedges keeps its point.
pub fn update_node(
    self_point: &LorentzPoint,
    incident: &[IncidentMessage],
    layer: &LayerParams,
    k: Curvature,
) -> Result<LorentzPoint> {
    let mut points = vec![self_point.clone()];
    for msg in incident {
        points.push(compose(msg, layer, k)?);
    }
    lorentz::centroid(&points, k)
}

/// The hyper-star encoder over a fixed vocabulary.
#[derive(Debug, Clone, PartialEq)]
pub struct HyperStarEncoder {
    config: EncoderConfig,
    input: Input,
    entity_count: usize,
    relation_count: usize,
    max_arity: usize,
}

struct Handles {
    entity: Option<ParamId>,
    input: Option<LinearIds>,
    relation: ParamId,
    position: ParamId,
    layers: Vec<[LinearIds; 3]>,
}

impl HyperStarEncoder {
    /// Link-prediction encoder with a learned entity table.
    pub fn for_link_prediction(
        config: EncoderConfig,
        entity_count: usize,
        relation_count: usize,
        max_arity: usize,
    ) -> Result<Self> {
        config.validate()?;
        if config.mode != TaskMode::LinkPrediction {
            return Err(Error::Config(
                "link-prediction encoder needs link-prediction mode".into(),
            ));
        }
        Self::checked(
            config,
            Input::Table,
            entity_count,
            relation_count,
            max_arity,
        )
    }

    /// Classification encoder reading the node features of `data`.
    pub fn for_classification(config: EncoderConfig, data: &LabeledHypergraph) -> Result<Self> {
        config.validate()?;
        if config.mode != TaskMode::Classification {
            return Err(Error::Config(
                "classification encoder needs classification mode".into(),
            ));
        }
        let input = Input::Features {
            values: data.features.clone(),
            width: data.feature_dim,
        };
        let g = &data.graph;
        Self::checked(
            config,
            input,
            g.entity_count(),
            g.relation_count(),
            g.max_arity(),
        )
    }

    fn checked(
        config: EncoderConfig,
        input: Input,
        entity_count: usize,
        relation_count: usize,
        max_arity: usize,
    ) -> Result<Self> {
        if entity_count == 0 || relation_count == 0 || max_arity == 0 {
            return Err(Error::EmptyGraph(
                "encoder needs entities, relations and tuples".into(),
            ));
        }
        Ok(HyperStarEncoder {
            config,
            input,
            entity_count,
            relation_count,
            max_arity,
        })
    }

    pub fn config(&self) -> &EncoderConfig {
        &self.config
    }

    pub fn max_arity(&self) -> usize {
        self.max_arity
    }

    fn handles(&self, store: &ParamStore) -> Result<Handles> {
        let layers = (0..self.config.layers)
            .map(|l| {
                Ok([
                    LinearIds::resolve(store, &format!("layer{l}.w_h"))?,
                    LinearIds::resolve(store, &format!("layer{l}.w_r"))?,
                    LinearIds::resolve(store, &format!("layer{l}.w_p"))?,
                ])
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Handles {
            entity: match self.input {
                Input::Table => Some(lookup(store, "entity")?),
                Input::Features { .. } => None,
            },
            input: match self.input {
                Input::Table => None,
                Input::Features { .. } => Some(LinearIds::resolve(store, "input")?),
            },
            relation: lookup(store, "relation")?,
            position: lookup(store, "position")?,
            layers,
        })
    }

    fn check_graph(&self, graph: &KnowledgeHypergraph) -> Result<()> {
        if graph.entity_count() != self.entity_count {
            return Err(Error::Dimension {
                expected: self.entity_count,
                got: graph.entity_count(),
            });
        }
        if graph.relation_count() > self.relation_count || graph.max_arity() > self.max_arity {
            return Err(Error::Consistency(format!(
                "graph with {} relations and arity {} exceeds the encoder's {} and {}",
                graph.relation_count(),
                graph.max_arity(),
                self.relation_count,
                self.max_arity
            )));
        }
        Ok(())
    }

    /// Transforms of layer `l` as pure parameters.
    pub fn layer_params(&self, store: &ParamStore, l: usize) -> Result<LayerParams> {
        let h = self.handles(store)?;
        let ids = h
            .layers
            .get(l)
            .ok_or_else(|| Error::Argument(format!("layer {l} of {}", self.config.layers)))?;
        let act = self.config.activation;
        Ok(LayerParams {
            w_h: ids[0].params(store, act),
            w_r: ids[1].params(store, act),
            w_p: ids[2].params(store, act),
        })
    }

    /// Lifted layer-0 inputs: entity points, relation points and position points
    /// (indexed by `relation · max_arity + position − 1`).
    pub fn embed_inputs(
        &self,
        store: &ParamStore,
    ) -> Result<(Vec<LorentzPoint>, Vec<LorentzPoint>, Vec<LorentzPoint>)> {
        let h = self.handles(store)?;
        let k = self.config.k;
        let lift_rows = |id: ParamId| -> Vec<LorentzPoint> {
            let cols = store.cols(id);
            store
                .value(id)
                .chunks(cols)
                .map(|u| lorentz::lift_from_euclidean(u, k))
                .collect()
        };
        let entities = match (&self.input, h.entity, h.input) {
            (Input::Table, Some(id), _) => lift_rows(id),
            (Input::Features { values, width }, _, Some(ids)) => {
                let p = ids.params(store, Activation::Identity);
                values
                    .chunks(*width)
                    .map(|row| {
                        lorentz::lorentz_linear(&p, &lorentz::lift_from_euclidean(row, k), k)
                    })
                    .collect::<Result<_>>()?
            }
            _ => unreachable!("handles follow the input kind"),
        };
        Ok((entities, lift_rows(h.relation), lift_rows(h.position)))
    }

    /// Final node points in evaluation mode.
    pub fn encode_points(
        &self,
        store: &ParamStore,
        graph: &KnowledgeHypergraph,
    ) -> Result<Vec<LorentzPoint>> {
        let mut tape = Tape::new();
        let pts = self.forward(&mut tape, store, graph, None)?;
        Ok(pts
            .into_iter()
            .map(|v| LorentzPoint::from_coords_unchecked(tape.value(v).to_vec()))
            .collect())
    }

    fn dropout(&self, tape: &mut Tape, u: Var, rng: &mut Option<&mut Rng>) -> Var {
        let p = self.config.dropout;
        match rng {
            Some(rng) if p > 0.0 => {
                let keep = 1.0 / (1.0 - p);
                let mask: Vec<f64> = (0..tape.value(u).len())
                    .map(|_| if rng.random::<f64>() < p { 0.0 } else { keep })
                    .collect();
                let m = tape.constant(mask);
                tape.mul(u, m)
            }
            _ => u,
        }
    }

    /// Node points after the last layer. Dropout runs at the start of every layer
    /// when `rng` is given.
    fn forward(
        &self,
        tape: &mut Tape,
        store: &ParamStore,
        graph: &KnowledgeHypergraph,
        mut rng: Option<&mut Rng>,
    ) -> Result<Vec<Var>> {
        self.check_graph(graph)?;
        let h = self.handles(store)?;
        let k = self.config.k;
        let n = self.max_arity;
        let act = self.config.activation;

        let mut x: Vec<Var> = match &self.input {
            Input::Table => {
                let id = h.entity.expect("table input");
                (0..self.entity_count)
                    .map(|e| {
                        let u = tape.param_row(store, id, e);
                        let u = self.dropout(tape, u, &mut rng);
                        diff::lift(tape, u, k)
                    })
                    .collect()
            }
            Input::Features { values, width } => {
                let lin = h
                    .input
                    .expect("feature input")
                    .vars(tape, store, Activation::Identity);
                values
                    .chunks(*width)
                    .map(|row| {
                        let p = tape.constant(lorentz::lift_from_euclidean(row, k).into_coords());
                        diff::linear(tape, &lin, p, k)
                    })
                    .collect()
            }
        };

        let mut relation_pts: Vec<Option<Var>> = vec![None; self.relation_count];
        let mut position_pts: Vec<Option<Var>> = vec![None; self.relation_count * n];
        for (l, ids) in h.layers.iter().enumerate() {
            let needs_dropout = l > 0 || matches!(self.input, Input::Features { .. });
            if needs_dropout && rng.is_some() && self.config.dropout > 0.0 {
                for xi in x.iter_mut() {
                    let u = diff::origin_log(tape, *xi, k);
                    let u = self.dropout(tape, u, &mut rng);
                    *xi = diff::lift(tape, u, k);
                }
            }
            let [wh, wr, wp] = ids.map(|i| i.vars(tape, store, act));

            let edge_msgs: Vec<Var> = graph
                .tuples()
                .iter()
                .map(|t| {
                    let members: Vec<Var> = t.entities.iter().map(|&e| x[e]).collect();
                    let he = diff::centroid(tape, &members, k);
                    diff::linear(tape, &wh, he, k)
                })
                .collect();
            let mut rel_msgs: Vec<Option<Var>> = vec![None; self.relation_count];
            let mut pos_msgs: Vec<Option<Var>> = vec![None; self.relation_count * n];

            let mut next = Vec::with_capacity(x.len());
            for (i, &xi) in x.iter().enumerate() {
                let inc = graph.incidence(i);
                if inc.is_empty() {
                    next.push(xi);
                    continue;
                }
                let mut members = Vec::with_capacity(inc.len() + 1);
                members.push(xi);
                for m in inc {
                    let r = graph.tuple(m.tuple).relation;
                    let rm = match rel_msgs[r] {
                        Some(v) => v,
                        None => {
                            let p = *relation_pts[r].get_or_insert_with(|| {
                                let u = tape.param_row(store, h.relation, r);
                                diff::lift(tape, u, k)
                            });
                            *rel_msgs[r].insert(diff::linear(tape, &wr, p, k))
                        }
                    };
                    let pid = r * n + m.position - 1;
                    let pm = match pos_msgs[pid] {
                        Some(v) => v,
                        None => {
                            let p = *position_pts[pid].get_or_insert_with(|| {
                                let u = tape.param_row(store, h.position, pid);
                                diff::lift(tape, u, k)
                            });
                            *pos_msgs[pid].insert(diff::linear(tape, &wp, p, k))
                        }
                    };
                    members.push(diff::centroid(tape, &[edge_msgs[m.tuple], rm, pm], k));
                }
                next.push(diff::centroid(tape, &members, k));
            }
            x = next;
        }
        Ok(x)
    }
}

impl Encoder for HyperStarEncoder {
    fn dim(&self) -> usize {
        self.config.dim
    }

    /// Tables are `N(0, 0.1²)`; the linear layers follow [`init_linear`].
    fn init_params(&self, store: &mut ParamStore, rng: &mut Rng) -> Result<()> {
        let d = self.config.dim;
        match &self.input {
            Input::Table => {
                store.insert(
                    "entity",
                    &[self.entity_count, d],
                    gaussian_table(self.entity_count, d, 0.1, rng),
                )?;
            }
            Input::Features { width, .. } => init_linear(store, "input", *width, d, rng)?,
        }
        let r = self.relation_count;
        store.insert("relation", &[r, d], gaussian_table(r, d, 0.1, rng))?;
        let p = r * self.max_arity;
        store.insert("position", &[p, d], gaussian_table(p, d, 0.1, rng))?;
        for l in 0..self.config.layers {
            for w in ["w_h", "w_r", "w_p"] {
                init_linear(store, &format!("layer{l}.{w}"), d, d, rng)?;
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
    ) -> Result<Vec<Var>> {
        let pts = self.forward(tape, store, graph, train.then_some(rng))?;
        let k = self.config.k;
        Ok(pts
            .into_iter()
            .map(|p| diff::origin_log(tape, p, k))
            .collect())
    }
}
