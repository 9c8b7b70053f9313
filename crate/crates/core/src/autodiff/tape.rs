//! Wengert-list tape over vector-valued nodes.
//!
//! Every node holds an eagerly computed `Vec<f64>`; scalars are length-1 vectors.
//! Elementwise binary operations broadcast a length-1 operand. Node ids increase
//! monotonically and every input precedes its consumer, so the reverse sweep is a
//! single backwards pass over the node list.

use crate::autodiff::params::{ParamId, ParamStore};
use crate::error::{Error, Result};
use crate::lorentz::ACOSH_FLOOR;

/// Handle to a node on a [`Tape`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(usize);

impl Var {
    pub fn id(self) -> usize {
        self.0
    }
}

/// Primitive operations understood by [`Tape::record`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Op {
    Add,
    Sub,
    Mul,
    Div,
    Neg,
    /// Row-major `rows × cols` matrix times a length-`cols` vector.
    MatVec {
        rows: usize,
    },
    Dot,
    /// Signed dot product `−a₀b₀ + Σ_{i≥1} aᵢbᵢ`.
    MinkowskiDot,
    Sum,
    /// Elementwise sum of any number of equal-length inputs.
    AddN,
    Concat,
    Slice {
        start: usize,
        len: usize,
    },
    Sigmoid,
    Relu,
    Cosh,
    Sinh,
    /// `acosh(max(x, 1 + 1e-12))`
    Acosh,
    Asinh,
    Sqrt,
    Recip,
    Log,
    Exp,
    Abs,
    /// Max-reduce to a scalar.
    Max,
}

#[derive(Debug, Clone)]
enum Source {
    Leaf,
    Param { id: ParamId, offset: usize },
    Op(Op),
}

#[derive(Debug, Clone)]
struct Node {
    source: Source,
    inputs: Vec<Var>,
    value: Vec<f64>,
}

#[derive(Debug, Default, Clone)]
pub struct Tape {
    nodes: Vec<Node>,
}

impl Tape {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn value(&self, v: Var) -> &[f64] {
        &self.nodes[v.0].value
    }

    /// Value of a length-1 node.
    pub fn scalar_value(&self, v: Var) -> f64 {
        let val = &self.nodes[v.0].value;
        assert_eq!(
            val.len(),
            1,
            "scalar_value on a node of length {}",
            val.len()
        );
        val[0]
    }

    fn push(&mut self, source: Source, inputs: Vec<Var>, value: Vec<f64>) -> Var {
        self.nodes.push(Node {
            source,
            inputs,
            value,
        });
        Var(self.nodes.len() - 1)
    }

    /// A constant (non-differentiated) leaf.
    pub fn constant(&mut self, value: Vec<f64>) -> Var {
        self.push(Source::Leaf, Vec::new(), value)
    }

    pub fn scalar(&mut self, x: f64) -> Var {
        self.constant(vec![x])
    }

    /// Leaf bound to an entire parameter tensor.
    pub fn param(&mut self, store: &ParamStore, id: ParamId) -> Var {
        let value = store.value(id).to_vec();
        self.push(Source::Param { id, offset: 0 }, Vec::new(), value)
    }

    /// Leaf bound to one row of a 2-D parameter tensor.
    pub fn param_row(&mut self, store: &ParamStore, id: ParamId, row: usize) -> Var {
        let cols = store.cols(id);
        let value = store.row(id, row).to_vec();
        self.push(
            Source::Param {
                id,
                offset: row * cols,
            },
            Vec::new(),
            value,
        )
    }

    /// Leaf bound to a contiguous range of a parameter tensor.
    pub fn param_slice(
        &mut self,
        store: &ParamStore,
        id: ParamId,
        offset: usize,
        len: usize,
    ) -> Var {
        let value = store.value(id)[offset..offset + len].to_vec();
        self.push(Source::Param { id, offset }, Vec::new(), value)
    }

    /// Records a primitive after checking input arity and shapes.
    pub fn record(&mut self, op: Op, inputs: &[Var]) -> Result<Var> {
        let value = self.evaluate(op, inputs)?;
        Ok(self.push(Source::Op(op), inputs.to_vec(), value))
    }

    fn rec(&mut self, op: Op, inputs: &[Var]) -> Var {
        match self.record(op, inputs) {
            Ok(v) => v,
            Err(e) => panic!("{op:?}: {e}"),
        }
    }

    fn evaluate(&self, op: Op, inputs: &[Var]) -> Result<Vec<f64>> {
        let want = match op {
            Op::Add
            | Op::Sub
            | Op::Mul
            | Op::Div
            | Op::MatVec { .. }
            | Op::Dot
            | Op::MinkowskiDot => Some(2),
            Op::AddN | Op::Concat => None,
            _ => Some(1),
        };
        if let Some(n) = want {
            if inputs.len() != n {
                return Err(Error::Argument(format!(
                    "{op:?} takes {n} inputs, got {}",
                    inputs.len()
                )));
            }
        } else if inputs.is_empty() {
            return Err(Error::Argument(format!("{op:?} needs at least one input")));
        }
        if let Some(bad) = inputs.iter().find(|v| v.0 >= self.nodes.len()) {
            return Err(Error::Argument(format!(
                "node {} is not on the tape",
                bad.0
            )));
        }
        let val = |i: usize| self.nodes[inputs[i].0].value.as_slice();
        let unary = |f: fn(f64) -> f64| val(0).iter().map(|&x| f(x)).collect::<Vec<_>>();
        Ok(match op {
            Op::Add => broadcast(val(0), val(1), |a, b| a + b)?,
            Op::Sub => broadcast(val(0), val(1), |a, b| a - b)?,
            Op::Mul => broadcast(val(0), val(1), |a, b| a * b)?,
            Op::Div => broadcast(val(0), val(1), |a, b| a / b)?,
            Op::Neg => unary(|x| -x),
            Op::MatVec { rows } => {
                let (m, x) = (val(0), val(1));
                if rows == 0 || m.len() != rows * x.len() {
                    return Err(Error::Dimension {
                        expected: rows * x.len(),
                        got: m.len(),
                    });
                }
                m.chunks_exact(x.len()).map(|row| dot(row, x)).collect()
            }
            Op::Dot => {
                same_len(val(0), val(1))?;
                vec![dot(val(0), val(1))]
            }
            Op::MinkowskiDot => {
                same_len(val(0), val(1))?;
                if val(0).is_empty() {
                    return Err(Error::Dimension {
                        expected: 1,
                        got: 0,
                    });
                }
                vec![dot(val(0), val(1)) - 2.0 * val(0)[0] * val(1)[0]]
            }
            Op::Sum => vec![val(0).iter().sum()],
            Op::AddN => {
                let mut out = val(0).to_vec();
                for i in 1..inputs.len() {
                    same_len(&out, val(i))?;
                    for (o, x) in out.iter_mut().zip(val(i)) {
                        *o += x;
                    }
                }
                out
            }
            Op::Concat => (0..inputs.len())
                .flat_map(|i| val(i).iter().copied())
                .collect(),
            Op::Slice { start, len } => {
                let src = val(0);
                if start + len > src.len() {
                    return Err(Error::Dimension {
                        expected: start + len,
                        got: src.len(),
                    });
                }
                src[start..start + len].to_vec()
            }
            Op::Sigmoid => unary(crate::lorentz::sigmoid),
            Op::Relu => unary(|x| x.max(0.0)),
            Op::Cosh => unary(f64::cosh),
            Op::Sinh => unary(f64::sinh),
            Op::Acosh => unary(|x| x.max(ACOSH_FLOOR).acosh()),
            Op::Asinh => unary(f64::asinh),
            Op::Sqrt => unary(f64::sqrt),
            Op::Recip => unary(|x| 1.0 / x),
            Op::Log => unary(f64::ln),
            Op::Exp => unary(f64::exp),
            Op::Abs => unary(f64::abs),
            Op::Max => {
                if val(0).is_empty() {
                    return Err(Error::Dimension {
                        expected: 1,
                        got: 0,
                    });
                }
                vec![val(0).iter().copied().fold(f64::NEG_INFINITY, f64::max)]
            }
        })
    }

    pub fn add(&mut self, a: Var, b: Var) -> Var {
        self.rec(Op::Add, &[a, b])
    }
    pub fn sub(&mut self, a: Var, b: Var) -> Var {
        self.rec(Op::Sub, &[a, b])
    }
    pub fn mul(&mut self, a: Var, b: Var) -> Var {
        self.rec(Op::Mul, &[a, b])
    }
    pub fn div(&mut self, a: Var, b: Var) -> Var {
        self.rec(Op::Div, &[a, b])
    }
    pub fn neg(&mut self, a: Var) -> Var {
        self.rec(Op::Neg, &[a])
    }
    pub fn matvec(&mut self, m: Var, rows: usize, x: Var) -> Var {
        self.rec(Op::MatVec { rows }, &[m, x])
    }
    pub fn dot(&mut self, a: Var, b: Var) -> Var {
        self.rec(Op::Dot, &[a, b])
    }
    pub fn minkowski_dot(&mut self, a: Var, b: Var) -> Var {
        self.rec(Op::MinkowskiDot, &[a, b])
    }
    pub fn sum(&mut self, a: Var) -> Var {
        self.rec(Op::Sum, &[a])
    }
    pub fn add_n(&mut self, xs: &[Var]) -> Var {
        if xs.len() == 1 {
            return xs[0];
        }
        self.rec(Op::AddN, xs)
    }
    pub fn concat(&mut self, xs: &[Var]) -> Var {
        self.rec(Op::Concat, xs)
    }
    pub fn slice(&mut self, a: Var, start: usize, len: usize) -> Var {
        self.rec(Op::Slice { start, len }, &[a])
    }
    /// Element `i` as a scalar node.
    pub fn index(&mut self, a: Var, i: usize) -> Var {
        self.slice(a, i, 1)
    }
    pub fn sigmoid(&mut self, a: Var) -> Var {
        self.rec(Op::Sigmoid, &[a])
    }
    pub fn relu(&mut self, a: Var) -> Var {
        self.rec(Op::Relu, &[a])
    }
    pub fn cosh(&mut self, a: Var) -> Var {
        self.rec(Op::Cosh, &[a])
    }
    pub fn sinh(&mut self, a: Var) -> Var {
        self.rec(Op::Sinh, &[a])
    }
    pub fn acosh(&mut self, a: Var) -> Var {
        self.rec(Op::Acosh, &[a])
    }
    pub fn asinh(&mut self, a: Var) -> Var {
        self.rec(Op::Asinh, &[a])
    }
    pub fn sqrt(&mut self, a: Var) -> Var {
        self.rec(Op::Sqrt, &[a])
    }
    pub fn recip(&mut self, a: Var) -> Var {
        self.rec(Op::Recip, &[a])
    }
    pub fn log(&mut self, a: Var) -> Var {
        self.rec(Op::Log, &[a])
    }
    pub fn exp(&mut self, a: Var) -> Var {
        self.rec(Op::Exp, &[a])
    }
    pub fn abs(&mut self, a: Var) -> Var {
        self.rec(Op::Abs, &[a])
    }
    pub fn max(&mut self, a: Var) -> Var {
        self.rec(Op::Max, &[a])
    }

    /// `a * c` for a constant scalar `c`.
    pub fn scale(&mut self, a: Var, c: f64) -> Var {
        let c = self.scalar(c);
        self.mul(a, c)
    }

    /// Reverse sweep from a scalar output. Returns the adjoint of every node
    /// (empty vectors for nodes the output does not depend on).
    fn adjoints(&self, output: Var) -> Result<Vec<Vec<f64>>> {
        if output.0 >= self.nodes.len() {
            return Err(Error::Argument(format!(
                "node {} is not on the tape",
                output.0
            )));
        }
        if self.nodes[output.0].value.len() != 1 {
            return Err(Error::Argument(format!(
                "backward needs a scalar output, node {} has length {}",
                output.0,
                self.nodes[output.0].value.len()
            )));
        }
        let mut grads: Vec<Vec<f64>> = vec![Vec::new(); output.0 + 1];
        grads[output.0] = vec![1.0];
        for i in (0..=output.0).rev() {
            if grads[i].is_empty() {
                continue;
            }
            let node = &self.nodes[i];
            let Source::Op(op) = node.source else {
                continue;
            };
            let g = std::mem::take(&mut grads[i]);
            self.propagate(op, node, &g, &mut grads);
            grads[i] = g;
        }
        Ok(grads)
    }

    fn propagate(&self, op: Op, node: &Node, g: &[f64], grads: &mut [Vec<f64>]) {
        let inp = &node.inputs;
        let val = |k: usize| self.nodes[inp[k].0].value.as_slice();
        let y = node.value.as_slice();
        let unary = |grads: &mut [Vec<f64>], d: &dyn Fn(f64, f64) -> f64| {
            let x = val(0);
            let ga = slot(grads, inp[0], x.len());
            for j in 0..x.len() {
                ga[j] += g[j] * d(x[j], y[j]);
            }
        };
        match op {
            Op::Add => {
                reduce_into(slot(grads, inp[0], val(0).len()), g, |_, gj| gj);
                reduce_into(slot(grads, inp[1], val(1).len()), g, |_, gj| gj);
            }
            Op::Sub => {
                reduce_into(slot(grads, inp[0], val(0).len()), g, |_, gj| gj);
                reduce_into(slot(grads, inp[1], val(1).len()), g, |_, gj| -gj);
            }
            Op::Mul => {
                let (a, b) = (val(0), val(1));
                reduce_into(slot(grads, inp[0], a.len()), g, |j, gj| gj * bc(b, j));
                reduce_into(slot(grads, inp[1], b.len()), g, |j, gj| gj * bc(a, j));
            }
            Op::Div => {
                let (a, b) = (val(0), val(1));
                reduce_into(slot(grads, inp[0], a.len()), g, |j, gj| gj / bc(b, j));
                reduce_into(slot(grads, inp[1], b.len()), g, |j, gj| {
                    let bj = bc(b, j);
                    -gj * bc(a, j) / (bj * bj)
                });
            }
            Op::Neg => unary(grads, &|_, _| -1.0),
            Op::MatVec { rows } => {
                let (m, x) = (val(0), val(1));
                let cols = x.len();
                {
                    let gm = slot(grads, inp[0], m.len());
                    for r in 0..rows {
                        if g[r] == 0.0 {
                            continue;
                        }
                        for c in 0..cols {
                            gm[r * cols + c] += g[r] * x[c];
                        }
                    }
                }
                let gx = slot(grads, inp[1], cols);
                for r in 0..rows {
                    if g[r] == 0.0 {
                        continue;
                    }
                    let row = &m[r * cols..(r + 1) * cols];
                    for c in 0..cols {
                        gx[c] += g[r] * row[c];
                    }
                }
            }
            Op::Dot | Op::MinkowskiDot => {
                let sign0 = if op == Op::Dot { 1.0 } else { -1.0 };
                let (a, b) = (val(0), val(1));
                let s = g[0];
                {
                    let ga = slot(grads, inp[0], a.len());
                    for j in 0..a.len() {
                        ga[j] += s * b[j] * if j == 0 { sign0 } else { 1.0 };
                    }
                }
                let gb = slot(grads, inp[1], b.len());
                for j in 0..b.len() {
                    gb[j] += s * a[j] * if j == 0 { sign0 } else { 1.0 };
                }
            }
            Op::Sum => {
                let ga = slot(grads, inp[0], val(0).len());
                ga.iter_mut().for_each(|x| *x += g[0]);
            }
            Op::Max => {
                let x = val(0);
                let arg = x
                    .iter()
                    .enumerate()
                    .fold(0, |best, (j, &v)| if v > x[best] { j } else { best });
                slot(grads, inp[0], x.len())[arg] += g[0];
            }
            Op::AddN => {
                for &v in inp {
                    let ga = slot(grads, v, g.len());
                    for (a, b) in ga.iter_mut().zip(g) {
                        *a += b;
                    }
                }
            }
            Op::Concat => {
                let mut at = 0;
                for &v in inp {
                    let n = self.nodes[v.0].value.len();
                    let ga = slot(grads, v, n);
                    for (a, b) in ga.iter_mut().zip(&g[at..at + n]) {
                        *a += b;
                    }
                    at += n;
                }
            }
            Op::Slice { start, len } => {
                let ga = slot(grads, inp[0], val(0).len());
                for (a, b) in ga[start..start + len].iter_mut().zip(g) {
                    *a += b;
                }
            }
            Op::Sigmoid => unary(grads, &|_, y| y * (1.0 - y)),
            Op::Relu => unary(grads, &|x, _| if x > 0.0 { 1.0 } else { 0.0 }),
            Op::Cosh => unary(grads, &|x, _| x.sinh()),
            Op::Sinh => unary(grads, &|x, _| x.cosh()),
            Op::Acosh => unary(grads, &|x, _| {
                if x < ACOSH_FLOOR {
                    0.0
                } else {
                    1.0 / (x * x - 1.0).sqrt()
                }
            }),
            Op::Asinh => unary(grads, &|x, _| 1.0 / (x * x + 1.0).sqrt()),
            Op::Sqrt => unary(grads, &|_, y| if y > 0.0 { 0.5 / y } else { 0.0 }),
            Op::Recip => unary(grads, &|_, y| -y * y),
            Op::Log => unary(grads, &|x, _| 1.0 / x),
            Op::Exp => unary(grads, &|_, y| y),
            Op::Abs => unary(grads, &|x, _| {
                if x > 0.0 {
                    1.0
                } else if x < 0.0 {
                    -1.0
                } else {
                    0.0
                }
            }),
        }
    }

    /// Accumulates `d output / d param` into the store for every parameter leaf.
    /// Repeated calls add to the existing gradients.
    pub fn backward(&self, output: Var, store: &mut ParamStore) -> Result<()> {
        let grads = self.adjoints(output)?;
        for (node, g) in self.nodes.iter().zip(&grads) {
            if g.is_empty() {
                continue;
            }
            if let Source::Param { id, offset } = node.source {
                let dst = &mut store.grad_mut(id)[offset..offset + g.len()];
                for (d, s) in dst.iter_mut().zip(g) {
                    *d += s;
                }
            }
        }
        Ok(())
    }

    /// Adjoints of `output` with respect to arbitrary nodes.
    pub fn gradients(&self, output: Var, wrt: &[Var]) -> Result<Vec<Vec<f64>>> {
        let grads = self.adjoints(output)?;
        Ok(wrt
            .iter()
            .map(|v| match grads.get(v.0) {
                Some(g) if !g.is_empty() => g.clone(),
                _ => vec![0.0; self.nodes[v.0].value.len()],
            })
            .collect())
    }
}

fn slot(grads: &mut [Vec<f64>], v: Var, len: usize) -> &mut [f64] {
    let g = &mut grads[v.0];
    if g.is_empty() {
        *g = vec![0.0; len];
    }
    g.as_mut_slice()
}

#[inline]
fn bc(x: &[f64], j: usize) -> f64 {
    if x.len() == 1 {
        x[0]
    } else {
        x[j]
    }
}

/// Adds `f(j, g[j])` into `dst`, summing over `j` when `dst` was broadcast.
fn reduce_into(dst: &mut [f64], g: &[f64], f: impl Fn(usize, f64) -> f64) {
    if dst.len() == g.len() {
        for (j, d) in dst.iter_mut().enumerate() {
            *d += f(j, g[j]);
        }
    } else {
        dst[0] += (0..g.len()).map(|j| f(j, g[j])).sum::<f64>();
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn same_len(a: &[f64], b: &[f64]) -> Result<()> {
    if a.len() == b.len() {
        Ok(())
    } else {
        Err(Error::Dimension {
            expected: a.len(),
            got: b.len(),
        })
    }
}

fn broadcast(a: &[f64], b: &[f64], f: impl Fn(f64, f64) -> f64) -> Result<Vec<f64>> {
    match (a.len(), b.len()) {
        (n, m) if n == m => Ok(a.iter().zip(b).map(|(&x, &y)| f(x, y)).collect()),
        (1, _) => Ok(b.iter().map(|&y| f(a[0], y)).collect()),
        (_, 1) => Ok(a.iter().map(|&x| f(x, b[0])).collect()),
        (n, m) => Err(Error::Dimension {
            expected: n,
            got: m,
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scalar_grad(f: impl Fn(&mut Tape, Var) -> Var, x: f64) -> (f64, f64) {
        let mut t = Tape::new();
        let v = t.scalar(x);
        let y = f(&mut t, v);
        let g = t.gradients(y, &[v]).unwrap();
        (t.scalar_value(y), g[0][0])
    }

    #[test]
    fn record_examples() {
        let mut t = Tape::new();
        let a = t.scalar(2.0);
        let b = t.scalar(3.0);
        let p = t.record(Op::Mul, &[a, b]).unwrap();
        assert_eq!(t.value(p), &[6.0]);
        let z = t.scalar(0.0);
        let s = t.record(Op::Sigmoid, &[z]).unwrap();
        assert_eq!(t.value(s), &[0.5]);
        let near = t.scalar(1.0 + 1e-15);
        let c = t.record(Op::Acosh, &[near]).unwrap();
        let expect = (1.0f64 + 1e-12).acosh();
        assert!(t.value(c)[0].is_finite());
        assert_eq!(t.value(c)[0], expect);
    }

    #[test]
    fn record_rejects_shape_mismatch() {
        let mut t = Tape::new();
        let a = t.constant(vec![1.0, 2.0]);
        let b = t.constant(vec![1.0, 2.0, 3.0]);
        assert!(matches!(
            t.record(Op::Add, &[a, b]),
            Err(Error::Dimension { .. })
        ));
        assert!(matches!(
            t.record(Op::Dot, &[a, b]),
            Err(Error::Dimension { .. })
        ));
        assert!(t.record(Op::MatVec { rows: 2 }, &[a, b]).is_err());
        assert!(t.record(Op::Slice { start: 1, len: 2 }, &[a]).is_err());
        assert!(t.record(Op::Add, &[a]).is_err());
        assert!(t.record(Op::Concat, &[]).is_err());
    }

    #[test]
    fn product_and_sigmoid_derivatives() {
        let mut t = Tape::new();
        let x = t.scalar(2.0);
        let y = t.scalar(3.0);
        let f = t.mul(x, y);
        let g = t.gradients(f, &[x, y]).unwrap();
        assert_eq!((g[0][0], g[1][0]), (3.0, 2.0));

        let (v, d) = scalar_grad(|t, x| t.sigmoid(x), 0.0);
        assert_eq!((v, d), (0.5, 0.25));
    }

    #[test]
    fn backward_requires_scalar() {
        let mut t = Tape::new();
        let a = t.constant(vec![1.0, 2.0]);
        let mut store = ParamStore::new();
        assert!(matches!(t.backward(a, &mut store), Err(Error::Argument(_))));
    }

    #[test]
    fn backward_accumulates_into_params() {
        let mut store = ParamStore::new();
        let w = store
            .insert("w", &[2, 2], vec![1.0, 2.0, 3.0, 4.0])
            .unwrap();
        let mut t = Tape::new();
        let row = t.param_row(&store, w, 1);
        let s = t.sum(row);
        t.backward(s, &mut store).unwrap();
        t.backward(s, &mut store).unwrap();
        assert_eq!(store.grad(w), &[0.0, 0.0, 2.0, 2.0]);
    }

    #[test]
    fn matvec_and_broadcast_gradients() {
        let mut t = Tape::new();
        let m = t.constant(vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        let x = t.constant(vec![1.0, -1.0, 2.0]);
        let y = t.matvec(m, 2, x);
        assert_eq!(t.value(y), &[5.0, 11.0]);
        let c = t.scalar(3.0);
        let z = t.mul(y, c);
        let s = t.sum(z);
        let g = t.gradients(s, &[m, x, c]).unwrap();
        assert_eq!(g[0], vec![3.0, -3.0, 6.0, 3.0, -3.0, 6.0]);
        assert_eq!(g[1], vec![15.0, 21.0, 27.0]);
        assert_eq!(g[2], vec![16.0]);
    }

    #[test]
    fn max_routes_to_argmax() {
        let mut t = Tape::new();
        let x = t.constant(vec![0.5, 3.0, -1.0]);
        let m = t.max(x);
        let g = t.gradients(m, &[x]).unwrap();
        assert_eq!(g[0], vec![0.0, 1.0, 0.0]);
    }

    #[test]
    fn replay_is_bitwise_deterministic() {
        let build = || {
            let mut t = Tape::new();
            let x = t.constant(vec![0.3, -0.7, 1.1]);
            let c = t.cosh(x);
            let s = t.sinh(x);
            let d = t.minkowski_dot(c, s);
            let e = t.exp(d);
            t.value(e)[0].to_bits()
        };
        assert_eq!(build(), build());
    }
}
