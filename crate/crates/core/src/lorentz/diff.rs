//! Tape-recorded Lorentz operations.
//!
//! Each function mirrors its pure counterpart in the parent module. Branches for
//! degenerate inputs (tiny angles, vanishing directions) are decided on the eagerly
//! computed values, so the recorded graph is the smooth branch actually taken.

use super::{Activation, Curvature, SMALL_ANGLE};
use crate::autodiff::{Tape, Var};

/// Tape handles for the parameters of one Lorentz linear layer.
#[derive(Debug, Clone, Copy)]
pub struct LinearVars {
    /// `rows × (n+1)` row-major.
    pub weight: Var,
    pub rows: usize,
    pub v: Var,
    pub b: Var,
    pub b_prime: Var,
    /// Must be positive.
    pub lambda: Var,
    pub activation: Activation,
}

pub fn minkowski_inner(t: &mut Tape, x: Var, y: Var) -> Var {
    t.minkowski_dot(x, y)
}

fn euclid_norm(t: &mut Tape, u: Var) -> Var {
    let sq = t.dot(u, u);
    t.sqrt(sq)
}

/// `exp_o((0, u))`
pub fn lift(t: &mut Tape, u: Var, k: Curvature) -> Var {
    let c = k.sqrt_neg();
    let n = euclid_norm(t, u);
    let time0 = 1.0 / c;
    if c * t.scalar_value(n) < SMALL_ANGLE {
        let time = t.scalar(time0);
        return t.concat(&[time, u]);
    }
    let alpha = t.scale(n, c);
    let ch = t.cosh(alpha);
    let time = t.scale(ch, time0);
    let sh = t.sinh(alpha);
    let ratio = t.div(sh, alpha);
    let space = t.mul(u, ratio);
    t.concat(&[time, space])
}

/// Space part of `log_o(x)`; see [`super::origin_log`].
pub fn origin_log(t: &mut Tape, x: Var, k: Curvature) -> Var {
    let width = t.value(x).len();
    let space = t.slice(x, 1, width - 1);
    let n = euclid_norm(t, space);
    let c = k.sqrt_neg();
    if c * t.scalar_value(n) < SMALL_ANGLE {
        return space;
    }
    let r = t.scale(n, c);
    let ash = t.asinh(r);
    let f = t.div(ash, r);
    t.mul(space, f)
}

pub fn exp_map(t: &mut Tape, x: Var, v: Var, k: Curvature) -> Var {
    let sq = t.minkowski_dot(v, v);
    let a = t.abs(sq);
    let n = t.sqrt(a);
    let alpha = t.scale(n, k.sqrt_neg());
    if t.scalar_value(alpha) < SMALL_ANGLE {
        return t.add(x, v);
    }
    let ch = t.cosh(alpha);
    let sh = t.sinh(alpha);
    let ratio = t.div(sh, alpha);
    let left = t.mul(x, ch);
    let right = t.mul(v, ratio);
    t.add(left, right)
}

pub fn log_map(t: &mut Tape, x: Var, y: Var, k: Curvature) -> Var {
    let inner = t.minkowski_dot(x, y);
    let beta = t.scale(inner, k.value());
    if t.scalar_value(beta) < super::ACOSH_FLOOR {
        let z = t.constant(vec![0.0; t.value(x).len()]);
        return t.mul(y, z);
    }
    let ac = t.acosh(beta);
    let b2 = t.mul(beta, beta);
    let one = t.scalar(1.0);
    let b2m1 = t.sub(b2, one);
    let den = t.sqrt(b2m1);
    let coef = t.div(ac, den);
    let bx = t.mul(x, beta);
    let diff = t.sub(y, bx);
    t.mul(diff, coef)
}

pub fn squared_distance(t: &mut Tape, a: Var, b: Var, k: Curvature) -> Var {
    let inner = t.minkowski_dot(a, b);
    let m = t.scale(inner, -2.0);
    let c = t.scalar(2.0 * k.inv());
    t.add(m, c)
}

/// Unit-weight centroid `Σ y / (√-k √|⟨Σy, Σy⟩_H|)`.
pub fn centroid(t: &mut Tape, points: &[Var], k: Curvature) -> Var {
    assert!(!points.is_empty(), "centroid of an empty point set");
    let s = t.add_n(points);
    let q = t.minkowski_dot(s, s);
    let a = t.abs(q);
    let n = t.sqrt(a);
    let den = t.scale(n, k.sqrt_neg());
    let inv = t.recip(den);
    t.mul(s, inv)
}

/// Fully hyperbolic linear layer; see [`super::lorentz_linear`].
pub fn linear(t: &mut Tape, p: &LinearVars, x: Var, k: Curvature) -> Var {
    let hx = match p.activation {
        Activation::Identity => x,
        Activation::Relu => t.relu(x),
    };
    let wx = t.matvec(p.weight, p.rows, hx);
    let z = t.add(wx, p.b);
    let norm = euclid_norm(t, z);
    let dir = if t.scalar_value(norm) < SMALL_ANGLE {
        let mut e = vec![0.0; p.rows];
        e[0] = 1.0;
        t.constant(e)
    } else {
        t.div(z, norm)
    };
    let vx = t.dot(p.v, x);
    let gate = t.add(vx, p.b_prime);
    let sg = t.sigmoid(gate);
    let scale = t.mul(p.lambda, sg);
    let phi = t.mul(dir, scale);
    let sq = t.dot(phi, phi);
    let shift = t.scalar(-k.inv());
    let tt = t.add(sq, shift);
    let time = t.sqrt(tt);
    t.concat(&[time, phi])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lorentz::{self, LorentzLinearParams, LorentzPoint, TangentVector};

    const K: Curvature = Curvature::STANDARD;

    fn assert_close(a: &[f64], b: &[f64], tol: f64) {
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(b) {
            assert!((x - y).abs() <= tol, "{a:?} vs {b:?}");
        }
    }

    #[test]
    fn tape_geometry_matches_pure_kernels() {
        let mut t = Tape::new();
        let u1 = [0.3, -0.2, 0.9];
        let u2 = [-1.1, 0.4, 0.05];
        let a = t.constant(u1.to_vec());
        let b = t.constant(u2.to_vec());
        let pa = lift(&mut t, a, K);
        let pb = lift(&mut t, b, K);
        let ref_a = lorentz::lift_from_euclidean(&u1, K);
        let ref_b = lorentz::lift_from_euclidean(&u2, K);
        assert_close(t.value(pa), ref_a.coords(), 1e-14);

        let c = centroid(&mut t, &[pa, pb], K);
        let ref_c = lorentz::centroid(&[ref_a.clone(), ref_b.clone()], K).unwrap();
        assert_close(t.value(c), ref_c.coords(), 1e-14);

        let d = squared_distance(&mut t, pa, pb, K);
        assert!(
            (t.scalar_value(d) - lorentz::squared_lorentz_distance(&ref_a, &ref_b, K)).abs()
                < 1e-12
        );

        let l = log_map(&mut t, pa, pb, K);
        let ref_l = lorentz::log_map(&ref_a, &ref_b, K).unwrap();
        assert_close(t.value(l), ref_l.coords(), 1e-10);

        let e = exp_map(&mut t, pa, l, K);
        let ref_e = lorentz::exp_map(&ref_a, &TangentVector::new(t.value(l).to_vec()), K);
        assert_close(t.value(e), ref_e.coords(), 1e-12);

        let back = origin_log(&mut t, pb, K);
        assert_close(t.value(back), &u2, 1e-12);
    }

    #[test]
    fn tape_linear_matches_pure_kernel() {
        let params = LorentzLinearParams {
            weight: vec![0.3, -1.0, 0.5, 0.2, 0.7, -0.4],
            rows: 2,
            v: vec![0.1, 0.2, -0.3],
            b: vec![0.05, -0.1],
            b_prime: 0.3,
            lambda: 2.5,
            activation: Activation::Relu,
        };
        let x = lorentz::lift_from_euclidean(&[0.4, -0.6], K);
        let expect = lorentz::lorentz_linear(&params, &x, K).unwrap();

        let mut t = Tape::new();
        let vars = LinearVars {
            weight: t.constant(params.weight.clone()),
            rows: 2,
            v: t.constant(params.v.clone()),
            b: t.constant(params.b.clone()),
            b_prime: t.scalar(params.b_prime),
            lambda: t.scalar(params.lambda),
            activation: params.activation,
        };
        let xv = t.constant(x.coords().to_vec());
        let out = linear(&mut t, &vars, xv, K);
        assert_close(t.value(out), expect.coords(), 1e-14);
        let p = LorentzPoint::from_coords_unchecked(t.value(out).to_vec());
        assert!(p.membership_error(K) < 1e-12);
    }

    #[test]
    fn lift_of_zero_takes_limit_branch() {
        let mut t = Tape::new();
        let u = t.constant(vec![0.0; 3]);
        let p = lift(&mut t, u, K);
        assert_eq!(t.value(p), &[1.0, 0.0, 0.0, 0.0]);
        let s = t.sum(p);
        let g = t.gradients(s, &[u]).unwrap();
        assert_eq!(g[0], vec![1.0, 1.0, 1.0]);
    }
}
