//! Lorentz (hyperboloid) model geometry.
//!
//! A point of the `n`-dimensional hyperbolic space with curvature `k < 0` is stored
//! as an `n + 1` vector `x = [x_t; x_s]` on the upper sheet of
//! `⟨x, x⟩_H = 1/k`, where `⟨x, y⟩_H = -x_t y_t + x_s·y_s`.
//!
//! Everything in this module works on plain `f64` slices and is pure. The
//! differentiable counterparts used during training live in [`diff`]; the two are
//! kept as separate code paths so each can serve as the oracle for the other.

pub mod diff;

use crate::error::{Error, Result};

/// Below this angle the exponential and logarithmic maps use their first-order limits.
pub const SMALL_ANGLE: f64 = 1e-12;

/// Lower clamp applied to `β` (and every `acosh` argument).
pub const ACOSH_FLOOR: f64 = 1.0 + 1e-12;

/// Tolerance used when validating hyperboloid membership of externally supplied points.
pub const MEMBERSHIP_TOL: f64 = 1e-9;

/// Negative sectional curvature of the hyperboloid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Curvature(f64);

impl Curvature {
    /// The standard hyperboloid, `k = -1`.
    pub const STANDARD: Curvature = Curvature(-1.0);

    pub fn new(k: f64) -> Result<Self> {
        if k < 0.0 && k.is_finite() {
            Ok(Curvature(k))
        } else {
            Err(Error::Argument(format!(
                "curvature must be negative, got {k}"
            )))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// `√-k`
    pub fn sqrt_neg(self) -> f64 {
        (-self.0).sqrt()
    }

    /// `1/k`, the squared Lorentzian norm of every point.
    pub fn inv(self) -> f64 {
        1.0 / self.0
    }
}

impl Default for Curvature {
    fn default() -> Self {
        Curvature::STANDARD
    }
}

/// A point on the upper sheet of the hyperboloid.
#[derive(Debug, Clone, PartialEq)]
pub struct LorentzPoint {
    coords: Vec<f64>,
}

impl LorentzPoint {
    /// Validates membership (`|⟨x,x⟩_H − 1/k|` within a tolerance scaled by `x_t²`) and `x_t > 0`.
    pub fn new(coords: Vec<f64>, k: Curvature) -> Result<Self> {
        if coords.len() < 2 {
            return Err(Error::Dimension {
                expected: 2,
                got: coords.len(),
            });
        }
        let p = LorentzPoint { coords };
        let t = p.time();
        let err = p.membership_error(k);
        if !(t > 0.0) || !(err <= MEMBERSHIP_TOL * (1.0 + t * t)) {
            return Err(Error::Geometry(format!(
                "point is not on the upper hyperboloid sheet (x_t = {t}, membership error {err:e})"
            )));
        }
        Ok(p)
    }

    /// Wraps coordinates without checking membership.
    pub fn from_coords_unchecked(coords: Vec<f64>) -> Self {
        LorentzPoint { coords }
    }

    /// The origin `(1/√-k, 0, …, 0)` of `H^dim`.
    pub fn origin(dim: usize, k: Curvature) -> Self {
        let mut coords = vec![0.0; dim + 1];
        coords[0] = 1.0 / k.sqrt_neg();
        LorentzPoint { coords }
    }

    /// Intrinsic dimension `n` (the vector has `n + 1` entries).
    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn time(&self) -> f64 {
        self.coords[0]
    }

    pub fn space(&self) -> &[f64] {
        &self.coords[1..]
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.coords
    }

    /// `|⟨x,x⟩_H − 1/k|`
    pub fn membership_error(&self, k: Curvature) -> f64 {
        (minkowski_dot(&self.coords, &self.coords) - k.inv()).abs()
    }
}

/// A vector in the tangent space of some base point.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentVector {
    coords: Vec<f64>,
}

impl TangentVector {
    pub fn new(coords: Vec<f64>) -> Self {
        TangentVector { coords }
    }

    pub fn zeros(dim: usize) -> Self {
        TangentVector {
            coords: vec![0.0; dim + 1],
        }
    }

    /// Embeds a Euclidean vector as `(0, u)`, tangent at the origin.
    pub fn at_origin(u: &[f64]) -> Self {
        let mut coords = Vec::with_capacity(u.len() + 1);
        coords.push(0.0);
        coords.extend_from_slice(u);
        TangentVector { coords }
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.coords
    }

    /// Whether `⟨base, v⟩_H = 0` within `tol`.
    pub fn is_tangent_to(&self, base: &LorentzPoint, tol: f64) -> bool {
        self.coords.len() == base.coords.len()
            && minkowski_dot(base.coords(), &self.coords).abs() <= tol
    }
}

/// `−x_t y_t + x_s·y_s` without a length check.
#[inline]
pub(crate) fn minkowski_dot(x: &[f64], y: &[f64]) -> f64 {
    debug_assert_eq!(x.len(), y.len());
    let mut acc = -x[0] * y[0];
    for i in 1..x.len() {
        acc += x[i] * y[i];
    }
    acc
}

/// Minkowski bilinear form `⟨x, y⟩_H = −x_t y_t + x_s·y_s`.
pub fn minkowski_inner(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::Dimension {
            expected: x.len(),
            got: y.len(),
        });
    }
    if x.len() < 2 {
        return Err(Error::Dimension {
            expected: 2,
            got: x.len(),
        });
    }
    Ok(minkowski_dot(x, y))
}

/// Lorentzian norm `√|⟨v, v⟩_H|`.
pub fn lorentz_norm(v: &[f64]) -> f64 {
    if v.is_empty() {
        return 0.0;
    }
    minkowski_dot(v, v).abs().sqrt()
}

/// Exponential map `exp_x(v) = cosh(α) x + sinh(α) v / α` with `α = √-k ‖v‖_H`.
pub fn exp_map(x: &LorentzPoint, v: &TangentVector, k: Curvature) -> LorentzPoint {
    assert_eq!(
        x.coords.len(),
        v.coords.len(),
        "exp_map: dimension mismatch"
    );
    let alpha = k.sqrt_neg() * lorentz_norm(&v.coords);
    let coords = if alpha < SMALL_ANGLE {
        x.coords.iter().zip(&v.coords).map(|(a, b)| a + b).collect()
    } else {
        let c = alpha.cosh();
        let s = alpha.sinh() / alpha;
        x.coords
            .iter()
            .zip(&v.coords)
            .map(|(a, b)| c * a + s * b)
            .collect()
    };
    LorentzPoint { coords }
}

/// Logarithmic map `log_x(y) = acosh(β) / √(β²−1) · (y − βx)` with `β = k⟨x,y⟩_H`.
///
/// `β` is clamped to `1 + 1e-12` from below; a `β` below `1 − 1e-6` means the two
/// points are not on the same hyperboloid and is reported as an error. The result is
/// projected onto the tangent space at `x` to remove rounding drift.
pub fn log_map(x: &LorentzPoint, y: &LorentzPoint, k: Curvature) -> Result<TangentVector> {
    if x.coords.len() != y.coords.len() {
        return Err(Error::Dimension {
            expected: x.coords.len(),
            got: y.coords.len(),
        });
    }
    let beta = k.value() * minkowski_dot(&x.coords, &y.coords);
    if beta < 1.0 - 1e-6 {
        return Err(Error::Geometry(format!(
            "log_map: β = {beta} < 1, points are not on the same hyperboloid"
        )));
    }
    let beta = beta.max(ACOSH_FLOOR);
    let coef = beta.acosh() / (beta * beta - 1.0).sqrt();
    let mut v: Vec<f64> = x
        .coords
        .iter()
        .zip(&y.coords)
        .map(|(a, b)| coef * (b - beta * a))
        .collect();
    // v ← v − ⟨x,v⟩/⟨x,x⟩ · x, with ⟨x,x⟩ = 1/k
    let drift = k.value() * minkowski_dot(&x.coords, &v);
    for (vi, xi) in v.iter_mut().zip(&x.coords) {
        *vi -= drift * xi;
    }
    Ok(TangentVector { coords: v })
}

/// Squared Lorentzian distance `2/k − 2⟨a, b⟩_H`, clamped at zero.
pub fn squared_lorentz_distance(a: &LorentzPoint, b: &LorentzPoint, k: Curvature) -> f64 {
    assert_eq!(
        a.coords.len(),
        b.coords.len(),
        "distance: dimension mismatch"
    );
    (2.0 * k.inv() - 2.0 * minkowski_dot(&a.coords, &b.coords)).max(0.0)
}

/// Weighted Lorentzian centroid `Σ v_j y_j / (√-k |‖Σ v_i y_i‖_H|)`.
///
/// This is the closed-form minimizer of `Σ v_i d_H²(y_i, ω)` over the hyperboloid.
/// Points are summed in input order.
pub fn weighted_centroid(
    points: &[LorentzPoint],
    weights: &[f64],
    k: Curvature,
) -> Result<LorentzPoint> {
    if points.is_empty() {
        return Err(Error::Argument("centroid of an empty point set".into()));
    }
    if weights.len() != points.len() {
        return Err(Error::Dimension {
            expected: points.len(),
            got: weights.len(),
        });
    }
    let width = points[0].coords.len();
    let mut sum = vec![0.0; width];
    for (p, &w) in points.iter().zip(weights) {
        if p.coords.len() != width {
            return Err(Error::Dimension {
                expected: width,
                got: p.coords.len(),
            });
        }
        for (s, c) in sum.iter_mut().zip(&p.coords) {
            *s += w * c;
        }
    }
    let sq = minkowski_dot(&sum, &sum);
    if !(sq < 0.0) || !(sum[0] > 0.0) {
        return Err(Error::Geometry(
            "centroid: weighted sum is not a future time-like vector".into(),
        ));
    }
    let denom = k.sqrt_neg() * sq.abs().sqrt();
    Ok(LorentzPoint {
        coords: sum.into_iter().map(|s| s / denom).collect(),
    })
}

/// Unit-weight Lorentzian centroid.
pub fn centroid(points: &[LorentzPoint], k: Curvature) -> Result<LorentzPoint> {
    let weights = vec![1.0; points.len()];
    weighted_centroid(points, &weights, k)
}

/// Maps a Euclidean feature `u ∈ ℝⁿ` to `exp_o((0, u))`.
pub fn lift_from_euclidean(u: &[f64], k: Curvature) -> LorentzPoint {
    let origin = LorentzPoint::origin(u.len(), k);
    exp_map(&origin, &TangentVector::at_origin(u), k)
}

/// Space part of `log_o(x)`, i.e. the Euclidean vector whose lift is `x`.
///
/// Evaluated as `asinh(√-k ‖x_s‖) / (√-k ‖x_s‖) · x_s`, which equals the logarithmic map
/// at the origin on the hyperboloid and avoids the cancellation in `β² − 1` near the origin.
pub fn origin_log(x: &LorentzPoint, k: Curvature) -> Vec<f64> {
    let space = x.space();
    let r = k.sqrt_neg() * space.iter().map(|s| s * s).sum::<f64>().sqrt();
    if r < SMALL_ANGLE {
        return space.to_vec();
    }
    let f = r.asinh() / r;
    space.iter().map(|s| f * s).collect()
}

/// Activation `h` applied to the input of a Lorentz linear layer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Activation {
    #[default]
    Identity,
    Relu,
}

impl Activation {
    pub fn apply(self, x: f64) -> f64 {
        match self {
            Activation::Identity => x,
            Activation::Relu => x.max(0.0),
        }
    }
}

/// Parameters of the fully hyperbolic linear layer `H^n → H^m`.
///
/// `weight` is `m × (n+1)` row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct LorentzLinearParams {
    pub weight: Vec<f64>,
    pub rows: usize,
    pub v: Vec<f64>,
    pub b: Vec<f64>,
    pub b_prime: f64,
    pub lambda: f64,
    pub activation: Activation,
}

impl LorentzLinearParams {
    pub fn in_width(&self) -> usize {
        self.v.len()
    }

    pub fn validate(&self) -> Result<()> {
        let cols = self.v.len();
        if self.weight.len() != self.rows * cols {
            return Err(Error::Dimension {
                expected: self.rows * cols,
                got: self.weight.len(),
            });
        }
        if self.b.len() != self.rows {
            return Err(Error::Dimension {
                expected: self.rows,
                got: self.b.len(),
            });
        }
        if !(self.lambda > 0.0) {
            return Err(Error::Argument(format!(
                "lambda must be positive, got {}",
                self.lambda
            )));
        }
        Ok(())
    }
}

pub(crate) fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// Fully hyperbolic linear transform.
///
/// `φ = λ σ(v·x + b′) / ‖W h(x) + b‖ · (W h(x) + b)`, output `[√(‖φ‖² − 1/k); φ]`.
/// When `‖W h(x) + b‖ < 1e-12` the direction falls back to the first space axis.
pub fn lorentz_linear(
    p: &LorentzLinearParams,
    x: &LorentzPoint,
    k: Curvature,
) -> Result<LorentzPoint> {
    p.validate()?;
    let cols = p.v.len();
    if x.coords.len() != cols {
        return Err(Error::Dimension {
            expected: cols,
            got: x.coords.len(),
        });
    }
    let hx: Vec<f64> = x.coords.iter().map(|&c| p.activation.apply(c)).collect();
    let mut dir: Vec<f64> = (0..p.rows)
        .map(|r| {
            let row = &p.weight[r * cols..(r + 1) * cols];
            row.iter().zip(&hx).map(|(w, h)| w * h).sum::<f64>() + p.b[r]
        })
        .collect();
    let norm = dir.iter().map(|d| d * d).sum::<f64>().sqrt();
    if norm < SMALL_ANGLE {
        dir.iter_mut().for_each(|d| *d = 0.0);
        dir[0] = 1.0;
    } else {
        dir.iter_mut().for_each(|d| *d /= norm);
    }
    let gate: f64 = p.v.iter().zip(&x.coords).map(|(a, b)| a * b).sum::<f64>() + p.b_prime;
    let scale = p.lambda * sigmoid(gate);
    let phi: Vec<f64> = dir.iter().map(|d| scale * d).collect();
    let sq: f64 = phi.iter().map(|f| f * f).sum();
    let mut coords = Vec::with_capacity(p.rows + 1);
    coords.push((sq - k.inv()).sqrt());
    coords.extend(phi);
    Ok(LorentzPoint { coords })
}

#[cfg(test)]
mod tests {
    use super::*;

    const K: Curvature = Curvature::STANDARD;

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    fn pt(c: &[f64]) -> LorentzPoint {
        LorentzPoint::new(c.to_vec(), K).unwrap()
    }

    #[test]
    fn inner_product_examples() {
        assert_eq!(
            minkowski_inner(&[1.0, 0.0, 0.0], &[1.0, 0.0, 0.0]).unwrap(),
            -1.0
        );
        assert_eq!(
            minkowski_inner(&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0]).unwrap(),
            0.0
        );
        let (c, s) = (1f64.cosh(), 1f64.sinh());
        let got = minkowski_inner(&[c, s, 0.0], &[c, -s, 0.0]).unwrap();
        // direct summation: −c² − s²
        assert!((got - (-c * c - s * s)).abs() < 1e-15);
        assert!((got + 2f64.cosh()).abs() < 1e-12);
        assert!((got + 3.7622).abs() < 1e-4);
    }

    #[test]
    fn inner_product_rejects_mismatched_lengths() {
        assert!(matches!(
            minkowski_inner(&[1.0, 0.0], &[1.0, 0.0, 0.0]),
            Err(Error::Dimension { .. })
        ));
        assert!(minkowski_inner(&[1.0], &[1.0]).is_err());
    }

    #[test]
    fn norm_examples() {
        assert_eq!(lorentz_norm(&[0.0, 1.0, 0.0]), 1.0);
        assert_eq!(lorentz_norm(&[1.0, 0.0, 0.0]), 1.0);
        assert_eq!(lorentz_norm(&[0.0, 3.0, 4.0]), 5.0);
    }

    #[test]
    fn exp_map_examples() {
        let o = LorentzPoint::origin(2, K);
        assert_eq!(exp_map(&o, &TangentVector::zeros(2), K), o);
        let y = exp_map(&o, &TangentVector::new(vec![0.0, 1.0, 0.0]), K);
        assert!(close(y.coords(), &[1f64.cosh(), 1f64.sinh(), 0.0], 1e-15));
        assert!((y.coords()[0] - 1.5431).abs() < 1e-4 && (y.coords()[1] - 1.1752).abs() < 1e-4);
        assert!(y.membership_error(K) < 1e-12);
        let z = exp_map(&o, &TangentVector::new(vec![0.0, 0.0, 2.0]), K);
        assert!(close(z.coords(), &[2f64.cosh(), 0.0, 2f64.sinh()], 1e-14));
    }

    #[test]
    fn exp_map_general_curvature_stays_on_sheet() {
        let k = Curvature::new(-0.25).unwrap();
        let o = LorentzPoint::origin(3, k);
        let y = exp_map(&o, &TangentVector::at_origin(&[0.3, -1.2, 0.7]), k);
        assert!(y.membership_error(k) < 1e-12);
        let back = log_map(&o, &y, k).unwrap();
        assert!(close(back.coords(), &[0.0, 0.3, -1.2, 0.7], 1e-12));
    }

    #[test]
    fn log_map_examples() {
        let o = LorentzPoint::origin(2, K);
        assert!(close(log_map(&o, &o, K).unwrap().coords(), &[0.0; 3], 0.0));
        let y = pt(&[1f64.cosh(), 1f64.sinh(), 0.0]);
        assert!(close(
            log_map(&o, &y, K).unwrap().coords(),
            &[0.0, 1.0, 0.0],
            1e-12
        ));
    }

    #[test]
    fn log_map_rejects_points_off_the_same_sheet() {
        let o = LorentzPoint::origin(2, K);
        // lower sheet point: β = −1
        let bad = LorentzPoint::from_coords_unchecked(vec![-1.0, 0.0, 0.0]);
        assert!(matches!(log_map(&o, &bad, K), Err(Error::Geometry(_))));
    }

    #[test]
    fn distance_examples() {
        let o = LorentzPoint::origin(2, K);
        let a = pt(&[1f64.cosh(), 1f64.sinh(), 0.0]);
        let b = pt(&[1f64.cosh(), -1f64.sinh(), 0.0]);
        assert_eq!(squared_lorentz_distance(&o, &o, K), 0.0);
        assert!((squared_lorentz_distance(&o, &a, K) - (-2.0 + 2.0 * 1f64.cosh())).abs() < 1e-14);
        assert!((squared_lorentz_distance(&o, &a, K) - 1.0862).abs() < 1e-4);
        assert!((squared_lorentz_distance(&a, &b, K) - (-2.0 + 2.0 * 2f64.cosh())).abs() < 1e-12);
        assert!((squared_lorentz_distance(&a, &b, K) - 5.5244).abs() < 1e-4);
    }

    #[test]
    fn centroid_examples() {
        let y = pt(&[1f64.cosh(), 1f64.sinh(), 0.0]);
        assert!(close(
            centroid(std::slice::from_ref(&y), K).unwrap().coords(),
            y.coords(),
            1e-15
        ));
        let z = pt(&[1f64.cosh(), -1f64.sinh(), 0.0]);
        let c = centroid(&[y, z], K).unwrap();
        assert!(close(c.coords(), &[1.0, 0.0, 0.0], 1e-15));
    }

    #[test]
    fn centroid_errors() {
        assert!(matches!(centroid(&[], K), Err(Error::Argument(_))));
        let o = LorentzPoint::origin(2, K);
        assert!(weighted_centroid(&[o.clone()], &[1.0, 2.0], K).is_err());
        assert!(matches!(
            weighted_centroid(&[o], &[-1.0], K),
            Err(Error::Geometry(_))
        ));
    }

    #[test]
    fn lorentz_linear_example() {
        let p = LorentzLinearParams {
            weight: vec![0.0; 2 * 3],
            rows: 2,
            v: vec![0.0; 3],
            b: vec![1.0, 0.0],
            b_prime: 0.0,
            lambda: 1.0,
            activation: Activation::Identity,
        };
        let out = lorentz_linear(&p, &LorentzPoint::origin(2, K), K).unwrap();
        assert!(close(out.coords(), &[1.25f64.sqrt(), 0.5, 0.0], 1e-15));
        assert!((out.coords()[0] - 1.1180).abs() < 1e-4);
        assert!(out.membership_error(K) < 1e-12);
    }

    #[test]
    fn lorentz_linear_lambda_scales_space_part() {
        let x = lift_from_euclidean(&[0.4, -0.2], K);
        let mut p = LorentzLinearParams {
            weight: vec![0.3, -1.0, 0.5, 0.2, 0.7, -0.4, 1.1, 0.0, 0.9],
            rows: 3,
            v: vec![0.1, 0.2, -0.3],
            b: vec![0.05, -0.1, 0.2],
            b_prime: 0.3,
            lambda: 1.0,
            activation: Activation::Relu,
        };
        let one = lorentz_linear(&p, &x, K).unwrap();
        p.lambda = 2.0;
        let two = lorentz_linear(&p, &x, K).unwrap();
        for (a, b) in one.space().iter().zip(two.space()) {
            assert!((2.0 * a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn lorentz_linear_degenerate_direction() {
        let p = LorentzLinearParams {
            weight: vec![0.0; 2 * 3],
            rows: 2,
            v: vec![0.0; 3],
            b: vec![0.0; 2],
            b_prime: 0.0,
            lambda: 3.0,
            activation: Activation::Identity,
        };
        let out = lorentz_linear(&p, &LorentzPoint::origin(2, K), K).unwrap();
        assert!(close(out.space(), &[1.5, 0.0], 1e-15));
        assert!(out.membership_error(K) < 1e-12);
    }

    #[test]
    fn lorentz_linear_rejects_bad_params() {
        let mut p = LorentzLinearParams {
            weight: vec![0.0; 6],
            rows: 2,
            v: vec![0.0; 3],
            b: vec![0.0; 2],
            b_prime: 0.0,
            lambda: 0.0,
            activation: Activation::Identity,
        };
        let o = LorentzPoint::origin(2, K);
        assert!(lorentz_linear(&p, &o, K).is_err());
        p.lambda = 1.0;
        assert!(lorentz_linear(&p, &LorentzPoint::origin(3, K), K).is_err());
    }

    #[test]
    fn lift_examples() {
        assert!(close(
            lift_from_euclidean(&[0.0; 4], K).coords(),
            &[1.0, 0.0, 0.0, 0.0, 0.0],
            0.0
        ));
        assert!(close(
            lift_from_euclidean(&[1.0, 0.0], K).coords(),
            &[1f64.cosh(), 1f64.sinh(), 0.0],
            1e-15
        ));
        assert!(close(
            lift_from_euclidean(&[0.0, 2.0], K).coords(),
            &[2f64.cosh(), 0.0, 2f64.sinh()],
            1e-14
        ));
    }

    #[test]
    fn origin_log_inverts_lift() {
        for u in [[0.0, 0.0], [1e-9, -2e-9], [0.3, 4.0], [-3.0, 3.9]] {
            let back = origin_log(&lift_from_euclidean(&u, K), K);
            assert!(close(&back, &u, 1e-12), "{u:?} -> {back:?}");
        }
    }

    #[test]
    fn point_validation() {
        assert!(LorentzPoint::new(vec![1.0, 0.5], K).is_err());
        assert!(LorentzPoint::new(vec![-1.0, 0.0], K).is_err());
        assert!(LorentzPoint::new(vec![1.0], K).is_err());
        assert!(Curvature::new(0.0).is_err());
        assert!(Curvature::new(1.0).is_err());
    }
}
