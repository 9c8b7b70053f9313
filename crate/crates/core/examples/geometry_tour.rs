//! Points, tangent vectors and the hyperbolic operations built on them.
//!
//! `cargo run --example geometry_tour`

use h2gnn::lorentz::{
    centroid, exp_map, lift_from_euclidean, log_map, lorentz_linear, origin_log,
    squared_lorentz_distance, weighted_centroid, Activation, Curvature, LorentzLinearParams,
    LorentzPoint, TangentVector,
};

fn main() -> h2gnn::Result<()> {
    let k = Curvature::STANDARD;
    let o = LorentzPoint::origin(2, k);
    println!("origin {:?}", o.coords());

    // Euclidean features enter through the origin.
    let a = lift_from_euclidean(&[0.3, 4.0], k);
    let b = lift_from_euclidean(&[-1.0, 0.5], k);
    println!(
        "a = {:.4?}  membership error {:.1e}",
        a.coords(),
        a.membership_error(k)
    );
    println!("origin_log(a) = {:.6?}", origin_log(&a, k));

    let v = log_map(&a, &b, k)?;
    let back = exp_map(&a, &v, k);
    println!("exp_a(log_a(b)) = {:.6?}", back.coords());
    println!("b               = {:.6?}", b.coords());

    // A tangent vector at the origin has zero time component.
    let step = exp_map(&o, &TangentVector::at_origin(&[1.0, 0.0]), k);
    println!(
        "one unit along x: {:.4?}, squared distance {:.4}",
        step.coords(),
        squared_lorentz_distance(&o, &step, k)
    );

    let pts = [a.clone(), b.clone(), step];
    let mid = centroid(&pts, k)?;
    println!("centroid {:.4?}", mid.coords());
    let leaning = weighted_centroid(&pts, &[5.0, 1.0, 1.0], k)?;
    println!("weighted toward a {:.4?}", leaning.coords());

    // 3 → 3 linear layer acting on the whole point, time coordinate included.
    let layer = LorentzLinearParams {
        weight: vec![0.0, 1.0, 0.0, 0.0, 0.0, 2.0],
        rows: 2,
        v: vec![0.1, 0.0, 0.0],
        b: vec![0.0, 0.0],
        b_prime: 0.0,
        lambda: 3.0,
        activation: Activation::Identity,
    };
    let y = lorentz_linear(&layer, &a, k)?;
    println!(
        "linear(a) = {:.4?}  membership error {:.1e}",
        y.coords(),
        y.membership_error(k)
    );
    Ok(())
}
