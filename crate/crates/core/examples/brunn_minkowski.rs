//! Brunn-Minkowski violation on the weighted Grushin plane: the two far boxes
//! `A_0`, `A_1` have large `|x|^p` mass while every midpoint between them
//! lies in a thin strip around the singular line.
//!
//! Usage: `cargo run --release --example brunn_minkowski -- [p] [l] [grid]`

use srkit::grushin::bm_violation_check;
use srkit::symcore::rational::parse_rational;

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let arg = |i: usize, default: &str| args.get(i).cloned().unwrap_or_else(|| default.to_string());
    let p = parse_rational(&arg(0, "1")).expect("p is a rational");
    let ell = parse_rational(&arg(1, "50")).expect("l is a rational");
    let grid: usize = arg(2, "32").parse().expect("grid is an integer");

    let started = std::time::Instant::now();
    let r = bm_violation_check(&p, &ell, grid, None, 1e-4).expect("bm check runs");
    let mid = &r.midpoints;
    println!("p = {}, l = {}, {} endpoint pairs", r.p, r.ell, mid.samples.len());
    println!("m(A0) = m(A1) = {:?}", r.m_a0.exact.as_ref().map(ToString::to_string));
    println!("midpoints: x in [{:.6}, {:.6}], y in [{:.6}, {:.6}]", mid.x_range[0], mid.x_range[1], mid.y_range[0], mid.y_range[1]);
    println!("analytic eps = {}, rejected = {}", mid.eps_analytic, mid.rejected);
    println!("bound m(A_1/2) <= {:.6}, sqrt(m0 m1) = {:.6}", r.bound.approx, r.sqrt_product.approx);
    println!("violation: {:?} ({:.2?})", r.violation, started.elapsed());
}
