//! Exact Bakry-Emery deficit `A(u) - B(u)` for polynomial test functions,
//! with and without a weighted density.
//!
//! Usage: `cargo run --example bakry_emery_deficit`

use srkit::obstruction::be_deficit;
use srkit::srframe::standard;
use srkit::structure::bundled;
use srkit::symcore::parse_polynomial;
use srkit::symcore::rational::int;

fn main() {
    let heis = standard::heisenberg();
    let u = parse_polynomial("x*z", 3).expect("valid polynomial");
    let d = be_deficit(&heis, None, &u, Some(&[int(0), int(0), int(0)])).expect("deficit");
    println!("heisenberg, u = {}: A = {}, B = {}", d.u, d.a, d.b);
    println!("  expansion equals -A: {:?}, refutes every K at 0: {:?}", d.expansion_is_minus_a, d.refutes_all_k);

    let g = bundled("grushin").expect("bundled structure");
    let u = parse_polynomial("x^2 + y", 2).expect("valid polynomial");
    let d = be_deficit(&g.frame, g.density(), &u, Some(&[int(1), int(0)])).expect("deficit off the singular line");
    println!("grushin with |x| density, u = {}: A = {}", d.u, d.a);
    println!("  at (1,0): A = {:?}, B = {:?}", d.a_at_point.map(|a| a.to_string()), d.b_at_point.map(|b| b.to_string()));
}
