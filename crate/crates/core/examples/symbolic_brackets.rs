//! Exact Lie brackets and weighted degrees of polynomial vector fields.
//!
//! Usage: `cargo run --example symbolic_brackets`

use srkit::symcore::{parse_operator, parse_polynomial, WeightVector};

fn main() {
    let n = 3;
    let field = |s: &str| parse_operator(s, n).and_then(|op| op.to_vector_field()).expect("valid field");
    let x1 = field("dx - (1/2)*y*dz");
    let x2 = field("dy + (1/2)*x*dz");
    let x12 = x1.bracket(&x2).expect("same dimension");
    println!("X1 = {x1}\nX2 = {x2}\n[X1, X2] = {x12}");

    let w = WeightVector::new(vec![1, 1, 2]).expect("positive weights");
    for (name, f) in [("X1", &x1), ("X2", &x2), ("[X1,X2]", &x12)] {
        let degree = f.to_operator().operator_degree(&w).expect("weights match");
        println!("deg_w {name} = {degree:?}");
    }

    let u = parse_polynomial("x^2*z + y^3 - 3*z^2", n).expect("valid polynomial");
    for (k, part) in u.homogeneous_components(&w) {
        println!("weighted degree {k}: {part}");
    }
    let lhs = x1.apply(&x2.apply(&u).unwrap()).unwrap() - x2.apply(&x1.apply(&u).unwrap()).unwrap();
    println!("X1 X2 u - X2 X1 u == [X1,X2] u: {}", lhs == x12.apply(&u).unwrap());
}
