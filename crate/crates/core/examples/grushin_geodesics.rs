//! Hamiltonian geodesics and numeric distances on the Grushin plane.
//!
//! Usage: `cargo run --release --example grushin_geodesics`

use srkit::grushin::{distance_numeric, geodesic_shoot};

fn main() {
    let arc = geodesic_shoot([1.0, 0.0], [0.0, 1.0], 1.0, 1.0 / 2048.0).expect("energy conserved");
    let end = arc.end();
    println!("from (1,0) with covector (0,1): end ({:.6}, {:.6}), drift {:.1e}", end[0], end[1], arc.energy_drift);

    for (a, b) in [([1.0, 0.0], [2.0, 0.0]), ([2.0, 0.0], [2.0, 1.0]), ([-1.0, 0.0], [1.0, 0.0])] {
        let c = distance_numeric(a, b, 1e-6).expect("distance converges");
        let m = c.midpoint();
        println!(
            "d({a:?}, {b:?}) = {:.9} in [{:.4}, {:?}], midpoint ({:.4}, {:.4}), {} starts converged",
            c.distance, c.bounds.lower, c.bounds.upper, m[0], m[1], c.starts_converged
        );
    }
}
