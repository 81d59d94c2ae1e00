//! Nilpotent approximation in privileged coordinates and the strata of the
//! tangent algebra together with its isotropy part.
//!
//! Usage: `cargo run --example nilpotent_strata`

use srkit::nilpotent::{adapted_weights, nilpotent_approximation, stratified_algebra, DEFAULT_MAX_STEP};
use srkit::srframe::{filtration_at, standard};
use srkit::symcore::rational::int;

fn main() {
    let grushin_at_one = standard::grushin().translated(&[int(1), int(0)]).expect("translation").with_name("grushin@(1,0)");
    for frame in [standard::heisenberg(), standard::grushin(), standard::martinet(), grushin_at_one] {
        let origin = vec![int(0); frame.dim()];
        let flag = filtration_at(&frame, &origin, 8, true).expect("bracket-generating");
        let w = adapted_weights(&flag).expect("weights from the flag");
        let hat = nilpotent_approximation(&frame, &w).expect("privileged coordinates");
        let strata = stratified_algebra(&hat, &w, DEFAULT_MAX_STEP).expect("nilpotent algebra");
        let fields: Vec<String> = hat.fields().iter().map(ToString::to_string).collect();
        println!("{}: weights {w}, approximation [{}]", frame.name(), fields.join(", "));
        println!("  g dims {:?}, h dims {:?}, k1 = {}, Q = {}", strata.g_dims(), strata.h_dims(), strata.k1, strata.q);
        for c in strata.checks() {
            println!("  {} {}", if c.passed { "ok  " } else { "FAIL" }, c.name);
        }
    }
}
