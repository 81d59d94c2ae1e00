//! The no-Bakry-Emery verdict with its replayable certificate, and the
//! commutativity verifier with a waived precondition.
//!
//! Usage: `cargo run --example no_be_verdict`

use srkit::nilpotent::{nilpotent_approximation, stratified_algebra, DEFAULT_MAX_STEP};
use srkit::obstruction::{no_be_verdict, verify_commutativity_theorem, Verdict, DEFAULT_BUDGET_DEGREE};
use srkit::srframe::standard;
use srkit::symcore::rational::int;
use srkit::symcore::WeightVector;

fn main() {
    let cases = [
        (standard::heisenberg(), vec![1, 1, 2]),
        (standard::grushin(), vec![1, 2]),
        (standard::euclidean(2), vec![1, 1]),
    ];
    for (frame, w) in cases {
        let w = WeightVector::new(w).expect("positive weights");
        let origin = vec![int(0); frame.dim()];
        let v = no_be_verdict(&frame, &origin, &w, DEFAULT_BUDGET_DEGREE).expect("verdict");
        let back = Verdict::from_json(&v.to_json()).expect("round trip");
        let replay = back.replay().expect("replay");
        println!("{}: {} (replay reproduced: {})", frame.name(), v.outcome, replay.reproduced);
        println!("  {}", serde_json::to_string(&v.certificate).expect("serializes"));
    }

    let heis = standard::heisenberg();
    let w = WeightVector::new(vec![1, 1, 2]).unwrap();
    let hat = nilpotent_approximation(&heis, &w).unwrap();
    let strata = stratified_algebra(&hat, &w, DEFAULT_MAX_STEP).unwrap();
    let outcome = verify_commutativity_theorem(&strata, &hat, strata.g_stratum(1), true).unwrap();
    for step in outcome.trace() {
        let status = if step.holds { "holds" } else { "fails" };
        println!("  waived heisenberg: {} {status} {}", step.claim, step.counterexample.as_deref().unwrap_or(""));
    }
}
