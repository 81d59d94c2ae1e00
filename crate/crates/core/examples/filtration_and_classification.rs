//! Flags of bracket-generating frames and the regular/singular classification
//! of points by comparison with seeded nearby probes.
//!
//! Usage: `cargo run --example filtration_and_classification`

use srkit::srframe::{classify_point, filtration_at, standard};
use srkit::symcore::rational::{int, rat};

fn main() {
    for frame in [standard::grushin(), standard::heisenberg(), standard::martinet()] {
        let n = frame.dim();
        let origin = vec![int(0); n];
        let mut off = origin.clone();
        off[0] = int(1);
        for x in [origin, off] {
            let f = filtration_at(&frame, &x, 8, true).expect("bracket-generating");
            let c = classify_point(&frame, &x, &rat(1, 8), 16, 8, 42).expect("classification runs");
            let shown: Vec<String> = x.iter().map(ToString::to_string).collect();
            println!("{} at ({}): dims {:?}, step {}, {}", frame.name(), shown.join(", "), f.dims, f.step, c.class);
        }
    }
}
