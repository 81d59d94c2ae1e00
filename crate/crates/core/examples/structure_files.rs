//! Loading structure files, including a located syntax error, and running the
//! invariant suite on every bundled structure.
//!
//! Usage: `cargo run --example structure_files [file.toml]`

use srkit::selfcheck::selfcheck_structure;
use srkit::structure::{bundled, parse_structure, parse_structure_str, BUNDLED};

fn main() {
    let structures = match std::env::args().nth(1) {
        Some(path) => vec![parse_structure(path.as_ref()).unwrap_or_else(|e| panic!("{e}"))],
        None => BUNDLED.iter().map(|(name, _)| bundled(name).expect("bundled")).collect(),
    };
    for s in &structures {
        let (summary, checks) = selfcheck_structure(s, 42, 8);
        let passed = checks.iter().filter(|c| c.passed).count();
        println!("{}: {passed}/{} checks, {summary}", s.source, checks.len());
    }
    let bad = "name = \"bad\"\ndimension = 2\nfields = [\"dx\", \"x^-1*dy\"]\n";
    println!("{}", parse_structure_str(bad, "bad.toml").unwrap_err());
}
