//! Exact and numeric computations on polynomial sub-Riemannian structures.
//!
//! - [`symcore`]: rational polynomials, weighted degrees, differential operators and brackets.
//! - [`srframe`]: frames, flags, point classification, calculus and covectors.
//! - [`nilpotent`]: privileged weights, nilpotent approximation and strata.
//! - [`obstruction`]: Bakry-Emery deficits, symmetries and the no-BE verdict with certificates.
//! - [`grushin`]: Ricci tensor, geodesics, distances and the Brunn-Minkowski violation on the Grushin plane.
//! - [`structure`], [`report`], [`plot`], [`selfcheck`] and [`cli`]: files, reports and the `srkit` tool.
//!
//! Each capability has a runnable example under `examples/`:
//! `symbolic_brackets`, `filtration_and_classification`, `nilpotent_strata`,
//! `bakry_emery_deficit`, `no_be_verdict`, `grushin_ricci`, `grushin_geodesics`,
//! `brunn_minkowski` and `structure_files`.

pub mod cli;
pub mod grushin;
pub mod linalg;
pub mod nilpotent;
pub mod obstruction;
pub mod plot;
pub mod report;
pub mod selfcheck;
pub mod srframe;
pub mod structure;
pub mod symcore;
