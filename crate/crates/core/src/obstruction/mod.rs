//! The Bakry-Emery obstruction pipeline: deficit and its blow-up, horizontal
//! symmetry candidates, the commutativity verifier, and the verdict with a
//! replayable certificate.

mod commutativity;
mod deficit;
mod symmetry;
mod verdict;

use thiserror::Error;

use crate::nilpotent::NilError;
use crate::srframe::FrameError;
use crate::symcore::SymError;

pub use commutativity::{verify_commutativity_theorem, CommutativityOutcome, InclusionStep};
pub use deficit::{be_deficit, blowup_deficit, blowup_remainder_divisible, BEDeficitReport};
pub use symmetry::{
    commutes_with_sublaplacian, horizontal_symmetry_space, killing_candidate, sub_laplacian_operator,
    CommutationTest, SymmetrySpace,
};
pub use verdict::{no_be_verdict, pairing, Certificate, Outcome, ReplayReport, Verdict, DEFAULT_BUDGET_DEGREE};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ObsError {
    #[error(transparent)]
    Sym(#[from] SymError),
    #[error(transparent)]
    Frame(#[from] FrameError),
    #[error(transparent)]
    Nil(#[from] NilError),
    #[error("field X{index} of the approximating frame is not homogeneous of degree -1")]
    NotHomogeneous { index: usize },
    #[error("alpha = {0} is not weighted-homogeneous of degree 1")]
    NotDegreeOne(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("inclusion violated although all preconditions hold: {0}")]
    InclusionViolated(String),
    #[error("coordinates are not privileged for these weights: {0}")]
    NotPrivileged(String),
    #[error("density log-gradient has a pole at the base point")]
    DensityPole,
    #[error("certificate replay failed: {0}")]
    Replay(String),
}
