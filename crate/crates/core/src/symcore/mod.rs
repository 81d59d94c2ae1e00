//! Exact polynomial and differential-operator algebra with weighted grading.

mod multi_index;
mod operator;
pub mod parse;
mod polynomial;
pub mod rational;
mod ratfunc;
mod vector_field;
mod weights;

use thiserror::Error;

pub use multi_index::MultiIndex;
pub use operator::{DifferentialOperator, OpTerm};
pub use parse::{parse_operator, parse_polynomial, parse_rational_function};
pub use polynomial::{PolyTerm, Polynomial, WeightedDegree};
pub use ratfunc::RationalFunction;
pub use rational::Rational;
pub use vector_field::VectorField;
pub use weights::WeightVector;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SymError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("degree of zero undefined")]
    ZeroDegree,
    #[error("invalid weights: {0}")]
    InvalidWeights(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("evaluation at a pole")]
    Pole,
    #[error("operator is not a vector field")]
    NotVectorField,
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("malformed serialized term: {0}")]
    Json(String),
}

/// `div_m X = sum_i d_i a_i + sum_i a_i d_i(log rho)` for `m = rho dz`.
///
/// `log_density_grad` holds `d_i log rho` per coordinate; `None` means Lebesgue measure.
pub fn divergence(
    x: &VectorField,
    log_density_grad: Option<&[RationalFunction]>,
) -> Result<RationalFunction, SymError> {
    let n = x.dim();
    let mut flat = Polynomial::zero(n);
    for (i, a) in x.components().iter().enumerate() {
        flat += &a.derivative(i);
    }
    let mut out = RationalFunction::from_poly(flat);
    if let Some(ell) = log_density_grad {
        if ell.len() != n {
            return Err(SymError::DimensionMismatch { left: n, right: ell.len() });
        }
        for (a, l) in x.components().iter().zip(ell) {
            if !a.is_zero() {
                out = &out + &l.mul_poly(a);
            }
        }
    }
    Ok(out)
}
