//! Polynomial sub-Riemannian frames: filtrations, bracket generation,
//! classification of points, and the frame representation formulas for the
//! gradient, divergence, sub-Laplacian, minimal controls and the Hamiltonian.

mod calculus;
mod covector;
mod filtration;

use std::fmt;

use thiserror::Error;

use crate::symcore::{Rational, SymError, VectorField};

pub use calculus::{carre_du_champ, divergence, gradient, grad_norm_sq, integration_by_parts_residual, sub_laplacian};
pub use covector::{hamiltonian, minimal_control, sharp, MinimalControl};
pub use filtration::{
    bracket_words, classify_point, filtration_at, is_bracket_generating, BracketGeneration, BracketWord,
    Classification, Filtration, PointClass, ProbeResult,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FrameError {
    #[error(transparent)]
    Sym(#[from] SymError),
    #[error("a frame needs at least one field")]
    EmptyFrame,
    #[error("point has dimension {got}, frame has dimension {expected}")]
    PointDimension { expected: usize, got: usize },
    #[error("not bracket-generating within depth {depth}: dims {dims:?}")]
    NotBracketGenerating { depth: usize, dims: Vec<usize> },
    #[error("not horizontal: vector is outside the span of the frame at this point")]
    NotHorizontal,
    #[error("density log-gradient has a pole at the evaluation point")]
    PoleAtPoint,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

/// An ordered family `F = {X_1, ..., X_N}` of polynomial vector fields on `R^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SRFrame {
    name: String,
    dim: usize,
    fields: Vec<VectorField>,
}

impl SRFrame {
    pub fn new(name: impl Into<String>, fields: Vec<VectorField>) -> Result<Self, FrameError> {
        let first = fields.first().ok_or(FrameError::EmptyFrame)?;
        let dim = first.dim();
        if let Some(bad) = fields.iter().find(|f| f.dim() != dim) {
            return Err(SymError::DimensionMismatch { left: dim, right: bad.dim() }.into());
        }
        Ok(SRFrame { name: name.into(), dim, fields })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn fields(&self) -> &[VectorField] {
        &self.fields
    }

    pub fn len(&self) -> usize {
        self.fields.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fields.is_empty()
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// The frame expressed in coordinates centred at `x` (substitutes `z -> z + x`).
    pub fn translated(&self, x: &[Rational]) -> Result<SRFrame, FrameError> {
        self.check_point(x)?;
        Ok(SRFrame {
            name: self.name.clone(),
            dim: self.dim,
            fields: self.fields.iter().map(|f| f.translate(x)).collect(),
        })
    }

    pub(crate) fn check_point(&self, x: &[Rational]) -> Result<(), FrameError> {
        if x.len() != self.dim {
            return Err(FrameError::PointDimension { expected: self.dim, got: x.len() });
        }
        Ok(())
    }

    /// Matrix whose columns are `X_i(x)`: `n` rows, `N` columns.
    pub fn evaluation_matrix(&self, x: &[Rational]) -> Result<Vec<Vec<Rational>>, FrameError> {
        self.check_point(x)?;
        let cols: Vec<Vec<Rational>> = self.fields.iter().map(|f| f.eval(x)).collect();
        Ok((0..self.dim).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect())
    }
}

impl fmt::Display for SRFrame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.fields.iter().map(|x| x.to_string()).collect();
        write!(f, "{} {{{}}}", self.name, parts.join(", "))
    }
}

/// Frames used across examples and tests.
pub mod standard {
    use super::SRFrame;
    use crate::symcore::parse_operator;

    fn build(name: &str, dim: usize, exprs: &[&str]) -> SRFrame {
        let fields = exprs
            .iter()
            .map(|e| parse_operator(e, dim).and_then(|op| op.to_vector_field()).expect("built-in frame"))
            .collect();
        SRFrame::new(name, fields).expect("built-in frame")
    }

    /// `{d_x, x d_y}` on `R^2`.
    pub fn grushin() -> SRFrame {
        build("grushin", 2, &["dx", "x*dy"])
    }

    /// `{d_x - (y/2) d_z, d_y + (x/2) d_z}` on `R^3`.
    pub fn heisenberg() -> SRFrame {
        build("heisenberg", 3, &["dx - (1/2)*y*dz", "dy + (1/2)*x*dz"])
    }

    /// `{d_x, d_y + x^2 d_z}` on `R^3`.
    pub fn martinet() -> SRFrame {
        build("martinet", 3, &["dx", "dy + x^2*dz"])
    }

    /// Coordinate frame on `R^n`.
    pub fn euclidean(n: usize) -> SRFrame {
        let fields = (0..n).map(|i| crate::symcore::VectorField::coordinate(n, i)).collect();
        SRFrame::new(format!("euclidean{n}"), fields).expect("built-in frame")
    }
}
