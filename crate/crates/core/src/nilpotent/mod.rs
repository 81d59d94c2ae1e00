//! Anisotropic dilations, the nilpotent approximation of a frame, and the
//! stratified algebras `g = g^1 + ... + g^s` and `h` of fields vanishing at 0.

mod approx;
mod strata;

use num_traits::{Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::srframe::{FrameError, Filtration};
use crate::symcore::rational::pow_i;
use crate::symcore::{Rational, SymError, WeightVector};

pub use approx::{
    convergence_witness, nilpotent_approximation, pushforward_rescaled, verify_privileged, ConvergenceWitness,
    PrivilegedReport,
};
pub use strata::{stratified_algebra, StratifiedAlgebra, DEFAULT_MAX_STEP};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NilError {
    #[error(transparent)]
    Sym(#[from] SymError),
    #[error(transparent)]
    Frame(#[from] FrameError),
    #[error("field X{index} has no degree -1 component (coordinates are not adapted for these weights)")]
    NoDegreeMinusOne { index: usize },
    #[error("field X{index} has a component of degree {degree} < -1, so the rescaled family diverges")]
    DegreeBelowMinusOne { index: usize, degree: i64 },
    #[error("field X{index} is not homogeneous of degree -1")]
    NotHomogeneous { index: usize },
    #[error("the approximating frame is not bracket-generating at the origin (dims {dims:?})")]
    NotBracketGenerating { dims: Vec<usize> },
    #[error("stratification did not terminate within {0} steps")]
    StepLimit(usize),
    #[error("weights have length {weights}, frame has dimension {dim}")]
    WeightLength { weights: usize, dim: usize },
    #[error("dilation factor must be positive")]
    NonPositiveFactor,
}

/// `delta_lambda(z) = (lambda^{w_1} z_1, ..., lambda^{w_n} z_n)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Dilation {
    pub weights: WeightVector,
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub factor: Rational,
}

impl Dilation {
    pub fn new(weights: WeightVector, factor: Rational) -> Result<Self, NilError> {
        if !factor.is_positive() {
            return Err(NilError::NonPositiveFactor);
        }
        Ok(Dilation { weights, factor })
    }

    /// Jacobian determinant `lambda^Q` of the dilation.
    pub fn jacobian(&self) -> Rational {
        pow_i(&self.factor, i64::from(homogeneous_dimension(&self.weights)))
    }

    pub fn inverse(&self) -> Dilation {
        Dilation { weights: self.weights.clone(), factor: self.factor.recip() }
    }
}

pub fn dilate_point(d: &Dilation, z: &[Rational]) -> Result<Vec<Rational>, NilError> {
    if z.len() != d.weights.len() {
        return Err(NilError::WeightLength { weights: d.weights.len(), dim: z.len() });
    }
    Ok(z.iter()
        .zip(d.weights.as_slice())
        .map(|(zi, &w)| zi * pow_i(&d.factor, i64::from(w)))
        .collect())
}

/// Homogeneous dimension `Q = sum_i w_i`, the exponent with which Lebesgue
/// measure scales under `delta_lambda`.
pub fn homogeneous_dimension(w: &WeightVector) -> u32 {
    w.as_slice().iter().sum()
}

/// Lebesgue measure of an axis-parallel box.
pub fn box_volume(lo: &[Rational], hi: &[Rational]) -> Rational {
    lo.iter().zip(hi).fold(Rational::from_integer(1.into()), |acc, (a, b)| acc * (b - a).abs())
}

/// Weights read off a bracket-generating filtration: `k_1` ones, then
/// `k_2 - k_1` twos, and so on. They are the privileged weights whenever the
/// coordinates are adapted to the flag at the point.
pub fn adapted_weights(f: &Filtration) -> Result<WeightVector, NilError> {
    if !f.bracket_generating {
        return Err(NilError::NotBracketGenerating { dims: f.dims.clone() });
    }
    let mut w = Vec::new();
    let mut prev = 0;
    for (i, &k) in f.dims.iter().enumerate() {
        w.extend(std::iter::repeat_n(i as u32 + 1, k - prev));
        prev = k;
    }
    Ok(WeightVector::new(w)?)
}

pub(crate) fn check_weights(w: &WeightVector, dim: usize) -> Result<(), NilError> {
    if w.len() != dim {
        return Err(NilError::WeightLength { weights: w.len(), dim });
    }
    Ok(())
}

pub(crate) fn origin(n: usize) -> Vec<Rational> {
    vec![Rational::zero(); n]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symcore::rational::{int, rat};

    fn w(v: &[u32]) -> WeightVector {
        WeightVector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn weights_from_filtrations() {
        use crate::srframe::{filtration_at, standard};
        let cases = [
            (standard::grushin(), vec![int(0), int(0)], vec![1, 2]),
            (standard::grushin(), vec![int(1), int(0)], vec![1, 1]),
            (standard::heisenberg(), vec![int(0); 3], vec![1, 1, 2]),
            (standard::martinet(), vec![int(0); 3], vec![1, 1, 3]),
        ];
        for (frame, x, expected) in cases {
            let f = filtration_at(&frame, &x, 6, true).unwrap();
            assert_eq!(adapted_weights(&f).unwrap(), w(&expected));
        }
    }

    #[test]
    fn dilations() {
        let d = Dilation::new(w(&[1, 2]), int(2)).unwrap();
        assert_eq!(dilate_point(&d, &[int(1), int(1)]).unwrap(), vec![int(2), int(4)]);
        let id = Dilation::new(w(&[1, 2]), int(1)).unwrap();
        assert_eq!(dilate_point(&id, &[rat(3, 7), int(5)]).unwrap(), vec![rat(3, 7), int(5)]);
        let h = Dilation::new(w(&[1, 1, 2]), rat(1, 2)).unwrap();
        assert_eq!(dilate_point(&h, &[int(2), int(2), int(4)]).unwrap(), vec![int(1), int(1), int(1)]);
        assert!(Dilation::new(w(&[1]), int(0)).is_err());
    }

    #[test]
    fn homogeneous_dimensions() {
        assert_eq!(homogeneous_dimension(&w(&[1, 2])), 3);
        assert_eq!(homogeneous_dimension(&w(&[1, 1, 1, 1])), 4);
        assert_eq!(homogeneous_dimension(&w(&[1, 1, 2])), 4);
    }

    #[test]
    fn measure_scales_with_q() {
        let d = Dilation::new(w(&[1, 1, 2]), rat(3, 2)).unwrap();
        let lo = vec![int(0), rat(-1, 2), int(1)];
        let hi = vec![int(1), int(2), rat(7, 3)];
        let vol = box_volume(&dilate_point(&d, &lo).unwrap(), &dilate_point(&d, &hi).unwrap());
        assert_eq!(vol, d.jacobian() * box_volume(&lo, &hi));
    }
}
