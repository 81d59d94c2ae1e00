use std::fmt;
use std::ops::{Add, Neg, Sub};

use super::rational::Rational;
use super::{DifferentialOperator, MultiIndex, Polynomial, RationalFunction, SymError};

/// First-order operator `X = sum_i a_i d_i` stored by its components `a_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VectorField {
    comps: Vec<Polynomial>,
}

impl VectorField {
    pub fn new(comps: Vec<Polynomial>) -> Self {
        let n = comps.len();
        assert!(comps.iter().all(|c| c.dim() == n), "vector field components must live in dimension n");
        VectorField { comps }
    }

    pub fn zero(dim: usize) -> Self {
        VectorField { comps: vec![Polynomial::zero(dim); dim] }
    }

    /// The coordinate field `d_i`.
    pub fn coordinate(dim: usize, i: usize) -> Self {
        let mut v = Self::zero(dim);
        v.comps[i] = Polynomial::one(dim);
        v
    }

    pub fn dim(&self) -> usize {
        self.comps.len()
    }

    pub fn components(&self) -> &[Polynomial] {
        &self.comps
    }

    pub fn component(&self, i: usize) -> &Polynomial {
        &self.comps[i]
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(Polynomial::is_zero)
    }

    pub fn to_operator(&self) -> DifferentialOperator {
        let n = self.dim();
        DifferentialOperator::from_terms(
            n,
            self.comps.iter().enumerate().map(|(i, a)| (MultiIndex::unit(n, i), a.clone())),
        )
    }

    /// `X f = sum_i a_i d_i f`.
    pub fn apply(&self, f: &Polynomial) -> Result<Polynomial, SymError> {
        if f.dim() != self.dim() {
            return Err(SymError::DimensionMismatch { left: self.dim(), right: f.dim() });
        }
        let mut out = Polynomial::zero(self.dim());
        for (i, a) in self.comps.iter().enumerate() {
            if !a.is_zero() {
                out += &(a * &f.derivative(i));
            }
        }
        Ok(out)
    }

    pub fn apply_rf(&self, f: &RationalFunction) -> RationalFunction {
        let mut out = RationalFunction::zero(self.dim());
        for (i, a) in self.comps.iter().enumerate() {
            if !a.is_zero() {
                out = &out + &f.derivative(i).mul_poly(a);
            }
        }
        out
    }

    /// Lie bracket `[X, Y]^k = X(Y^k) - Y(X^k)`.
    pub fn bracket(&self, other: &VectorField) -> Result<VectorField, SymError> {
        if other.dim() != self.dim() {
            return Err(SymError::DimensionMismatch { left: self.dim(), right: other.dim() });
        }
        let comps = (0..self.dim())
            .map(|k| Ok(&self.apply(&other.comps[k])? - &other.apply(&self.comps[k])?))
            .collect::<Result<Vec<_>, SymError>>()?;
        Ok(VectorField { comps })
    }

    /// Value `(a_1(x), ..., a_n(x))`.
    pub fn eval(&self, point: &[Rational]) -> Vec<Rational> {
        self.comps.iter().map(|a| a.eval(point)).collect()
    }

    pub fn eval_f64(&self, point: &[f64]) -> Vec<f64> {
        self.comps.iter().map(|a| a.eval_f64(point)).collect()
    }

    pub fn scale(&self, c: &Rational) -> VectorField {
        VectorField { comps: self.comps.iter().map(|a| a.scale(c)).collect() }
    }

    pub fn mul_poly(&self, p: &Polynomial) -> VectorField {
        VectorField { comps: self.comps.iter().map(|a| p * a).collect() }
    }

    pub fn translate(&self, shift: &[Rational]) -> VectorField {
        VectorField { comps: self.comps.iter().map(|a| a.translate(shift)).collect() }
    }
}

impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_operator())
    }
}

impl Add for &VectorField {
    type Output = VectorField;
    fn add(self, rhs: &VectorField) -> VectorField {
        VectorField { comps: self.comps.iter().zip(&rhs.comps).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &VectorField {
    type Output = VectorField;
    fn sub(self, rhs: &VectorField) -> VectorField {
        VectorField { comps: self.comps.iter().zip(&rhs.comps).map(|(a, b)| a - b).collect() }
    }
}

impl Neg for &VectorField {
    type Output = VectorField;
    fn neg(self) -> VectorField {
        VectorField { comps: self.comps.iter().map(|a| -a).collect() }
    }
}
