use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::rational::Rational;
use super::{MultiIndex, Polynomial, SymError};

/// Quotient `num / den` of two polynomials.
///
/// Equality is semantic (`a/b == c/d` iff `a*d == b*c`). Results are lightly
/// normalized: common monomial factors are cancelled, the denominator's
/// leading coefficient is made 1, and exact polynomial quotients collapse.
#[derive(Clone, Debug)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

impl RationalFunction {
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self, SymError> {
        if num.dim() != den.dim() {
            return Err(SymError::DimensionMismatch { left: num.dim(), right: den.dim() });
        }
        if den.is_zero() {
            return Err(SymError::DivisionByZero);
        }
        Ok(Self::normalized(num, den))
    }

    pub fn from_poly(p: Polynomial) -> Self {
        let dim = p.dim();
        RationalFunction { num: p, den: Polynomial::one(dim) }
    }

    pub fn zero(dim: usize) -> Self {
        Self::from_poly(Polynomial::zero(dim))
    }

    pub fn constant(dim: usize, c: Rational) -> Self {
        Self::from_poly(Polynomial::constant(dim, c))
    }

    pub fn num(&self) -> &Polynomial {
        &self.num
    }

    pub fn den(&self) -> &Polynomial {
        &self.den
    }

    pub fn dim(&self) -> usize {
        self.num.dim()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The polynomial this function equals, if the denominator is a constant.
    pub fn as_polynomial(&self) -> Option<Polynomial> {
        self.den.as_constant().map(|c| self.num.scale(&c.recip()))
    }

    fn normalized(num: Polynomial, den: Polynomial) -> Self {
        let dim = num.dim();
        if num.is_zero() {
            return Self::zero(dim);
        }
        // Cancel the largest monomial dividing both.
        let common = num
            .terms()
            .chain(den.terms())
            .map(|(m, _)| m.entries().to_vec())
            .reduce(|a, b| a.iter().zip(&b).map(|(x, y)| *x.min(y)).collect())
            .map(MultiIndex::new)
            .unwrap_or_else(|| MultiIndex::zeros(dim));
        let (mut num, mut den) = if common.is_zero() {
            (num, den)
        } else {
            let shift = |p: &Polynomial| {
                Polynomial::from_terms(
                    dim,
                    p.terms().map(|(m, c)| (m.checked_sub(&common).expect("common factor"), c.clone())),
                )
            };
            (shift(&num), shift(&den))
        };
        if !den.is_constant() {
            if let Some(q) = num.exact_div(&den) {
                num = q;
                den = Polynomial::one(dim);
            }
        }
        let lead = den.terms().next_back().map(|(_, c)| c.clone()).unwrap_or_else(Rational::one);
        if !lead.is_one() {
            let inv = lead.recip();
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        RationalFunction { num, den }
    }

    pub fn derivative(&self, i: usize) -> RationalFunction {
        let n = &(&self.num.derivative(i) * &self.den) - &(&self.num * &self.den.derivative(i));
        let d = &self.den * &self.den;
        Self::normalized(n, d)
    }

    pub fn eval(&self, point: &[Rational]) -> Result<Rational, SymError> {
        let d = self.den.eval(point);
        if d.is_zero() {
            return Err(SymError::Pole);
        }
        Ok(self.num.eval(point) / d)
    }

    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        self.num.eval_f64(point) / self.den.eval_f64(point)
    }

    pub fn scale(&self, c: &Rational) -> RationalFunction {
        Self::normalized(self.num.scale(c), self.den.clone())
    }

    pub fn mul_poly(&self, p: &Polynomial) -> RationalFunction {
        Self::normalized(&self.num * p, self.den.clone())
    }

    pub fn recip(&self) -> Result<RationalFunction, SymError> {
        RationalFunction::new(self.den.clone(), self.num.clone())
    }
}

impl PartialEq for RationalFunction {
    fn eq(&self, other: &Self) -> bool {
        self.dim() == other.dim() && &self.num * &other.den == &other.num * &self.den
    }
}

impl Eq for RationalFunction {}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(p) = self.as_polynomial() {
            return write!(f, "{p}");
        }
        let wrap = |p: &Polynomial| {
            if p.is_single_term() && !p.to_string().starts_with('-') {
                p.to_string()
            } else {
                format!("({p})")
            }
        };
        write!(f, "{}/{}", wrap(&self.num), wrap(&self.den))
    }
}

impl Add for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        if self.den == rhs.den {
            return RationalFunction::normalized(&self.num + &rhs.num, self.den.clone());
        }
        RationalFunction::normalized(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl Sub for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        self + &(-rhs)
    }
}

impl Mul for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        RationalFunction::normalized(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Div for &RationalFunction {
    type Output = Result<RationalFunction, SymError>;
    fn div(self, rhs: &RationalFunction) -> Result<RationalFunction, SymError> {
        Ok(self * &rhs.recip()?)
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction { num: -&self.num, den: self.den.clone() }
    }
}

impl Add for RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: RationalFunction) -> RationalFunction {
        &self + &rhs
    }
}

impl Sub for RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: RationalFunction) -> RationalFunction {
        &self - &rhs
    }
}

impl Mul for RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: RationalFunction) -> RationalFunction {
        &self * &rhs
    }
}

impl Neg for RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symcore::rational::{int, rat};

    fn x() -> Polynomial {
        Polynomial::var(2, 0)
    }

    #[test]
    fn cancels_monomials_and_quotients() {
        let f = RationalFunction::new(x().pow(3), x().pow(2)).unwrap();
        assert_eq!(f.as_polynomial(), Some(x()));
        let g = RationalFunction::new(&x().pow(2) - &Polynomial::one(2), &x() - &Polynomial::one(2)).unwrap();
        assert_eq!(g.as_polynomial(), Some(&x() + &Polynomial::one(2)));
    }

    #[test]
    fn derivative_of_reciprocal() {
        let f = RationalFunction::new(Polynomial::one(2), x()).unwrap();
        let expected = RationalFunction::new(Polynomial::constant(2, int(-1)), x().pow(2)).unwrap();
        assert_eq!(f.derivative(0), expected);
        assert_eq!(f.to_string(), "1/x");
    }

    #[test]
    fn eval_and_pole() {
        let f = RationalFunction::new(Polynomial::constant(2, int(3)), x()).unwrap();
        assert_eq!(f.eval(&[int(2), int(0)]).unwrap(), rat(3, 2));
        assert!(matches!(f.eval(&[int(0), int(5)]), Err(SymError::Pole)));
    }

    #[test]
    fn semantic_equality() {
        let a = RationalFunction::new(x(), x().pow(2)).unwrap();
        let b = RationalFunction::new(Polynomial::constant(2, int(2)), x().scale(&int(2))).unwrap();
        assert_eq!(a, b);
        assert_eq!(&a - &b, RationalFunction::zero(2));
    }
}
