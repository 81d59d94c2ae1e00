use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::rational::{binomial, fmt_rational, to_f64, Rational};
use super::{MultiIndex, SymError, WeightVector};

/// Result of a weighted-degree query on a nonzero polynomial or operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightedDegree {
    Homogeneous(i64),
    Inhomogeneous,
}

impl WeightedDegree {
    pub fn value(self) -> Option<i64> {
        match self {
            WeightedDegree::Homogeneous(d) => Some(d),
            WeightedDegree::Inhomogeneous => None,
        }
    }
}

/// Exact multivariate polynomial over the rationals in `n` variables.
///
/// Terms are kept in a map from exponent multi-index to coefficient, with no
/// stored zeros. Arithmetic operators assert matching dimensions.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial {
    dim: usize,
    terms: BTreeMap<MultiIndex, Rational>,
}

impl Polynomial {
    pub fn zero(dim: usize) -> Self {
        Polynomial { dim, terms: BTreeMap::new() }
    }

    pub fn one(dim: usize) -> Self {
        Self::constant(dim, Rational::one())
    }

    pub fn constant(dim: usize, c: Rational) -> Self {
        Self::monomial(dim, MultiIndex::zeros(dim), c)
    }

    /// The coordinate function `z_i` (zero-based).
    pub fn var(dim: usize, i: usize) -> Self {
        assert!(i < dim, "variable index {i} out of range for dimension {dim}");
        Self::monomial(dim, MultiIndex::unit(dim, i), Rational::one())
    }

    pub fn monomial(dim: usize, mu: MultiIndex, c: Rational) -> Self {
        assert_eq!(mu.len(), dim, "multi-index length must equal the dimension");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(mu, c);
        }
        Polynomial { dim, terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (MultiIndex, Rational)>>(dim: usize, it: I) -> Self {
        let mut p = Polynomial::zero(dim);
        for (mu, c) in it {
            p.add_term(mu, c);
        }
        p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&MultiIndex, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, mu: &MultiIndex) -> Rational {
        self.terms.get(mu).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, mu: MultiIndex, c: Rational) {
        assert_eq!(mu.len(), self.dim, "multi-index length must equal the dimension");
        if c.is_zero() {
            return;
        }
        match self.terms.entry(mu) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_zero())
    }

    /// Constant value if the polynomial has no variable terms.
    pub fn as_constant(&self) -> Option<Rational> {
        if self.is_constant() {
            Some(self.coeff(&MultiIndex::zeros(self.dim)))
        } else {
            None
        }
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.total()).max()
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.dim);
        }
        Polynomial {
            dim: self.dim,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        let mut acc = Polynomial::one(self.dim);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// `d/dz_i`.
    pub fn derivative(&self, i: usize) -> Polynomial {
        let mut out = Polynomial::zero(self.dim);
        for (m, c) in &self.terms {
            let e = m.entries()[i];
            if e == 0 {
                continue;
            }
            let mut v = m.entries().to_vec();
            v[i] -= 1;
            out.add_term(MultiIndex::new(v), c * Rational::from_integer(BigInt::from(e)));
        }
        out
    }

    /// `d^nu` for a derivative multi-index.
    pub fn derivative_multi(&self, nu: &MultiIndex) -> Polynomial {
        let mut out = Polynomial::zero(self.dim);
        for (m, c) in &self.terms {
            let Some(rest) = m.checked_sub(nu) else { continue };
            let mut factor = BigInt::one();
            for (&e, &k) in m.entries().iter().zip(nu.entries()) {
                for j in 0..k {
                    factor *= BigInt::from(e - j);
                }
            }
            out.add_term(rest, c * Rational::from_integer(factor));
        }
        out
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.dim, "point dimension mismatch");
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(m.entries()) {
                if e > 0 {
                    t *= num_traits::pow(x.clone(), e as usize);
                }
            }
            acc += t;
        }
        acc
    }

    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        assert_eq!(point.len(), self.dim, "point dimension mismatch");
        self.terms
            .iter()
            .map(|(m, c)| {
                m.entries()
                    .iter()
                    .zip(point)
                    .fold(to_f64(c), |acc, (&e, &x)| acc * x.powi(e as i32))
            })
            .sum()
    }

    /// Substitutes `z_i -> z_i + shift_i`.
    pub fn translate(&self, shift: &[Rational]) -> Polynomial {
        assert_eq!(shift.len(), self.dim, "shift dimension mismatch");
        let mut out = Polynomial::zero(self.dim);
        for (m, c) in &self.terms {
            // Expand prod_i (z_i + s_i)^{m_i}.
            let mut expansion = Polynomial::constant(self.dim, c.clone());
            for (i, &e) in m.entries().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let mut factor = Polynomial::zero(self.dim);
                for k in 0..=e {
                    let coeff = Rational::from_integer(binomial(e, k))
                        * num_traits::pow(shift[i].clone(), (e - k) as usize);
                    let mut v = vec![0; self.dim];
                    v[i] = k;
                    factor.add_term(MultiIndex::new(v), coeff);
                }
                expansion = &expansion * &factor;
            }
            out += &expansion;
        }
        out
    }

    /// Substitutes `z_i -> c_i z_i`.
    pub fn scale_vars(&self, factors: &[Rational]) -> Polynomial {
        assert_eq!(factors.len(), self.dim, "factor dimension mismatch");
        let mut out = Polynomial::zero(self.dim);
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (f, &e) in factors.iter().zip(m.entries()) {
                if e > 0 {
                    t *= num_traits::pow(f.clone(), e as usize);
                }
            }
            out.add_term(m.clone(), t);
        }
        out
    }

    /// Re-reads the polynomial in `dim + extra` variables, new ones appended last.
    pub fn embed(&self, extra: usize) -> Polynomial {
        let dim = self.dim + extra;
        Polynomial {
            dim,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let mut v = m.entries().to_vec();
                    v.resize(dim, 0);
                    (MultiIndex::new(v), c.clone())
                })
                .collect(),
        }
    }

    /// Weighted degree; errors on the zero polynomial.
    pub fn weighted_degree(&self, w: &WeightVector) -> Result<WeightedDegree, SymError> {
        if w.len() != self.dim {
            return Err(SymError::DimensionMismatch { left: self.dim, right: w.len() });
        }
        let mut degrees = self.terms.keys().map(|m| m.weighted(w.as_slice()));
        let Some(first) = degrees.next() else {
            return Err(SymError::ZeroDegree);
        };
        if degrees.all(|d| d == first) {
            Ok(WeightedDegree::Homogeneous(first))
        } else {
            Ok(WeightedDegree::Inhomogeneous)
        }
    }

    /// Splits into weighted-homogeneous parts keyed by degree.
    pub fn homogeneous_components(&self, w: &WeightVector) -> BTreeMap<i64, Polynomial> {
        let mut out: BTreeMap<i64, Polynomial> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.weighted(w.as_slice()))
                .or_insert_with(|| Polynomial::zero(self.dim))
                .add_term(m.clone(), c.clone());
        }
        out
    }

    /// Exact integral over the box `prod_i [lo_i, hi_i]`.
    pub fn integrate_box(&self, lo: &[Rational], hi: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.entries().iter().enumerate() {
                let k = (e + 1) as usize;
                let denom = Rational::from_integer(BigInt::from(e + 1));
                t *= (num_traits::pow(hi[i].clone(), k) - num_traits::pow(lo[i].clone(), k)) / denom;
            }
            acc += t;
        }
        acc
    }

    /// Exact quotient if `divisor` divides `self`, using lex-leading-term division.
    pub fn exact_div(&self, divisor: &Polynomial) -> Option<Polynomial> {
        assert_eq!(self.dim, divisor.dim);
        if divisor.is_zero() {
            return None;
        }
        let lex_lead = |p: &Polynomial| {
            p.terms
                .iter()
                .max_by(|a, b| a.0.entries().cmp(b.0.entries()))
                .map(|(m, c)| (m.clone(), c.clone()))
        };
        let (dm, dc) = lex_lead(divisor)?;
        let mut rem = self.clone();
        let mut quot = Polynomial::zero(self.dim);
        while let Some((rm, rc)) = lex_lead(&rem) {
            let q_m = rm.checked_sub(&dm)?;
            let q = Polynomial::monomial(self.dim, q_m, rc / &dc);
            rem -= &(&q * divisor);
            quot += &q;
        }
        Some(quot)
    }

    /// Variable name used by printers and the expression parser.
    pub fn var_name(dim: usize, i: usize) -> String {
        if dim <= 3 {
            ["x", "y", "z"][i].to_string()
        } else {
            format!("z{}", i + 1)
        }
    }

    pub(crate) fn monomial_string(dim: usize, m: &MultiIndex) -> String {
        let mut parts = Vec::new();
        for (i, &e) in m.entries().iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(Self::var_name(dim, i)),
                _ => parts.push(format!("{}^{}", Self::var_name(dim, i), e)),
            }
        }
        parts.join("*")
    }

    /// Whether printing needs surrounding parentheses when used as a factor.
    pub(crate) fn is_single_term(&self) -> bool {
        self.terms.len() <= 1
    }

    /// Canonical sparse serialization.
    pub fn to_json_terms(&self) -> Vec<PolyTerm> {
        self.terms
            .iter()
            .rev()
            .map(|(m, c)| PolyTerm {
                coeff_num: c.numer().to_string(),
                coeff_den: c.denom().to_string(),
                mu: m.entries().to_vec(),
            })
            .collect()
    }
}

/// One monomial in a serialized polynomial.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyTerm {
    #[serde(rename = "coeff-num")]
    pub coeff_num: String,
    #[serde(rename = "coeff-den")]
    pub coeff_den: String,
    pub mu: Vec<u32>,
}

/// Writes `c * m` with a sign handled by the caller.
pub(crate) fn write_term(out: &mut String, c_abs: &Rational, mono: &str) {
    let c_is_one = c_abs.is_one();
    let c_str = if c_abs.is_integer() {
        fmt_rational(c_abs)
    } else {
        format!("({})", fmt_rational(c_abs))
    };
    if mono.is_empty() {
        out.push_str(&c_str);
    } else if c_is_one {
        out.push_str(mono);
    } else {
        out.push_str(&c_str);
        out.push('*');
        out.push_str(mono);
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut out = String::new();
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            write_term(&mut out, &c.abs(), &Self::monomial_string(self.dim, m));
        }
        write!(f, "{out}")
    }
}

impl AddAssign<&Polynomial> for Polynomial {
    fn add_assign(&mut self, rhs: &Polynomial) {
        assert_eq!(self.dim, rhs.dim, "polynomial dimension mismatch");
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl SubAssign<&Polynomial> for Polynomial {
    fn sub_assign(&mut self, rhs: &Polynomial) {
        assert_eq!(self.dim, rhs.dim, "polynomial dimension mismatch");
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c.clone());
        }
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.dim, rhs.dim, "polynomial dimension mismatch");
        let mut out = Polynomial::zero(self.dim);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.add(mb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            dim: self.dim,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

impl Add for Polynomial {
    type Output = Polynomial;
    fn add(mut self, rhs: Polynomial) -> Polynomial {
        self += &rhs;
        self
    }
}

impl Sub for Polynomial {
    type Output = Polynomial;
    fn sub(mut self, rhs: Polynomial) -> Polynomial {
        self -= &rhs;
        self
    }
}

impl Mul for Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: Polynomial) -> Polynomial {
        &self * &rhs
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
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
    fn y() -> Polynomial {
        Polynomial::var(2, 1)
    }

    #[test]
    fn weighted_degree_examples() {
        let w = WeightVector::new(vec![1, 2]).unwrap();
        assert_eq!(x().weighted_degree(&w).unwrap(), WeightedDegree::Homogeneous(1));
        assert_eq!(
            Polynomial::constant(2, int(7)).weighted_degree(&w).unwrap(),
            WeightedDegree::Homogeneous(0)
        );
        assert_eq!((&x() * &y()).weighted_degree(&w).unwrap(), WeightedDegree::Homogeneous(3));
        assert_eq!((&x() + &y()).weighted_degree(&w).unwrap(), WeightedDegree::Inhomogeneous);
        assert!(matches!(Polynomial::zero(2).weighted_degree(&w), Err(SymError::ZeroDegree)));
    }

    #[test]
    fn derivatives_and_eval() {
        let p = &x().pow(2) * &y();
        assert_eq!(p.derivative(0), (&x() * &y()).scale(&int(2)));
        assert_eq!(p.derivative_multi(&MultiIndex::new(vec![2, 1])), Polynomial::constant(2, int(2)));
        assert_eq!(p.eval(&[int(3), rat(1, 2)]), rat(9, 2));
    }

    #[test]
    fn translate_matches_eval() {
        let p = &(&x().pow(3) * &y()) - &x().scale(&int(5));
        let s = [rat(1, 3), int(-2)];
        let t = p.translate(&s);
        let pt = [int(2), rat(5, 7)];
        let shifted = [&pt[0] + &s[0], &pt[1] + &s[1]];
        assert_eq!(t.eval(&pt), p.eval(&shifted));
    }

    #[test]
    fn exact_division() {
        let a = &x() + &y();
        let b = &x() - &y();
        let prod = &a * &b;
        assert_eq!(prod.exact_div(&a), Some(b));
        assert_eq!(x().exact_div(&y()), None);
    }

    #[test]
    fn display_is_readable() {
        let p = &(&x().pow(2) * &y()).scale(&rat(-1, 2)) + &Polynomial::constant(2, int(3));
        assert_eq!(p.to_string(), "-(1/2)*x^2*y + 3");
        assert_eq!(Polynomial::zero(2).to_string(), "0");
    }

    #[test]
    fn box_integral() {
        // int_0^1 int_0^1 x y = 1/4
        let p = &x() * &y();
        assert_eq!(p.integrate_box(&[int(0), int(0)], &[int(1), int(1)]), rat(1, 4));
    }
}
