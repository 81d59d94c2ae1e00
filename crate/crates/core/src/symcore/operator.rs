use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use super::polynomial::write_term;
use super::rational::{binomial, parse_rational, Rational};
use super::{MultiIndex, Polynomial, SymError, VectorField, WeightVector, WeightedDegree};

/// Linear differential operator `sum_nu a_nu(z) d^nu` with polynomial coefficients.
///
/// Canonical form: at most one coefficient per derivative multi-index, never zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DifferentialOperator {
    dim: usize,
    terms: BTreeMap<MultiIndex, Polynomial>,
}

/// One addend `c z^mu d^nu` of a serialized operator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpTerm {
    #[serde(rename = "coeff-num")]
    pub coeff_num: String,
    #[serde(rename = "coeff-den")]
    pub coeff_den: String,
    pub mu: Vec<u32>,
    pub nu: Vec<u32>,
}

impl DifferentialOperator {
    pub fn zero(dim: usize) -> Self {
        DifferentialOperator { dim, terms: BTreeMap::new() }
    }

    /// Multiplication by one.
    pub fn identity(dim: usize) -> Self {
        Self::multiplication(Polynomial::one(dim))
    }

    /// Multiplication by `p` (an order-zero operator).
    pub fn multiplication(p: Polynomial) -> Self {
        let dim = p.dim();
        let mut op = Self::zero(dim);
        op.add_term(MultiIndex::zeros(dim), p);
        op
    }

    /// `d/dz_i`.
    pub fn partial(dim: usize, i: usize) -> Self {
        let mut op = Self::zero(dim);
        op.add_term(MultiIndex::unit(dim, i), Polynomial::one(dim));
        op
    }

    pub fn from_terms<I: IntoIterator<Item = (MultiIndex, Polynomial)>>(dim: usize, it: I) -> Self {
        let mut op = Self::zero(dim);
        for (nu, a) in it {
            op.add_term(nu, a);
        }
        op
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `(nu, a_nu)` pairs in ascending graded-lex order of `nu`.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&MultiIndex, &Polynomial)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, nu: &MultiIndex) -> Polynomial {
        self.terms.get(nu).cloned().unwrap_or_else(|| Polynomial::zero(self.dim))
    }

    pub fn add_term(&mut self, nu: MultiIndex, a: Polynomial) {
        assert_eq!(nu.len(), self.dim, "derivative index length must equal the dimension");
        assert_eq!(a.dim(), self.dim, "coefficient dimension mismatch");
        if a.is_zero() {
            return;
        }
        let slot = self.terms.entry(nu.clone()).or_insert_with(|| Polynomial::zero(a.dim()));
        *slot += &a;
        if slot.is_zero() {
            self.terms.remove(&nu);
        }
    }

    /// Highest `|nu|` present.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(|n| n.total()).max()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::from_terms(self.dim, self.terms.iter().map(|(n, a)| (n.clone(), a.scale(c))))
    }

    /// Left multiplication by a polynomial: `p * P`.
    pub fn mul_poly(&self, p: &Polynomial) -> Self {
        Self::from_terms(self.dim, self.terms.iter().map(|(n, a)| (n.clone(), p * a)))
    }

    fn check_dim(&self, other: usize) -> Result<(), SymError> {
        if self.dim != other {
            return Err(SymError::DimensionMismatch { left: self.dim, right: other });
        }
        Ok(())
    }

    pub fn apply(&self, f: &Polynomial) -> Result<Polynomial, SymError> {
        self.check_dim(f.dim())?;
        let mut out = Polynomial::zero(self.dim);
        for (nu, a) in &self.terms {
            out += &(a * &f.derivative_multi(nu));
        }
        Ok(out)
    }

    /// `P o Q`, expanded by the multivariate Leibniz rule.
    pub fn compose(&self, other: &Self) -> Result<Self, SymError> {
        self.check_dim(other.dim)?;
        let mut out = Self::zero(self.dim);
        for (nu, a) in &self.terms {
            for (kappa, b) in &other.terms {
                for beta in nu.sub_indices() {
                    let db = b.derivative_multi(&beta);
                    if db.is_zero() {
                        continue;
                    }
                    let mut c = BigInt::one();
                    for (&n, &k) in nu.entries().iter().zip(beta.entries()) {
                        c *= binomial(n, k);
                    }
                    let rest = nu.checked_sub(&beta).expect("beta <= nu").add(kappa);
                    out.add_term(rest, (a * &db).scale(&Rational::from_integer(c)));
                }
            }
        }
        Ok(out)
    }

    /// `P Q - Q P`.
    pub fn commutator(&self, other: &Self) -> Result<Self, SymError> {
        Ok(&self.compose(other)? - &other.compose(self)?)
    }

    /// Weighted degree `sum (mu_i - nu_i) w_i` of each addend, grouped.
    pub fn homogeneous_components(&self, w: &WeightVector) -> BTreeMap<i64, DifferentialOperator> {
        let mut out: BTreeMap<i64, DifferentialOperator> = BTreeMap::new();
        for (nu, a) in &self.terms {
            let shift = nu.weighted(w.as_slice());
            for (d, part) in a.homogeneous_components(w) {
                out.entry(d - shift)
                    .or_insert_with(|| Self::zero(self.dim))
                    .add_term(nu.clone(), part);
            }
        }
        out
    }

    pub fn operator_degree(&self, w: &WeightVector) -> Result<WeightedDegree, SymError> {
        self.check_dim(w.len())?;
        let comps = self.homogeneous_components(w);
        match comps.len() {
            0 => Err(SymError::ZeroDegree),
            1 => Ok(WeightedDegree::Homogeneous(*comps.keys().next().expect("one key"))),
            _ => Ok(WeightedDegree::Inhomogeneous),
        }
    }

    /// Returns the vector field if this operator is first order with no zeroth-order part.
    pub fn to_vector_field(&self) -> Result<VectorField, SymError> {
        let mut comps = vec![Polynomial::zero(self.dim); self.dim];
        for (nu, a) in &self.terms {
            if nu.total() != 1 {
                return Err(SymError::NotVectorField);
            }
            let i = nu.entries().iter().position(|&e| e == 1).expect("unit index");
            comps[i] = a.clone();
        }
        Ok(VectorField::new(comps))
    }

    /// Substitutes `z -> z + shift` in every coefficient (derivatives are unchanged).
    pub fn translate(&self, shift: &[Rational]) -> Self {
        Self::from_terms(self.dim, self.terms.iter().map(|(n, a)| (n.clone(), a.translate(shift))))
    }

    pub fn to_json_terms(&self) -> Vec<OpTerm> {
        let mut out = Vec::new();
        for (nu, a) in self.terms.iter().rev() {
            for (mu, c) in a.terms().rev() {
                out.push(OpTerm {
                    coeff_num: c.numer().to_string(),
                    coeff_den: c.denom().to_string(),
                    mu: mu.entries().to_vec(),
                    nu: nu.entries().to_vec(),
                });
            }
        }
        out
    }

    pub fn from_json_terms(dim: usize, terms: &[OpTerm]) -> Result<Self, SymError> {
        let mut op = Self::zero(dim);
        for t in terms {
            if t.mu.len() != dim || t.nu.len() != dim {
                return Err(SymError::Json(format!("term index length differs from dimension {dim}")));
            }
            let c = parse_rational(&format!("{}/{}", t.coeff_num, t.coeff_den))
                .ok_or_else(|| SymError::Json(format!("bad coefficient {}/{}", t.coeff_num, t.coeff_den)))?;
            op.add_term(
                MultiIndex::new(t.nu.clone()),
                Polynomial::monomial(dim, MultiIndex::new(t.mu.clone()), c),
            );
        }
        Ok(op)
    }

    pub(crate) fn derivative_string(dim: usize, nu: &MultiIndex) -> String {
        let name = |i: usize| if dim <= 3 { ["dx", "dy", "dz"][i].to_string() } else { format!("d{}", i + 1) };
        let mut parts = Vec::new();
        for (i, &e) in nu.entries().iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(name(i)),
                _ => parts.push(format!("{}^{}", name(i), e)),
            }
        }
        parts.join("*")
    }
}

impl fmt::Display for DifferentialOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut out = String::new();
        let mut first = true;
        for (nu, a) in self.terms.iter().rev() {
            let d = Self::derivative_string(self.dim, nu);
            for (mu, c) in a.terms().rev() {
                let neg = c.is_negative();
                if first {
                    if neg {
                        out.push('-');
                    }
                    first = false;
                } else {
                    out.push_str(if neg { " - " } else { " + " });
                }
                let m = Polynomial::monomial_string(self.dim, mu);
                let body = match (m.is_empty(), d.is_empty()) {
                    (true, _) => d.clone(),
                    (false, true) => m,
                    (false, false) => format!("{m}*{d}"),
                };
                write_term(&mut out, &c.abs(), &body);
            }
        }
        write!(f, "{out}")
    }
}

impl Add for &DifferentialOperator {
    type Output = DifferentialOperator;
    fn add(self, rhs: &DifferentialOperator) -> DifferentialOperator {
        assert_eq!(self.dim, rhs.dim, "operator dimension mismatch");
        let mut out = self.clone();
        for (n, a) in &rhs.terms {
            out.add_term(n.clone(), a.clone());
        }
        out
    }
}

impl Sub for &DifferentialOperator {
    type Output = DifferentialOperator;
    fn sub(self, rhs: &DifferentialOperator) -> DifferentialOperator {
        self + &(-rhs)
    }
}

impl Neg for &DifferentialOperator {
    type Output = DifferentialOperator;
    fn neg(self) -> DifferentialOperator {
        DifferentialOperator {
            dim: self.dim,
            terms: self.terms.iter().map(|(n, a)| (n.clone(), -a)).collect(),
        }
    }
}
