//! Exact linear algebra over the rationals.
//!
//! Two independent routes to rank are provided: fraction-free Bareiss
//! elimination over the integers, and rational row reduction. Sparse
//! incremental bases work directly on symbolic objects through [`Coords`].

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::symcore::{DifferentialOperator, Polynomial, Rational, VectorField};

/// Sparse coordinate vector keyed by an integer tuple.
pub type SparseVec = BTreeMap<Vec<u32>, Rational>;

/// Objects that can be flattened to coordinates in a fixed monomial basis.
pub trait Coords {
    fn coords(&self) -> SparseVec;
}

impl Coords for Polynomial {
    fn coords(&self) -> SparseVec {
        self.terms().map(|(m, c)| (m.entries().to_vec(), c.clone())).collect()
    }
}

impl Coords for VectorField {
    fn coords(&self) -> SparseVec {
        let mut out = SparseVec::new();
        for (i, a) in self.components().iter().enumerate() {
            for (m, c) in a.terms() {
                let mut k = vec![i as u32];
                k.extend_from_slice(m.entries());
                out.insert(k, c.clone());
            }
        }
        out
    }
}

impl Coords for DifferentialOperator {
    fn coords(&self) -> SparseVec {
        let mut out = SparseVec::new();
        for (nu, a) in self.terms() {
            for (m, c) in a.terms() {
                let mut k = nu.entries().to_vec();
                k.extend_from_slice(m.entries());
                out.insert(k, c.clone());
            }
        }
        out
    }
}

impl Coords for Vec<Rational> {
    fn coords(&self) -> SparseVec {
        self.iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (vec![i as u32], c.clone()))
            .collect()
    }
}

fn axpy(target: &mut SparseVec, a: &Rational, x: &SparseVec) {
    for (k, v) in x {
        let e = target.entry(k.clone()).or_insert_with(Rational::zero);
        *e += a * v;
        if e.is_zero() {
            target.remove(k);
        }
    }
}

/// Row-reduced sparse basis of a growing span.
///
/// Each stored row remembers its expression in terms of the inserted
/// vectors, so membership tests can also return coefficients.
#[derive(Clone, Debug, Default)]
pub struct IncrementalBasis {
    rows: Vec<(Vec<u32>, SparseVec, Vec<Rational>)>,
    inserted: usize,
}

impl IncrementalBasis {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the basis, returning the residual and the
    /// coefficients `c` (over inserted vectors) with `v = residual + sum c_j v_j`.
    pub fn reduce(&self, v: &SparseVec) -> (SparseVec, Vec<Rational>) {
        let mut r = v.clone();
        let mut coeffs = vec![Rational::zero(); self.inserted];
        for (pivot, row, expr) in &self.rows {
            let Some(a) = r.get(pivot).cloned() else { continue };
            axpy(&mut r, &-a.clone(), row);
            for (c, e) in coeffs.iter_mut().zip(expr) {
                *c += &a * e;
            }
        }
        (r, coeffs)
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).0.is_empty()
    }

    /// Adds `v` if it is independent of the current span; returns whether it was added.
    /// Dependent vectors are not counted as inserted.
    pub fn insert(&mut self, v: &SparseVec) -> bool {
        let (mut r, coeffs) = self.reduce(v);
        let Some((pivot, lead)) = r.iter().next().map(|(k, c)| (k.clone(), c.clone())) else {
            return false;
        };
        let inv = lead.recip();
        for c in r.values_mut() {
            *c *= &inv;
        }
        // row = (v - sum coeffs_j v_j) / lead
        let mut expr: Vec<Rational> = coeffs.iter().map(|c| -(c * &inv)).collect();
        expr.push(inv);
        for (_, _, e) in &mut self.rows {
            e.push(Rational::zero());
        }
        self.inserted += 1;
        self.rows.push((pivot, r, expr));
        true
    }
}

/// Greedy maximal independent subset: indices of the kept items, in order.
pub fn independent_subset<T: Coords>(items: &[T]) -> Vec<usize> {
    let mut basis = IncrementalBasis::new();
    items
        .iter()
        .enumerate()
        .filter(|(_, it)| basis.insert(&it.coords()))
        .map(|(i, _)| i)
        .collect()
}

/// Rank of a dense rational matrix by fraction-free Bareiss elimination.
pub fn rank_bareiss(rows: &[Vec<Rational>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let ncols = rows[0].len();
    // Clear denominators row by row.
    let mut m: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| {
            let l = r.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
            r.iter().map(|c| (c * Rational::from_integer(l.clone())).to_integer()).collect()
        })
        .collect();
    let nrows = m.len();
    let mut prev = BigInt::one();
    let mut rank = 0;
    for col in 0..ncols {
        if rank == nrows {
            break;
        }
        let Some(p) = (rank..nrows).find(|&r| !m[r][col].is_zero()) else { continue };
        m.swap(rank, p);
        for r in rank + 1..nrows {
            for c in col + 1..ncols {
                let v = &m[rank][col] * &m[r][c] - &m[r][col] * &m[rank][c];
                m[r][c] = v / &prev;
            }
            m[r][col] = BigInt::zero();
        }
        prev = m[rank][col].clone();
        rank += 1;
    }
    rank
}

/// Reduced row echelon form; returns the matrix and its pivot columns.
pub fn rref(rows: &[Vec<Rational>]) -> (Vec<Vec<Rational>>, Vec<usize>) {
    let mut m = rows.to_vec();
    let nrows = m.len();
    let ncols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for v in m[r].iter_mut() {
            *v *= &inv;
        }
        for i in 0..nrows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..ncols {
                    let d = &f * &m[r][j];
                    m[i][j] -= d;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (m, pivots)
}

pub fn rank_rref(rows: &[Vec<Rational>]) -> usize {
    rref(rows).1.len()
}

/// Basis of `{c : A c = 0}` for an `m x k` matrix `A` with `k = ncols`.
pub fn nullspace(rows: &[Vec<Rational>], ncols: usize) -> Vec<Vec<Rational>> {
    if rows.is_empty() {
        return (0..ncols)
            .map(|i| (0..ncols).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect())
            .collect();
    }
    let (m, pivots) = rref(rows);
    let pivot_set: BTreeSet<usize> = pivots.iter().copied().collect();
    let mut out = Vec::new();
    for free in (0..ncols).filter(|c| !pivot_set.contains(c)) {
        let mut v = vec![Rational::zero(); ncols];
        v[free] = Rational::one();
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = -m[r][free].clone();
        }
        out.push(v);
    }
    out
}

/// Some solution of `A x = b`, or `None` if inconsistent.
pub fn solve(rows: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let ncols = rows.first().map_or(0, Vec::len);
    let aug: Vec<Vec<Rational>> = rows
        .iter()
        .zip(b)
        .map(|(r, bi)| {
            let mut r = r.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let (m, pivots) = rref(&aug);
    if pivots.contains(&ncols) {
        return None;
    }
    let mut x = vec![Rational::zero(); ncols];
    for (r, &pc) in pivots.iter().enumerate() {
        x[pc] = m[r][ncols].clone();
    }
    Some(x)
}

/// Dense matrix whose columns are the coordinate vectors of `items` over a
/// shared key set; returns rows indexed by key.
pub fn coordinate_matrix(items: &[SparseVec]) -> (Vec<Vec<u32>>, Vec<Vec<Rational>>) {
    let keys: BTreeSet<&Vec<u32>> = items.iter().flat_map(|v| v.keys()).collect();
    let keys: Vec<Vec<u32>> = keys.into_iter().cloned().collect();
    let rows = keys
        .iter()
        .map(|k| items.iter().map(|v| v.get(k).cloned().unwrap_or_else(Rational::zero)).collect())
        .collect();
    (keys, rows)
}

/// Dense matrix whose rows are the coordinate vectors of `items`.
pub fn row_matrix(items: &[SparseVec]) -> Vec<Vec<Rational>> {
    let (_, cols) = coordinate_matrix(items);
    let k = items.len();
    (0..k).map(|j| cols.iter().map(|r| r[j].clone()).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symcore::rational::{int, rat};

    fn m(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect()
    }

    #[test]
    fn ranks_agree() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(rank_bareiss(&a), 2);
        assert_eq!(rank_rref(&a), 2);
        let b = vec![vec![rat(1, 2), rat(1, 3)], vec![rat(3, 4), rat(1, 2)]];
        assert_eq!(rank_bareiss(&b), 1);
        assert_eq!(rank_rref(&b), 1);
    }

    #[test]
    fn nullspace_and_solve() {
        let a = m(&[&[1, 1, 0], &[0, 0, 1]]);
        let ns = nullspace(&a, 3);
        assert_eq!(ns, vec![vec![int(-1), int(1), int(0)]]);
        let x = solve(&a, &[int(3), int(4)]).unwrap();
        assert_eq!(&x[0] + &x[1], int(3));
        assert_eq!(x[2], int(4));
        assert!(solve(&m(&[&[1, 1], &[1, 1]]), &[int(1), int(2)]).is_none());
    }

    #[test]
    fn incremental_basis_tracks_coefficients() {
        let mut b = IncrementalBasis::new();
        let v1 = vec![int(1), int(2), int(0)].coords();
        let v2 = vec![int(0), int(1), int(1)].coords();
        assert!(b.insert(&v1));
        assert!(b.insert(&v2));
        let w = vec![int(2), int(7), int(3)].coords();
        let (res, c) = b.reduce(&w);
        assert!(res.is_empty());
        assert_eq!(c, vec![int(2), int(3)]);
        assert!(!b.insert(&w));
        assert_eq!(b.rank(), 2);
    }
}
