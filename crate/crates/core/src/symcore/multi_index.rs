use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

/// Exponent or derivative multi-index `(m_1, ..., m_n)`.
///
/// Ordered graded-lexicographically: first by total degree, then by the
/// exponent vector compared entry by entry.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(entries: Vec<u32>) -> Self {
        MultiIndex(entries)
    }

    pub fn zeros(n: usize) -> Self {
        MultiIndex(vec![0; n])
    }

    /// The unit index `e_i` in dimension `n`.
    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i] = 1;
        MultiIndex(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// `sum_i m_i w_i`.
    pub fn weighted(&self, weights: &[u32]) -> i64 {
        self.0
            .iter()
            .zip(weights)
            .map(|(&m, &w)| i64::from(m) * i64::from(w))
            .sum()
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Componentwise difference, `None` unless `other <= self` entrywise.
    pub fn checked_sub(&self, other: &MultiIndex) -> Option<MultiIndex> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(MultiIndex)
    }

    /// All `beta` with `beta <= self` entrywise.
    pub fn sub_indices(&self) -> Vec<MultiIndex> {
        let mut out = vec![Vec::with_capacity(self.0.len())];
        for &m in &self.0 {
            let mut next = Vec::with_capacity(out.len() * (m as usize + 1));
            for prefix in &out {
                for b in 0..=m {
                    let mut p = prefix.clone();
                    p.push(b);
                    next.push(p);
                }
            }
            out = next;
        }
        out.into_iter().map(MultiIndex).collect()
    }

    /// Every multi-index in dimension `n` with `sum_i m_i w_i == degree`.
    pub fn with_weighted_degree(weights: &[u32], degree: u32) -> Vec<MultiIndex> {
        fn rec(weights: &[u32], left: u32, prefix: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
            match weights.split_first() {
                None => {
                    if left == 0 {
                        out.push(MultiIndex(prefix.clone()));
                    }
                }
                Some((&w, rest)) => {
                    for e in 0..=(left / w) {
                        prefix.push(e);
                        rec(rest, left - e * w, prefix, out);
                        prefix.pop();
                    }
                }
            }
        }
        let mut out = Vec::new();
        rec(weights, degree, &mut Vec::new(), &mut out);
        out.sort();
        out
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total()
            .cmp(&other.total())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graded_lex_order() {
        let a = MultiIndex::new(vec![0, 0, 1]);
        let b = MultiIndex::new(vec![1, 0, 0]);
        let c = MultiIndex::new(vec![0, 1, 1]);
        assert!(a < b);
        assert!(b < c);
    }

    #[test]
    fn weighted_degree_enumeration() {
        // x^a y^b z^c with a + b + 2c = 3
        let all = MultiIndex::with_weighted_degree(&[1, 1, 2], 3);
        assert_eq!(all.len(), 6);
        assert!(all.iter().all(|m| m.weighted(&[1, 1, 2]) == 3));
        assert_eq!(all[0], MultiIndex::new(vec![0, 1, 1]));
    }

    #[test]
    fn sub_indices_count() {
        let m = MultiIndex::new(vec![2, 1]);
        assert_eq!(m.sub_indices().len(), 6);
    }
}
