use std::fmt;

use serde::{Deserialize, Serialize};

use super::SymError;

/// Coordinate weights `(w_1, ..., w_n)`: positive and non-decreasing.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct WeightVector(Vec<u32>);

impl WeightVector {
    pub fn new(w: Vec<u32>) -> Result<Self, SymError> {
        if w.is_empty() {
            return Err(SymError::InvalidWeights("empty weight vector".into()));
        }
        if w.iter().any(|&x| x == 0) {
            return Err(SymError::InvalidWeights(format!("weights must be >= 1, got {w:?}")));
        }
        if w.windows(2).any(|p| p[0] > p[1]) {
            return Err(SymError::InvalidWeights(format!("weights must be non-decreasing, got {w:?}")));
        }
        Ok(WeightVector(w))
    }

    /// All weights equal to one (the Riemannian grading).
    pub fn uniform(n: usize) -> Self {
        WeightVector(vec![1; n])
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> u32 {
        self.0[i]
    }

    /// Number of weight-one coordinates.
    pub fn first_layer(&self) -> usize {
        self.0.iter().filter(|&&w| w == 1).count()
    }
}

impl TryFrom<Vec<u32>> for WeightVector {
    type Error = SymError;
    fn try_from(v: Vec<u32>) -> Result<Self, SymError> {
        WeightVector::new(v)
    }
}

impl From<WeightVector> for Vec<u32> {
    fn from(w: WeightVector) -> Vec<u32> {
        w.0
    }
}

impl fmt::Display for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|w| w.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}
