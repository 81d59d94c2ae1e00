use serde::Serialize;

use super::approx::vanishes_at_origin;
use super::{check_weights, homogeneous_dimension, origin, NilError};
use crate::linalg::{independent_subset, nullspace, Coords, IncrementalBasis};
use crate::report::Check;
use crate::srframe::{is_bracket_generating, SRFrame};
use crate::symcore::{Rational, VectorField, WeightVector, WeightedDegree};

pub const DEFAULT_MAX_STEP: usize = 16;

/// Bases of the strata `g^1, ..., g^s` of `Lie(F_hat)` and of `h^i`, the
/// fields of `g^i` vanishing at the origin.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StratifiedAlgebra {
    pub step: usize,
    pub weights: WeightVector,
    #[serde(serialize_with = "ser_strata")]
    pub g: Vec<Vec<VectorField>>,
    /// Bracket expression for each `g` basis element, e.g. `[X1,X2]`.
    pub g_labels: Vec<Vec<String>>,
    #[serde(serialize_with = "ser_strata")]
    pub h: Vec<Vec<VectorField>>,
    /// `k_1 = dim D_0`.
    pub k1: usize,
    /// Homogeneous dimension `Q = sum_i w_i`.
    pub q: u32,
}

fn ser_strata<S: serde::Serializer>(v: &[Vec<VectorField>], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|layer| layer.iter().map(|f| f.to_string()).collect::<Vec<_>>()))
}

impl StratifiedAlgebra {
    pub fn g_dims(&self) -> Vec<usize> {
        self.g.iter().map(Vec::len).collect()
    }

    pub fn h_dims(&self) -> Vec<usize> {
        self.h.iter().map(Vec::len).collect()
    }

    /// `g^i` for `i >= 1`, empty past the step.
    pub fn g_stratum(&self, i: usize) -> &[VectorField] {
        self.g.get(i.wrapping_sub(1)).map_or(&[], Vec::as_slice)
    }

    pub fn h_stratum(&self, i: usize) -> &[VectorField] {
        self.h.get(i.wrapping_sub(1)).map_or(&[], Vec::as_slice)
    }

    /// Exact invariant checks on the computed bases.
    pub fn checks(&self) -> Vec<Check> {
        let mut out = Vec::new();
        let degrees_ok = self.g.iter().enumerate().all(|(i, layer)| {
            layer.iter().all(|f| {
                f.to_operator().operator_degree(&self.weights).ok() == Some(WeightedDegree::Homogeneous(-(i as i64 + 1)))
            })
        });
        out.push(Check::new("g^i elements have degree -i", degrees_ok));
        out.push(Check::new(
            "h elements vanish at 0",
            self.h.iter().flatten().all(vanishes_at_origin),
        ));
        let h1 = self.h_stratum(1).len();
        let g1 = self.g_stratum(1).len();
        out.push(Check::with_detail(
            "dim h^1 = dim g^1 - k_1",
            h1 + self.k1 == g1,
            format!("{h1} = {g1} - {}", self.k1),
        ));
        out.push(Check::new("[g^i, g^j] in g^(i+j)", self.grading_closed()));
        out.push(Check::new("[h^1, h^j] in h^(j+1)", self.h_bracket_closed()));
        out
    }

    fn span_contains(basis: &[VectorField], v: &VectorField) -> bool {
        let mut b = IncrementalBasis::new();
        for f in basis {
            b.insert(&f.coords());
        }
        b.contains(&v.coords())
    }

    fn grading_closed(&self) -> bool {
        for i in 1..=self.step {
            for j in 1..=self.step {
                let target = self.g_stratum(i + j);
                for a in self.g_stratum(i) {
                    for b in self.g_stratum(j) {
                        let Ok(c) = a.bracket(b) else { return false };
                        if !Self::span_contains(target, &c) {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    fn h_bracket_closed(&self) -> bool {
        for j in 1..=self.step {
            let target = self.h_stratum(j + 1);
            for a in self.h_stratum(1) {
                for b in self.h_stratum(j) {
                    let Ok(c) = a.bracket(b) else { return false };
                    if !Self::span_contains(target, &c) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// Basis of `{X in span(layer) : X(0) = 0}`.
fn vanishing_subspace(layer: &[VectorField], n: usize) -> Vec<VectorField> {
    if layer.is_empty() {
        return Vec::new();
    }
    let zero = origin(n);
    let values: Vec<Vec<Rational>> = layer.iter().map(|f| f.eval(&zero)).collect();
    let rows: Vec<Vec<Rational>> = (0..n).map(|r| values.iter().map(|v| v[r].clone()).collect()).collect();
    nullspace(&rows, layer.len())
        .into_iter()
        .map(|c| {
            layer
                .iter()
                .zip(&c)
                .fold(VectorField::zero(n), |acc, (f, ci)| &acc + &f.scale(ci))
        })
        .collect()
}

/// Stratifies `Lie(F_hat)` for a frame homogeneous of degree -1 that is
/// bracket-generating at the origin.
pub fn stratified_algebra(frame_hat: &SRFrame, w: &WeightVector, max_step: usize) -> Result<StratifiedAlgebra, NilError> {
    let n = frame_hat.dim();
    check_weights(w, n)?;
    for (i, f) in frame_hat.fields().iter().enumerate() {
        if f.to_operator().operator_degree(w).ok() != Some(WeightedDegree::Homogeneous(-1)) {
            return Err(NilError::NotHomogeneous { index: i + 1 });
        }
    }
    let depth = (*w.as_slice().iter().max().unwrap_or(&1) as usize).max(1);
    let bg = is_bracket_generating(frame_hat, &origin(n), depth)?;
    if !bg.generating {
        return Err(NilError::NotBracketGenerating { dims: bg.dims });
    }

    let kept = independent_subset(frame_hat.fields());
    let mut g: Vec<Vec<VectorField>> = vec![kept.iter().map(|&i| frame_hat.fields()[i].clone()).collect()];
    let mut labels: Vec<Vec<String>> = vec![kept.iter().map(|&i| format!("X{}", i + 1)).collect()];
    loop {
        if g.len() > max_step {
            return Err(NilError::StepLimit(max_step));
        }
        let (g1, gi) = (&g[0], g.last().expect("non-empty"));
        let (l1, li) = (&labels[0], labels.last().expect("non-empty"));
        let mut basis = IncrementalBasis::new();
        let mut layer = Vec::new();
        let mut layer_labels = Vec::new();
        for (a, la) in g1.iter().zip(l1) {
            for (b, lb) in gi.iter().zip(li) {
                let c = a.bracket(b)?;
                if basis.insert(&c.coords()) {
                    layer.push(c);
                    layer_labels.push(format!("[{la},{lb}]"));
                }
            }
        }
        if layer.is_empty() {
            break;
        }
        g.push(layer);
        labels.push(layer_labels);
    }
    let h = g.iter().map(|layer| vanishing_subspace(layer, n)).collect();
    let k1 = bg.dims[0];
    Ok(StratifiedAlgebra { step: g.len(), weights: w.clone(), g, g_labels: labels, h, k1, q: homogeneous_dimension(w) })
}
