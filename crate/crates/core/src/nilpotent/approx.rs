use num_traits::{Signed, Zero};
use serde::Serialize;

use super::{check_weights, origin, NilError};
use crate::srframe::{is_bracket_generating, SRFrame};
use crate::symcore::rational::pow_i;
use crate::symcore::{MultiIndex, Polynomial, Rational, VectorField, WeightVector};

/// Weighted degree of the addend `z^mu d_k`.
fn term_degree(mu: &MultiIndex, k: usize, w: &WeightVector) -> i64 {
    mu.weighted(w.as_slice()) - i64::from(w.get(k))
}

/// `X^eps = eps (delta_{1/eps})_* X`: each addend of degree `d` gets the factor `eps^{d+1}`.
pub fn pushforward_rescaled(x: &VectorField, w: &WeightVector, eps: &Rational) -> Result<VectorField, NilError> {
    check_weights(w, x.dim())?;
    if !eps.is_positive() {
        return Err(NilError::NonPositiveFactor);
    }
    let n = x.dim();
    let comps = x
        .components()
        .iter()
        .enumerate()
        .map(|(k, a)| {
            Polynomial::from_terms(
                n,
                a.terms().map(|(mu, c)| (mu.clone(), c * pow_i(eps, term_degree(mu, k, w) + 1))),
            )
        })
        .collect();
    Ok(VectorField::new(comps))
}

/// `X^eps` with `eps` kept symbolic as the extra variable `z_{n+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvergenceWitness {
    /// `X^eps` as a field on `R^{n+1}` whose last coordinate is `eps` (no `d_eps` part).
    pub rescaled: VectorField,
    /// `X^eps - X_hat`, same convention.
    pub remainder: VectorField,
    /// Every coefficient of the remainder is divisible by `eps`.
    pub remainder_divisible_by_eps: bool,
}

pub fn convergence_witness(x: &VectorField, w: &WeightVector, index: usize) -> Result<ConvergenceWitness, NilError> {
    check_weights(w, x.dim())?;
    let n = x.dim();
    let m = n + 1;
    let mut comps = vec![Polynomial::zero(m); m];
    let mut hat = vec![Polynomial::zero(m); m];
    for (k, a) in x.components().iter().enumerate() {
        for (mu, c) in a.terms() {
            let d = term_degree(mu, k, w);
            if d < -1 {
                return Err(NilError::DegreeBelowMinusOne { index: index + 1, degree: d });
            }
            let mut e = mu.entries().to_vec();
            e.push((d + 1) as u32);
            let mono = MultiIndex::new(e);
            comps[k].add_term(mono.clone(), c.clone());
            if d == -1 {
                hat[k].add_term(mono, c.clone());
            }
        }
    }
    let rescaled = VectorField::new(comps);
    let remainder = &rescaled - &VectorField::new(hat);
    let eps = Polynomial::var(m, n);
    let divisible = remainder.components().iter().all(|c| c.is_zero() || c.exact_div(&eps).is_some());
    Ok(ConvergenceWitness { rescaled, remainder, remainder_divisible_by_eps: divisible })
}

/// The frame `{X_hat_i}` of degree -1 components.
pub fn nilpotent_approximation(frame: &SRFrame, w: &WeightVector) -> Result<SRFrame, NilError> {
    check_weights(w, frame.dim())?;
    let mut out = Vec::with_capacity(frame.len());
    for (i, x) in frame.fields().iter().enumerate() {
        let comps = x.to_operator().homogeneous_components(w);
        let hat = comps.get(&-1).ok_or(NilError::NoDegreeMinusOne { index: i + 1 })?;
        out.push(hat.to_vector_field()?);
    }
    Ok(SRFrame::new(format!("{}^", frame.name()), out)?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrivilegedReport {
    pub privileged: bool,
    /// Reason when `privileged` is false.
    pub reason: Option<String>,
    /// Filtration dims of the truncated frame at 0, when it exists.
    pub approx_dims: Option<Vec<usize>>,
}

/// True iff the nilpotent approximation exists and is bracket-generating at 0.
///
/// A field with no degree -1 part means the coordinates are not adapted for
/// `w`; that is reported as `false` with the reason, not as an error.
pub fn verify_privileged(frame: &SRFrame, w: &WeightVector) -> Result<PrivilegedReport, NilError> {
    let approx = match nilpotent_approximation(frame, w) {
        Ok(a) => a,
        Err(e @ NilError::NoDegreeMinusOne { .. }) => {
            return Ok(PrivilegedReport { privileged: false, reason: Some(e.to_string()), approx_dims: None })
        }
        Err(e) => return Err(e),
    };
    let depth = *w.as_slice().iter().max().unwrap_or(&1) as usize;
    let bg = is_bracket_generating(&approx, &origin(frame.dim()), depth.max(1))?;
    Ok(PrivilegedReport {
        privileged: bg.generating,
        reason: (!bg.generating).then(|| "truncated frame is not bracket-generating at 0".to_string()),
        approx_dims: Some(bg.dims),
    })
}

/// True when every coefficient of `x` evaluated at the origin vanishes.
pub(crate) fn vanishes_at_origin(x: &VectorField) -> bool {
    x.eval(&origin(x.dim())).iter().all(Zero::is_zero)
}
