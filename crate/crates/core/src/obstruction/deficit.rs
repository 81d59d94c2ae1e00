use serde::Serialize;

use super::ObsError;
use crate::nilpotent::convergence_witness;
use crate::srframe::{divergence, grad_norm_sq, sub_laplacian, SRFrame};
use crate::symcore::{Polynomial, Rational, RationalFunction, VectorField, WeightVector, WeightedDegree};

/// `A(u) = 1/2 Delta |grad u|^2 - g(grad u, grad Delta u)` and `B(u) = |grad u|^2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BEDeficitReport {
    pub frame: String,
    #[serde(serialize_with = "crate::report::ser_display")]
    pub u: Polynomial,
    #[serde(serialize_with = "crate::report::ser_display")]
    pub a: RationalFunction,
    #[serde(serialize_with = "crate::report::ser_display")]
    pub b: Polynomial,
    /// `sum_ij X_i u (X_ijj u - X_jji u) - (X_ij u)^2`, present when the
    /// sub-Laplacian is the plain sum of squares (every field divergence-free).
    #[serde(serialize_with = "ser_opt_display")]
    pub expansion: Option<Polynomial>,
    /// Whether `expansion == -A` holds exactly.
    pub expansion_is_minus_a: Option<bool>,
    #[serde(serialize_with = "crate::report::ser_opt_rational")]
    pub a_at_point: Option<Rational>,
    #[serde(serialize_with = "crate::report::ser_opt_rational")]
    pub b_at_point: Option<Rational>,
    /// `B(x) = 0` and `A(x) < 0`: BE(K, inf) fails at `x` for every `K`.
    pub refutes_all_k: Option<bool>,
}

fn ser_opt_display<S: serde::Serializer>(p: &Option<Polynomial>, s: S) -> Result<S::Ok, S::Error> {
    match p {
        Some(p) => s.serialize_some(&p.to_string()),
        None => s.serialize_none(),
    }
}

/// `sum_ij X_i u (X_i X_j X_j u - X_j X_j X_i u) - (X_i X_j u)^2`.
fn expansion(fields: &[VectorField], u: &Polynomial) -> Result<Polynomial, ObsError> {
    let n = u.dim();
    let xu: Vec<Polynomial> = fields.iter().map(|x| x.apply(u)).collect::<Result<_, _>>()?;
    let mut out = Polynomial::zero(n);
    for (i, xi) in fields.iter().enumerate() {
        for xj in fields {
            let xju = xj.apply(u)?;
            let xijj = xi.apply(&xj.apply(&xju)?)?;
            let xjji = xj.apply(&xj.apply(&xu[i])?)?;
            let xij = xi.apply(&xju)?;
            out += &(&xu[i] * &(&xijj - &xjji));
            out -= &(&xij * &xij);
        }
    }
    Ok(out)
}

pub fn be_deficit(
    frame: &SRFrame,
    log_density_grad: Option<&[RationalFunction]>,
    u: &Polynomial,
    at: Option<&[Rational]>,
) -> Result<BEDeficitReport, ObsError> {
    if let (Some(x), Some(ell)) = (at, log_density_grad) {
        if ell.iter().any(|l| l.eval(x).is_err()) {
            return Err(ObsError::DensityPole);
        }
    }
    let b = grad_norm_sq(frame, u)?;
    let lap_u = sub_laplacian(frame, u, log_density_grad)?;
    let half = Rational::new(1.into(), 2.into());
    let mut a = sub_laplacian(frame, &b, log_density_grad)?.scale(&half);
    for x in frame.fields() {
        let xu = x.apply(u)?;
        if !xu.is_zero() {
            a = &a - &x.apply_rf(&lap_u).mul_poly(&xu);
        }
    }
    let sum_of_squares = divergence(frame, log_density_grad)?.iter().all(RationalFunction::is_zero);
    let expansion = if sum_of_squares { Some(expansion(frame.fields(), u)?) } else { None };
    let expansion_is_minus_a = expansion.as_ref().map(|e| RationalFunction::from_poly(-e) == a);
    let (a_at_point, b_at_point) = match at {
        Some(x) => {
            frame.check_point(x)?;
            (Some(a.eval(x).map_err(|_| ObsError::DensityPole)?), Some(b.eval(x)))
        }
        None => (None, None),
    };
    let refutes_all_k = match (&a_at_point, &b_at_point) {
        (Some(av), Some(bv)) => Some(num_traits::Zero::is_zero(bv) && num_traits::Signed::is_negative(av)),
        _ => None,
    };
    Ok(BEDeficitReport {
        frame: frame.name().to_string(),
        u: u.clone(),
        a,
        b,
        expansion,
        expansion_is_minus_a,
        a_at_point,
        b_at_point,
        refutes_all_k,
    })
}

/// The blown-up deficit `sum_ij X_i u (X_ijj u - X_jji u) - (X_ij u)^2` for a
/// frame homogeneous of degree -1. It is `<= 0` wherever BE(0, inf) holds.
pub fn blowup_deficit(frame_hat: &SRFrame, w: &WeightVector, u: &Polynomial) -> Result<Polynomial, ObsError> {
    for (i, f) in frame_hat.fields().iter().enumerate() {
        if f.to_operator().operator_degree(w).ok() != Some(WeightedDegree::Homogeneous(-1)) {
            return Err(ObsError::NotHomogeneous { index: i + 1 });
        }
    }
    expansion(frame_hat.fields(), u)
}

/// Replays the blow-up: the deficit expansion for the rescaled frame `X^eps`
/// (with `eps` a symbolic extra variable) minus that of `X_hat` is divisible by `eps`.
pub fn blowup_remainder_divisible(frame: &SRFrame, w: &WeightVector, u: &Polynomial) -> Result<bool, ObsError> {
    let n = frame.dim();
    let mut rescaled = Vec::new();
    let mut hat = Vec::new();
    for (i, x) in frame.fields().iter().enumerate() {
        let wit = convergence_witness(x, w, i)?;
        hat.push(&wit.rescaled - &wit.remainder);
        rescaled.push(wit.rescaled);
    }
    let ue = u.embed(1);
    let diff = &expansion(&rescaled, &ue)? - &expansion(&hat, &ue)?;
    Ok(diff.is_zero() || diff.exact_div(&Polynomial::var(n + 1, n)).is_some())
}
