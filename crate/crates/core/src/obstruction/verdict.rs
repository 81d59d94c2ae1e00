use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{
    horizontal_symmetry_space, sub_laplacian_operator, verify_commutativity_theorem, CommutativityOutcome,
    InclusionStep, ObsError,
};
use crate::nilpotent::{nilpotent_approximation, stratified_algebra, verify_privileged, DEFAULT_MAX_STEP};
use crate::report::Check;
use crate::srframe::SRFrame;
use crate::symcore::rational::{fmt_rational, int, parse_rational};
use crate::symcore::{
    parse_operator, parse_polynomial, DifferentialOperator, MultiIndex, Polynomial, Rational, VectorField,
    WeightVector,
};

/// Highest weighted degree of `gamma` searched by default.
pub const DEFAULT_BUDGET_DEGREE: u32 = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Outcome {
    RiemannianTangent,
    BeFailsAllK,
    Inconclusive,
}

impl std::fmt::Display for Outcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Outcome::RiemannianTangent => "RIEMANNIAN_TANGENT",
            Outcome::BeFailsAllK => "BE_FAILS_ALL_K",
            Outcome::Inconclusive => "INCONCLUSIVE",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    /// Fields of `g^1` commuting with `Delta_hat`, complementing `h^1`, and the
    /// verified inclusion chain ending in `[g^1, g^1] = 0`.
    Symmetry { basis: Vec<String>, trace: Vec<InclusionStep> },
    /// `sum_i X_hat_i alpha * [X_hat_i, Delta_hat] gamma`, nonzero at `eval_point`.
    Witness { alpha: String, gamma: String, pairing: String, eval_point: Vec<String>, value: String },
}

/// Tangent-level verdict at a point, with a certificate that replays from
/// its serialized form alone.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub structure: String,
    pub fields: Vec<String>,
    pub point: Vec<String>,
    pub weights: Vec<u32>,
    pub budget_degree: u32,
    pub outcome: Outcome,
    pub certificate: Option<Certificate>,
    pub note: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReplayReport {
    pub outcome: Outcome,
    pub reproduced: bool,
    pub checks: Vec<Check>,
}

/// `sum_i (X_hat_i alpha) * [X_hat_i, Delta_hat] gamma`, the lowest-order part of
/// the blown-up deficit for `u = alpha + gamma`.
pub fn pairing(frame_hat: &SRFrame, alpha: &Polynomial, gamma: &Polynomial) -> Result<Polynomial, ObsError> {
    let comms = commutators(frame_hat)?;
    pairing_with(frame_hat, &comms, alpha, gamma)
}

fn commutators(frame_hat: &SRFrame) -> Result<Vec<DifferentialOperator>, ObsError> {
    let lap = sub_laplacian_operator(frame_hat)?;
    frame_hat
        .fields()
        .iter()
        .map(|x| x.to_operator().commutator(&lap).map_err(ObsError::from))
        .collect()
}

fn pairing_with(
    frame_hat: &SRFrame,
    comms: &[DifferentialOperator],
    alpha: &Polynomial,
    gamma: &Polynomial,
) -> Result<Polynomial, ObsError> {
    let mut out = Polynomial::zero(frame_hat.dim());
    for (x, c) in frame_hat.fields().iter().zip(comms) {
        let xa = x.apply(alpha)?;
        if !xa.is_zero() {
            out += &(&xa * &c.apply(gamma)?);
        }
    }
    Ok(out)
}

/// First point of `S^n`, `S = {0, 1, -1, 2, -2, ...}` with `deg + 1` values, where `p` is nonzero.
fn nonzero_point(p: &Polynomial) -> Option<(Vec<Rational>, Rational)> {
    let n = p.dim();
    let deg = p.total_degree()? as usize;
    let values: Vec<Rational> = (0..=deg)
        .map(|k| {
            let m = (k as i64 + 1) / 2;
            int(if k % 2 == 1 { m } else { -m })
        })
        .collect();
    let mut idx = vec![0usize; n];
    loop {
        let pt: Vec<Rational> = idx.iter().map(|&i| values[i].clone()).collect();
        let v = p.eval(&pt);
        if !v.is_zero() {
            return Some((pt, v));
        }
        let mut k = n;
        loop {
            if k == 0 {
                return None;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < values.len() {
                break;
            }
            idx[k] = 0;
        }
    }
}

fn strings(v: &[Rational]) -> Vec<String> {
    v.iter().map(fmt_rational).collect()
}

fn parse_point(v: &[String]) -> Result<Vec<Rational>, ObsError> {
    v.iter()
        .map(|s| parse_rational(s).ok_or_else(|| ObsError::Replay(format!("bad rational {s:?}"))))
        .collect()
}

fn witness_search(frame_hat: &SRFrame, w: &WeightVector, budget: u32) -> Result<Option<Certificate>, ObsError> {
    let n = frame_hat.dim();
    let comms = commutators(frame_hat)?;
    let alphas: Vec<usize> = (0..w.first_layer()).collect();
    let candidates: Vec<(MultiIndex, usize)> = (3..=budget)
        .flat_map(|d| MultiIndex::with_weighted_degree(w.as_slice(), d))
        .flat_map(|g| alphas.iter().map(move |&a| (g.clone(), a)))
        .collect();
    candidates
        .par_iter()
        .map(|(g, a)| {
            let alpha = Polynomial::var(n, *a);
            let gamma = Polynomial::monomial(n, g.clone(), int(1));
            let p = pairing_with(frame_hat, &comms, &alpha, &gamma)?;
            Ok(nonzero_point(&p).map(|(pt, v)| Certificate::Witness {
                alpha: alpha.to_string(),
                gamma: gamma.to_string(),
                pairing: p.to_string(),
                eval_point: strings(&pt),
                value: fmt_rational(&v),
            }))
        })
        .find_map_first(|r: Result<Option<Certificate>, ObsError>| match r {
            Ok(None) => None,
            other => Some(other),
        })
        .transpose()
        .map(Option::flatten)
}

const NOTE: &str = "verdict concerns the tangent-level algebra at the queried point";

/// Decides whether BE(K, inf) can hold near `x` from the nilpotent approximation
/// in privileged coordinates centred at `x`.
pub fn no_be_verdict(frame: &SRFrame, x: &[Rational], w: &WeightVector, budget_degree: u32) -> Result<Verdict, ObsError> {
    let local = frame.translated(x)?;
    let priv_report = verify_privileged(&local, w)?;
    if !priv_report.privileged {
        return Err(ObsError::NotPrivileged(priv_report.reason.unwrap_or_default()));
    }
    let frame_hat = nilpotent_approximation(&local, w)?;
    let strata = stratified_algebra(&frame_hat, w, DEFAULT_MAX_STEP)?;
    let symmetries = horizontal_symmetry_space(&frame_hat, &strata)?;

    let mut outcome = None;
    if symmetries.complements_h1 && strata.k1 == frame.dim() {
        if let CommutativityOutcome::Commutative { trace } =
            verify_commutativity_theorem(&strata, &frame_hat, &symmetries.basis, false)?
        {
            let basis = symmetries.basis.iter().map(VectorField::to_string).collect();
            outcome = Some((Outcome::RiemannianTangent, Some(Certificate::Symmetry { basis, trace })));
        }
    }
    let (outcome, certificate) = match outcome {
        Some(o) => o,
        None => match witness_search(&frame_hat, w, budget_degree)? {
            Some(c) => (Outcome::BeFailsAllK, Some(c)),
            None => (Outcome::Inconclusive, None),
        },
    };
    let note = if outcome == Outcome::Inconclusive {
        format!("{NOTE}; obstruction exists algebraically, explicit (alpha, gamma) witness not found within budget")
    } else {
        NOTE.to_string()
    };
    Ok(Verdict {
        structure: frame.name().to_string(),
        fields: frame.fields().iter().map(VectorField::to_string).collect(),
        point: strings(x),
        weights: w.as_slice().to_vec(),
        budget_degree,
        outcome,
        certificate,
        note,
    })
}

impl Verdict {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("verdict serializes")
    }

    pub fn from_json(s: &str) -> Result<Verdict, ObsError> {
        serde_json::from_str(s).map_err(|e| ObsError::Replay(e.to_string()))
    }

    fn frame(&self) -> Result<SRFrame, ObsError> {
        let n = self.point.len();
        let fields = self
            .fields
            .iter()
            .map(|s| parse_operator(s, n)?.to_vector_field())
            .collect::<Result<Vec<_>, _>>()?;
        Ok(SRFrame::new(self.structure.clone(), fields)?)
    }

    /// Rechecks the certificate by exact algebra, then reruns the pipeline
    /// from the serialized inputs and compares outcomes.
    pub fn replay(&self) -> Result<ReplayReport, ObsError> {
        let frame = self.frame()?;
        let n = frame.dim();
        let x = parse_point(&self.point)?;
        let w = WeightVector::new(self.weights.clone())?;
        let frame_hat = nilpotent_approximation(&frame.translated(&x)?, &w)?;
        let mut checks = Vec::new();
        match &self.certificate {
            Some(Certificate::Witness { alpha, gamma, pairing: p_str, eval_point, value }) => {
                let alpha = parse_polynomial(alpha, n)?;
                let gamma = parse_polynomial(gamma, n)?;
                let p = pairing(&frame_hat, &alpha, &gamma)?;
                checks.push(Check::new("pairing polynomial matches", p == parse_polynomial(p_str, n)?));
                let v = p.eval(&parse_point(eval_point)?);
                let claimed = parse_point(std::slice::from_ref(value))?.remove(0);
                checks.push(Check::with_detail("pairing value matches", v == claimed, fmt_rational(&v)));
                checks.push(Check::new("pairing value is nonzero", !v.is_zero()));
            }
            Some(Certificate::Symmetry { basis, trace }) => {
                let strata = stratified_algebra(&frame_hat, &w, DEFAULT_MAX_STEP)?;
                let basis = basis
                    .iter()
                    .map(|s| parse_operator(s, n)?.to_vector_field())
                    .collect::<Result<Vec<_>, _>>()?;
                let replayed = verify_commutativity_theorem(&strata, &frame_hat, &basis, false);
                let ok = matches!(&replayed, Ok(CommutativityOutcome::Commutative { trace: t }) if t == trace);
                checks.push(Check::new("commutativity trace replays", ok));
                checks.push(Check::new("rank at the point is full", strata.k1 == n));
            }
            None => {}
        }
        let fresh = no_be_verdict(&frame, &x, &w, self.budget_degree)?;
        checks.push(Check::new("pipeline reproduces certificate", fresh.certificate == self.certificate));
        let reproduced = fresh.outcome == self.outcome && checks.iter().all(|c| c.passed);
        Ok(ReplayReport { outcome: fresh.outcome, reproduced, checks })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::srframe::standard;
    use crate::symcore::rational::rat;

    fn w(v: &[u32]) -> WeightVector {
        WeightVector::new(v.to_vec()).unwrap()
    }

    fn zeros(n: usize) -> Vec<Rational> {
        vec![int(0); n]
    }

    #[test]
    fn heisenberg_witness() {
        let v = no_be_verdict(&standard::heisenberg(), &zeros(3), &w(&[1, 1, 2]), DEFAULT_BUDGET_DEGREE).unwrap();
        assert_eq!(v.outcome, Outcome::BeFailsAllK);
        match v.certificate.as_ref().unwrap() {
            Certificate::Witness { alpha, gamma, value, .. } => {
                assert_eq!((alpha.as_str(), gamma.as_str(), value.as_str()), ("x", "y*z", "2"));
            }
            other => panic!("unexpected certificate {other:?}"),
        }
        let replay = Verdict::from_json(&v.to_json()).unwrap().replay().unwrap();
        assert!(replay.reproduced, "{replay:?}");
    }

    #[test]
    fn heisenberg_pairing_oracle() {
        // [X1, X2^2] = 2 dz X2 on yz gives 2.
        let h = standard::heisenberg();
        let p = pairing(&h, &parse_polynomial("x", 3).unwrap(), &parse_polynomial("y*z", 3).unwrap()).unwrap();
        assert_eq!(p, Polynomial::constant(3, int(2)));
    }

    #[test]
    fn grushin_needs_degree_four() {
        let g = standard::grushin();
        let v = no_be_verdict(&g, &zeros(2), &w(&[1, 2]), 3).unwrap();
        assert_eq!(v.outcome, Outcome::Inconclusive);
        let v = no_be_verdict(&g, &zeros(2), &w(&[1, 2]), DEFAULT_BUDGET_DEGREE).unwrap();
        assert_eq!(v.outcome, Outcome::BeFailsAllK);
        match v.certificate.as_ref().unwrap() {
            Certificate::Witness { gamma, pairing, eval_point, value, .. } => {
                assert_eq!((gamma.as_str(), pairing.as_str(), value.as_str()), ("y^2", "4*x", "4"));
                assert_eq!(eval_point, &vec!["1".to_string(), "0".to_string()]);
            }
            other => panic!("unexpected certificate {other:?}"),
        }
        assert!(v.replay().unwrap().reproduced);
    }

    #[test]
    fn euclidean_is_riemannian_tangent() {
        let v = no_be_verdict(&standard::euclidean(2), &[rat(1, 3), int(-2)], &w(&[1, 1]), DEFAULT_BUDGET_DEGREE).unwrap();
        assert_eq!(v.outcome, Outcome::RiemannianTangent);
        assert!(matches!(v.certificate, Some(Certificate::Symmetry { .. })));
        assert!(Verdict::from_json(&v.to_json()).unwrap().replay().unwrap().reproduced);
    }

    #[test]
    fn grushin_off_axis_is_riemannian() {
        let v = no_be_verdict(&standard::grushin(), &[int(1), int(0)], &w(&[1, 1]), DEFAULT_BUDGET_DEGREE).unwrap();
        assert_eq!(v.outcome, Outcome::RiemannianTangent);
    }

    #[test]
    fn non_privileged_is_refused() {
        let r = no_be_verdict(&standard::grushin(), &zeros(2), &w(&[1, 1]), DEFAULT_BUDGET_DEGREE);
        assert!(matches!(r, Err(ObsError::NotPrivileged(_))));
    }

    #[test]
    fn tampered_certificate_fails_replay() {
        let mut v = no_be_verdict(&standard::heisenberg(), &zeros(3), &w(&[1, 1, 2]), DEFAULT_BUDGET_DEGREE).unwrap();
        if let Some(Certificate::Witness { value, .. }) = v.certificate.as_mut() {
            *value = "3".into();
        }
        assert!(!v.replay().unwrap().reproduced);
    }
}
