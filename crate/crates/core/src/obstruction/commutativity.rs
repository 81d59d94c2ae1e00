use serde::{Deserialize, Serialize};

use super::{commutes_with_sublaplacian, ObsError};
use crate::linalg::{Coords, IncrementalBasis};
use crate::nilpotent::StratifiedAlgebra;
use crate::srframe::SRFrame;
use crate::symcore::VectorField;

/// One verified (or violated) inclusion in the replayed induction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InclusionStep {
    pub claim: String,
    pub holds: bool,
    /// The offending bracket, written `[a, b] = value`.
    pub counterexample: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum CommutativityOutcome {
    Commutative { trace: Vec<InclusionStep> },
    Counterexample { trace: Vec<InclusionStep>, bracket: String },
}

impl CommutativityOutcome {
    pub fn trace(&self) -> &[InclusionStep] {
        match self {
            CommutativityOutcome::Commutative { trace } | CommutativityOutcome::Counterexample { trace, .. } => trace,
        }
    }

    pub fn is_commutative(&self) -> bool {
        matches!(self, CommutativityOutcome::Commutative { .. })
    }
}

fn span(fields: &[VectorField]) -> IncrementalBasis {
    let mut b = IncrementalBasis::new();
    for f in fields {
        b.insert(&f.coords());
    }
    b
}

/// Checks `[A, B] ⊆ span(target)` and returns the brackets plus the first offender.
fn bracket_inclusion(
    a: &[VectorField],
    b: &[VectorField],
    target: &[VectorField],
) -> Result<(Vec<VectorField>, Option<String>), ObsError> {
    let t = span(target);
    let mut out = Vec::new();
    for x in a {
        for y in b {
            let c = x.bracket(y)?;
            if !t.contains(&c.coords()) {
                return Ok((out, Some(format!("[{x}, {y}] = {c}"))));
            }
            out.push(c);
        }
    }
    Ok((out, None))
}

fn same_span(a: &[VectorField], b: &[VectorField]) -> bool {
    let sa = span(a);
    let sb = span(b);
    sa.rank() == sb.rank() && a.iter().all(|f| sb.contains(&f.coords()))
}

/// Replays the induction behind "horizontal symmetries complementing `h^1`
/// force `g` to be commutative" as exact subspace inclusions.
///
/// With `waive_preconditions`, the hypotheses on `i_basis` are not checked
/// and a violated inclusion is returned as a counterexample. Without it, the
/// hypotheses are enforced and a violation is an error, since it cannot
/// happen when they hold.
pub fn verify_commutativity_theorem(
    strata: &StratifiedAlgebra,
    frame_hat: &SRFrame,
    i_basis: &[VectorField],
    waive_preconditions: bool,
) -> Result<CommutativityOutcome, ObsError> {
    let g1 = strata.g_stratum(1);
    if !waive_preconditions {
        let g1_span = span(g1);
        if let Some(x) = i_basis.iter().find(|x| !g1_span.contains(&x.coords())) {
            return Err(ObsError::Precondition(format!("{x} is not in g^1")));
        }
        let mut joint = IncrementalBasis::new();
        let direct = i_basis.iter().chain(strata.h_stratum(1)).all(|f| joint.insert(&f.coords()));
        if !direct || joint.rank() != g1.len() {
            return Err(ObsError::Precondition("g^1 is not the direct sum of i and h^1".into()));
        }
        for x in i_basis {
            if !commutes_with_sublaplacian(x, frame_hat)?.commutes {
                return Err(ObsError::Precondition(format!("[{x}, Delta_hat] != 0")));
            }
        }
    }

    let mut trace = Vec::new();
    let finish = |trace: Vec<InclusionStep>, claim: String, bad: String| {
        if waive_preconditions {
            Ok(CommutativityOutcome::Counterexample { trace, bracket: bad })
        } else {
            Err(ObsError::InclusionViolated(format!("{claim}: {bad}")))
        }
    };

    let claim = "[i, g^1] in h^2".to_string();
    let (_, bad) = bracket_inclusion(i_basis, g1, strata.h_stratum(2))?;
    trace.push(InclusionStep { claim: claim.clone(), holds: bad.is_none(), counterexample: bad.clone() });
    if let Some(bad) = bad {
        return finish(trace, claim, bad);
    }

    for j in 1..=strata.step {
        let claim = format!("[i, h^{j}] in h^{}", j + 1);
        let (brackets, bad) = bracket_inclusion(i_basis, strata.h_stratum(j), strata.h_stratum(j + 1))?;
        trace.push(InclusionStep { claim: claim.clone(), holds: bad.is_none(), counterexample: bad.clone() });
        if let Some(bad) = bad {
            return finish(trace, claim, bad);
        }
        let claim = format!("g^{} = [i, h^{j}] + h^{}", j + 1, j + 1);
        let mut rhs = brackets;
        rhs.extend_from_slice(strata.h_stratum(j + 1));
        let holds = same_span(strata.g_stratum(j + 1), &rhs);
        let detail = (!holds).then(|| format!("dim g^{} = {}", j + 1, strata.g_stratum(j + 1).len()));
        trace.push(InclusionStep { claim: claim.clone(), holds, counterexample: detail.clone() });
        if let Some(bad) = detail {
            return finish(trace, claim, bad);
        }
    }

    let claim = "[g^1, g^1] = 0".to_string();
    let (_, bad) = bracket_inclusion(g1, g1, &[])?;
    trace.push(InclusionStep { claim: claim.clone(), holds: bad.is_none(), counterexample: bad.clone() });
    if let Some(bad) = bad {
        return finish(trace, claim, bad);
    }
    Ok(CommutativityOutcome::Commutative { trace })
}
