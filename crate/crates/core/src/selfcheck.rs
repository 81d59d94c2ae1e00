//! The invariant suite run by `srkit selfcheck` on a structure: filtration,
//! privileged coordinates, nilpotent approximation, strata, symmetry space,
//! deficit identities, representation formulas and the verdict replay.

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::linalg::{Coords, IncrementalBasis};
use crate::nilpotent::{
    adapted_weights, convergence_witness, nilpotent_approximation, stratified_algebra, verify_privileged,
    DEFAULT_MAX_STEP,
};
use crate::obstruction::{
    be_deficit, commutes_with_sublaplacian, horizontal_symmetry_space, killing_candidate, no_be_verdict,
    sub_laplacian_operator, DEFAULT_BUDGET_DEGREE,
};
use crate::report::Check;
use crate::srframe::{
    classify_point, filtration_at, hamiltonian, integration_by_parts_residual, minimal_control, sharp, SRFrame,
};
use crate::structure::Structure;
use crate::symcore::rational::{int, rat};
use crate::symcore::{Polynomial, Rational, WeightedDegree};

/// Sample test function mixing weight-1 and higher coordinates.
fn sample_u(n: usize) -> Polynomial {
    let mut u = Polynomial::zero(n);
    for i in 0..n {
        let zi = Polynomial::var(n, i);
        u += &zi.pow(i as u32 + 2).scale(&rat(1, i as i64 + 1));
        if i + 1 < n {
            u += &(&zi * &Polynomial::var(n, i + 1));
        }
    }
    u
}

fn random_vec(rng: &mut ChaCha8Rng, n: usize) -> Vec<Rational> {
    (0..n).map(|_| rat(rng.gen_range(-8..=8), rng.gen_range(1..=4))).collect()
}

/// Runs the suite; errors from any stage become failed checks.
pub fn selfcheck_structure(s: &Structure, seed: u64, depth: usize) -> (Value, Vec<Check>) {
    let mut checks = Vec::new();
    let summary = match run(s, seed, depth, &mut checks) {
        Ok(v) => v,
        Err(e) => {
            checks.push(Check::with_detail("pipeline completes", false, e));
            json!({ "name": s.name() })
        }
    };
    (summary, checks)
}

fn run(s: &Structure, seed: u64, depth: usize, checks: &mut Vec<Check>) -> Result<Value, String> {
    let frame = &s.frame;
    let n = frame.dim();
    let origin = vec![Rational::zero(); n];
    let err = |e: &dyn std::fmt::Display| e.to_string();

    let filt = filtration_at(frame, &origin, depth, false).map_err(|e| err(&e))?;
    checks.push(Check::new("filtration dims non-decreasing", filt.dims.windows(2).all(|w| w[0] <= w[1])));
    checks.push(Check::with_detail(
        "bracket-generating at 0",
        filt.bracket_generating,
        format!("dims {:?}", filt.dims),
    ));
    let class = classify_point(frame, &origin, &rat(1, 8), 8, depth, seed).map_err(|e| err(&e))?;

    let adapted = adapted_weights(&filt).map_err(|e| err(&e))?;
    let w = s.weights.clone().unwrap_or_else(|| adapted.clone());
    checks.push(Check::with_detail("weights match the flag at 0", w == adapted, format!("{w} vs {adapted}")));
    let privileged = verify_privileged(frame, &w).map_err(|e| err(&e))?;
    checks.push(Check::new("coordinates privileged at 0", privileged.privileged));

    let hat = nilpotent_approximation(frame, &w).map_err(|e| err(&e))?;
    let hat2 = nilpotent_approximation(&hat, &w).map_err(|e| err(&e))?;
    checks.push(Check::new("nilpotent approximation idempotent", hat2.fields() == hat.fields()));
    let witnesses_ok = frame
        .fields()
        .iter()
        .enumerate()
        .map(|(i, x)| convergence_witness(x, &w, i).map(|c| c.remainder_divisible_by_eps))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| err(&e))?;
    checks.push(Check::new("rescaling remainders divisible by eps", witnesses_ok.iter().all(|&b| b)));

    let strata = stratified_algebra(&hat, &w, DEFAULT_MAX_STEP).map_err(|e| err(&e))?;
    checks.extend(strata.checks());

    let symmetries = horizontal_symmetry_space(&hat, &strata).map_err(|e| err(&e))?;
    let all_commute = symmetries
        .basis
        .iter()
        .map(|x| commutes_with_sublaplacian(x, &hat).map(|t| t.commutes))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| err(&e))?;
    checks.push(Check::new("symmetry basis commutes with sub-Laplacian", all_commute.iter().all(|&b| b)));

    let mut images = IncrementalBasis::new();
    let mut injective = true;
    for i in (0..n).filter(|&i| w.get(i) == 1) {
        let phi = killing_candidate(&hat, &w, &Polynomial::var(n, i)).map_err(|e| err(&e))?;
        injective &= images.insert(&phi.coords());
    }
    checks.push(Check::new("phi injective on degree-1 forms", injective));

    let lap = sub_laplacian_operator(&hat).map_err(|e| err(&e))?;
    let mut degree_ok = true;
    for x in hat.fields() {
        let c = x.to_operator().commutator(&lap).map_err(|e| err(&e))?;
        degree_ok &= c.is_zero() || c.operator_degree(&w).ok() == Some(WeightedDegree::Homogeneous(-3));
    }
    checks.push(Check::new("[X_hat, Delta_hat] has degree -3", degree_ok));

    let u = sample_u(n);
    let deficit = be_deficit(frame, None, &u, None).map_err(|e| err(&e))?;
    checks.push(Check::new(
        "deficit expansion equals -A",
        deficit.expansion_is_minus_a.unwrap_or(true),
    ));
    let v = Polynomial::var(n, 0) + Polynomial::one(n);
    let (lo, hi) = (vec![int(-1); n], vec![int(1); n]);
    let ibp = integration_by_parts_residual(frame, &u, &v, &lo, &hi).map_err(|e| err(&e))?;
    checks.push(Check::with_detail("integration by parts residual", ibp.is_zero(), ibp.to_string()));

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut coherent = true;
    for _ in 0..8 {
        let x = random_vec(&mut rng, n);
        let lambda = random_vec(&mut rng, n);
        coherent &= norm_coherent(frame, &x, &lambda).map_err(|e| err(&e))?;
    }
    checks.push(Check::new("minimal control norm equals 2H", coherent));

    let verdict = no_be_verdict(frame, &origin, &w, DEFAULT_BUDGET_DEGREE).map_err(|e| err(&e))?;
    let replay = verdict.replay().map_err(|e| err(&e))?;
    checks.push(Check::with_detail("verdict replays", replay.reproduced, verdict.outcome.to_string()));

    Ok(json!({
        "name": s.name(),
        "dims_at_0": filt.dims,
        "class_at_0": class.class,
        "weights": w.as_slice(),
        "g_dims": strata.g_dims(),
        "h_dims": strata.h_dims(),
        "k1": strata.k1,
        "q": strata.q,
        "symmetry_dim": symmetries.basis.len(),
        "verdict": verdict.outcome,
        "complete_asserted": s.assertions.complete,
    }))
}

fn norm_coherent(frame: &SRFrame, x: &[Rational], lambda: &[Rational]) -> Result<bool, crate::srframe::FrameError> {
    let v = sharp(frame, x, lambda)?;
    let h = hamiltonian(frame, x, lambda)?;
    let mc = minimal_control(frame, x, &v)?;
    Ok(mc.norm_sq == h * int(2))
}
