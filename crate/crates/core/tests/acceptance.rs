//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! fails if any criterion fails.

use std::time::{Duration, Instant};

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use srkit::grushin::{
    bm_violation_check, distance_numeric, geodesic_shoot, n_threshold, ricci_from_metric, ricci_nv, ricci_psd, NParam,
    DEFAULT_STEPS, ENERGY_TOL,
};
use srkit::nilpotent::{nilpotent_approximation, stratified_algebra, DEFAULT_MAX_STEP};
use srkit::obstruction::{
    killing_candidate, no_be_verdict, sub_laplacian_operator, verify_commutativity_theorem, Certificate,
    CommutativityOutcome, Outcome, DEFAULT_BUDGET_DEGREE,
};
use srkit::selfcheck::selfcheck_structure;
use srkit::srframe::{hamiltonian, minimal_control, sharp, standard, SRFrame};
use srkit::structure::{bundled, BUNDLED};
use srkit::symcore::rational::{int, parse_rational, rat};
use srkit::symcore::{
    parse_polynomial, DifferentialOperator, MultiIndex, Polynomial, Rational, VectorField, WeightVector, WeightedDegree,
};

const EXACT_BUDGET: Duration = Duration::from_secs(5);
const DISTANCE_TOL: f64 = 1e-6;
const MIDPOINT_DEFECT_TOL: f64 = 1e-4;
const BM_ELL: i64 = 50;
const BM_GRID: usize = 32;
const PROPERTY_SAMPLES: usize = 200;
const SEED: u64 = 20_240_601;

type CriterionResult = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn w(v: &[u32]) -> WeightVector {
    WeightVector::new(v.to_vec()).unwrap()
}

fn q(s: &str) -> Rational {
    parse_rational(s).unwrap()
}

fn ricci_closed_form_matches_metric() -> CriterionResult {
    let ps = ["0", "1/2", "1", "2", "3", "7/2"];
    let ns = ["3", "5", "10", "100", "inf"];
    let x = rat(1, 2);
    let mut count = 0;
    for p in ps.iter().map(|s| q(s)) {
        for n in ns.iter().map(|s| s.parse::<NParam>().unwrap()) {
            let closed = ricci_nv(&p, &n).map_err(|e| e.to_string())?;
            let metric = ricci_from_metric(&p, &n).map_err(|e| e.to_string())?;
            ensure(closed == metric, format!("p = {p}, N = {n}: {metric:?} vs {closed:?}"))?;
            // Hand evaluation in the orthonormal frame {dx, x dy}.
            let excess = match &n {
                NParam::Finite(n) => (&p + int(1)) * (&p + int(1)) / (n - int(2)),
                NParam::Infinite => Rational::zero(),
            };
            let x2 = &x * &x;
            let a = (&p - int(1) - excess) / &x2;
            let c = (&p - int(1)) / &x2;
            let on = closed.orthonormal_at(&x).map_err(|e| e.to_string())?;
            ensure(on == [[a, Rational::zero()], [Rational::zero(), c]], format!("p = {p}, N = {n}: frame values {on:?}"))?;
            count += 1;
        }
    }
    Ok(format!("{count} exact identities"))
}

fn threshold_flips_exactly() -> CriterionResult {
    let mut detail = Vec::new();
    for p in ["3/2", "2", "3", "5"].iter().map(|s| q(s)) {
        let np = n_threshold(&p).map_err(|e| e.to_string())?;
        let expected = (&p + int(1)) * (&p + int(1)) / (&p - int(1)) + int(2);
        ensure(np == NParam::Finite(expected.clone()), format!("p = {p}: N_p = {np}"))?;
        let psd = |n: Rational| ricci_psd(&p, &NParam::Finite(n), &int(1)).map_err(|e| e.to_string());
        ensure(!psd(&expected - rat(1, 1_000_000))?, format!("p = {p}: PSD below N_p"))?;
        ensure(psd(expected.clone())?, format!("p = {p}: not PSD at N_p"))?;
        for k in 1..=40 {
            let n = int(2) + rat(k, 20) * &expected / int(1);
            ensure(psd(n.clone())? == (n >= expected), format!("p = {p}: wrong side at N = {n}"))?;
        }
        ensure(ricci_psd(&p, &NParam::Infinite, &int(1)).map_err(|e| e.to_string())?, "N = inf not PSD")?;
        detail.push(format!("N_{p} = {np}"));
    }
    ensure(n_threshold(&int(3)).unwrap() == NParam::Finite(int(10)), "p = 3 does not give 10")?;
    Ok(detail.join(", "))
}

/// `sum_i X_i alpha * [X_i, sum_j X_j X_j] gamma`, built from operator composition.
fn pairing_oracle(hat: &SRFrame, alpha: &Polynomial, gamma: &Polynomial) -> Polynomial {
    let ops: Vec<DifferentialOperator> = hat.fields().iter().map(VectorField::to_operator).collect();
    let mut lap = DifferentialOperator::zero(hat.dim());
    for x in &ops {
        lap = &lap + &x.compose(x).unwrap();
    }
    let mut out = Polynomial::zero(hat.dim());
    for x in &ops {
        let c = x.commutator(&lap).unwrap();
        out += &(&x.apply(alpha).unwrap() * &c.apply(gamma).unwrap());
    }
    out
}

fn check_witness_verdict(frame: &SRFrame, weights: &[u32]) -> Result<String, String> {
    let n = frame.dim();
    let started = Instant::now();
    let wv = w(weights);
    let v = no_be_verdict(frame, &vec![int(0); n], &wv, DEFAULT_BUDGET_DEGREE).map_err(|e| e.to_string())?;
    ensure(v.outcome == Outcome::BeFailsAllK, format!("{}: outcome {}", frame.name(), v.outcome))?;
    let Some(Certificate::Witness { alpha, gamma, pairing, eval_point, value }) = &v.certificate else {
        return Err("missing witness".into());
    };
    let hat = nilpotent_approximation(frame, &wv).map_err(|e| e.to_string())?;
    let a = parse_polynomial(alpha, n).map_err(|e| e.to_string())?;
    let g = parse_polynomial(gamma, n).map_err(|e| e.to_string())?;
    let oracle = pairing_oracle(&hat, &a, &g);
    ensure(oracle == parse_polynomial(pairing, n).unwrap(), format!("pairing {pairing} vs oracle {oracle}"))?;
    let pt: Vec<Rational> = eval_point.iter().map(|s| q(s)).collect();
    let val = oracle.eval(&pt);
    ensure(!val.is_zero() && val == q(value), format!("value {value} vs oracle {val}"))?;
    ensure(a.weighted_degree(&wv).unwrap() == WeightedDegree::Homogeneous(1), "alpha not of degree 1")?;
    let replay = v.replay().map_err(|e| e.to_string())?;
    ensure(replay.reproduced, "certificate does not replay")?;
    ensure(started.elapsed() < EXACT_BUDGET, format!("took {:?}", started.elapsed()))?;
    Ok(format!("{}: alpha = {alpha}, gamma = {gamma}, pairing = {pairing} = {value} at {eval_point:?}", frame.name()))
}

fn heisenberg_verdict() -> CriterionResult {
    check_witness_verdict(&standard::heisenberg(), &[1, 1, 2])
}

fn grushin_and_euclidean_verdicts() -> CriterionResult {
    let g = check_witness_verdict(&standard::grushin(), &[1, 2])?;
    let started = Instant::now();
    let e = no_be_verdict(&standard::euclidean(2), &[int(0), int(0)], &w(&[1, 1]), DEFAULT_BUDGET_DEGREE)
        .map_err(|e| e.to_string())?;
    ensure(e.outcome == Outcome::RiemannianTangent, format!("euclidean: {}", e.outcome))?;
    ensure(e.replay().map_err(|e| e.to_string())?.reproduced, "euclidean certificate does not replay")?;
    ensure(started.elapsed() < EXACT_BUDGET, "euclidean verdict too slow")?;
    Ok(format!("{g}; euclidean2: {}", e.outcome))
}

fn commutativity_verifier() -> CriterionResult {
    let heis = standard::heisenberg();
    let wh = w(&[1, 1, 2]);
    let hat = nilpotent_approximation(&heis, &wh).unwrap();
    let strata = stratified_algebra(&hat, &wh, DEFAULT_MAX_STEP).unwrap();
    ensure(strata.h_stratum(2).is_empty(), "heisenberg h^2 is not zero")?;
    let bracket = match verify_commutativity_theorem(&strata, &hat, strata.g_stratum(1), true) {
        Ok(CommutativityOutcome::Counterexample { bracket, .. }) => bracket,
        other => return Err(format!("heisenberg: {other:?}")),
    };
    ensure(bracket.ends_with("= dz"), format!("bracket {bracket}"))?;
    ensure(verify_commutativity_theorem(&strata, &hat, strata.g_stratum(1), false).is_err(), "precondition not enforced")?;

    let e = standard::euclidean(2);
    let we = w(&[1, 1]);
    let strata = stratified_algebra(&e, &we, DEFAULT_MAX_STEP).unwrap();
    match verify_commutativity_theorem(&strata, &e, strata.g_stratum(1), false) {
        Ok(CommutativityOutcome::Commutative { trace }) => {
            ensure(trace.iter().all(|s| s.holds), "euclidean trace has a failing step")?;
            ensure(trace.last().map(|s| s.claim.as_str()) == Some("[g^1, g^1] = 0"), "trace incomplete")?;
            Ok(format!("heisenberg {bracket}; euclidean trace of {} steps", trace.len()))
        }
        other => Err(format!("euclidean: {other:?}")),
    }
}

fn stratification() -> CriterionResult {
    let strata_of = |f: &SRFrame, ws: &[u32]| {
        let wv = w(ws);
        let hat = nilpotent_approximation(f, &wv).unwrap();
        stratified_algebra(&hat, &wv, DEFAULT_MAX_STEP).unwrap()
    };
    let h = strata_of(&standard::heisenberg(), &[1, 1, 2]);
    ensure(h.g_dims() == vec![2, 1], format!("heisenberg g dims {:?}", h.g_dims()))?;
    ensure(h.h_dims().iter().all(|&d| d == 0), "heisenberg h is not zero")?;
    let g = strata_of(&standard::grushin(), &[1, 2]);
    ensure(g.g_dims() == vec![2, 1], format!("grushin g dims {:?}", g.g_dims()))?;
    ensure(g.h_dims()[0] == 1, "grushin h^1 is not one-dimensional")?;
    let mut rows = Vec::new();
    for (name, _) in BUNDLED {
        let s = bundled(name).unwrap();
        let st = strata_of(&s.frame, s.weights.as_ref().unwrap().as_slice());
        ensure(st.h_dims()[0] + st.k1 == st.g_dims()[0], format!("{name}: codimension identity"))?;
        rows.push(format!("{} {:?}/{:?}", s.name(), st.g_dims(), st.h_dims()));
    }
    Ok(rows.join(", "))
}

fn brunn_minkowski() -> CriterionResult {
    let started = Instant::now();
    let r = bm_violation_check(&int(1), &int(BM_ELL), BM_GRID, Some(rat(1, 10)), MIDPOINT_DEFECT_TOL)
        .map_err(|e| e.to_string())?;
    // int_l^{l+1} x dx and int_{-1.1}^{1.1} |x| dx.
    let mass = (int(BM_ELL + 1) * int(BM_ELL + 1) - int(BM_ELL) * int(BM_ELL)) / int(2);
    ensure(mass == rat(101, 2), "oracle mass")?;
    ensure(r.m_a0.exact.as_ref() == Some(&mass), format!("m(A0) = {:?}", r.m_a0))?;
    ensure(r.m_a1.exact.as_ref() == Some(&mass), format!("m(A1) = {:?}", r.m_a1))?;
    ensure(r.bound.exact == Some(rat(121, 100)), format!("bound {:?}", r.bound))?;
    ensure(r.sqrt_product.exact == Some(rat(101, 2)), format!("sqrt product {:?}", r.sqrt_product))?;
    ensure(r.containment_certified, "midpoint box not certified")?;
    ensure(r.midpoints.max_abs_x <= 1.1, format!("max |x| = {}", r.midpoints.max_abs_x))?;
    ensure(r.midpoints.samples.len() == BM_GRID * BM_GRID, "pair count")?;
    ensure(r.violation == Some(true), "no violation")?;
    Ok(format!(
        "m = {}, midpoint |x| <= {:.4}, bound 121/100, {} pairs in {:.1?}",
        r.m_a0.exact.unwrap(),
        r.midpoints.max_abs_x,
        r.midpoints.samples.len(),
        started.elapsed()
    ))
}

fn geodesic_numerics() -> CriterionResult {
    let a = distance_numeric([1.0, 0.0], [2.0, 0.0], DISTANCE_TOL).map_err(|e| e.to_string())?;
    ensure((a.distance - 1.0).abs() <= DISTANCE_TOL, format!("d = {}", a.distance))?;
    ensure(a.bounds.lower == 1.0 && a.bounds.upper == Some(1.0), "bounds do not coincide")?;
    let b = distance_numeric([2.0, 0.0], [2.0, 1.0], DISTANCE_TOL).map_err(|e| e.to_string())?;
    ensure(b.distance > 0.0 && b.distance <= 0.5, format!("d = {}", b.distance))?;
    for c in [&a, &b] {
        ensure(c.energy_drift <= ENERGY_TOL, format!("drift {}", c.energy_drift))?;
        let arc = geodesic_shoot(c.from, c.covector, c.distance, c.distance / DEFAULT_STEPS as f64)
            .map_err(|e| e.to_string())?;
        ensure(arc.energy_drift <= ENERGY_TOL, format!("replayed drift {}", arc.energy_drift))?;
        let end = arc.end();
        ensure(((end[0] - c.to[0]).powi(2) + (end[1] - c.to[1]).powi(2)).sqrt() <= DISTANCE_TOL, "arc misses target")?;
    }
    Ok(format!("d((1,0),(2,0)) = {:.9}, d((2,0),(2,1)) = {:.9}", a.distance, b.distance))
}

fn random_poly(rng: &mut ChaCha8Rng, n: usize, max_deg: u32, terms: usize) -> Polynomial {
    Polynomial::from_terms(
        n,
        (0..terms).map(|_| {
            let mu = MultiIndex::new((0..n).map(|_| rng.gen_range(0..=max_deg)).collect());
            (mu, int(rng.gen_range(-3..=3)))
        }),
    )
}

fn random_field(rng: &mut ChaCha8Rng, n: usize) -> VectorField {
    VectorField::new((0..n).map(|_| random_poly(rng, n, 2, 2)).collect())
}

fn property_suites() -> CriterionResult {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let n = 3;
    for _ in 0..PROPERTY_SAMPLES {
        let (x, y, z) = (random_field(&mut rng, n), random_field(&mut rng, n), random_field(&mut rng, n));
        let xy = x.bracket(&y).unwrap();
        ensure(xy == -&y.bracket(&x).unwrap(), "antisymmetry")?;
        let j = &(&x.bracket(&y.bracket(&z).unwrap()).unwrap() + &y.bracket(&z.bracket(&x).unwrap()).unwrap())
            + &z.bracket(&xy).unwrap();
        ensure(j.is_zero(), "Jacobi identity")?;
    }
    let wv = w(&[1, 1, 2]);
    for _ in 0..PROPERTY_SAMPLES {
        let f = random_poly(&mut rng, n, 3, 4);
        let g = random_poly(&mut rng, n, 3, 4);
        let parts = f.homogeneous_components(&wv);
        let mut sum = Polynomial::zero(n);
        for (k, part) in &parts {
            ensure(part.weighted_degree(&wv).unwrap() == WeightedDegree::Homogeneous(*k), "component not homogeneous")?;
            sum += part;
        }
        ensure(sum == f, "components do not sum to the polynomial")?;
        if let (Some((&kf, pf)), Some((&kg, pg))) = (parts.iter().next_back(), g.homogeneous_components(&wv).iter().next_back()) {
            let prod = pf * pg;
            ensure(prod.weighted_degree(&wv).unwrap() == WeightedDegree::Homogeneous(kf + kg), "grading not additive")?;
        }
    }
    let frames = [standard::heisenberg(), standard::grushin(), standard::martinet(), standard::euclidean(2)];
    let weights = [w(&[1, 1, 2]), w(&[1, 2]), w(&[1, 1, 3]), w(&[1, 1])];
    for (frame, wv) in frames.iter().zip(&weights) {
        let hat = nilpotent_approximation(frame, wv).unwrap();
        let dim = hat.dim();
        let first: Vec<usize> = (0..dim).filter(|&i| wv.get(i) == 1).collect();
        for _ in 0..20 {
            let coeffs: Vec<i64> = first.iter().map(|_| rng.gen_range(-4..=4)).collect();
            if coeffs.iter().all(|&c| c == 0) {
                continue;
            }
            let mut alpha = Polynomial::zero(dim);
            for (&i, &c) in first.iter().zip(&coeffs) {
                alpha += &Polynomial::var(dim, i).scale(&int(c));
            }
            ensure(!killing_candidate(&hat, wv, &alpha).unwrap().is_zero(), format!("{}: phi kills {alpha}", frame.name()))?;
        }
        let lap = sub_laplacian_operator(&hat).unwrap();
        for x in hat.fields() {
            let c = x.to_operator().commutator(&lap).unwrap();
            ensure(
                c.is_zero() || c.operator_degree(wv).unwrap() == WeightedDegree::Homogeneous(-3),
                format!("{}: [X, Delta] degree", frame.name()),
            )?;
        }
    }
    let mut covectors = 0;
    for frame in &frames {
        let dim = frame.dim();
        for _ in 0..PROPERTY_SAMPLES / frames.len() {
            let x: Vec<Rational> = (0..dim).map(|_| rat(rng.gen_range(-6..=6), rng.gen_range(1..=3))).collect();
            let l: Vec<Rational> = (0..dim).map(|_| rat(rng.gen_range(-6..=6), rng.gen_range(1..=3))).collect();
            let v = sharp(frame, &x, &l).unwrap();
            let h = hamiltonian(frame, &x, &l).unwrap();
            let mc = minimal_control(frame, &x, &v).unwrap();
            ensure(mc.norm_sq == &h + &h, format!("{}: |sharp|^2 != 2H", frame.name()))?;
            covectors += 1;
        }
    }
    ensure(covectors == PROPERTY_SAMPLES, "covector count")?;
    Ok(format!("{PROPERTY_SAMPLES} triples, {covectors} covectors over {} frames", frames.len()))
}

fn certificate_pipeline_on_gallery() -> CriterionResult {
    let mut rows = Vec::new();
    for (name, _) in BUNDLED {
        let s = bundled(name).unwrap();
        let (summary, checks) = selfcheck_structure(&s, SEED, 8);
        let failed: Vec<&str> = checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
        ensure(failed.is_empty(), format!("{name}: {failed:?}"))?;
        rows.push(format!("{} {}", s.name(), summary["verdict"].as_str().unwrap_or("?")));
    }
    Ok(rows.join(", "))
}

fn main() {
    let criteria: [(&str, fn() -> CriterionResult); 10] = [
        ("ricci closed form equals metric computation", ricci_closed_form_matches_metric),
        ("N_p threshold flips exactly", threshold_flips_exactly),
        ("heisenberg no-BE verdict with witness", heisenberg_verdict),
        ("grushin witness, euclidean riemannian tangent", grushin_and_euclidean_verdicts),
        ("commutativity verifier", commutativity_verifier),
        ("stratification dims and codimension identity", stratification),
        ("brunn-minkowski violation, p = 1, l = 50", brunn_minkowski),
        ("geodesic distances and energy conservation", geodesic_numerics),
        ("property suites", property_suites),
        ("certificate pipeline on the bundled gallery", certificate_pipeline_on_gallery),
    ];
    let mut failures = Vec::new();
    for (i, (name, f)) in criteria.iter().enumerate() {
        let started = Instant::now();
        match f() {
            Ok(detail) => println!("criterion {:>2} PASS {name} ({detail}) [{:.2?}]", i + 1, started.elapsed()),
            Err(e) => {
                println!("criterion {:>2} FAIL {name}: {e} [{:.2?}]", i + 1, started.elapsed());
                failures.push(i + 1);
            }
        }
    }
    if !failures.is_empty() {
        eprintln!("failed criteria: {failures:?}");
        std::process::exit(1);
    }
}
