//! Algebraic invariants checked on generated inputs.

use proptest::prelude::*;

use srkit::grushin::{geodesic_shoot, ricci_from_metric, ricci_nv, NParam, ENERGY_TOL};
use srkit::obstruction::{no_be_verdict, Verdict};
use srkit::srframe::{carre_du_champ, hamiltonian, minimal_control, sharp, standard};
use srkit::symcore::rational::{fmt_rational, int, parse_rational, rat};
use srkit::symcore::{parse_polynomial, MultiIndex, Polynomial, Rational, VectorField, WeightVector};

const DIM: usize = 3;

fn rational() -> impl Strategy<Value = Rational> {
    (-20i64..=20, 1i64..=6).prop_map(|(n, d)| rat(n, d))
}

fn polynomial() -> impl Strategy<Value = Polynomial> {
    prop::collection::vec((prop::collection::vec(0u32..=2, DIM), -4i64..=4), 0..5)
        .prop_map(|terms| Polynomial::from_terms(DIM, terms.into_iter().map(|(e, c)| (MultiIndex::new(e), int(c)))))
}

fn field() -> impl Strategy<Value = VectorField> {
    prop::collection::vec(polynomial(), DIM).prop_map(VectorField::new)
}

fn point() -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec(rational(), DIM)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rational_text_roundtrip(r in rational()) {
        prop_assert_eq!(parse_rational(&fmt_rational(&r)), Some(r));
    }

    #[test]
    fn polynomial_text_roundtrip(p in polynomial()) {
        prop_assert_eq!(parse_polynomial(&p.to_string(), DIM).unwrap(), p);
    }

    #[test]
    fn ring_laws(a in polynomial(), b in polynomial(), c in polynomial()) {
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn evaluation_is_a_homomorphism(a in polynomial(), b in polynomial(), x in point()) {
        prop_assert_eq!((&a * &b).eval(&x), a.eval(&x) * b.eval(&x));
        prop_assert_eq!((&a + &b).eval(&x), a.eval(&x) + b.eval(&x));
    }

    #[test]
    fn fields_are_derivations(x in field(), f in polynomial(), g in polynomial()) {
        let lhs = x.apply(&(&f * &g)).unwrap();
        let rhs = &(&x.apply(&f).unwrap() * &g) + &(&f * &x.apply(&g).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn bracket_is_the_commutator(x in field(), y in field(), f in polynomial()) {
        let xy = x.bracket(&y).unwrap();
        let direct = &x.apply(&y.apply(&f).unwrap()).unwrap() - &y.apply(&x.apply(&f).unwrap()).unwrap();
        prop_assert_eq!(xy.apply(&f).unwrap(), direct);
        prop_assert_eq!(xy.to_operator(), x.to_operator().commutator(&y.to_operator()).unwrap());
    }

    #[test]
    fn homogeneous_components_partition(p in polynomial()) {
        let w = WeightVector::new(vec![1, 1, 2]).unwrap();
        let parts = p.homogeneous_components(&w);
        let sum = parts.values().fold(Polynomial::zero(DIM), |acc, q| &acc + q);
        prop_assert_eq!(sum, p);
    }

    #[test]
    fn carre_du_champ_is_symmetric_and_nonnegative(u in polynomial(), v in polynomial(), x in point()) {
        let frame = standard::heisenberg();
        prop_assert_eq!(carre_du_champ(&frame, &u, &v).unwrap(), carre_du_champ(&frame, &v, &u).unwrap());
        prop_assert!(carre_du_champ(&frame, &u, &u).unwrap().eval(&x) >= int(0));
    }

    #[test]
    fn sharp_has_norm_twice_the_hamiltonian(x in point(), l in point()) {
        for frame in [standard::heisenberg(), standard::martinet()] {
            let v = sharp(&frame, &x, &l).unwrap();
            let h = hamiltonian(&frame, &x, &l).unwrap();
            prop_assert_eq!(minimal_control(&frame, &x, &v).unwrap().norm_sq, &h + &h);
        }
    }

    #[test]
    fn ricci_routes_agree(pn in 0i64..=12, pd in 1i64..=4, nn in 21i64..=200) {
        let p = rat(pn, pd);
        let n = NParam::Finite(rat(nn, 10));
        prop_assert_eq!(ricci_nv(&p, &n).unwrap(), ricci_from_metric(&p, &n).unwrap());
    }

    #[test]
    fn geodesic_energy_is_conserved(x in 0.2f64..3.0, y in -1.0f64..1.0, px in -1.0f64..1.0, py in -1.0f64..1.0) {
        prop_assume!(px.abs() + py.abs() > 1e-3);
        let arc = geodesic_shoot([x, y], [px, py], 1.0, 1.0 / 2048.0).unwrap();
        prop_assert!(arc.energy_drift <= ENERGY_TOL);
    }
}

#[test]
fn verdict_json_roundtrip() {
    let w = WeightVector::new(vec![1, 1, 2]).unwrap();
    let v = no_be_verdict(&standard::heisenberg(), &[int(0), int(0), int(0)], &w, 4).unwrap();
    let back = Verdict::from_json(&v.to_json()).unwrap();
    assert_eq!(back.to_json(), v.to_json());
    assert!(back.replay().unwrap().reproduced);
}
