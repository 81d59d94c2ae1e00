use serde::Serialize;

use super::ObsError;
use crate::linalg::{coordinate_matrix, nullspace, Coords, IncrementalBasis};
use crate::nilpotent::StratifiedAlgebra;
use crate::srframe::SRFrame;
use crate::symcore::{DifferentialOperator, Polynomial, VectorField, WeightVector, WeightedDegree};

/// `Delta_hat = sum_i X_hat_i^2`.
pub fn sub_laplacian_operator(frame_hat: &SRFrame) -> Result<DifferentialOperator, ObsError> {
    let mut out = DifferentialOperator::zero(frame_hat.dim());
    for x in frame_hat.fields() {
        let op = x.to_operator();
        out = &out + &op.compose(&op)?;
    }
    Ok(out)
}

/// `phi[alpha] = sum_i (X_hat_i alpha) X_hat_i` for a degree-1 form `alpha`.
pub fn killing_candidate(frame_hat: &SRFrame, w: &WeightVector, alpha: &Polynomial) -> Result<VectorField, ObsError> {
    if !alpha.is_zero() && alpha.weighted_degree(w)? != WeightedDegree::Homogeneous(1) {
        return Err(ObsError::NotDegreeOne(alpha.to_string()));
    }
    let mut out = VectorField::zero(frame_hat.dim());
    for x in frame_hat.fields() {
        let c = x.apply(alpha)?;
        let c = c.as_constant().ok_or_else(|| ObsError::NotDegreeOne(alpha.to_string()))?;
        out = &out + &x.scale(&c);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CommutationTest {
    pub commutes: bool,
    /// `[X, Delta_hat]` when it is nonzero.
    #[serde(serialize_with = "ser_opt_op")]
    pub witness: Option<DifferentialOperator>,
}

fn ser_opt_op<S: serde::Serializer>(op: &Option<DifferentialOperator>, s: S) -> Result<S::Ok, S::Error> {
    match op {
        Some(op) => s.serialize_some(&op.to_string()),
        None => s.serialize_none(),
    }
}

pub fn commutes_with_sublaplacian(x: &VectorField, frame_hat: &SRFrame) -> Result<CommutationTest, ObsError> {
    let lap = sub_laplacian_operator(frame_hat)?;
    let c = x.to_operator().commutator(&lap)?;
    Ok(if c.is_zero() {
        CommutationTest { commutes: true, witness: None }
    } else {
        CommutationTest { commutes: false, witness: Some(c) }
    })
}

/// `{X in g^1 : [X, Delta_hat] = 0}` and whether it complements `h^1` in `g^1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SymmetrySpace {
    #[serde(serialize_with = "crate::report::ser_display_seq")]
    pub basis: Vec<VectorField>,
    pub complements_h1: bool,
}

pub fn horizontal_symmetry_space(frame_hat: &SRFrame, strata: &StratifiedAlgebra) -> Result<SymmetrySpace, ObsError> {
    let g1 = strata.g_stratum(1);
    let lap = sub_laplacian_operator(frame_hat)?;
    let images: Vec<_> = g1
        .iter()
        .map(|b| b.to_operator().commutator(&lap).map(|c| c.coords()))
        .collect::<Result<_, _>>()?;
    let (_, rows) = coordinate_matrix(&images);
    let n = frame_hat.dim();
    let basis: Vec<VectorField> = nullspace(&rows, g1.len())
        .into_iter()
        .map(|c| g1.iter().zip(&c).fold(VectorField::zero(n), |acc, (f, ci)| &acc + &f.scale(ci)))
        .collect();
    let mut span = IncrementalBasis::new();
    let mut independent = true;
    for f in basis.iter().chain(strata.h_stratum(1)) {
        independent &= span.insert(&f.coords());
    }
    let complements_h1 = independent && span.rank() == g1.len();
    Ok(SymmetrySpace { basis, complements_h1 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nilpotent::{stratified_algebra, DEFAULT_MAX_STEP};
    use crate::srframe::standard;
    use crate::symcore::{parse_operator, parse_polynomial};

    fn w(v: &[u32]) -> WeightVector {
        WeightVector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn killing_candidates() {
        let g = standard::grushin();
        let x = parse_polynomial("x", 2).unwrap();
        assert_eq!(killing_candidate(&g, &w(&[1, 2]), &x).unwrap(), VectorField::coordinate(2, 0));
        assert!(killing_candidate(&g, &w(&[1, 2]), &Polynomial::zero(2)).unwrap().is_zero());
        let h = standard::heisenberg();
        let hx = killing_candidate(&h, &w(&[1, 1, 2]), &parse_polynomial("x", 3).unwrap()).unwrap();
        assert_eq!(hx, h.fields()[0]);
        assert!(killing_candidate(&g, &w(&[1, 2]), &parse_polynomial("y", 2).unwrap()).is_err());
    }

    #[test]
    fn commutation_witnesses() {
        let e = standard::euclidean(2);
        assert!(commutes_with_sublaplacian(&VectorField::coordinate(2, 0), &e).unwrap().commutes);
        let h = standard::heisenberg();
        let t = commutes_with_sublaplacian(&h.fields()[0], &h).unwrap();
        let expected = parse_operator("2*dz*dy + x*dz^2", 3).unwrap();
        assert_eq!(t.witness, Some(expected));
        let g = standard::grushin();
        let t = commutes_with_sublaplacian(&VectorField::coordinate(2, 0), &g).unwrap();
        assert_eq!(t.witness, Some(parse_operator("2*x*dy^2", 2).unwrap()));
    }

    #[test]
    fn symmetry_spaces() {
        let cases = [
            (standard::euclidean(2), w(&[1, 1]), 2, true),
            (standard::heisenberg(), w(&[1, 1, 2]), 0, false),
            (standard::grushin(), w(&[1, 2]), 0, false),
        ];
        for (frame, wt, dim, complement) in cases {
            let strata = stratified_algebra(&frame, &wt, DEFAULT_MAX_STEP).unwrap();
            let s = horizontal_symmetry_space(&frame, &strata).unwrap();
            assert_eq!((s.basis.len(), s.complements_h1), (dim, complement), "{}", frame.name());
        }
    }
}
