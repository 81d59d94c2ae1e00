use num_traits::Zero;
use serde::Serialize;

use super::{FrameError, SRFrame};
use crate::linalg::solve;
use crate::symcore::Rational;

/// Least-Euclidean-norm control `u*` with `sum_i u*_i X_i(x) = v`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MinimalControl {
    #[serde(serialize_with = "crate::report::ser_rationals")]
    pub control: Vec<Rational>,
    /// `|u*|^2 = |v|_x^2`.
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub norm_sq: Rational,
}

/// Solves `A A^T y = v` and returns `u* = A^T y`, where the columns of `A` are `X_i(x)`.
pub fn minimal_control(frame: &SRFrame, x: &[Rational], v: &[Rational]) -> Result<MinimalControl, FrameError> {
    let a = frame.evaluation_matrix(x)?;
    if v.len() != frame.dim() {
        return Err(FrameError::PointDimension { expected: frame.dim(), got: v.len() });
    }
    let n = frame.dim();
    let gram: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| a[i].iter().zip(&a[j]).fold(Rational::zero(), |acc, (p, q)| acc + p * q))
                .collect()
        })
        .collect();
    let y = solve(&gram, v).ok_or(FrameError::NotHorizontal)?;
    let control: Vec<Rational> = (0..frame.len())
        .map(|k| (0..n).fold(Rational::zero(), |acc, i| acc + &a[i][k] * &y[i]))
        .collect();
    let norm_sq = control.iter().fold(Rational::zero(), |acc, c| acc + c * c);
    Ok(MinimalControl { control, norm_sq })
}

fn pairings(frame: &SRFrame, x: &[Rational], lambda: &[Rational]) -> Result<Vec<Rational>, FrameError> {
    if lambda.len() != frame.dim() {
        return Err(FrameError::PointDimension { expected: frame.dim(), got: lambda.len() });
    }
    frame.check_point(x)?;
    Ok(frame
        .fields()
        .iter()
        .map(|f| f.eval(x).iter().zip(lambda).fold(Rational::zero(), |acc, (a, l)| acc + a * l))
        .collect())
}

/// `H(lambda) = 1/2 sum_i <lambda, X_i(x)>^2`.
pub fn hamiltonian(frame: &SRFrame, x: &[Rational], lambda: &[Rational]) -> Result<Rational, FrameError> {
    let s = pairings(frame, x, lambda)?
        .iter()
        .fold(Rational::zero(), |acc, c| acc + c * c);
    Ok(s / Rational::from_integer(2.into()))
}

/// `lambda^# = sum_i <lambda, X_i(x)> X_i(x)` as a coordinate vector.
pub fn sharp(frame: &SRFrame, x: &[Rational], lambda: &[Rational]) -> Result<Vec<Rational>, FrameError> {
    let c = pairings(frame, x, lambda)?;
    let mut out = vec![Rational::zero(); frame.dim()];
    for (ci, f) in c.iter().zip(frame.fields()) {
        for (o, a) in out.iter_mut().zip(f.eval(x)) {
            *o += ci * a;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::srframe::standard;
    use crate::symcore::rational::{int, rat};
    use crate::symcore::VectorField;

    #[test]
    fn minimal_controls() {
        let g = standard::grushin();
        let m = minimal_control(&g, &[int(1), int(0)], &[int(0), int(1)]).unwrap();
        assert_eq!(m.control, vec![int(0), int(1)]);
        assert_eq!(m.norm_sq, int(1));
        let d = SRFrame::new("double", vec![VectorField::coordinate(1, 0), VectorField::coordinate(1, 0)]).unwrap();
        let m = minimal_control(&d, &[int(0)], &[int(1)]).unwrap();
        assert_eq!(m.control, vec![rat(1, 2), rat(1, 2)]);
        assert_eq!(m.norm_sq, rat(1, 2));
        let z = minimal_control(&g, &[int(0), int(0)], &[int(0), int(0)]).unwrap();
        assert_eq!(z.norm_sq, int(0));
        assert_eq!(minimal_control(&g, &[int(0), int(0)], &[int(0), int(1)]), Err(FrameError::NotHorizontal));
    }

    #[test]
    fn hamiltonian_and_sharp() {
        let g = standard::grushin();
        let x = [int(3), int(7)];
        assert_eq!(hamiltonian(&g, &x, &[int(2), int(5)]).unwrap(), rat(4 + 9 * 25, 2));
        assert_eq!(hamiltonian(&g, &x, &[int(0), int(0)]).unwrap(), int(0));
        let e = standard::euclidean(2);
        assert_eq!(hamiltonian(&e, &x, &[int(3), int(4)]).unwrap(), rat(25, 2));
        assert_eq!(sharp(&e, &x, &[int(3), int(4)]).unwrap(), vec![int(3), int(4)]);
        assert_eq!(sharp(&g, &[int(0), int(0)], &[int(0), int(1)]).unwrap(), vec![int(0), int(0)]);
    }

    #[test]
    fn sharp_norm_is_twice_hamiltonian() {
        let h = standard::heisenberg();
        let x = [rat(1, 2), int(-3), int(2)];
        let lam = [int(1), rat(2, 3), int(-5)];
        let s = sharp(&h, &x, &lam).unwrap();
        let m = minimal_control(&h, &x, &s).unwrap();
        assert_eq!(m.norm_sq, hamiltonian(&h, &x, &lam).unwrap() * int(2));
    }
}
