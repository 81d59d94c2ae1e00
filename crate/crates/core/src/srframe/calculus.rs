use super::{FrameError, SRFrame};
use crate::symcore::{self, Polynomial, Rational, RationalFunction, SymError, VectorField};

fn check(frame: &SRFrame, u: &Polynomial) -> Result<(), FrameError> {
    if u.dim() != frame.dim() {
        return Err(SymError::DimensionMismatch { left: frame.dim(), right: u.dim() }.into());
    }
    Ok(())
}

/// `grad u = sum_i (X_i u) X_i`; redundant fields count with multiplicity.
pub fn gradient(frame: &SRFrame, u: &Polynomial) -> Result<VectorField, FrameError> {
    check(frame, u)?;
    let mut out = VectorField::zero(frame.dim());
    for x in frame.fields() {
        let c = x.apply(u)?;
        if !c.is_zero() {
            out = &out + &x.mul_poly(&c);
        }
    }
    Ok(out)
}

/// `|grad u|^2 = sum_i (X_i u)^2`.
pub fn grad_norm_sq(frame: &SRFrame, u: &Polynomial) -> Result<Polynomial, FrameError> {
    carre_du_champ(frame, u, u)
}

/// `g(grad u, grad v) = sum_i (X_i u)(X_i v)`.
pub fn carre_du_champ(frame: &SRFrame, u: &Polynomial, v: &Polynomial) -> Result<Polynomial, FrameError> {
    check(frame, u)?;
    check(frame, v)?;
    let mut out = Polynomial::zero(frame.dim());
    for x in frame.fields() {
        out += &(&x.apply(u)? * &x.apply(v)?);
    }
    Ok(out)
}

/// Divergence of each frame field with respect to `m = rho dz`.
pub fn divergence(frame: &SRFrame, log_density_grad: Option<&[RationalFunction]>) -> Result<Vec<RationalFunction>, FrameError> {
    frame
        .fields()
        .iter()
        .map(|x| symcore::divergence(x, log_density_grad).map_err(FrameError::from))
        .collect()
}

/// `Delta u = sum_i (X_i^2 u + (X_i u) div_m X_i)`.
pub fn sub_laplacian(
    frame: &SRFrame,
    u: &Polynomial,
    log_density_grad: Option<&[RationalFunction]>,
) -> Result<RationalFunction, FrameError> {
    check(frame, u)?;
    let divs = divergence(frame, log_density_grad)?;
    let mut flat = Polynomial::zero(frame.dim());
    let mut out = RationalFunction::zero(frame.dim());
    for (x, d) in frame.fields().iter().zip(&divs) {
        let xu = x.apply(u)?;
        flat += &x.apply(&xu)?;
        if !d.is_zero() && !xu.is_zero() {
            out = &out + &d.mul_poly(&xu);
        }
    }
    Ok(&out + &RationalFunction::from_poly(flat))
}

/// `int_B g(grad u, grad phi) + int_B phi Delta u` for Lebesgue measure, where
/// `phi = v * prod_i (z_i - lo_i)(hi_i - z_i)` vanishes on the boundary of `B`.
///
/// Integrals are exact, so the residual is exactly zero when the
/// sub-Laplacian is the true divergence of the gradient.
pub fn integration_by_parts_residual(
    frame: &SRFrame,
    u: &Polynomial,
    v: &Polynomial,
    lo: &[Rational],
    hi: &[Rational],
) -> Result<Rational, FrameError> {
    check(frame, u)?;
    check(frame, v)?;
    let n = frame.dim();
    if lo.len() != n || hi.len() != n {
        return Err(FrameError::PointDimension { expected: n, got: lo.len().min(hi.len()) });
    }
    let mut bump = Polynomial::one(n);
    for i in 0..n {
        let z = Polynomial::var(n, i);
        let a = &z - &Polynomial::constant(n, lo[i].clone());
        let b = &Polynomial::constant(n, hi[i].clone()) - &z;
        bump = &bump * &(&a * &b);
    }
    let phi = v * &bump;
    let lap = sub_laplacian(frame, u, None)?
        .as_polynomial()
        .expect("Lebesgue sub-Laplacian of a polynomial frame is polynomial");
    let integrand = &carre_du_champ(frame, u, &phi)? + &(&phi * &lap);
    Ok(integrand.integrate_box(lo, hi))
}
