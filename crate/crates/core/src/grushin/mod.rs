//! The weighted Grushin plane `G_p = (R^2, d, |x|^p dx dy)` with frame
//! `{dx, x*dy}`: the Bakry-Emery Ricci tensor off the singular line, the
//! `N_p` threshold of the half-plane, Hamiltonian geodesics, and the
//! Brunn-Minkowski violation built from midpoint sets.

mod bm;
mod geodesic;
mod ricci;

use std::fmt;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::symcore::rational::{fmt_rational, parse_rational};
use crate::symcore::{Polynomial, Rational, RationalFunction, SymError};

pub use bm::{
    bm_violation_check, half_plane_probe, measure_of_box, midpoint_box, BMReport, HalfPlaneProbe, Measure,
    MidpointBox, MidpointSample,
};
pub use geodesic::{
    distance_bounds, distance_numeric, geodesic_shoot, hamiltonian, DistanceBounds, DistanceCertificate, GeodesicArc,
    DEFAULT_STEPS, ENERGY_TOL, MULTISTART_ANGLES,
};
pub use ricci::{n_threshold, ricci_from_metric, ricci_nv, ricci_psd, MetricData, RicciTensor2D};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GrushinError {
    #[error(transparent)]
    Sym(#[from] SymError),
    #[error("N = {0} is outside the domain N > 2")]
    DimensionDomain(String),
    #[error("p = {0} is below 1")]
    ExponentBelowOne(String),
    #[error("x = 0 lies on the singular set")]
    SingularSet,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("relative energy drift {drift:e} exceeds {tol:e}")]
    EnergyDrift { drift: f64, tol: f64 },
    #[error("shooting did not converge; best residual {best_residual:e}")]
    NoConvergence { best_residual: f64 },
    #[error("distance {d} lies outside the window [{lower}, {upper}]")]
    OutsideBounds { d: f64, lower: f64, upper: f64 },
    #[error("integral of |x|^{0} diverges on this box")]
    Divergent(String),
}

/// Dimension parameter `N in (2, inf]`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum NParam {
    Finite(Rational),
    Infinite,
}

impl NParam {
    pub fn finite(n: Rational) -> NParam {
        NParam::Finite(n)
    }

    /// `1 / (N - 2)`, zero at infinity.
    pub(crate) fn inverse_excess(&self) -> Result<Rational, GrushinError> {
        match self {
            NParam::Infinite => Ok(Rational::from_integer(0.into())),
            NParam::Finite(n) => {
                let two = Rational::from_integer(2.into());
                if *n <= two {
                    return Err(GrushinError::DimensionDomain(fmt_rational(n)));
                }
                Ok((n - two).recip())
            }
        }
    }
}

impl fmt::Display for NParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NParam::Finite(n) => f.write_str(&fmt_rational(n)),
            NParam::Infinite => f.write_str("inf"),
        }
    }
}

impl std::str::FromStr for NParam {
    type Err = GrushinError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "inf" | "infinity" | "oo" | "∞" => Ok(NParam::Infinite),
            t => parse_rational(t)
                .map(NParam::Finite)
                .ok_or_else(|| GrushinError::InvalidArgument(format!("cannot parse N = {t:?}"))),
        }
    }
}

impl Serialize for NParam {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// The weighted Grushin plane, or half-plane `[0, inf) x R` when `half` is set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GrushinModel {
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub p: Rational,
    pub half: bool,
}

impl GrushinModel {
    pub fn new(p: Rational, half: bool) -> Self {
        GrushinModel { p, half }
    }

    /// Log-gradient `(p/x, 0)` of the density `|x|^p`, with a pole on `{x = 0}`.
    pub fn density_log_gradient(&self) -> Vec<RationalFunction> {
        let x = Polynomial::var(2, 0);
        let num = Polynomial::constant(2, self.p.clone());
        vec![
            RationalFunction::new(num, x).expect("x is nonzero"),
            RationalFunction::zero(2),
        ]
    }

    pub fn measure(&self, lo: [Rational; 2], hi: [Rational; 2]) -> Result<Measure, GrushinError> {
        if self.half && lo[0] < Rational::from_integer(0.into()) {
            return Err(GrushinError::InvalidArgument("box leaves the half-plane".into()));
        }
        measure_of_box(&self.p, lo, hi)
    }
}
