use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use super::geodesic::distance_numeric;
use super::GrushinError;
use crate::symcore::rational::{fmt_rational, pow_i, sqrt_exact, to_f64};
use crate::symcore::Rational;

/// A measure value: exact when the exponent allows it, always with a float.
#[derive(Clone, Debug, PartialEq)]
pub struct Measure {
    pub exact: Option<Rational>,
    pub approx: f64,
}

impl Measure {
    fn exact(r: Rational) -> Self {
        Measure { approx: to_f64(&r), exact: Some(r) }
    }

    fn approx(v: f64) -> Self {
        Measure { exact: None, approx: v }
    }
}

impl Serialize for Measure {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Measure", 2)?;
        st.serialize_field("exact", &self.exact.as_ref().map(fmt_rational))?;
        st.serialize_field("approx", &self.approx)?;
        st.end()
    }
}

/// `sign(x) |x|^(p+1)`, exact for integer `p`.
fn signed_power(x: &Rational, p1: &Rational) -> Measure {
    let sign = if x.is_negative() { -1.0 } else { 1.0 };
    if p1.is_integer() {
        let e = p1.to_integer().to_i64().expect("exponent fits in i64");
        let v = pow_i(&x.abs(), e);
        return Measure::exact(if x.is_negative() { -v } else { v });
    }
    Measure::approx(sign * to_f64(&x.abs()).powf(to_f64(p1)))
}

/// `int_box |x|^p dx dy`.
pub fn measure_of_box(p: &Rational, lo: [Rational; 2], hi: [Rational; 2]) -> Result<Measure, GrushinError> {
    if lo[0] > hi[0] || lo[1] > hi[1] {
        return Err(GrushinError::InvalidArgument("box has lo > hi".into()));
    }
    let height = &hi[1] - &lo[1];
    if lo[0] == hi[0] || height.is_zero() {
        return Ok(Measure::exact(Rational::zero()));
    }
    let touches_zero = !lo[0].is_positive() && !hi[0].is_negative();
    let p1 = p + Rational::one();
    if touches_zero && !p1.is_positive() {
        return Err(GrushinError::Divergent(fmt_rational(p)));
    }
    if p1.is_zero() {
        let v = (to_f64(&hi[0]).abs() / to_f64(&lo[0]).abs()).ln().abs();
        return Ok(Measure::approx(v * to_f64(&height)));
    }
    let (fa, fb) = (signed_power(&lo[0], &p1), signed_power(&hi[0], &p1));
    Ok(match (fa.exact, fb.exact) {
        (Some(a), Some(b)) => Measure::exact((b - a) / &p1 * &height),
        _ => Measure::approx((fb.approx - fa.approx) / to_f64(&p1) * to_f64(&height)),
    })
}

/// One endpoint pair with its numerically computed midpoint.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MidpointSample {
    pub q0: [f64; 2],
    pub q1: [f64; 2],
    pub midpoint: [f64; 2],
    pub d01: f64,
    pub d0m: f64,
    pub dm1: f64,
    /// `|d(q0,m) - d(m,q1)|`.
    pub defect_balance: f64,
    /// `|d(q0,m) + d(m,q1) - d(q0,q1)|`.
    pub defect_sum: f64,
    pub accepted: bool,
    pub error: Option<String>,
}

/// Empirical box of the midpoints of `A_0 = [-l-1,-l] x [0,1]` and `A_1 = [l,l+1] x [0,1]`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MidpointBox {
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub ell: Rational,
    pub grid: usize,
    /// Lattice shape of the points sampled in each set.
    pub lattice: [usize; 2],
    pub tol_mid: f64,
    pub x_range: [f64; 2],
    pub y_range: [f64; 2],
    pub max_abs_x: f64,
    /// `1/(2l)`: from `|x - x_0| <= d(q_0,q_1)/2 <= l + 1 + 1/(2l)`, every
    /// midpoint has `|x| <= 1 + 1/(2l)`.
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub eps_analytic: Rational,
    pub rejected: usize,
    pub strip_ok: bool,
    pub samples: Vec<MidpointSample>,
}

fn lattice(g: usize) -> [usize; 2] {
    let nx = (1..=g).take_while(|d| d * d <= g).filter(|d| g % d == 0).last().unwrap_or(1);
    [nx, g / nx]
}

fn lattice_points(lo: [f64; 2], shape: [usize; 2]) -> Vec<[f64; 2]> {
    let coord = |i: usize, n: usize| if n == 1 { 0.5 } else { i as f64 / (n - 1) as f64 };
    let mut out = Vec::with_capacity(shape[0] * shape[1]);
    for i in 0..shape[0] {
        for j in 0..shape[1] {
            out.push([lo[0] + coord(i, shape[0]), lo[1] + coord(j, shape[1])]);
        }
    }
    out
}

fn sample(q0: [f64; 2], q1: [f64; 2], tol_mid: f64) -> MidpointSample {
    let tol = (tol_mid * 1e-2).min(1e-6);
    let run = || -> Result<MidpointSample, GrushinError> {
        let c01 = distance_numeric(q0, q1, tol)?;
        let m = c01.midpoint();
        let d0m = distance_numeric(q0, m, tol)?.distance;
        let dm1 = distance_numeric(m, q1, tol)?.distance;
        let defect_balance = (d0m - dm1).abs();
        let defect_sum = (d0m + dm1 - c01.distance).abs();
        Ok(MidpointSample {
            q0,
            q1,
            midpoint: m,
            d01: c01.distance,
            d0m,
            dm1,
            defect_balance,
            defect_sum,
            accepted: defect_balance <= tol_mid && defect_sum <= tol_mid,
            error: None,
        })
    };
    run().unwrap_or_else(|e| MidpointSample {
        q0,
        q1,
        midpoint: [f64::NAN; 2],
        d01: f64::NAN,
        d0m: f64::NAN,
        dm1: f64::NAN,
        defect_balance: f64::NAN,
        defect_sum: f64::NAN,
        accepted: false,
        error: Some(e.to_string()),
    })
}

/// Samples `grid` points in each of `A_0`, `A_1` and computes the midpoints of all pairs.
pub fn midpoint_box(ell: &Rational, grid: usize, tol_mid: f64) -> Result<MidpointBox, GrushinError> {
    if !ell.is_positive() {
        return Err(GrushinError::InvalidArgument("l must be positive".into()));
    }
    if grid == 0 {
        return Err(GrushinError::InvalidArgument("grid must be positive".into()));
    }
    let l = to_f64(ell);
    let shape = lattice(grid);
    let a0 = lattice_points([-l - 1.0, 0.0], shape);
    let a1 = lattice_points([l, 0.0], shape);
    let pairs: Vec<([f64; 2], [f64; 2])> = a0.iter().flat_map(|&p| a1.iter().map(move |&q| (p, q))).collect();
    let samples: Vec<MidpointSample> = pairs.par_iter().map(|&(p, q)| sample(p, q, tol_mid)).collect();

    let mut x_range = [f64::INFINITY, f64::NEG_INFINITY];
    let mut y_range = [f64::INFINITY, f64::NEG_INFINITY];
    let mut strip_ok = true;
    for s in samples.iter().filter(|s| s.accepted) {
        let [x, y] = s.midpoint;
        x_range = [x_range[0].min(x), x_range[1].max(x)];
        y_range = [y_range[0].min(y), y_range[1].max(y)];
        let (ylo, yhi) = (s.q0[1].min(s.q1[1]), s.q0[1].max(s.q1[1]));
        strip_ok &= y >= ylo - tol_mid && y <= yhi + tol_mid;
    }
    let rejected = samples.iter().filter(|s| !s.accepted).count();
    Ok(MidpointBox {
        ell: ell.clone(),
        grid,
        lattice: shape,
        tol_mid,
        max_abs_x: x_range[0].abs().max(x_range[1].abs()),
        x_range,
        y_range,
        eps_analytic: (ell * Rational::from_integer(2.into())).recip(),
        rejected,
        strip_ok,
        samples,
    })
}

/// The Brunn-Minkowski comparison `sqrt(m(A_0) m(A_1))` against `m([-1-eps,1+eps] x [0,1])`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BMReport {
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub p: Rational,
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub ell: Rational,
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub eps: Rational,
    pub m_a0: Measure,
    pub m_a1: Measure,
    pub sqrt_product: Measure,
    pub bound: Measure,
    pub margin: f64,
    /// Analytic containment for `eps` and every sampled midpoint inside the box.
    pub containment_certified: bool,
    /// `None` when the containment certificate failed.
    pub violation: Option<bool>,
    /// Containment holds but the box bound is too crude to separate the measures.
    pub crude_bound_insufficient: bool,
    pub midpoints: MidpointBox,
}

/// Runs the midpoint sampling and compares measures. `eps = None` uses the
/// analytic `1/(2l)`.
pub fn bm_violation_check(
    p: &Rational,
    ell: &Rational,
    grid: usize,
    eps: Option<Rational>,
    tol_mid: f64,
) -> Result<BMReport, GrushinError> {
    if p.is_negative() {
        return Err(GrushinError::InvalidArgument("p must be >= 0".into()));
    }
    let mid = midpoint_box(ell, grid, tol_mid)?;
    let eps = eps.unwrap_or_else(|| mid.eps_analytic.clone());
    let one = Rational::one();
    let zero = Rational::zero();
    let containment_certified = mid.eps_analytic <= eps
        && mid.rejected == 0
        && mid.strip_ok
        && mid.max_abs_x <= to_f64(&(&one + &eps));

    let m_a0 = measure_of_box(p, [-(ell + &one), zero.clone()], [-ell.clone(), one.clone()])?;
    let m_a1 = measure_of_box(p, [ell.clone(), zero.clone()], [ell + &one, one.clone()])?;
    let half_width = &one + &eps;
    let bound = measure_of_box(p, [-half_width.clone(), zero], [half_width, one])?;
    let sqrt_product = match (&m_a0.exact, &m_a1.exact) {
        (Some(a), Some(b)) => sqrt_exact(&(a * b)).map_or_else(|| Measure::approx((to_f64(a) * to_f64(b)).sqrt()), Measure::exact),
        _ => Measure::approx((m_a0.approx * m_a1.approx).sqrt()),
    };
    let exceeds = match (&m_a0.exact, &m_a1.exact, &bound.exact) {
        (Some(a), Some(b), Some(c)) => a * b > c * c,
        _ => sqrt_product.approx > bound.approx,
    };
    let violation = containment_certified.then_some(exceeds);
    Ok(BMReport {
        p: p.clone(),
        ell: ell.clone(),
        eps,
        margin: sqrt_product.approx - bound.approx,
        m_a0,
        m_a1,
        sqrt_product,
        bound,
        containment_certified,
        violation,
        crude_bound_insufficient: violation == Some(false),
        midpoints: mid,
    })
}

/// Whether numeric geodesics between points of `{x > 0}` stay in `{x > 0}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HalfPlaneProbe {
    pub pairs: usize,
    pub crossings: usize,
    pub failures: usize,
    pub min_x: f64,
}

/// Shoots geodesics between all pairs of a lattice in `[lo, hi]` (with `lo_x > 0`).
pub fn half_plane_probe(lo: [f64; 2], hi: [f64; 2], grid: usize) -> Result<HalfPlaneProbe, GrushinError> {
    if !(lo[0] > 0.0) || hi[0] < lo[0] || hi[1] < lo[1] {
        return Err(GrushinError::InvalidArgument("probe box must lie in x > 0".into()));
    }
    let shape = lattice(grid);
    let pts: Vec<[f64; 2]> = lattice_points([0.0, 0.0], shape)
        .into_iter()
        .map(|q| [lo[0] + q[0] * (hi[0] - lo[0]), lo[1] + q[1] * (hi[1] - lo[1])])
        .collect();
    let pairs: Vec<([f64; 2], [f64; 2])> = pts
        .iter()
        .enumerate()
        .flat_map(|(i, &a)| pts[i + 1..].iter().map(move |&b| (a, b)))
        .collect();
    let mins: Vec<Option<f64>> =
        pairs.par_iter().map(|&(a, b)| distance_numeric(a, b, 1e-8).ok().map(|c| c.arc().min_x())).collect();
    let ok: Vec<f64> = mins.iter().flatten().copied().collect();
    Ok(HalfPlaneProbe {
        pairs: pairs.len(),
        crossings: ok.iter().filter(|&&m| m <= 0.0).count(),
        failures: mins.len() - ok.len(),
        min_x: ok.iter().copied().fold(f64::INFINITY, f64::min),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symcore::rational::{int, rat};

    #[test]
    fn box_measures() {
        assert_eq!(measure_of_box(&int(1), [int(50), int(0)], [int(51), int(1)]).unwrap().exact, Some(rat(101, 2)));
        assert_eq!(measure_of_box(&int(0), [rat(-7, 3), int(2)], [rat(-4, 3), int(3)]).unwrap().exact, Some(int(1)));
        assert_eq!(measure_of_box(&int(2), [int(0), int(0)], [int(1), int(1)]).unwrap().exact, Some(rat(1, 3)));
        assert_eq!(measure_of_box(&int(1), [int(-1), int(0)], [int(1), int(1)]).unwrap().exact, Some(int(1)));
        assert_eq!(measure_of_box(&int(-2), [int(1), int(0)], [int(2), int(1)]).unwrap().exact, Some(rat(1, 2)));
        assert!(measure_of_box(&int(-1), [int(0), int(0)], [int(1), int(1)]).is_err());
        let half = measure_of_box(&rat(1, 2), [int(0), int(0)], [int(4), int(1)]).unwrap();
        assert!(half.exact.is_none() && (half.approx - 16.0 / 3.0).abs() < 1e-12);
        let log = measure_of_box(&int(-1), [int(1), int(0)], [int(3), int(2)]).unwrap();
        assert!((log.approx - 2.0 * 3f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn lattice_shapes() {
        assert_eq!(lattice(32), [4, 8]);
        assert_eq!(lattice(9), [3, 3]);
        assert_eq!(lattice(7), [1, 7]);
    }

    #[test]
    fn small_bm_run() {
        let r = bm_violation_check(&int(1), &int(10), 4, None, 1e-4).unwrap();
        assert_eq!(r.m_a0.exact, Some(rat(21, 2)));
        assert_eq!(r.midpoints.samples.len(), 16);
        assert!(r.containment_certified, "{:?}", r.midpoints.max_abs_x);
        assert_eq!(r.violation, Some(true));
        let r0 = bm_violation_check(&int(0), &int(10), 4, None, 1e-4).unwrap();
        assert_eq!(r0.violation, Some(false));
        assert!(r0.crude_bound_insufficient);
    }

    #[test]
    fn half_plane_geodesics_stay_right() {
        let probe = half_plane_probe([0.5, 0.0], [2.0, 1.0], 4).unwrap();
        assert_eq!((probe.pairs, probe.crossings, probe.failures), (6, 0, 0));
        assert!(probe.min_x > 0.0);
    }
}
