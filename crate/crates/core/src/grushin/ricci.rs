use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::{GrushinError, GrushinModel, NParam};
use crate::symcore::{parse_rational_function, Rational, RationalFunction};

type Rf = RationalFunction;
type Mat2 = [[Rf; 2]; 2];

/// A symmetric 2-tensor `xx dx⊗dx + xy (dx⊗dy + dy⊗dx) + yy dy⊗dy` with
/// rational-function coefficients in `x`, valid off `{x = 0}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RicciTensor2D {
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub p: Rational,
    pub n: NParam,
    #[serde(serialize_with = "crate::report::ser_display")]
    pub xx: Rf,
    #[serde(serialize_with = "crate::report::ser_display")]
    pub xy: Rf,
    #[serde(serialize_with = "crate::report::ser_display")]
    pub yy: Rf,
}

impl RicciTensor2D {
    fn from_matrix(p: &Rational, n: &NParam, m: Mat2) -> Self {
        let [[xx, xy], [_, yy]] = m;
        RicciTensor2D { p: p.clone(), n: n.clone(), xx, xy, yy }
    }

    pub fn is_zero(&self) -> bool {
        self.xx.is_zero() && self.xy.is_zero() && self.yy.is_zero()
    }

    /// Components in the orthonormal frame `{dx, x*dy}` at the point `(x, *)`.
    pub fn orthonormal_at(&self, x: &Rational) -> Result<[[Rational; 2]; 2], GrushinError> {
        if x.is_zero() {
            return Err(GrushinError::SingularSet);
        }
        let pt = [x.clone(), Rational::zero()];
        let a = self.xx.eval(&pt)?;
        let b = self.xy.eval(&pt)? * x;
        let c = self.yy.eval(&pt)? * x * x;
        Ok([[a, b.clone()], [b, c]])
    }

    /// Eigenvalues in the orthonormal frame at `x`, as floats.
    pub fn eigenvalues_at(&self, x: &Rational) -> Result<[f64; 2], GrushinError> {
        let m = self.orthonormal_at(x)?;
        let f = |r: &Rational| crate::symcore::rational::to_f64(r);
        let (a, b, c) = (f(&m[0][0]), f(&m[0][1]), f(&m[1][1]));
        let mean = (a + c) / 2.0;
        let rad = (((a - c) / 2.0).powi(2) + b * b).sqrt();
        Ok([mean - rad, mean + rad])
    }

    /// Exact positive semi-definiteness at `x`.
    pub fn is_psd_at(&self, x: &Rational) -> Result<bool, GrushinError> {
        let [[a, b], [_, c]] = self.orthonormal_at(x)?;
        Ok(!a.is_negative() && !c.is_negative() && !(&a * &c - &b * &b).is_negative())
    }
}

/// `Ric_{N,V} = (p-1)/x^2 g - (p+1)^2/(N-2) dx⊗dx / x^2` with `g = dx^2 + dy^2/x^2`.
pub fn ricci_nv(p: &Rational, n: &NParam) -> Result<RicciTensor2D, GrushinError> {
    let inv = n.inverse_excess()?;
    let one = Rational::one();
    let x2 = rf("1/x^2");
    let x4 = rf("1/x^4");
    let xx = x2.scale(&(p - &one - (p + &one) * (p + &one) * inv));
    let yy = x4.scale(&(p - &one));
    Ok(RicciTensor2D::from_matrix(p, n, [[xx, Rf::zero(2)], [Rf::zero(2), yy]]))
}

fn rf(s: &str) -> Rf {
    parse_rational_function(s, 2).expect("literal parses")
}

/// Levi-Civita and weighted data of the Grushin metric, computed from the
/// metric coefficients alone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MetricData {
    pub g: Mat2,
    pub g_inv: Mat2,
    /// `christoffel[k][i][j] = Gamma^k_ij`.
    pub christoffel: [Mat2; 2],
    pub ricci: Mat2,
    /// `dV` for `m_p = e^{-V} vol_g`.
    pub dv: [Rf; 2],
    pub hess_v: Mat2,
}

fn zero_mat() -> Mat2 {
    [[Rf::zero(2), Rf::zero(2)], [Rf::zero(2), Rf::zero(2)]]
}

fn inverse(g: &Mat2) -> Result<(Mat2, Rf), GrushinError> {
    let det = &(&g[0][0] * &g[1][1]) - &(&g[0][1] * &g[1][0]);
    let inv_det = det.recip()?;
    let m = [
        [&g[1][1] * &inv_det, -(&g[0][1] * &inv_det)],
        [-(&g[1][0] * &inv_det), &g[0][0] * &inv_det],
    ];
    Ok((m, det))
}

impl MetricData {
    pub fn new(model: &GrushinModel) -> Result<Self, GrushinError> {
        let g = [[Rf::constant(2, Rational::one()), Rf::zero(2)], [Rf::zero(2), rf("1/x^2")]];
        let (g_inv, det) = inverse(&g)?;
        let half = Rational::new(1.into(), 2.into());

        let mut christoffel = [zero_mat(), zero_mat()];
        for (k, gk) in christoffel.iter_mut().enumerate() {
            for i in 0..2 {
                for j in 0..2 {
                    let mut s = Rf::zero(2);
                    for l in 0..2 {
                        let t = &(&g[j][l].derivative(i) + &g[i][l].derivative(j)) - &g[i][j].derivative(l);
                        s = &s + &(&g_inv[k][l] * &t);
                    }
                    gk[i][j] = s.scale(&half);
                }
            }
        }

        let gam = &christoffel;
        let mut ricci = zero_mat();
        for i in 0..2 {
            for j in 0..2 {
                let mut s = Rf::zero(2);
                for k in 0..2 {
                    s = &s + &gam[k][i][j].derivative(k);
                    s = &s - &gam[k][k][i].derivative(j);
                    for l in 0..2 {
                        s = &s + &(&gam[k][k][l] * &gam[l][i][j]);
                        s = &s - &(&gam[k][j][l] * &gam[l][k][i]);
                    }
                }
                ricci[i][j] = s;
            }
        }

        // V = -log(rho / sqrt(det g)) with rho = |x|^p.
        let log_rho = model.density_log_gradient();
        let dv: [Rf; 2] = std::array::from_fn(|i| {
            let dlog_det = (&det.derivative(i) / &det).expect("det is nonzero");
            &dlog_det.scale(&half) - &log_rho[i]
        });
        let mut hess_v = zero_mat();
        for i in 0..2 {
            for j in 0..2 {
                let mut s = dv[j].derivative(i);
                for (k, dvk) in dv.iter().enumerate() {
                    s = &s - &(&gam[k][i][j] * dvk);
                }
                hess_v[i][j] = s;
            }
        }
        Ok(MetricData { g, g_inv, christoffel, ricci, dv, hess_v })
    }

    /// `nabla_a b` for vector fields given by components.
    pub fn covariant_derivative(&self, a: &[Rf; 2], b: &[Rf; 2]) -> [Rf; 2] {
        std::array::from_fn(|k| {
            let mut s = Rf::zero(2);
            for i in 0..2 {
                let mut inner = b[k].derivative(i);
                for (j, bj) in b.iter().enumerate() {
                    inner = &inner + &(&self.christoffel[k][i][j] * bj);
                }
                s = &s + &(&a[i] * &inner);
            }
            s
        })
    }
}

/// `Ric_g + Hess_g V - dV⊗dV/(N-2)` assembled from the metric.
pub fn ricci_from_metric(p: &Rational, n: &NParam) -> Result<RicciTensor2D, GrushinError> {
    let inv = n.inverse_excess()?;
    let data = MetricData::new(&GrushinModel::new(p.clone(), false))?;
    let mut m = zero_mat();
    for i in 0..2 {
        for j in 0..2 {
            let dvdv = (&data.dv[i] * &data.dv[j]).scale(&inv);
            m[i][j] = &(&data.ricci[i][j] + &data.hess_v[i][j]) - &dvdv;
        }
    }
    Ok(RicciTensor2D::from_matrix(p, n, m))
}

/// `N_p = (p+1)^2/(p-1) + 2`, infinite at `p = 1`.
pub fn n_threshold(p: &Rational) -> Result<NParam, GrushinError> {
    let one = Rational::one();
    if *p < one {
        return Err(GrushinError::ExponentBelowOne(crate::symcore::rational::fmt_rational(p)));
    }
    if *p == one {
        return Ok(NParam::Infinite);
    }
    let q = p + &one;
    Ok(NParam::Finite(&q * &q / (p - &one) + Rational::from_integer(2.into())))
}

/// Whether `Ric_{N,V}` is positive semi-definite at abscissa `x != 0`.
pub fn ricci_psd(p: &Rational, n: &NParam, x: &Rational) -> Result<bool, GrushinError> {
    if x.is_zero() {
        return Err(GrushinError::SingularSet);
    }
    ricci_nv(p, n)?.is_psd_at(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symcore::rational::{int, rat};

    fn diag(a: &str, b: &str) -> Mat2 {
        [[rf(a), Rf::zero(2)], [Rf::zero(2), rf(b)]]
    }

    #[test]
    fn levi_civita_of_the_frame() {
        let d = MetricData::new(&GrushinModel::new(int(1), false)).unwrap();
        let x_field = [rf("1"), rf("0")];
        let y_field = [rf("0"), rf("x")];
        let zero = [Rf::zero(2), Rf::zero(2)];
        assert_eq!(d.covariant_derivative(&x_field, &x_field), zero);
        assert_eq!(d.covariant_derivative(&x_field, &y_field), zero);
        assert_eq!(d.covariant_derivative(&y_field, &x_field), [rf("0"), rf("-1")]);
        assert_eq!(d.covariant_derivative(&y_field, &y_field), [rf("1/x"), rf("0")]);
    }

    #[test]
    fn explicit_tensors() {
        let p = rat(7, 2);
        let d = MetricData::new(&GrushinModel::new(p.clone(), false)).unwrap();
        assert_eq!(d.ricci, diag("-2/x^2", "-2/x^4"));
        assert_eq!(d.hess_v, diag("(9/2)/x^2", "(9/2)/x^4"));
        assert_eq!(d.dv, [rf("-(9/2)/x"), rf("0")]);
    }

    #[test]
    fn formula_matches_metric_route() {
        for p in [int(0), rat(1, 2), int(1), int(2), int(3), rat(7, 2), int(-3)] {
            for n in [int(3), int(5), int(10), int(100)].into_iter().map(NParam::Finite).chain([NParam::Infinite]) {
                assert_eq!(ricci_from_metric(&p, &n).unwrap(), ricci_nv(&p, &n).unwrap(), "p={p} N={n}");
            }
        }
    }

    #[test]
    fn formula_examples() {
        assert!(ricci_nv(&int(1), &NParam::Infinite).unwrap().is_zero());
        let t = ricci_nv(&int(2), &NParam::Infinite).unwrap();
        assert_eq!((t.xx.clone(), t.yy.clone()), (rf("1/x^2"), rf("1/x^4")));
        assert!(ricci_nv(&int(2), &NParam::Finite(int(2))).is_err());
        assert!(ricci_from_metric(&int(2), &NParam::Finite(int(1))).is_err());
    }

    #[test]
    fn thresholds() {
        assert_eq!(n_threshold(&int(1)).unwrap(), NParam::Infinite);
        assert_eq!(n_threshold(&int(3)).unwrap(), NParam::Finite(int(10)));
        assert_eq!(n_threshold(&int(2)).unwrap(), NParam::Finite(int(11)));
        assert!(n_threshold(&rat(1, 2)).is_err());
    }

    #[test]
    fn psd_examples() {
        assert!(ricci_psd(&int(3), &NParam::Finite(int(10)), &int(1)).unwrap());
        assert!(!ricci_psd(&int(3), &NParam::Finite(int(9)), &int(1)).unwrap());
        assert!(ricci_psd(&int(1), &NParam::Infinite, &int(5)).unwrap());
        assert!(ricci_psd(&int(1), &NParam::Finite(int(3)), &int(0)).is_err());
        let t = ricci_nv(&int(3), &NParam::Finite(int(10))).unwrap();
        assert_eq!(t.orthonormal_at(&int(1)).unwrap()[0][0], int(0));
        assert_eq!(t.eigenvalues_at(&int(1)).unwrap(), [0.0, 2.0]);
    }

    #[test]
    fn infinite_n_psd_iff_p_at_least_one() {
        for p in [int(-1), int(0), rat(1, 2), rat(99, 100), int(1), rat(3, 2), int(4)] {
            for x in [rat(1, 3), int(-2), int(7)] {
                assert_eq!(ricci_psd(&p, &NParam::Infinite, &x).unwrap(), p >= int(1), "p={p}");
            }
        }
    }
}
