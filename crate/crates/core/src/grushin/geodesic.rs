use serde::Serialize;

use super::GrushinError;

/// Fixed integration steps per arc, so `h = T / DEFAULT_STEPS`.
pub const DEFAULT_STEPS: usize = 2048;
/// Largest accepted relative drift of `H` along an arc.
pub const ENERGY_TOL: f64 = 1e-9;
/// Initial covector directions tried by [`distance_numeric`].
pub const MULTISTART_ANGLES: usize = 64;

const COARSE_STEPS: usize = 128;
const POLISHED_CANDIDATES: usize = 3;

type State = [f64; 4];

/// `H = 1/2 (p_x^2 + x^2 p_y^2)`.
pub fn hamiltonian(x: f64, px: f64, py: f64) -> f64 {
    0.5 * (px * px + x * x * py * py)
}

fn energy(s: &State) -> f64 {
    hamiltonian(s[0], s[2], s[3])
}

fn rhs(s: &State) -> State {
    [s[2], s[0] * s[0] * s[3], -s[0] * s[3] * s[3], 0.0]
}

fn rk4_step(s: &State, h: f64) -> State {
    let add = |a: &State, k: &State, c: f64| -> State { std::array::from_fn(|i| a[i] + c * k[i]) };
    let k1 = rhs(s);
    let k2 = rhs(&add(s, &k1, h / 2.0));
    let k3 = rhs(&add(s, &k2, h / 2.0));
    let k4 = rhs(&add(s, &k3, h));
    std::array::from_fn(|i| s[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
}

fn endpoint(q0: [f64; 2], c: [f64; 2], steps: usize) -> [f64; 2] {
    let h = 1.0 / steps as f64;
    let mut s = [q0[0], q0[1], c[0], c[1]];
    for _ in 0..steps {
        s = rk4_step(&s, h);
    }
    [s[0], s[1]]
}

/// A sampled Hamiltonian trajectory with its energy log.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GeodesicArc {
    pub start: [f64; 2],
    pub covector: [f64; 2],
    pub duration: f64,
    pub step: f64,
    pub trajectory: Vec<[f64; 2]>,
    pub energy: f64,
    /// `max_t |H(t) - H(0)| / H(0)` (absolute when `H(0) = 0`).
    pub energy_drift: f64,
    pub length: f64,
}

impl GeodesicArc {
    pub fn end(&self) -> [f64; 2] {
        *self.trajectory.last().expect("arc has its initial point")
    }

    /// Minimum abscissa along the sampled trajectory.
    pub fn min_x(&self) -> f64 {
        self.trajectory.iter().map(|q| q[0]).fold(f64::INFINITY, f64::min)
    }
}

fn integrate(q0: [f64; 2], lambda0: [f64; 2], t: f64, steps: usize) -> GeodesicArc {
    let h = if steps == 0 { 0.0 } else { t / steps as f64 };
    let mut s = [q0[0], q0[1], lambda0[0], lambda0[1]];
    let e0 = energy(&s);
    let mut trajectory = Vec::with_capacity(steps + 1);
    trajectory.push(q0);
    let mut drift: f64 = 0.0;
    for _ in 0..steps {
        s = rk4_step(&s, h);
        trajectory.push([s[0], s[1]]);
        drift = drift.max((energy(&s) - e0).abs());
    }
    let energy_drift = if e0 > 0.0 { drift / e0 } else { drift };
    GeodesicArc {
        start: q0,
        covector: lambda0,
        duration: t,
        step: h,
        trajectory,
        energy: e0,
        energy_drift,
        length: t * (2.0 * e0).sqrt(),
    }
}

/// Integrates `x' = p_x, y' = x^2 p_y, p_x' = -x p_y^2, p_y' = 0` with the
/// classical 4th-order Runge-Kutta scheme and rejects arcs whose energy drifts.
pub fn geodesic_shoot(q0: [f64; 2], lambda0: [f64; 2], t: f64, h: f64) -> Result<GeodesicArc, GrushinError> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(GrushinError::InvalidArgument(format!("duration T = {t} must be finite and >= 0")));
    }
    if !(h > 0.0 && h.is_finite()) {
        return Err(GrushinError::InvalidArgument(format!("step h = {h} must be positive")));
    }
    let steps = (t / h).ceil() as usize;
    let arc = integrate(q0, lambda0, t, steps);
    if arc.energy_drift > ENERGY_TOL {
        return Err(GrushinError::EnergyDrift { drift: arc.energy_drift, tol: ENERGY_TOL });
    }
    Ok(arc)
}

/// `|x_a - x_b| <= d(a, b) <= |x_a - x_b| + |y_a - y_b| / max(|x_a|, |x_b|)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DistanceBounds {
    pub lower: f64,
    /// Absent when both points lie on the singular line.
    pub upper: Option<f64>,
}

pub fn distance_bounds(a: [f64; 2], b: [f64; 2]) -> DistanceBounds {
    let dx = (a[0] - b[0]).abs();
    let dy = (a[1] - b[1]).abs();
    let m = a[0].abs().max(b[0].abs());
    let upper = if dy == 0.0 {
        Some(dx)
    } else if m > 0.0 {
        Some(dx + dy / m)
    } else {
        None
    };
    DistanceBounds { lower: dx, upper }
}

/// A numerically computed distance with the arc realising it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DistanceCertificate {
    pub from: [f64; 2],
    pub to: [f64; 2],
    pub distance: f64,
    /// Initial covector normalized to `H = 1/2`, so the arc has duration `distance`.
    pub covector: [f64; 2],
    pub residual: f64,
    pub bounds: DistanceBounds,
    pub starts_converged: usize,
    pub energy_drift: f64,
    pub method: &'static str,
    #[serde(skip)]
    pub(crate) unit_covector: [f64; 2],
}

impl DistanceCertificate {
    /// The minimizing arc, sampled with [`DEFAULT_STEPS`] steps.
    pub fn arc(&self) -> GeodesicArc {
        integrate(self.from, self.covector, self.distance, DEFAULT_STEPS)
    }

    /// The point at time `distance / 2` of the minimizing arc.
    pub fn midpoint(&self) -> [f64; 2] {
        if self.distance == 0.0 {
            return self.from;
        }
        let mut s = [self.from[0], self.from[1], self.unit_covector[0], self.unit_covector[1]];
        let h = 1.0 / DEFAULT_STEPS as f64;
        for _ in 0..DEFAULT_STEPS / 2 {
            s = rk4_step(&s, h);
        }
        [s[0], s[1]]
    }
}

fn norm(v: [f64; 2]) -> f64 {
    v[0].hypot(v[1])
}

fn residual(q0: [f64; 2], q1: [f64; 2], c: [f64; 2], steps: usize) -> [f64; 2] {
    let e = endpoint(q0, c, steps);
    [e[0] - q1[0], e[1] - q1[1]]
}

/// Damped Newton on the shooting map `c -> gamma_c(1) - q1` with a
/// finite-difference Jacobian. Returns the root and its residual norm.
fn newton(q0: [f64; 2], q1: [f64; 2], mut c: [f64; 2], steps: usize, scale: [f64; 2], target: f64, iters: usize) -> ([f64; 2], f64) {
    let mut f = residual(q0, q1, c, steps);
    let mut fn_ = norm(f);
    for _ in 0..iters {
        if fn_ <= target || !fn_.is_finite() {
            break;
        }
        let mut jac = [[0.0; 2]; 2];
        for j in 0..2 {
            let d = 1e-7 * c[j].abs().max(scale[j]);
            let mut cp = c;
            cp[j] += d;
            let fp = residual(q0, q1, cp, steps);
            jac[0][j] = (fp[0] - f[0]) / d;
            jac[1][j] = (fp[1] - f[1]) / d;
        }
        let det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
        if det == 0.0 || !det.is_finite() {
            break;
        }
        let delta = [
            (jac[1][1] * f[0] - jac[0][1] * f[1]) / det,
            (jac[0][0] * f[1] - jac[1][0] * f[0]) / det,
        ];
        let mut alpha = 1.0;
        let mut improved = false;
        for _ in 0..12 {
            let cn = [c[0] - alpha * delta[0], c[1] - alpha * delta[1]];
            let fnew = residual(q0, q1, cn, steps);
            let nn = norm(fnew);
            if nn < fn_ {
                c = cn;
                f = fnew;
                fn_ = nn;
                improved = true;
                break;
            }
            alpha /= 2.0;
        }
        if !improved {
            break;
        }
    }
    (c, fn_)
}

/// Derivative-free minimization of `|F(c)|^2` on the coarse shooting map.
fn nelder_mead(q0: [f64; 2], q1: [f64; 2], start: [f64; 2], scale: [f64; 2], iters: usize) -> [f64; 2] {
    let obj = |c: [f64; 2]| {
        let f = residual(q0, q1, c, COARSE_STEPS);
        let v = f[0] * f[0] + f[1] * f[1];
        if v.is_finite() {
            v
        } else {
            f64::MAX
        }
    };
    let mut pts = [start, [start[0] + scale[0], start[1]], [start[0], start[1] + scale[1]]];
    let mut vals = pts.map(obj);
    for _ in 0..iters {
        let mut idx = [0, 1, 2];
        idx.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
        pts = idx.map(|i| pts[i]);
        vals = idx.map(|i| vals[i]);
        let centroid = [(pts[0][0] + pts[1][0]) / 2.0, (pts[0][1] + pts[1][1]) / 2.0];
        let along = |t: f64| [centroid[0] + t * (pts[2][0] - centroid[0]), centroid[1] + t * (pts[2][1] - centroid[1])];
        let r = along(-1.0);
        let fr = obj(r);
        if fr < vals[0] {
            let e = along(-2.0);
            let fe = obj(e);
            (pts[2], vals[2]) = if fe < fr { (e, fe) } else { (r, fr) };
        } else if fr < vals[1] {
            (pts[2], vals[2]) = (r, fr);
        } else {
            let k = along(0.5);
            let fk = obj(k);
            if fk < vals[2] {
                (pts[2], vals[2]) = (k, fk);
            } else {
                for i in 1..3 {
                    pts[i] = [(pts[0][0] + pts[i][0]) / 2.0, (pts[0][1] + pts[i][1]) / 2.0];
                    vals[i] = obj(pts[i]);
                }
            }
        }
    }
    let best = (0..3).min_by(|&a, &b| vals[a].total_cmp(&vals[b])).expect("three vertices");
    pts[best]
}

/// Sub-Riemannian distance by shooting: covectors from [`MULTISTART_ANGLES`]
/// directions are refined by Newton on a coarse grid, the shortest roots are
/// polished at full resolution, and the result must fall in the
/// [`distance_bounds`] window.
pub fn distance_numeric(q0: [f64; 2], q1: [f64; 2], tol: f64) -> Result<DistanceCertificate, GrushinError> {
    if !(tol > 0.0) {
        return Err(GrushinError::InvalidArgument(format!("tol = {tol} must be positive")));
    }
    let bounds = distance_bounds(q0, q1);
    if q0 == q1 {
        return Ok(DistanceCertificate {
            from: q0,
            to: q1,
            distance: 0.0,
            covector: [0.0, 0.0],
            residual: 0.0,
            bounds,
            starts_converged: 0,
            energy_drift: 0.0,
            method: "trivial",
            unit_covector: [0.0, 0.0],
        });
    }
    let dy = (q1[1] - q0[1]).abs();
    let s = q0[0].abs().max(q1[0].abs()).max(dy.sqrt());
    let r = bounds.upper.unwrap_or(bounds.lower + 2.0 * dy.sqrt()).max(1e-12);
    let scale = [r, r / s];
    let coarse_target = 1e-10 * (1.0 + norm(q1));
    let target = (tol * 1e-2).min(1e-8);

    let mut roots: Vec<(f64, [f64; 2])> = (0..MULTISTART_ANGLES)
        .filter_map(|k| {
            let th = std::f64::consts::TAU * k as f64 / MULTISTART_ANGLES as f64;
            let start = [r * th.cos(), r * th.sin() / s];
            let (c, res) = newton(q0, q1, start, COARSE_STEPS, scale, coarse_target, 12);
            (res <= coarse_target.max(1e-6 * r)).then(|| ((2.0 * hamiltonian(q0[0], c[0], c[1])).sqrt(), c))
        })
        .collect();
    let starts_converged = roots.len();
    let mut method = "newton";
    if roots.is_empty() {
        method = "nelder-mead+newton";
        let c = nelder_mead(q0, q1, [bounds.lower.max(r) * (q1[0] - q0[0]).signum(), 0.0], scale, 400);
        roots.push(((2.0 * hamiltonian(q0[0], c[0], c[1])).sqrt(), c));
    }
    roots.sort_by(|a, b| a.0.total_cmp(&b.0));

    let mut best: Option<(f64, [f64; 2], f64)> = None;
    let mut best_residual = f64::INFINITY;
    for &(_, c) in roots.iter().take(POLISHED_CANDIDATES) {
        let (c, res) = newton(q0, q1, c, DEFAULT_STEPS, scale, target, 30);
        best_residual = best_residual.min(res);
        if res <= target.max(tol * 1e-2) {
            let len = (2.0 * hamiltonian(q0[0], c[0], c[1])).sqrt();
            if best.as_ref().is_none_or(|b| len < b.0) {
                best = Some((len, c, res));
            }
        }
    }
    let (d, c, res) = best.ok_or(GrushinError::NoConvergence { best_residual })?;
    let covector = [c[0] / d, c[1] / d];
    let arc = integrate(q0, c, 1.0, DEFAULT_STEPS);
    if arc.energy_drift > ENERGY_TOL {
        return Err(GrushinError::EnergyDrift { drift: arc.energy_drift, tol: ENERGY_TOL });
    }
    let upper = bounds.upper.unwrap_or(f64::INFINITY);
    if d < bounds.lower - tol || d > upper + tol {
        return Err(GrushinError::OutsideBounds { d, lower: bounds.lower, upper });
    }
    Ok(DistanceCertificate {
        from: q0,
        to: q1,
        distance: d,
        covector,
        residual: res,
        bounds,
        starts_converged,
        energy_drift: arc.energy_drift,
        method,
        unit_covector: c,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn straight_segment() {
        let arc = geodesic_shoot([0.0, 0.0], [1.0, 0.0], 1.0, 1.0 / 2048.0).unwrap();
        let e = arc.end();
        assert!((e[0] - 1.0).abs() < 1e-14 && e[1] == 0.0);
        assert!(arc.energy_drift < 1e-15);
        assert!((arc.length - 1.0).abs() < 1e-15);
    }

    #[test]
    fn oscillator_conserves_energy() {
        let arc = geodesic_shoot([1.0, 0.0], [0.0, 1.0], 2.0, 0.001).unwrap();
        assert!((arc.energy - 0.5).abs() < 1e-15);
        assert!(arc.energy_drift <= ENERGY_TOL);
        // x'' = -x p_y^2 gives x = cos t.
        assert!((arc.end()[0] - 2f64.cos()).abs() < 1e-10);
    }

    #[test]
    fn degenerate_arcs() {
        let arc = geodesic_shoot([0.3, 0.1], [1.0, 1.0], 0.0, 0.01).unwrap();
        assert_eq!(arc.trajectory, vec![[0.3, 0.1]]);
        assert!(geodesic_shoot([0.0, 0.0], [1.0, 0.0], 1.0, 0.0).is_err());
        assert!(matches!(
            geodesic_shoot([1.0, 0.0], [0.0, 200.0], 1.0, 0.1),
            Err(GrushinError::EnergyDrift { .. })
        ));
    }

    #[test]
    fn bounds_examples() {
        assert_eq!(distance_bounds([2.0, 0.0], [2.0, 1.0]), DistanceBounds { lower: 0.0, upper: Some(0.5) });
        assert_eq!(distance_bounds([1.0, 1.0], [1.0, 1.0]), DistanceBounds { lower: 0.0, upper: Some(0.0) });
        assert_eq!(distance_bounds([-1.0, 0.0], [1.0, 0.0]), DistanceBounds { lower: 2.0, upper: Some(2.0) });
        assert_eq!(distance_bounds([0.0, 0.0], [0.0, 1.0]).upper, None);
    }

    #[test]
    fn distances() {
        let d = distance_numeric([1.0, 0.0], [2.0, 0.0], 1e-6).unwrap();
        assert!((d.distance - 1.0).abs() < 1e-6);
        let d = distance_numeric([2.0, 0.0], [2.0, 1.0], 1e-6).unwrap();
        assert!(d.distance > 0.4 && d.distance <= 0.5, "{}", d.distance);
        assert!(d.energy_drift <= ENERGY_TOL);
        assert_eq!(distance_numeric([1.0, 2.0], [1.0, 2.0], 1e-6).unwrap().distance, 0.0);
        let d = distance_numeric([0.0, 0.0], [0.0, 1.0], 1e-6).unwrap();
        // Dilation: d((0,0),(0,1))^2 = d((0,0),(0,4))^2 / 4.
        let d4 = distance_numeric([0.0, 0.0], [0.0, 4.0], 1e-6).unwrap();
        assert!((2.0 * d.distance - d4.distance).abs() < 1e-6, "{} {}", d.distance, d4.distance);
    }

    #[test]
    fn midpoint_of_symmetric_pair() {
        let d = distance_numeric([-5.0, 0.5], [5.0, 0.5], 1e-6).unwrap();
        let m = d.midpoint();
        assert!(m[0].abs() < 1e-9 && (m[1] - 0.5).abs() < 1e-9, "{m:?} {d:?}");
    }
}
