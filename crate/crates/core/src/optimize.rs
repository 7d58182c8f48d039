//! Numerical minimisation of the perimeter on the closure locus.
//!
//! Iterates stay on `{r = 0}`: each step moves in the kernel of `M` and is
//! retracted back by a minimum-norm Newton iteration. The step is a reduced
//! Newton step when the reduced Hessian of the Lagrangian is positive
//! definite and the projected gradient otherwise.

use nalgebra::{DMatrix, DVector, Matrix3, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::center::{CenterFrame, CenterKind};
use crate::construct::construct_optimal;
use crate::error::{Error, Result};
use crate::lorentz::Vec3L;
use crate::polygon::{
    closure_residual, develop_polygon, jacobian_unchecked, null_space, residual_norm, validate_membership,
    AngleSpec, Polygon, PolygonParams, EPS_RES, EPS_RES_SEARCH,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptOptions {
    pub max_iter: usize,
    /// Threshold on the norm of the projected gradient.
    pub tol_grad: f64,
    /// Threshold on the closure residual of the final iterate.
    pub tol_res: f64,
    pub seed: u64,
}

impl Default for OptOptions {
    fn default() -> Self {
        OptOptions { max_iter: 500, tol_grad: 1e-8, tol_res: 1e-9, seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptResult {
    pub params: PolygonParams,
    pub perimeter: f64,
    pub iterations: usize,
    pub tangency_spread: f64,
    /// Multiplier `z` normalised so that `<e_i, z> = -1`; a multiple `λ x0`
    /// at a critical point.
    pub lagrange_z: Vec3L,
    /// Coefficient of the Euclidean projection of `z` on `x0`.
    pub lambda: f64,
    /// Relative Euclidean distance of `z` from the line spanned by `x0`.
    pub multiplier_deviation: f64,
    pub gradient_norm: f64,
    pub residual: f64,
    pub converged: bool,
    /// Perimeter of every accepted iterate, starting with the initial point.
    /// Non-increasing up to [`ROUNDING`] relative slack.
    pub history: Vec<f64>,
}

const RETRACT_ITER: usize = 50;
const RETRACT_TARGET: f64 = 1e-12;
/// Maximum residual accepted by [`project_to_constraint`] on input.
const RETRACT_START: f64 = 0.5;

fn gradient(n: usize) -> DVector<f64> {
    DVector::from_fn(n + 2, |i, _| if i >= 2 { 1.0 } else { 0.0 })
}

fn in_domain(kind: &CenterKind, x: &DVector<f64>) -> bool {
    kind.l0_in_interval(x[0]) && x[1].is_finite() && x.iter().skip(2).all(|l| *l >= 0.0 && l.is_finite())
}

/// Minimum-norm least-squares solution of `M d = b` for a 3-row `M`.
fn min_norm_solve(m: &DMatrix<f64>, b: &Vector3<f64>) -> Option<DVector<f64>> {
    // least squares when held columns leave M rank deficient
    let svd = m.clone().svd(true, true);
    let eps = 1e-12 * svd.singular_values.max();
    svd.solve(&DVector::from_column_slice(b.as_slice()), eps).ok().map(|x| x.column(0).into_owned())
}

/// Newton retraction onto `{closure_residual = 0}` using minimum-norm steps.
pub fn project_to_constraint(cf: &CenterFrame, params: &PolygonParams, spec: &AngleSpec) -> Result<PolygonParams> {
    project_holding(cf, params, spec, &[])
}

/// [`project_to_constraint`] with the chart coordinates in `fixed` held constant.
pub fn project_holding(cf: &CenterFrame, params: &PolygonParams, spec: &AngleSpec, fixed: &[usize]) -> Result<PolygonParams> {
    let mut res = residual_norm(cf, params, spec)?;
    if !(res <= RETRACT_START) {
        return Err(Error::ProjectionFailed { iterations: 0, residual: res });
    }
    let mut x = params.to_vector();
    let mut cur = params.clone();
    for it in 0..RETRACT_ITER {
        if res <= RETRACT_TARGET {
            return Ok(cur);
        }
        let r = closure_residual(cf, &cur, spec)?;
        let mut jac = jacobian_unchecked(cf, &cur, spec)?;
        for &j in fixed {
            jac.m.column_mut(j).fill(0.0);
        }
        let step = min_norm_solve(&jac.m, &Vector3::new(-r.x0, -r.x1, -r.x2))
            .ok_or(Error::ProjectionFailed { iterations: it, residual: res })?;
        // damp only to stay in the chart
        let mut t = 1.0;
        loop {
            let trial = &x + &step * t;
            if in_domain(&cf.kind, &trial) {
                let p = PolygonParams::from_vector(&trial);
                if let Ok(r2) = residual_norm(cf, &p, spec) {
                    if r2 < res || t == 1.0 && r2 <= RETRACT_START {
                        x = trial;
                        cur = p;
                        res = r2;
                        break;
                    }
                }
            }
            t *= 0.5;
            if t < 1e-10 {
                return Err(Error::ProjectionFailed { iterations: it, residual: res });
            }
        }
    }
    if res <= EPS_RES {
        Ok(cur)
    } else {
        Err(Error::ProjectionFailed { iterations: RETRACT_ITER, residual: res })
    }
}

/// Multiplier `z` with `<e_i, z> = -1` from the least-squares solution of
/// `M^T z_E = g`, returned with its Euclidean fit `λ x0` and relative deviation.
fn multiplier(cf: &CenterFrame, m: &DMatrix<f64>, g: &DVector<f64>) -> (Vec3L, f64, f64) {
    let mmt: Matrix3<f64> = (m * m.transpose()).fixed_view::<3, 3>(0, 0).into_owned();
    let rhs = m * g;
    let ze = mmt
        .try_inverse()
        .map(|inv| inv * Vector3::new(rhs[0], rhs[1], rhs[2]))
        .unwrap_or_else(Vector3::zeros);
    let z = Vec3L::new(ze[0], -ze[1], -ze[2]);
    let x0 = cf.x0;
    let lambda = z.euclid_dot(&x0) / x0.euclid_dot(&x0);
    let dev = (z - x0 * lambda).euclid_norm() / z.euclid_norm().max(f64::MIN_POSITIVE);
    (z, lambda, dev)
}

/// Reduced Hessian `Z^T ∇²L Z` of the Lagrangian `g·x − z_E·r(x)` by central
/// differences of `M^T z_E` along the kernel basis.
fn reduced_hessian(
    cf: &CenterFrame,
    spec: &AngleSpec,
    x: &DVector<f64>,
    z: &DMatrix<f64>,
    ze: &DVector<f64>,
) -> Option<DMatrix<f64>> {
    let k = z.ncols();
    let h = 1e-6;
    let mut w = DMatrix::zeros(k, k);
    for j in 0..k {
        let col = z.column(j);
        let xp = x + col * h;
        let xm = x - col * h;
        if !in_domain(&cf.kind, &xp) || !in_domain(&cf.kind, &xm) {
            return None;
        }
        let mp = jacobian_unchecked(cf, &PolygonParams::from_vector(&xp), spec).ok()?.m;
        let mm = jacobian_unchecked(cf, &PolygonParams::from_vector(&xm), spec).ok()?.m;
        let dg = (mp.transpose() * ze - mm.transpose() * ze) / (2.0 * h);
        let row = -(z.transpose() * dg);
        w.set_column(j, &row);
    }
    Some((&w + w.transpose()) * 0.5)
}

/// Largest `t <= 1` keeping every length (and the cone `l0`) above a tenth
/// of its current value along `d`.
fn boundary_fraction(kind: &CenterKind, x: &DVector<f64>, d: &DVector<f64>) -> f64 {
    let mut t: f64 = 1.0;
    let limit = |v: f64, dv: f64| if dv < 0.0 && v > 0.0 { 0.9 * v / -dv } else { f64::INFINITY };
    for i in 2..x.len() {
        t = t.min(limit(x[i], d[i]));
    }
    if let CenterKind::Cone(_) | CenterKind::Geodesic(_) = kind {
        t = t.min(limit(x[0], d[0]));
    }
    t
}

fn is_interior(polygon: &Polygon, cf: &CenterFrame) -> bool {
    validate_membership(cf, polygon).is_member()
}

/// Retracts `x + t d` and checks that it is an interior member.
fn try_point(cf: &CenterFrame, spec: &AngleSpec, x: &DVector<f64>) -> Option<PolygonParams> {
    if !in_domain(&cf.kind, x) {
        return None;
    }
    let p = project_to_constraint(cf, &PolygonParams::from_vector(x), spec).ok()?;
    let poly = develop_polygon(cf, &p, spec).ok()?;
    is_interior(&poly, cf).then_some(p)
}

fn on_boundary(kind: &CenterKind, params: &PolygonParams) -> bool {
    params.lengths.iter().any(|l| *l <= 0.0) || matches!(kind, CenterKind::Cone(_)) && params.l0 <= 0.0
}

/// Relative slack on the perimeter allowed for the final Newton polish.
pub const ROUNDING: f64 = 1e-14;

fn projected_gradient_norm(cf: &CenterFrame, spec: &AngleSpec, params: &PolygonParams) -> Result<f64> {
    let m = jacobian_unchecked(cf, params, spec)?.m;
    let z = null_space(&m, 3);
    Ok((&z * (z.transpose() * gradient(spec.len()))).norm())
}

/// Minimises the perimeter starting from `init`.
pub fn minimize_perimeter(cf: &CenterFrame, spec: &AngleSpec, init: &PolygonParams, options: &OptOptions) -> Result<OptResult> {
    spec.check_feasible(&cf.kind)?;
    let res0 = residual_norm(cf, init, spec)?;
    if res0 > EPS_RES_SEARCH {
        return Err(Error::NotClosed { residual: res0, tolerance: EPS_RES_SEARCH });
    }
    let mut cur = project_to_constraint(cf, init, spec)?;
    if on_boundary(&cf.kind, &cur) {
        cur = boundary_escape(cf, &cur, spec)?;
    }
    let n = spec.len();
    let g = gradient(n);
    let mut history = vec![cur.perimeter()];
    let mut iterations = 0;
    let converged;
    let mut stalled = false;
    let mut pg_norm;
    loop {
        let x = cur.to_vector();
        let m = jacobian_unchecked(cf, &cur, spec)?.m;
        let z = null_space(&m, 3);
        let pg = &z * (z.transpose() * &g);
        pg_norm = pg.norm();
        if pg_norm <= options.tol_grad || iterations >= options.max_iter || stalled {
            converged = pg_norm <= options.tol_grad;
            break;
        }
        iterations += 1;

        let (zl, _, _) = multiplier(cf, &m, &g);
        let ze = DVector::from_vec(vec![zl.x0, -zl.x1, -zl.x2]);
        let newton = reduced_hessian(cf, spec, &x, &z, &ze)
            .and_then(|w| w.cholesky())
            .map(|ch| -(&z * ch.solve(&(z.transpose() * &g))));
        let mut accepted = false;
        let newton_step = newton.clone();
        for d in newton.into_iter().chain(std::iter::once(-&pg)) {
            let slope = g.dot(&d);
            if slope >= 0.0 {
                continue;
            }
            let mut t = boundary_fraction(&cf.kind, &x, &d);
            let p0 = cur.perimeter();
            for _ in 0..40 {
                if let Some(p) = try_point(cf, spec, &(&x + &d * t)) {
                    let per = p.perimeter();
                    if per < p0 && per <= p0 + 1e-4 * t * slope {
                        cur = p;
                        accepted = true;
                        break;
                    }
                }
                t *= 0.5;
            }
            if accepted {
                break;
            }
        }
        if !accepted {
            // Near the minimum the remaining decrease is below the rounding
            // of the perimeter; a full Newton step is still taken if it keeps
            // the perimeter within rounding and shrinks the projected gradient.
            if let Some(d) = newton_step {
                if let Some(p) = try_point(cf, spec, &(&x + &d)) {
                    let p0 = cur.perimeter();
                    if p.perimeter() <= p0 + ROUNDING * p0.max(1.0) && projected_gradient_norm(cf, spec, &p)? < pg_norm {
                        cur = p;
                        accepted = true;
                    }
                }
            }
        }
        if accepted {
            history.push(cur.perimeter());
        } else {
            stalled = true;
        }
    }

    let polygon = develop_polygon(cf, &cur, spec)?;
    let m = jacobian_unchecked(cf, &cur, spec)?.m;
    let (lagrange_z, lambda, multiplier_deviation) = multiplier(cf, &m, &g);
    let residual = residual_norm(cf, &cur, spec)?;
    Ok(OptResult {
        perimeter: cur.perimeter(),
        tangency_spread: cf.tangency_spread(&polygon.edge_lines)?,
        params: cur,
        iterations,
        lagrange_z,
        lambda,
        multiplier_deviation,
        gradient_norm: pg_norm,
        residual,
        converged: converged && residual <= options.tol_res,
        history,
    })
}

/// Result of [`criticality_certificate`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalityCertificate {
    pub critical: bool,
    /// Numerical rank of `M̄`.
    pub rank: usize,
    /// `σ4 / σ1` of `M̄` (zero when `M̄` has fewer than four columns).
    pub sigma_ratio: f64,
    /// `λ` with mean `<e_i, x0> = -1/λ`.
    pub lambda: f64,
    pub tangency_spread: f64,
}

/// Relative singular-value threshold for the rank of `M̄`.
pub const EPS_RANK: f64 = 1e-6;

/// Decides criticality of a closed polygon from the rank of `M` augmented
/// with the perimeter gradient row.
pub fn criticality_certificate(cf: &CenterFrame, polygon: &Polygon) -> Result<CriticalityCertificate> {
    let defect = polygon.end_frame * (cf.gamma * polygon.start_frame).inverse();
    let res = defect.log()?.euclid_norm();
    if res > EPS_RES_SEARCH {
        return Err(Error::NotClosed { residual: res, tolerance: EPS_RES_SEARCH });
    }
    let n = polygon.n();
    let q0 = polygon.vertices[0];
    let cols: Vec<Vec3L> = [cf.e0 - cf.gamma * cf.e0, q0 - cf.gamma * q0]
        .into_iter()
        .chain(polygon.edge_lines.iter().copied())
        .collect();
    let mbar = DMatrix::from_fn(4, n + 2, |r, c| match r {
        0 => cols[c].x0,
        1 => cols[c].x1,
        2 => cols[c].x2,
        _ => {
            if c >= 2 {
                1.0
            } else {
                0.0
            }
        }
    });
    let mut s: Vec<f64> = mbar.svd(false, false).singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    let sigma_ratio = if s.len() >= 4 && s[0] > 0.0 { s[3] / s[0] } else { 0.0 };
    let rank = s.iter().filter(|v| **v > EPS_RANK * s[0]).count();
    let values = cf.equidistant_values(&polygon.edge_lines);
    let mean = values.iter().sum::<f64>() / n as f64;
    Ok(CriticalityCertificate {
        critical: sigma_ratio <= EPS_RANK,
        rank,
        sigma_ratio,
        lambda: -1.0 / mean,
        tangency_spread: cf.tangency_spread(&polygon.edge_lines)?,
    })
}

/// Lengths below this are treated as zero by [`boundary_escape`].
const EPS_ZERO: f64 = 1e-12;

fn descend_from(cf: &CenterFrame, spec: &AngleSpec, x: &DVector<f64>, d: &DVector<f64>, p0: f64) -> Option<PolygonParams> {
    let mut t = 1.0;
    for _ in 0..60 {
        let trial = x + d * t;
        if let Some(p) = try_point(cf, spec, &trial) {
            if p.lengths.iter().all(|l| *l > 0.0) && p.perimeter() < p0 {
                return Some(p);
            }
        }
        t *= 0.5;
    }
    None
}

/// Pushes a polygon of the closure with zero-length edges (or a cone polygon
/// with a vertex at the cone point) into the interior while decreasing the
/// perimeter. Interior points are returned unchanged.
pub fn boundary_escape(cf: &CenterFrame, params: &PolygonParams, spec: &AngleSpec) -> Result<PolygonParams> {
    let res = residual_norm(cf, params, spec)?;
    if res > EPS_RES_SEARCH {
        return Err(Error::NotClosed { residual: res, tolerance: EPS_RES_SEARCH });
    }
    let cone_vertex = matches!(cf.kind, CenterKind::Cone(_)) && params.l0 <= EPS_ZERO;
    let zero: Vec<usize> = (0..spec.len()).filter(|&i| params.lengths[i] <= EPS_ZERO).collect();
    if !cone_vertex && zero.is_empty() {
        return Ok(params.clone());
    }
    let n = spec.len();
    let p0 = params.perimeter();

    if cone_vertex {
        // θ only rotates the polygon about the cone point here; pick it so
        // that e1 + en points along (1−γ)e0
        let target = cf.e0 - cf.gamma * cf.e0;
        let poly = crate::polygon::develop_from(
            crate::polygon::map_v(cf, 0.0, 0.0)?,
            cf.gamma,
            &params.lengths,
            spec,
        )?;
        let sum = poly.edge_lines[0] + poly.edge_lines[n - 1];
        // rotating the frame clockwise by θ rotates (x1, x2) by −θ
        let theta = sum.x2.atan2(sum.x1) - target.x2.atan2(target.x1);
        let start = PolygonParams::new(0.0, theta, params.lengths.clone());
        let lambda = target.euclid_norm() / sum.euclid_norm();
        let mut d = DVector::zeros(n + 2);
        d[0] = 1.0;
        d[2] -= lambda;
        d[n + 1] -= lambda;
        let x = start.to_vector();
        let escaped = descend_from(cf, spec, &x, &d, p0).ok_or_else(|| {
            Error::NoDescent(format!("cone vertex at the center, lambda = {lambda:.6e}"))
        })?;
        return boundary_escape(cf, &escaped, spec);
    }

    // zero-length edges: move inside the kernel of M, increasing the zero
    // lengths at unit rate while descending along the face
    let x = params.to_vector();
    let m = jacobian_unchecked(cf, params, spec)?.m;
    let z = null_space(&m, 3);
    let proj = &z * z.transpose();
    let g = gradient(n);
    let idx: Vec<usize> = zero.iter().map(|i| i + 2).collect();
    let k = idx.len();
    let paa = DMatrix::from_fn(k, k, |r, c| proj[(idx[r], idx[c])]);
    let pa = DMatrix::from_fn(n + 2, k, |r, c| proj[(r, idx[c])]);
    let s = paa
        .clone()
        .try_inverse()
        .map(|inv| &pa * (inv * DVector::from_element(k, 1.0)))
        .ok_or_else(|| Error::NoDescent("zero-length edges are not free directions".into()))?;
    // projected gradient on the face {d_A = 0}
    let face = {
        let mut c = DMatrix::zeros(3 + k, n + 2);
        c.view_mut((0, 0), (3, n + 2)).copy_from(&m);
        for (r, &i) in idx.iter().enumerate() {
            c[(3 + r, i)] = 1.0;
        }
        let zf = null_space(&c, 3 + k);
        -(&zf * (zf.transpose() * &g))
    };
    let scale = face.norm().max(1e-3) / s.norm();
    for delta in [1.0, 0.3, 0.1, 0.03, 0.01, 1e-3, 1e-4] {
        let d = &face + &s * (delta * scale);
        if g.dot(&d) >= 0.0 || idx.iter().any(|&i| d[i] <= 0.0) {
            continue;
        }
        if let Some(p) = descend_from(cf, spec, &x, &d, p0) {
            return Ok(p);
        }
    }
    Err(Error::NoDescent(format!("zero-length edges {zero:?}")))
}

const COLLAPSE_STEPS: usize = 400;

/// Follows the closure locus while shrinking edge `j` to zero length, with
/// the other coordinates moving by minimum-norm corrections. The result is a
/// point of the closure with `l_j = 0`.
pub fn collapse_edge(cf: &CenterFrame, params: &PolygonParams, spec: &AngleSpec, j: usize) -> Result<PolygonParams> {
    if j >= spec.len() {
        return Err(Error::Domain(format!("edge {j} out of range")));
    }
    let mut p = params.clone();
    let mut step = 0.1;
    for _ in 0..COLLAPSE_STEPS {
        if p.lengths[j] <= 0.0 {
            return Ok(p);
        }
        let mut q = p.clone();
        q.lengths[j] = (q.lengths[j] - step).max(0.0);
        match project_holding(cf, &q, spec, &[j + 2]) {
            Ok(next) if next.lengths.iter().enumerate().all(|(i, l)| i == j || *l > 0.0) => {
                p = next;
                step = (step * 2.0).min(0.1);
            }
            _ => {
                step *= 0.5;
                if step < 1e-6 {
                    return Err(Error::NoDescent(format!("cannot shrink edge {j} further")));
                }
            }
        }
    }
    Err(Error::NoDescent(format!("edge {j} still {:.3e} long after {COLLAPSE_STEPS} steps", p.lengths[j])))
}

/// A pseudo-random interior polygon, deterministic in `seed`: a random walk
/// in the polygon space starting at the minimiser.
pub fn random_feasible(cf: &CenterFrame, spec: &AngleSpec, seed: u64) -> Result<PolygonParams> {
    let (mut cur, _, _) = construct_optimal(cf, spec)?;
    let n = spec.len();
    if n < 2 {
        return Ok(cur);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (steps, max_attempts) = (20, 400);
    let mut taken = 0;
    let mut attempts = 0;
    while taken < steps {
        attempts += 1;
        if attempts > max_attempts {
            return Err(Error::SamplerExhausted(max_attempts));
        }
        let m = jacobian_unchecked(cf, &cur, spec)?.m;
        let z = null_space(&m, 3);
        let xi = DVector::from_fn(z.ncols(), |_, _| rng.gen_range(-1.0..1.0));
        let dir = &z * xi;
        let norm = dir.norm();
        if norm == 0.0 {
            continue;
        }
        let step = rng.gen_range(0.05..0.4);
        let trial = cur.to_vector() + dir * (step / norm);
        if let Some(p) = try_point(cf, spec, &trial) {
            if p.lengths.iter().all(|l| *l > 1e-3) {
                cur = p;
                taken += 1;
            }
        }
    }
    Ok(cur)
}
