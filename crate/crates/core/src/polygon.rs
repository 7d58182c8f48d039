//! The chart `(l0, θ, l1, …, ln)` on the space of polygons, the developing
//! maps, the closure residual and its Jacobian.
//!
//! Frames of the unit tangent bundle are isometries (see [`Isometry`]); the
//! identity is the frame at `p0` with velocity `ġ(0)`. Moving forward by `l`
//! is right multiplication by `T(l) = exp(-l·e0)`, a left turn by `φ` is
//! right multiplication by `R(φ) = exp(φ·p0)`.
//!
//! * `v(l0, θ) = T(l0)·R(−θ)` (θ turns clockwise from `ġ(l0)`),
//! * `w = v·T(l1)R(π−β1)⋯T(ln)R(π−βn)`,
//! * closure residual `r = −log(w·(γ v)^{-1}) ∈ R^{2,1}`.
//!
//! With these conventions `∂r/∂l0 = (1−γ)e0`, `∂r/∂θ = (1−γ)q0` and
//! `∂r/∂li = ei` on the closure locus.

use std::f64::consts::{PI, TAU};

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::center::{CenterFrame, CenterKind};
use crate::error::{Error, Result};
use crate::lorentz::{Isometry, Vec3L};

/// Residual tolerance for certified membership.
pub const EPS_RES: f64 = 1e-9;
/// Residual tolerance for intermediate optimizer iterates.
pub const EPS_RES_SEARCH: f64 = 1e-7;

/// Prescribed interior angles `β1, …, βn`, each in `(0, π)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AngleSpec {
    beta: Vec<f64>,
}

impl AngleSpec {
    pub fn new(beta: Vec<f64>) -> Result<Self> {
        if beta.is_empty() {
            return Err(Error::InvalidAngles("at least one angle is required".into()));
        }
        if let Some(b) = beta.iter().find(|b| !(**b > 0.0 && **b < PI)) {
            return Err(Error::InvalidAngles(format!("angle {b} outside (0, pi)")));
        }
        Ok(AngleSpec { beta })
    }

    /// `n` copies of `beta`.
    pub fn regular(n: usize, beta: f64) -> Result<Self> {
        AngleSpec::new(vec![beta; n])
    }

    pub fn len(&self) -> usize {
        self.beta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.beta.is_empty()
    }

    pub fn angles(&self) -> &[f64] {
        &self.beta
    }

    /// Checks that polygons with these angles exist around `kind`
    /// (for a cone point, `α + Σβ < nπ`).
    pub fn check_feasible(&self, kind: &CenterKind) -> Result<()> {
        kind.validate()?;
        if let CenterKind::Cone(alpha) = kind {
            let total = alpha + self.beta.iter().sum::<f64>();
            let bound = self.len() as f64 * PI;
            if total >= bound {
                return Err(Error::Infeasible(format!(
                    "cone angle plus angle sum {total:.6} is not below n*pi = {bound:.6}"
                )));
            }
        }
        Ok(())
    }
}

/// Chart coordinates of a polygon.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolygonParams {
    pub l0: f64,
    pub theta: f64,
    pub lengths: Vec<f64>,
}

impl PolygonParams {
    pub fn new(l0: f64, theta: f64, lengths: Vec<f64>) -> Self {
        PolygonParams { l0, theta: theta.rem_euclid(TAU), lengths }
    }

    pub fn perimeter(&self) -> f64 {
        self.lengths.iter().sum()
    }

    /// Flattened `(l0, θ, l1, …, ln)`.
    pub fn to_vector(&self) -> DVector<f64> {
        let mut v = DVector::zeros(self.lengths.len() + 2);
        v[0] = self.l0;
        v[1] = self.theta;
        for (i, l) in self.lengths.iter().enumerate() {
            v[i + 2] = *l;
        }
        v
    }

    pub fn from_vector(v: &DVector<f64>) -> Self {
        PolygonParams::new(v[0], v[1], v.iter().skip(2).copied().collect())
    }
}

/// Forward translation by `l` in body coordinates.
pub fn forward(l: f64) -> Isometry {
    Isometry::exp(Vec3L::new(0.0, 0.0, -l))
}

/// Counterclockwise turn by `phi` in body coordinates.
pub fn turn_left(phi: f64) -> Isometry {
    Isometry::exp(Vec3L::new(phi, 0.0, 0.0))
}

fn check_lengths(spec: &AngleSpec, lengths: &[f64]) -> Result<()> {
    if lengths.len() != spec.len() {
        return Err(Error::Domain(format!(
            "{} lengths for {} angles",
            lengths.len(),
            spec.len()
        )));
    }
    if let Some(l) = lengths.iter().find(|l| !(**l >= 0.0 && l.is_finite())) {
        return Err(Error::Domain(format!("edge length {l} is not a finite nonnegative number")));
    }
    Ok(())
}

/// Frame at `g(l0)` with velocity `ġ(l0)` turned clockwise by `θ`.
pub fn map_v(cf: &CenterFrame, l0: f64, theta: f64) -> Result<Isometry> {
    if !cf.kind.l0_in_interval(l0) || !theta.is_finite() {
        return Err(Error::Domain(format!(
            "(l0, theta) = ({l0}, {theta}) outside the chart of a {}",
            cf.kind.name()
        )));
    }
    Ok(forward(l0) * turn_left(-theta))
}

/// Frames at the start of each edge, followed by the final frame after the
/// last turn.
pub fn develop_frames(start: Isometry, lengths: &[f64], spec: &AngleSpec) -> Vec<Isometry> {
    let mut frames = Vec::with_capacity(lengths.len() + 1);
    let mut f = start;
    for (l, b) in lengths.iter().zip(spec.angles()) {
        frames.push(f);
        f = f * forward(*l) * turn_left(PI - b);
    }
    frames.push(f);
    frames
}

pub fn map_w(cf: &CenterFrame, params: &PolygonParams, spec: &AngleSpec) -> Result<Isometry> {
    check_lengths(spec, &params.lengths)?;
    let v = map_v(cf, params.l0, params.theta)?;
    Ok(*develop_frames(v, &params.lengths, spec).last().unwrap())
}

/// Group-logarithm coordinates of the closure defect `w·(γv)^{-1}`.
pub fn closure_residual(cf: &CenterFrame, params: &PolygonParams, spec: &AngleSpec) -> Result<Vec3L> {
    check_lengths(spec, &params.lengths)?;
    let v = map_v(cf, params.l0, params.theta)?;
    let w = *develop_frames(v, &params.lengths, spec).last().unwrap();
    let defect = w * (cf.gamma * v).inverse();
    Ok(-defect.log()?)
}

pub fn residual_norm(cf: &CenterFrame, params: &PolygonParams, spec: &AngleSpec) -> Result<f64> {
    closure_residual(cf, params, spec).map(|r| r.euclid_norm())
}

/// The `3 × (n+2)` matrix with columns `(1−γ)e0, (1−γ)q0, e1, …, en`.
#[derive(Debug, Clone, PartialEq)]
pub struct JacobianM {
    pub m: DMatrix<f64>,
}

impl JacobianM {
    pub fn column(&self, j: usize) -> Vec3L {
        Vec3L::new(self.m[(0, j)], self.m[(1, j)], self.m[(2, j)])
    }

    /// Singular values in decreasing order.
    pub fn singular_values(&self) -> Vec<f64> {
        let mut s: Vec<f64> = self.m.clone().svd(false, false).singular_values.iter().copied().collect();
        s.sort_by(|a, b| b.total_cmp(a));
        s
    }

    /// `σ3 / σ1`.
    pub fn sigma_ratio(&self) -> f64 {
        let s = self.singular_values();
        if s.len() < 3 || s[0] == 0.0 {
            0.0
        } else {
            s[2] / s[0]
        }
    }

    /// Orthonormal basis of `ker M` (the tangent space of the polygon
    /// space), one basis vector per column.
    pub fn null_space(&self) -> DMatrix<f64> {
        null_space(&self.m, 3)
    }
}

/// Orthonormal basis of the kernel of a matrix of known rank.
pub(crate) fn null_space(a: &DMatrix<f64>, rank: usize) -> DMatrix<f64> {
    let m = a.ncols();
    let svd = a.clone().svd(false, true);
    let vt = svd.v_t.expect("requested V^T");
    // rows of V^T for the `rank` largest singular values span the row space
    let mut idx: Vec<usize> = (0..svd.singular_values.len()).collect();
    idx.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]));
    let mut proj = DMatrix::<f64>::identity(m, m);
    for &i in idx.iter().take(rank) {
        let row = vt.row(i).transpose();
        proj -= &row * row.transpose();
    }
    let eig = proj.symmetric_eigen();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    DMatrix::from_fn(m, m - rank, |r, c| eig.eigenvectors[(r, order[c])])
}

/// Jacobian columns evaluated at arbitrary chart points (exact derivative of
/// the residual only on the closure locus).
pub(crate) fn jacobian_unchecked(cf: &CenterFrame, params: &PolygonParams, spec: &AngleSpec) -> Result<JacobianM> {
    check_lengths(spec, &params.lengths)?;
    let v = map_v(cf, params.l0, params.theta)?;
    let frames = develop_frames(v, &params.lengths, spec);
    let q0 = cf.base_point(params.l0)?;
    let n = spec.len();
    let mut m = DMatrix::zeros(3, n + 2);
    let cols = std::iter::once(cf.e0 - cf.gamma * cf.e0)
        .chain(std::iter::once(q0 - cf.gamma * q0))
        .chain(frames[..n].iter().map(|f| f.line()));
    for (j, c) in cols.enumerate() {
        m[(0, j)] = c.x0;
        m[(1, j)] = c.x1;
        m[(2, j)] = c.x2;
    }
    Ok(JacobianM { m })
}

/// Analytic Jacobian of the closure residual at a closed chart point.
pub fn jacobian_m(cf: &CenterFrame, params: &PolygonParams, spec: &AngleSpec) -> Result<JacobianM> {
    let res = residual_norm(cf, params, spec)?;
    if res > EPS_RES_SEARCH {
        return Err(Error::NotClosed { residual: res, tolerance: EPS_RES_SEARCH });
    }
    let jac = jacobian_unchecked(cf, params, spec)?;
    let ratio = jac.sigma_ratio();
    if ratio < 1e-10 {
        return Err(Error::RankDeficient { ratio });
    }
    Ok(jac)
}

/// A developed polygon in the universal cover.
#[derive(Debug, Clone, PartialEq)]
pub struct Polygon {
    /// `q0 = g(l0)` followed by the ends of edges `1..n−1`.
    pub vertices: Vec<Vec3L>,
    /// Oriented lines `e1, …, en`; the polygon lies on their half-plane side.
    pub edge_lines: Vec<Vec3L>,
    pub lengths: Vec<f64>,
    pub angles: Vec<f64>,
    pub start_frame: Isometry,
    pub end_frame: Isometry,
    /// Holonomy used to continue the vertex list periodically.
    pub gamma: Isometry,
}

impl Polygon {
    pub fn perimeter(&self) -> f64 {
        self.lengths.iter().sum()
    }

    pub fn n(&self) -> usize {
        self.lengths.len()
    }

    /// Vertex `k` of the periodic developed path; `k >= n` wraps through `γ`.
    pub fn vertex(&self, k: usize) -> Vec3L {
        let n = self.n();
        let mut v = self.vertices[k % n];
        for _ in 0..k / n {
            v = self.gamma * v;
        }
        v
    }
}

/// Develops a polygonal path from an arbitrary start frame.
pub fn develop_from(start: Isometry, gamma: Isometry, lengths: &[f64], spec: &AngleSpec) -> Result<Polygon> {
    check_lengths(spec, lengths)?;
    let frames = develop_frames(start, lengths, spec);
    let n = spec.len();
    Ok(Polygon {
        vertices: frames[..n].iter().map(|f| f.point()).collect(),
        edge_lines: frames[..n].iter().map(|f| f.line()).collect(),
        lengths: lengths.to_vec(),
        angles: spec.angles().to_vec(),
        start_frame: start,
        end_frame: frames[n],
        gamma,
    })
}

pub fn develop_polygon(cf: &CenterFrame, params: &PolygonParams, spec: &AngleSpec) -> Result<Polygon> {
    let res = residual_norm(cf, params, spec)?;
    if res > EPS_RES {
        return Err(Error::NotClosed { residual: res, tolerance: EPS_RES });
    }
    develop_from(map_v(cf, params.l0, params.theta)?, cf.gamma, &params.lengths, spec)
}

/// Outcome of [`validate_membership`]; each check reported separately.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MembershipReport {
    /// Edges `i` (0-based) with `<e_i, x0> >= 0`.
    pub wrong_side: Vec<usize>,
    /// Edges `i` whose following vertex does not lie strictly in their half-plane.
    pub non_convex: Vec<usize>,
    /// Edges of zero length (boundary of the closure).
    pub zero_length: Vec<usize>,
}

impl MembershipReport {
    pub fn is_member(&self) -> bool {
        self.wrong_side.is_empty() && self.non_convex.is_empty() && self.zero_length.is_empty()
    }
}

pub fn validate_membership(cf: &CenterFrame, polygon: &Polygon) -> MembershipReport {
    let n = polygon.n();
    let wrong_side = (0..n)
        .filter(|&i| !(polygon.edge_lines[i].dot(&cf.x0) < 0.0))
        .collect();
    let non_convex = (0..n)
        .filter(|&i| {
            let p = polygon.vertex(i + 2);
            let scale = p.x0.abs().max(1.0);
            !(polygon.edge_lines[i].dot(&p) < -1e-12 * scale)
        })
        .collect();
    let zero_length = (0..n).filter(|&i| !(polygon.lengths[i] > 0.0)).collect();
    MembershipReport { wrong_side, non_convex, zero_length }
}
