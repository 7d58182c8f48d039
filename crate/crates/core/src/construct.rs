//! The perimeter minimiser built directly: the unique polygon whose edges are
//! all tangent to one equidistant of the center.
//!
//! Around each vertex the polygon decomposes into a block bounded by the two
//! perpendiculars dropped from the center (or its core geodesic, or its
//! ideal point) to the tangency points. A vertex of angle `β` at equidistant
//! level `c` has half-edges of length `a` with
//!
//! ```text
//! sinh a = cot(β/2) · |c| / sqrt(c² + δ),      δ = −<x0, x0>,
//! ```
//!
//! so only the block widths depend on the kind of center. The level is fixed
//! by requiring the widths to add up to the holonomy.

use std::f64::consts::{PI, TAU};

use nalgebra::Matrix3;
use serde::{Deserialize, Serialize};

use crate::center::{make_center, CenterFrame, CenterKind, EquidistantLevel};
use crate::error::{Error, Result};
use crate::lorentz::{Isometry, Vec3L};
use crate::polygon::{
    develop_frames, develop_polygon, forward, residual_norm, validate_membership, AngleSpec,
    MembershipReport, Polygon, PolygonParams, EPS_RES, EPS_RES_SEARCH,
};
use crate::roots::{decreasing_root, expand_upper, shrink_lower};

fn check_beta(beta: f64) -> Result<()> {
    if beta > 0.0 && beta < PI {
        Ok(())
    } else {
        Err(Error::InvalidAngles(format!("angle {beta} outside (0, pi)")))
    }
}

/// Length `2·asinh(cot(β/2))` of each edge between two vertices of angle `β`
/// on a polygon circumscribed about a horocycle. Does not depend on the
/// number of edges.
pub fn cusp_edge_length(beta: f64) -> Result<f64> {
    check_beta(beta)?;
    Ok(2.0 * (1.0 / (beta / 2.0).tan()).asinh())
}

fn check_level(kind: &CenterKind, level: EquidistantLevel) -> Result<f64> {
    let c = level.0;
    let ok = match kind {
        CenterKind::Geodesic(_) => c < -1.0,
        _ => c < 0.0,
    };
    if ok && c.is_finite() {
        Ok(c)
    } else {
        Err(Error::Infeasible(format!(
            "equidistant level {c} is not attainable around a {}",
            kind.name()
        )))
    }
}

/// Distance from a vertex of angle `β` to the tangency points of its two
/// edges with the equidistant at `level`.
pub fn half_edge(kind: &CenterKind, level: EquidistantLevel, beta: f64) -> Result<f64> {
    check_beta(beta)?;
    let c = check_level(kind, level)?;
    let cot = 1.0 / (beta / 2.0).tan();
    let ratio = -c / (c * c + kind.causal_sign()).sqrt();
    Ok((cot * ratio).asinh())
}

/// Width of the block around a vertex of angle `β`: the angle it subtends at
/// a cone point, the length of its shadow on the core geodesic, or its
/// displacement in units of the parabolic parameter `s` of `exp(x0, s)`.
pub fn block_width(kind: &CenterKind, level: EquidistantLevel, beta: f64) -> Result<f64> {
    check_beta(beta)?;
    let c = check_level(kind, level)?;
    let b = (beta / 2.0).cos();
    Ok(match kind {
        CenterKind::Cusp => 2.0 * b / -c,
        CenterKind::Cone(_) => 2.0 * (b / (-c).asinh().cosh()).asin(),
        CenterKind::Geodesic(_) => 2.0 * (b / (-c).acosh().sinh()).asinh(),
    })
}

/// The level `c = <e_i, x0>` of the equidistant inscribed in the optimal
/// polygon.
pub fn solve_equidistant_level(cf: &CenterFrame, spec: &AngleSpec) -> Result<EquidistantLevel> {
    spec.check_feasible(&cf.kind)?;
    let halves: Vec<f64> = spec.angles().iter().map(|b| (b / 2.0).cos()).collect();
    match cf.kind {
        CenterKind::Cusp => Ok(EquidistantLevel(-2.0 * halves.iter().sum::<f64>())),
        CenterKind::Cone(alpha) => {
            // r = distance from the cone point to the edges
            let f = |r: f64| halves.iter().map(|b| 2.0 * (b / r.cosh()).asin()).sum::<f64>() - alpha;
            let df = |r: f64| {
                halves
                    .iter()
                    .map(|b| -2.0 * b * r.tanh() / (r.cosh().powi(2) - b * b).sqrt())
                    .sum::<f64>()
            };
            let hi = expand_upper(f, 1.0)?;
            let r = decreasing_root(f, df, 0.0, hi)?;
            Ok(EquidistantLevel(-r.sinh()))
        }
        CenterKind::Geodesic(len) => {
            // d = distance from the core geodesic to the edges
            let f = |d: f64| halves.iter().map(|b| 2.0 * (b / d.sinh()).asinh()).sum::<f64>() - len;
            let df = |d: f64| {
                halves
                    .iter()
                    .map(|b| -2.0 * b * d.cosh() / (d.sinh() * (d.sinh().powi(2) + b * b).sqrt()))
                    .sum::<f64>()
            };
            let lo = shrink_lower(f, 1.0)?;
            let hi = expand_upper(f, 1.0)?;
            let d = decreasing_root(f, df, lo, hi)?;
            Ok(EquidistantLevel(-d.cosh()))
        }
    }
}

/// Diagnostics attached to a constructed polygon.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstructionCertificate {
    pub level: EquidistantLevel,
    pub residual: f64,
    pub tangency_spread: f64,
    pub membership: MembershipReport,
}

/// `l0` placing the last vertex (angle `β`) so that its edges sit at `level`.
fn vertex_distance(kind: &CenterKind, c: f64, beta: f64) -> f64 {
    let x = -c / (beta / 2.0).sin();
    match kind {
        CenterKind::Cusp => x.ln(),
        CenterKind::Cone(_) => x.asinh(),
        CenterKind::Geodesic(_) => x.acosh(),
    }
}

/// Builds the minimal-perimeter polygon with angles `spec` around `cf`.
pub fn construct_optimal(cf: &CenterFrame, spec: &AngleSpec) -> Result<(PolygonParams, Polygon, ConstructionCertificate)> {
    let level = solve_equidistant_level(cf, spec)?;
    let beta = spec.angles();
    let n = beta.len();
    let halves = beta
        .iter()
        .map(|b| half_edge(&cf.kind, level, *b))
        .collect::<Result<Vec<f64>>>()?;
    let lengths: Vec<f64> = (0..n).map(|i| halves[(i + n - 1) % n] + halves[i]).collect();
    let last = beta[n - 1];
    let params = PolygonParams::new(vertex_distance(&cf.kind, level.0, last), PI + last / 2.0, lengths);
    let polygon = develop_polygon(cf, &params, spec)?;
    let certificate = ConstructionCertificate {
        level,
        residual: residual_norm(cf, &params, spec)?,
        tangency_spread: cf.tangency_spread(&polygon.edge_lines)?,
        membership: validate_membership(cf, &polygon),
    };
    Ok((params, polygon, certificate))
}

/// Fixed point of an elliptic element of rotation angle `π`.
fn half_turn_center(p: &Isometry) -> Result<Vec3L> {
    // P = −I − 2 y y^T J, so every column of P + I is a multiple of y
    let k = p.matrix() + Matrix3::identity();
    let j = (0..3)
        .max_by(|&a, &b| k.column(a).norm().total_cmp(&k.column(b).norm()))
        .unwrap();
    Vec3L::new(k[(0, j)], k[(1, j)], k[(2, j)]).normalize_point()
}

/// Relative tolerance on the causal type and size of the recovered holonomy.
const EPS_RECON: f64 = 1e-7;

/// Recovers the chart coordinates of the polygon with the given edge
/// lengths and angles around a center of the given kind.
///
/// The open path starting at the identity frame ends at `P = v^{-1} γ v`, so
/// `log P` is a multiple of `y = v^{-1} x0`; `y` then fixes `l0` and `θ`.
pub fn reconstruct_from_lengths(kind: &CenterKind, spec: &AngleSpec, lengths: &[f64]) -> Result<PolygonParams> {
    let cf = make_center(*kind)?;
    if lengths.len() != spec.len() {
        return Err(Error::Domain(format!("{} lengths for {} angles", lengths.len(), spec.len())));
    }
    if let Some(l) = lengths.iter().find(|l| !(**l > 0.0 && l.is_finite())) {
        return Err(Error::Domain(format!("edge length {l} must be positive")));
    }
    let p = *develop_frames(Isometry::identity(), lengths, spec).last().unwrap();
    let y = match *kind {
        CenterKind::Cusp => {
            let u = p.log().map_err(|_| Error::Reconstruction("holonomy is a half-turn, not parabolic".into()))?;
            let size = u.euclid_norm();
            if size == 0.0 || u.quad().abs() > EPS_RECON * size * size || u.x0 <= 0.0 {
                return Err(Error::Reconstruction(format!(
                    "no parabolic of the right direction joins the ends (<u,u> = {:.3e}, u0 = {:.3e})",
                    u.quad(),
                    u.x0
                )));
            }
            u
        }
        CenterKind::Cone(alpha) => {
            let (y, angle) = match p.log() {
                Ok(u) => {
                    let q = u.quad();
                    if q >= 0.0 {
                        return Err(Error::Reconstruction(format!(
                            "holonomy is not elliptic (<u,u> = {q:.3e})"
                        )));
                    }
                    let phi = (-q).sqrt();
                    let y = u.normalize_point()?;
                    (y, if u.x0 > 0.0 { phi } else { TAU - phi })
                }
                Err(Error::OutOfChart) => (half_turn_center(&p)?, PI),
                Err(e) => return Err(e),
            };
            if (angle - alpha).abs() > EPS_RECON * TAU {
                return Err(Error::Reconstruction(format!(
                    "holonomy rotates by {angle:.9} instead of the cone angle {alpha:.9}"
                )));
            }
            y
        }
        CenterKind::Geodesic(len) => {
            let u = p.log()?;
            let q = u.quad();
            if q <= 0.0 || (q.sqrt() - len).abs() > EPS_RECON * len.max(1.0) {
                return Err(Error::Reconstruction(format!(
                    "holonomy is not a translation of length {len} (<u,u> = {q:.6e})"
                )));
            }
            u * (1.0 / q.sqrt())
        }
    };

    let h = -y.dot(&cf.p0);
    let l0 = match kind {
        CenterKind::Cusp => h.ln(),
        CenterKind::Cone(_) => crate::lorentz::acosh1p(h - 1.0),
        CenterKind::Geodesic(_) => h.asinh(),
    };
    if !cf.kind.l0_in_interval(l0) || !l0.is_finite() {
        return Err(Error::Reconstruction(format!("center lies on the wrong side (l0 = {l0})")));
    }
    // y = R(θ) T(−l0) x0; R(θ) rotates the (x1, x2)-plane counterclockwise
    let y0 = forward(-l0) * cf.x0;
    let theta = if y.x1.hypot(y.x2) < 1e-300 || y0.x1.hypot(y0.x2) < 1e-300 {
        0.0
    } else {
        y.x2.atan2(y.x1) - y0.x2.atan2(y0.x1)
    };
    let mut params = PolygonParams::new(l0, theta, lengths.to_vec());
    let mut res = residual_norm(&cf, &params, spec)?;
    if res > EPS_RES && res <= EPS_RES_SEARCH {
        // rounding in the development of long paths; polish (l0, θ) only
        let fixed: Vec<usize> = (2..spec.len() + 2).collect();
        if let Ok(p) = crate::optimize::project_holding(&cf, &params, spec, &fixed) {
            res = residual_norm(&cf, &p, spec)?;
            params = p;
        }
    }
    if res > EPS_RES {
        return Err(Error::Reconstruction(format!("recovered chart point does not close (residual {res:.3e})")));
    }
    let poly = develop_polygon(&cf, &params, spec)?;
    let report = validate_membership(&cf, &poly);
    if !report.is_member() {
        return Err(Error::Reconstruction(format!(
            "recovered polygon is not convex around the center: {report:?}"
        )));
    }
    Ok(params)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lorentz::{boxtimes, point_distance};
    use crate::polygon::turn_left;
    use approx::assert_abs_diff_eq;

    fn grid() -> Vec<(CenterKind, AngleSpec)> {
        vec![
            (CenterKind::Cusp, AngleSpec::regular(3, 2.0 * PI / 3.0).unwrap()),
            (CenterKind::Cusp, AngleSpec::new(vec![0.4, 1.1, 2.0, 2.9, 1.7]).unwrap()),
            (CenterKind::Cusp, AngleSpec::new(vec![1.0]).unwrap()),
            (CenterKind::Cone(PI / 2.0), AngleSpec::regular(3, PI / 2.0).unwrap()),
            (CenterKind::Cone(PI), AngleSpec::new(vec![0.5, 2.5, 1.5]).unwrap()),
            (CenterKind::Cone(5.5), AngleSpec::new(vec![0.3, 0.2, 0.4]).unwrap()),
            (CenterKind::Cone(0.05), AngleSpec::new(vec![2.0, 2.5]).unwrap()),
            (CenterKind::Geodesic(1.0), AngleSpec::regular(4, 2.0).unwrap()),
            (CenterKind::Geodesic(0.1), AngleSpec::new(vec![2.8, 0.3]).unwrap()),
            (CenterKind::Geodesic(7.0), AngleSpec::new(vec![1.2]).unwrap()),
        ]
    }

    #[test]
    fn cusp_edge_length_examples() {
        assert_abs_diff_eq!(cusp_edge_length(2.0 * PI / 3.0).unwrap(), 3f64.ln(), epsilon = 1e-14);
        assert_abs_diff_eq!(
            cusp_edge_length(PI / 2.0).unwrap(),
            2.0 * (1.0 + 2f64.sqrt()).ln(),
            epsilon = 1e-14
        );
        // the logarithmic form of the same quantity
        let b = 1.3f64;
        let log_form = 2.0 * ((1.0 + (b / 2.0).cos()) / (b / 2.0).sin()).ln();
        assert_abs_diff_eq!(cusp_edge_length(b).unwrap(), log_form, epsilon = 1e-14);
        assert!(cusp_edge_length(PI - 1e-9).unwrap() < 1e-8);
        assert!(cusp_edge_length(PI).is_err());
        assert!(cusp_edge_length(0.0).is_err());
        let vals: Vec<f64> = (1..100).map(|k| cusp_edge_length(k as f64 * PI / 100.0).unwrap()).collect();
        assert!(vals.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn cone_block_width_examples() {
        let kind = CenterKind::Cone(1.0);
        let beta = PI / 2.0;
        let w0 = block_width(&kind, EquidistantLevel(-1e-12), beta).unwrap();
        assert_abs_diff_eq!(w0, PI - beta, epsilon = 1e-9);
        assert!(block_width(&kind, EquidistantLevel(-1e12), beta).unwrap() < 1e-11);
        // r = acosh(sqrt 2) gives a third of π
        let r = 2f64.sqrt().acosh();
        assert_abs_diff_eq!(r, 0.881_373_587_019_543, epsilon = 1e-12);
        let w = block_width(&kind, EquidistantLevel(-r.sinh()), beta).unwrap();
        assert_abs_diff_eq!(w, PI / 3.0, epsilon = 1e-12);
        assert!(block_width(&kind, EquidistantLevel(0.5), beta).is_err());
        assert!(block_width(&CenterKind::Geodesic(1.0), EquidistantLevel(-0.5), beta).is_err());
    }

    #[test]
    fn widths_are_monotone_in_the_distance() {
        let beta = 1.9;
        let cone: Vec<f64> = (1..60)
            .map(|k| block_width(&CenterKind::Cone(1.0), EquidistantLevel(-(0.05 * k as f64).sinh()), beta).unwrap())
            .collect();
        assert!(cone.windows(2).all(|w| w[1] < w[0]));
        let geo: Vec<f64> = (1..60)
            .map(|k| block_width(&CenterKind::Geodesic(1.0), EquidistantLevel(-(0.05 * k as f64).cosh()), beta).unwrap())
            .collect();
        assert!(geo.windows(2).all(|w| w[1] < w[0]));
    }

    /// Builds the block of a vertex of angle `beta` explicitly: the vertex on
    /// the base line, its two edges symmetric about it. Returns the two edge
    /// lines (oriented with the center on their half-plane side) and the
    /// tangency points.
    fn explicit_block(cf: &CenterFrame, l: f64, beta: f64) -> ((Vec3L, Vec3L), (Vec3L, Vec3L)) {
        // frame at the vertex looking away from the center, then turned
        let at_vertex = forward(l);
        // the incoming edge is traversed backwards from the vertex
        let e_in = -(at_vertex * turn_left(PI + beta / 2.0)).line();
        let e_out = (at_vertex * turn_left(PI - beta / 2.0)).line();
        // closest point of the line e to the center
        let foot = |e: Vec3L| cf.x0 - e * e.dot(&cf.x0);
        ((e_in, e_out), (foot(e_in), foot(e_out)))
    }

    #[test]
    fn cone_block_oracle() {
        // vertex at distance l from the cone point: both edges at distance r
        // with sinh r = sinh l sin(β/2), and the block subtends 2 asin(cos(β/2)/cosh r)
        let cf = make_center(CenterKind::Cone(1.0)).unwrap();
        let (l, beta) = (1.3f64, 1.1f64);
        let ((e_in, e_out), (t_in, t_out)) = explicit_block(&cf, l, beta);
        let v_in = e_in.dot(&cf.x0);
        let v_out = e_out.dot(&cf.x0);
        assert_abs_diff_eq!(v_in, v_out, epsilon = 1e-12);
        let r = (-v_in).asinh();
        assert_abs_diff_eq!(r.sinh(), l.sinh() * (beta / 2.0).sin(), epsilon = 1e-12);
        let (t_in, t_out) = (t_in.normalize_point().unwrap(), t_out.normalize_point().unwrap());
        assert_abs_diff_eq!(point_distance(cf.x0, t_in), r, epsilon = 1e-10);
        // angle subtended at x0 from the law of cosines in the isoceles triangle
        let chord = point_distance(t_in, t_out);
        let angle = ((r.cosh().powi(2) - chord.cosh()) / r.sinh().powi(2)).acos();
        let w = block_width(&cf.kind, EquidistantLevel(v_in), beta).unwrap();
        assert_abs_diff_eq!(angle, w, epsilon = 1e-9);
        let a = half_edge(&cf.kind, EquidistantLevel(v_in), beta).unwrap();
        let vertex = forward(l).point();
        assert_abs_diff_eq!(point_distance(vertex, t_in), a, epsilon = 1e-9);
        assert_abs_diff_eq!(point_distance(vertex, t_out), a, epsilon = 1e-9);
    }

    #[test]
    fn geodesic_block_oracle() {
        // the vertex at distance l from the core geodesic x0 = (0,1,0)
        let cf = make_center(CenterKind::Geodesic(1.0)).unwrap();
        let (l, beta) = (2.0f64, 1.4f64);
        let ((e_in, e_out), _) = explicit_block(&cf, l, beta);
        let c = e_in.dot(&cf.x0);
        assert_abs_diff_eq!(c, e_out.dot(&cf.x0), epsilon = 1e-12);
        assert!(c < -1.0);
        let d = (-c).acosh();
        let a = half_edge(&cf.kind, EquidistantLevel(c), beta).unwrap();
        let vertex = forward(l).point();
        // the tangency point is the foot on e of the common perpendicular
        // with the core, at distance a from the vertex
        for e in [e_in, e_out] {
            let perp = boxtimes(cf.x0, e);
            let p = boxtimes(e, perp).normalize_point().unwrap();
            assert_abs_diff_eq!(point_distance(vertex, p), a, epsilon = 1e-9);
            assert_abs_diff_eq!(p.dot(&cf.x0).abs(), d.sinh(), epsilon = 1e-9);
        }
    }

    #[test]
    fn solved_levels_satisfy_the_width_equation() {
        for (kind, spec) in grid() {
            let cf = make_center(kind).unwrap();
            let level = solve_equidistant_level(&cf, &spec).unwrap();
            let total: f64 = spec.angles().iter().map(|b| block_width(&kind, level, *b).unwrap()).sum();
            assert_abs_diff_eq!(total, cf.holonomy, epsilon = 1e-12 * cf.holonomy.max(1.0));
        }
    }

    #[test]
    fn constructed_polygons_close_and_are_tangent() {
        for (kind, spec) in grid() {
            let cf = make_center(kind).unwrap();
            let (params, poly, cert) = construct_optimal(&cf, &spec).unwrap();
            assert!(cert.residual <= 1e-9, "{kind:?}: {}", cert.residual);
            assert!(cert.tangency_spread <= 1e-9, "{kind:?}: {}", cert.tangency_spread);
            assert!(cert.membership.is_member(), "{kind:?}: {:?}", cert.membership);
            for v in cf.equidistant_values(&poly.edge_lines) {
                assert_abs_diff_eq!(v, cert.level.0, epsilon = 1e-9 * cert.level.0.abs().max(1.0));
            }
            assert_abs_diff_eq!(params.perimeter(), poly.perimeter(), epsilon = 0.0);
        }
    }

    #[test]
    fn cusp_perimeter_is_sum_of_edge_formula() {
        let cf = make_center(CenterKind::Cusp).unwrap();
        let spec = AngleSpec::regular(3, 2.0 * PI / 3.0).unwrap();
        let (_, poly, _) = construct_optimal(&cf, &spec).unwrap();
        assert_abs_diff_eq!(poly.perimeter(), 3.0 * 3f64.ln(), epsilon = 1e-12);
        let spec = AngleSpec::new(vec![0.4, 1.1, 2.0, 2.9, 1.7]).unwrap();
        let (_, poly, _) = construct_optimal(&cf, &spec).unwrap();
        let expected: f64 = spec.angles().iter().map(|b| cusp_edge_length(*b).unwrap()).sum();
        assert_abs_diff_eq!(poly.perimeter(), expected, epsilon = 1e-12);
    }

    #[test]
    fn level_limits() {
        let spec = AngleSpec::new(vec![1.0, 2.0, 1.5]).unwrap();
        let slack = 3.0 * PI - 4.5;
        let near = make_center(CenterKind::Cone(slack - 1e-6)).unwrap();
        let r = (-solve_equidistant_level(&near, &spec).unwrap().0).asinh();
        assert!(r > 0.0 && r < 1e-2, "{r}");
        assert!(solve_equidistant_level(&make_center(CenterKind::Cone(slack + 1e-6)).unwrap(), &spec).is_err());
        let mut last = f64::INFINITY;
        for len in [1.0, 10.0, 100.0] {
            let geo = make_center(CenterKind::Geodesic(len)).unwrap();
            let d = (-solve_equidistant_level(&geo, &spec).unwrap().0).acosh();
            assert!(d < last);
            last = d;
        }
        assert!(last < 0.1);
    }

    #[test]
    fn holonomy_of_constructed_polygon_matches_gamma() {
        for (kind, spec) in grid() {
            let cf = make_center(kind).unwrap();
            let (_, poly, _) = construct_optimal(&cf, &spec).unwrap();
            let expected = cf.gamma * poly.start_frame;
            assert!((poly.end_frame.matrix() - expected.matrix()).abs().max() < 1e-8 * expected.matrix().abs().max());
        }
    }

    #[test]
    fn reconstruction_round_trip() {
        for (kind, spec) in grid() {
            let cf = make_center(kind).unwrap();
            let (params, poly, _) = construct_optimal(&cf, &spec).unwrap();
            let back = reconstruct_from_lengths(&kind, &spec, &params.lengths).unwrap();
            assert_abs_diff_eq!(back.l0, params.l0, epsilon = 1e-8);
            let dtheta = (back.theta - params.theta + PI).rem_euclid(TAU) - PI;
            assert!(dtheta.abs() < 1e-8, "{kind:?}: {} vs {}", back.theta, params.theta);
            let again = develop_polygon(&cf, &back, &spec).unwrap();
            for (a, b) in cf
                .equidistant_values(&poly.edge_lines)
                .iter()
                .zip(cf.equidistant_values(&again.edge_lines))
            {
                assert_abs_diff_eq!(*a, b, epsilon = 1e-8);
            }
        }
    }

    #[test]
    fn reconstruction_rejects_inconsistent_lengths() {
        let spec = AngleSpec::new(vec![2.0]).unwrap();
        let err = reconstruct_from_lengths(&CenterKind::Cusp, &spec, &[1e-3]).unwrap_err();
        assert!(matches!(err, Error::Reconstruction(_)), "{err:?}");
        assert!(reconstruct_from_lengths(&CenterKind::Cusp, &spec, &[0.0]).is_err());
        assert!(reconstruct_from_lengths(&CenterKind::Cusp, &spec, &[1.0, 1.0]).is_err());
        let spec3 = AngleSpec::regular(3, PI / 2.0).unwrap();
        let err = reconstruct_from_lengths(&CenterKind::Cone(PI / 2.0), &spec3, &[0.3, 0.3, 0.3]).unwrap_err();
        assert!(matches!(err, Error::Reconstruction(_)), "{err:?}");
    }
}
