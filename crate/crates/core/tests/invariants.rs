use std::f64::consts::PI;

use hypolymin::polygon::develop_from;
use hypolymin::*;
use nalgebra::Matrix3;
use proptest::prelude::*;

fn vec3() -> impl Strategy<Value = Vec3L> {
    (-2.0..2.0f64, -2.0..2.0f64, -2.0..2.0f64).prop_map(|(a, b, c)| Vec3L::new(a, b, c))
}

fn kind() -> impl Strategy<Value = CenterKind> {
    prop_oneof![
        Just(CenterKind::Cusp),
        (0.2..3.0f64).prop_map(CenterKind::Cone),
        (0.2..3.0f64).prop_map(CenterKind::Geodesic),
    ]
}

/// A center kind with a feasible angle list.
fn model() -> impl Strategy<Value = (CenterKind, AngleSpec)> {
    (kind(), prop::collection::vec(0.3..2.8f64, 3..=6))
        .prop_filter_map("infeasible", |(k, beta)| {
            let spec = AngleSpec::new(beta).ok()?;
            spec.check_feasible(&k).ok()?;
            Some((k, spec))
        })
}

fn close(a: Vec3L, b: Vec3L, tol: f64) -> bool {
    (a - b).max_abs() <= tol * (1.0 + a.max_abs().max(b.max_abs()))
}

fn det(u: Vec3L, v: Vec3L, w: Vec3L) -> f64 {
    Matrix3::new(u.x0, v.x0, w.x0, u.x1, v.x1, w.x1, u.x2, v.x2, w.x2).determinant()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn isometries_preserve_the_form(g in vec3(), u in vec3(), v in vec3()) {
        let m = Isometry::exp(g);
        let (a, b) = (lorentz_dot(m * u, m * v), lorentz_dot(u, v));
        prop_assert!((a - b).abs() <= 1e-9 * (1.0 + m.matrix().abs().max().powi(2)));
        prop_assert!(m.lorentz_defect() <= 1e-9 * m.matrix().abs().max().powi(2).max(1.0));
    }

    #[test]
    fn one_parameter_groups(u in vec3(), s in -1.5..1.5f64, t in -1.5..1.5f64) {
        let lhs = Isometry::exp(u * s) * Isometry::exp(u * t);
        let rhs = Isometry::exp(u * (s + t));
        let scale = rhs.matrix().abs().max();
        prop_assert!((lhs.matrix() - rhs.matrix()).abs().max() <= 1e-12 * scale * scale);
        let inv = Isometry::exp(u) * Isometry::exp(-u);
        prop_assert!((inv.matrix() - Matrix3::identity()).abs().max() <= 1e-12 * scale * scale);
    }

    #[test]
    fn boxtimes_identities(u in vec3(), v in vec3(), w in vec3()) {
        // triple product and antisymmetry
        prop_assert!((lorentz_dot(boxtimes(u, v), w) - det(u, v, w)).abs() <= 1e-12 * 100.0);
        prop_assert!(close(boxtimes(u, v), -boxtimes(v, u), 1e-14));
        // Jacobi
        let j = boxtimes(u, boxtimes(v, w)) + boxtimes(v, boxtimes(w, u)) + boxtimes(w, boxtimes(u, v));
        prop_assert!(j.max_abs() <= 1e-12 * 100.0);
    }

    #[test]
    fn hat_is_equivariant(g in vec3(), u in vec3()) {
        let m = Isometry::exp(g);
        let conj = m.matrix() * hypolymin::lorentz::hat(u) * m.inverse().matrix();
        let direct = hypolymin::lorentz::hat(m * u);
        let scale = m.matrix().abs().max().powi(2);
        prop_assert!((conj - direct).abs().max() <= 1e-11 * scale);
    }

    #[test]
    fn log_inverts_exp(u in vec3()) {
        // stay away from the half-turn, where log is not defined
        let q = lorentz_dot(u, u);
        prop_assume!(q <= 0.0 || q.sqrt() < PI - 0.1);
        let back = Isometry::exp(u).log().unwrap();
        prop_assert!(close(back, u, 1e-9), "{back:?} vs {u:?}");
    }

    #[test]
    fn members_are_well_formed((k, spec) in model(), seed in 0..1000u64) {
        let cf = make_center(k).unwrap();
        let p = random_feasible(&cf, &spec, seed).unwrap();
        let poly = develop_polygon(&cf, &p, &spec).unwrap();
        prop_assert!(validate_membership(&cf, &poly).is_member());
        prop_assert!(residual_norm(&cf, &p, &spec).unwrap() <= 1e-9);
        prop_assert!((poly.perimeter() - p.lengths.iter().sum::<f64>()).abs() == 0.0);
        // relative to the size of the coordinates: far from the origin the
        // development loses absolute accuracy
        let rel = |x: f64, u: Vec3L, v: Vec3L| x.abs() / (u.euclid_norm() * v.euclid_norm());
        for i in 0..spec.len() {
            let (a, b, e) = (poly.vertex(i), poly.vertex(i + 1), poly.edge_lines[i]);
            prop_assert!(rel(lorentz_dot(a, a) + 1.0, a, a) <= 1e-9);
            prop_assert!(rel(lorentz_dot(e, e) - 1.0, e, e) <= 1e-9);
            // both ends of edge i lie on its line
            prop_assert!(rel(lorentz_dot(a, e), a, e) <= 1e-9);
            prop_assert!(rel(lorentz_dot(b, e), b, e) <= 1e-9);
        }
    }

    #[test]
    fn tangent_space_is_the_kernel((k, spec) in model(), seed in 0..1000u64) {
        let cf = make_center(k).unwrap();
        let p = random_feasible(&cf, &spec, seed).unwrap();
        let jac = jacobian_m(&cf, &p, &spec).unwrap();
        let z = jac.null_space();
        prop_assert_eq!(z.ncols(), spec.len() - 1);
        let x = p.to_vector();
        for c in 0..z.ncols() {
            let dir = z.column(c).into_owned();
            prop_assert!((&jac.m * &dir).norm() <= 1e-10 * jac.m.norm());
            // moving along a kernel direction keeps the residual second order
            let t = 1e-4;
            let r = closure_residual(&cf, &PolygonParams::from_vector(&(&x + &dir * t)), &spec).unwrap();
            prop_assert!(r.max_abs() <= 1e-4 * jac.m.norm().powi(2) * t);
        }
    }

    #[test]
    fn construction_beats_random_members((k, spec) in model(), seed in 0..1000u64) {
        let cf = make_center(k).unwrap();
        let (best, poly, cert) = construct_optimal(&cf, &spec).unwrap();
        prop_assert!(cert.residual <= 1e-9);
        prop_assert!(cert.tangency_spread <= 1e-9 * (1.0 + cert.level.0.abs()));
        prop_assert!(criticality_certificate(&cf, &poly).unwrap().critical);
        let other = random_feasible(&cf, &spec, seed).unwrap();
        prop_assert!(best.perimeter() <= other.perimeter() + 1e-9);
        // and the lengths alone determine it
        let again = reconstruct_from_lengths(&k, &spec, &best.lengths).unwrap();
        prop_assert!((again.l0 - best.l0).abs() <= 1e-7 * (1.0 + best.l0.abs()));
    }

    #[test]
    fn documents_round_trip((k, spec) in model(), seed in 0..1000u64) {
        let cf = make_center(k).unwrap();
        let p = random_feasible(&cf, &spec, seed).unwrap();
        let doc = PolygonDocument::build(k, &spec, &p).unwrap();
        let back = PolygonDocument::from_json(&doc.to_json().unwrap()).unwrap();
        prop_assert_eq!(back, doc);
    }

    #[test]
    fn angle_tokens_read_decimals(v in 1e-3..10.0f64) {
        prop_assert_eq!(parse_angle_token(&format!("{v}")).unwrap(), v);
        let third = parse_angle_token(&format!("{v}*pi/3")).unwrap();
        prop_assert!((third - v * PI / 3.0).abs() <= 1e-15 * third);
    }
}

#[test]
fn cone_chart_is_redundant_at_the_cone_point() {
    // with the base point at the cone point, θ only rotates the polygon
    // about it: the residual and all distances are independent of θ
    let alpha = 5.0;
    let cf = make_center(CenterKind::Cone(alpha)).unwrap();
    let (b1, b2, b3) = (1.0, 1.2, 2.0);
    let spec = AngleSpec::new(vec![b1, b2, b3]).unwrap();
    let phi = b3 + alpha - 2.0 * PI;
    let side = |a: f64, b: f64, c: f64| ((a.cos() + b.cos() * c.cos()) / (b.sin() * c.sin())).acosh();
    let lengths = vec![side(b2, b1, phi), side(phi, b1, b2), side(b1, b2, phi)];
    let dist = |a: Vec3L, b: Vec3L| (-lorentz_dot(a, b)).max(1.0).acosh();
    let mut reference: Option<Vec<f64>> = None;
    for theta in [0.0, 0.7, 2.0, -1.3] {
        let p = PolygonParams::new(0.0, theta, lengths.clone());
        assert!(residual_norm(&cf, &p, &spec).unwrap() < 1e-12);
        let poly = develop_from(map_v(&cf, 0.0, theta).unwrap(), cf.gamma, &lengths, &spec).unwrap();
        assert!(dist(poly.vertices[0], cf.p0) < 1e-12);
        let d: Vec<f64> = (0..3).flat_map(|i| (i + 1..4).map(move |j| (i, j))).map(|(i, j)| dist(poly.vertex(i), poly.vertex(j))).collect();
        match &reference {
            None => reference = Some(d),
            Some(r) => {
                for (a, b) in r.iter().zip(&d) {
                    assert!((a - b).abs() < 1e-12, "{theta}: {a} {b} {:e}", a - b);
                }
            }
        }
    }
}

#[test]
fn conjugating_by_the_flow_preserves_everything() {
    // the flow of the center commutes with the holonomy, so moving a polygon
    // along it gives another polygon with the same lengths and levels
    for k in [CenterKind::Cusp, CenterKind::Cone(1.3), CenterKind::Geodesic(0.8)] {
        let cf = make_center(k).unwrap();
        let spec = AngleSpec::new(vec![1.0, 2.0, 1.5, 2.2]).unwrap();
        let p = random_feasible(&cf, &spec, 11).unwrap();
        let poly = develop_polygon(&cf, &p, &spec).unwrap();
        let flow = cf.flow(0.37);
        let moved = develop_from(flow * poly.start_frame, cf.gamma, &p.lengths, &spec).unwrap();
        for (a, b) in poly.edge_lines.iter().zip(&moved.edge_lines) {
            assert!((lorentz_dot(*a, cf.x0) - lorentz_dot(*b, cf.x0)).abs() < 1e-10);
        }
        assert!(validate_membership(&cf, &moved).is_member());
        let closes = moved.end_frame * (cf.gamma * moved.start_frame).inverse();
        assert!(closes.log().unwrap().max_abs() < 1e-9);
    }
}
