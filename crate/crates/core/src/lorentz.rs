//! Floating-point kernel for the Lorentz (hyperboloid) model of the
//! hyperbolic plane.
//!
//! Vectors of `R^{2,1}` carry the bilinear form `-x0*y0 + x1*y1 + x2*y2`.
//! Unit timelike vectors on the upper sheet are points, unit spacelike
//! vectors are oriented lines (the outward normal of the half-plane
//! `{y : <x, y> <= 0}`), and future lightlike vectors are horocycles
//! `{y : <x, y> = -1}`.
//!
//! The Lie algebra `so(2,1)` is identified with `(R^{2,1}, ⊠)` through
//! `hat(u) w = u ⊠ w`. Under this identification a point generates a
//! counterclockwise rotation about itself, a line generates a translation
//! along itself, and a horocycle generates a parabolic fixing its center.

use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance on `<v,v>` (after scaling `v` to unit Euclidean norm) used to
/// decide that a vector is lightlike.
pub const EPS_CLASS: f64 = 1e-9;
/// Tolerance for the isometry invariants `m^T J m = J`, `det m = 1`.
pub const EPS_ISO: f64 = 1e-9;

/// A vector of Lorentz 3-space; `x0` is the timelike coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 3]", into = "[f64; 3]")]
pub struct Vec3L {
    pub x0: f64,
    pub x1: f64,
    pub x2: f64,
}

impl From<[f64; 3]> for Vec3L {
    fn from(a: [f64; 3]) -> Self {
        Vec3L::new(a[0], a[1], a[2])
    }
}

impl From<Vec3L> for [f64; 3] {
    fn from(v: Vec3L) -> Self {
        [v.x0, v.x1, v.x2]
    }
}

impl From<Vector3<f64>> for Vec3L {
    fn from(v: Vector3<f64>) -> Self {
        Vec3L::new(v[0], v[1], v[2])
    }
}

impl From<Vec3L> for Vector3<f64> {
    fn from(v: Vec3L) -> Self {
        Vector3::new(v.x0, v.x1, v.x2)
    }
}

impl Add for Vec3L {
    type Output = Vec3L;
    fn add(self, o: Vec3L) -> Vec3L {
        Vec3L::new(self.x0 + o.x0, self.x1 + o.x1, self.x2 + o.x2)
    }
}

impl AddAssign for Vec3L {
    fn add_assign(&mut self, o: Vec3L) {
        *self = *self + o;
    }
}

impl Sub for Vec3L {
    type Output = Vec3L;
    fn sub(self, o: Vec3L) -> Vec3L {
        Vec3L::new(self.x0 - o.x0, self.x1 - o.x1, self.x2 - o.x2)
    }
}

impl Neg for Vec3L {
    type Output = Vec3L;
    fn neg(self) -> Vec3L {
        Vec3L::new(-self.x0, -self.x1, -self.x2)
    }
}

impl Mul<f64> for Vec3L {
    type Output = Vec3L;
    fn mul(self, s: f64) -> Vec3L {
        Vec3L::new(self.x0 * s, self.x1 * s, self.x2 * s)
    }
}

impl Mul<Vec3L> for f64 {
    type Output = Vec3L;
    fn mul(self, v: Vec3L) -> Vec3L {
        v * self
    }
}

/// Causal type of a nonzero Lorentz vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Causal {
    Timelike,
    Spacelike,
    Lightlike,
}

impl Vec3L {
    pub const fn new(x0: f64, x1: f64, x2: f64) -> Self {
        Vec3L { x0, x1, x2 }
    }

    /// The basepoint `(1, 0, 0)` of the hyperboloid.
    pub const fn origin() -> Self {
        Vec3L::new(1.0, 0.0, 0.0)
    }

    pub fn dot(&self, o: &Vec3L) -> f64 {
        lorentz_dot(*self, *o)
    }

    /// `<v, v>`.
    pub fn quad(&self) -> f64 {
        lorentz_dot(*self, *self)
    }

    pub fn euclid_norm(&self) -> f64 {
        (self.x0 * self.x0 + self.x1 * self.x1 + self.x2 * self.x2).sqrt()
    }

    pub fn euclid_dot(&self, o: &Vec3L) -> f64 {
        self.x0 * o.x0 + self.x1 * o.x1 + self.x2 * o.x2
    }

    pub fn max_abs(&self) -> f64 {
        self.x0.abs().max(self.x1.abs()).max(self.x2.abs())
    }

    pub fn is_finite(&self) -> bool {
        self.x0.is_finite() && self.x1.is_finite() && self.x2.is_finite()
    }

    /// Classifies `v` by the sign of `<v,v>` after scaling to unit Euclidean norm.
    pub fn classify(&self) -> Result<Causal> {
        let n = self.euclid_norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::ZeroVector);
        }
        let q = self.quad() / (n * n);
        Ok(if q.abs() <= EPS_CLASS {
            Causal::Lightlike
        } else if q < 0.0 {
            Causal::Timelike
        } else {
            Causal::Spacelike
        })
    }

    /// Checks that `v` is a point of the hyperboloid (`<v,v> = -1`, `x0 > 0`).
    pub fn check_point(&self) -> Result<()> {
        let q = self.quad();
        let scale = self.euclid_norm().powi(2).max(1.0);
        if self.x0 > 0.0 && (q + 1.0).abs() <= 1e-9 * scale {
            Ok(())
        } else {
            Err(Error::NotNormalized { expected: "point", norm: q })
        }
    }

    /// Checks that `v` is a unit spacelike vector (an oriented line).
    pub fn check_line(&self) -> Result<()> {
        let q = self.quad();
        let scale = self.euclid_norm().powi(2).max(1.0);
        if (q - 1.0).abs() <= 1e-9 * scale {
            Ok(())
        } else {
            Err(Error::NotNormalized { expected: "line", norm: q })
        }
    }

    /// Checks that `v` is a future lightlike vector (a horocycle).
    pub fn check_horocycle(&self) -> Result<()> {
        if self.x0 > 0.0 && self.classify()? == Causal::Lightlike {
            Ok(())
        } else {
            Err(Error::NotNormalized { expected: "horocycle", norm: self.quad() })
        }
    }

    /// Rescales a timelike vector onto the upper sheet.
    pub fn normalize_point(&self) -> Result<Vec3L> {
        let q = self.quad();
        if self.classify()? != Causal::Timelike {
            return Err(Error::NotNormalized { expected: "point", norm: q });
        }
        let s = (-q).sqrt();
        Ok(*self * (self.x0.signum() / s))
    }

    /// Rescales a spacelike vector to `<v,v> = 1`, keeping its orientation.
    pub fn normalize_line(&self) -> Result<Vec3L> {
        let q = self.quad();
        if self.classify()? != Causal::Spacelike {
            return Err(Error::NotNormalized { expected: "line", norm: q });
        }
        Ok(*self * (1.0 / q.sqrt()))
    }
}

/// Lorentz product `-u0 v0 + u1 v1 + u2 v2`.
pub fn lorentz_dot(u: Vec3L, v: Vec3L) -> f64 {
    -u.x0 * v.x0 + u.x1 * v.x1 + u.x2 * v.x2
}

/// Lorentzian cross product, characterised by `<u ⊠ v, w> = det(u, v, w)`.
///
/// It equals `J (u × v)` where `×` is the Euclidean cross product.
pub fn boxtimes(u: Vec3L, v: Vec3L) -> Vec3L {
    let c0 = u.x1 * v.x2 - u.x2 * v.x1;
    let c1 = u.x2 * v.x0 - u.x0 * v.x2;
    let c2 = u.x0 * v.x1 - u.x1 * v.x0;
    Vec3L::new(-c0, c1, c2)
}

/// The `so(2,1)` matrix of `w ↦ u ⊠ w`.
pub fn hat(u: Vec3L) -> Matrix3<f64> {
    Matrix3::new(
        0.0, u.x2, -u.x1, //
        u.x2, 0.0, -u.x0, //
        -u.x1, u.x0, 0.0,
    )
}

/// Inverse of [`hat`] on `so(2,1)`.
pub fn vee(k: &Matrix3<f64>) -> Vec3L {
    Vec3L::new(
        0.5 * (k[(2, 1)] - k[(1, 2)]),
        -0.5 * (k[(2, 0)] + k[(0, 2)]),
        0.5 * (k[(1, 0)] + k[(0, 1)]),
    )
}

/// `sinh(sqrt q)/sqrt q` continued analytically through `q <= 0`.
fn sinhc_sq(q: f64) -> f64 {
    if q.abs() < 1e-6 {
        1.0 + q / 6.0 + q * q / 120.0
    } else if q > 0.0 {
        let s = q.sqrt();
        s.sinh() / s
    } else {
        let s = (-q).sqrt();
        s.sin() / s
    }
}

/// `(cosh(sqrt q) - 1)/q` continued analytically through `q <= 0`.
fn coshc_sq(q: f64) -> f64 {
    if q.abs() < 1e-6 {
        0.5 + q / 24.0 + q * q / 720.0
    } else if q > 0.0 {
        let h = 0.5 * q.sqrt();
        2.0 * h.sinh().powi(2) / q
    } else {
        let h = 0.5 * (-q).sqrt();
        -2.0 * h.sin().powi(2) / q
    }
}

/// An orientation-preserving isometry of the hyperbolic plane, i.e. an
/// element of `SO_0(2,1)`. It doubles as a unit tangent frame: the frame
/// `m` sits at `m·(1,0,0)` with velocity `m·(0,-1,0)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Isometry {
    m: Matrix3<f64>,
}

impl Default for Isometry {
    fn default() -> Self {
        Isometry::identity()
    }
}

impl Isometry {
    pub fn identity() -> Self {
        Isometry { m: Matrix3::identity() }
    }

    /// Wraps a matrix after checking the `SO_0(2,1)` invariants.
    pub fn from_matrix(m: Matrix3<f64>) -> Result<Self> {
        let iso = Isometry { m };
        let defect = iso.lorentz_defect();
        if defect <= EPS_ISO * m.abs().max().powi(2).max(1.0)
            && (m.determinant() - 1.0).abs() <= EPS_ISO * m.abs().max().powi(3).max(1.0)
            && m[(0, 0)] > 0.0
        {
            Ok(iso)
        } else {
            Err(Error::Domain(format!(
                "matrix is not in SO0(2,1) (defect {defect:.3e})"
            )))
        }
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.m
    }

    /// `‖m^T J m − J‖_∞`.
    pub fn lorentz_defect(&self) -> f64 {
        let j = Matrix3::from_diagonal(&Vector3::new(-1.0, 1.0, 1.0));
        (self.m.transpose() * j * self.m - j).abs().max()
    }

    pub fn apply(&self, v: Vec3L) -> Vec3L {
        (self.m * Vector3::from(v)).into()
    }

    /// Exact inverse `J m^T J`.
    pub fn inverse(&self) -> Isometry {
        let mut t = self.m.transpose();
        for i in 1..3 {
            t[(0, i)] = -t[(0, i)];
            t[(i, 0)] = -t[(i, 0)];
        }
        Isometry { m: t }
    }

    /// The base point of the frame.
    pub fn point(&self) -> Vec3L {
        self.apply(Vec3L::origin())
    }

    /// The unit velocity of the frame.
    pub fn velocity(&self) -> Vec3L {
        self.apply(Vec3L::new(0.0, -1.0, 0.0))
    }

    /// The oriented line through the frame, tangent to its velocity.
    pub fn line(&self) -> Vec3L {
        self.apply(Vec3L::new(0.0, 0.0, 1.0))
    }

    /// `exp(hat(u))` for an arbitrary generator, including `u = 0`.
    pub fn exp(u: Vec3L) -> Isometry {
        let k = hat(u);
        let q = u.quad();
        let m = Matrix3::identity() + k * sinhc_sq(q) + (k * k) * coshc_sq(q);
        Isometry { m }
    }

    /// Principal logarithm: the generator `u` with `exp(hat(u)) = self`.
    ///
    /// Fails for elliptic elements of rotation angle `π`, where the
    /// logarithm is not unique.
    pub fn log(&self) -> Result<Vec3L> {
        let m = &self.m;
        // J m − (J m)^T = 2 S(q) [u]_x.
        let jm = |i: usize, j: usize| if i == 0 { -m[(i, j)] } else { m[(i, j)] };
        let w = Vec3L::new(
            0.5 * (jm(2, 1) - jm(1, 2)),
            0.5 * (jm(0, 2) - jm(2, 0)),
            0.5 * (jm(1, 0) - jm(0, 1)),
        );
        let sigma = w.quad();
        let c = 0.5 * (m.trace() - 1.0);
        // hyperbolic and parabolic elements have c >= 1; c < 0 with w ≈ 0 is a half-turn
        if c < 0.0 && sigma.abs().sqrt() < 1e-12 * m.abs().max().max(1.0) {
            return Err(Error::OutOfChart);
        }
        let s = if sigma >= 0.0 {
            let root = sigma.sqrt();
            let phi = root.asinh();
            if phi < 1e-8 {
                1.0
            } else {
                root / phi
            }
        } else {
            let root = (-sigma).sqrt();
            let phi = root.atan2(c);
            if phi < 1e-8 {
                1.0
            } else {
                root / phi
            }
        };
        Ok(w * (1.0 / s))
    }
}

impl Mul for Isometry {
    type Output = Isometry;
    fn mul(self, o: Isometry) -> Isometry {
        Isometry { m: self.m * o.m }
    }
}

impl Mul<Vec3L> for Isometry {
    type Output = Vec3L;
    fn mul(self, v: Vec3L) -> Vec3L {
        self.apply(v)
    }
}

/// One-parameter subgroup `t ↦ exp(t·hat(v))`.
///
/// Timelike `v` rotates counterclockwise about `v` by `t·sqrt(-<v,v>)`,
/// spacelike `v` translates along the line `v` by `t·sqrt(<v,v>)`, and
/// lightlike `v` is parabolic fixing the ideal point of `v`.
pub fn exp_so21(v: Vec3L, t: f64) -> Result<Isometry> {
    if v.euclid_norm() == 0.0 || !v.is_finite() {
        return Err(Error::ZeroVector);
    }
    if !t.is_finite() {
        return Err(Error::Domain(format!("non-finite parameter {t}")));
    }
    Ok(Isometry::exp(v * t))
}

/// `acosh(1 + x)` for `x >= 0`, accurate when `x` is small.
pub fn acosh1p(x: f64) -> f64 {
    let x = x.max(0.0);
    (x + (x * (2.0 + x)).sqrt()).ln_1p()
}

/// Hyperbolic distance between two points, stable for nearby points.
pub fn point_distance(u: Vec3L, v: Vec3L) -> f64 {
    // <u−v, u−v> = 4 sinh^2(d/2)
    let d = u - v;
    2.0 * (0.5 * d.quad().max(0.0).sqrt()).asinh()
}

/// Relative position of two Lorentz vectors, following the incidence
/// dictionary between Lorentz products and hyperbolic geometry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Incidence {
    /// Two points at the given distance.
    PointPoint { distance: f64 },
    /// A point and an oriented line. The signed distance is negative iff
    /// the point lies in the line's half-plane.
    PointLine { signed_distance: f64 },
    /// A point and a horocycle; `product = -1` on the horocycle, `> -1`
    /// inside the horodisc.
    PointHorocycle { product: f64 },
    /// A horocycle and an oriented line.
    HorocycleLine { product: f64, relation: HorocycleLine },
    /// Two oriented lines meeting at an angle.
    LinesIntersecting { angle: f64 },
    /// Two disjoint (or asymptotic, distance 0) oriented lines; `compatible`
    /// when one half-plane contains the other.
    LinesDisjoint { distance: f64, compatible: bool },
    /// Two horocycles.
    HorocycleHorocycle { product: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HorocycleLine {
    /// The horocycle is centered at an ideal endpoint of the line.
    CenteredAtEndpoint,
    /// Tangent; `horodisc_in_halfplane` when the product is `-1`.
    Tangent { horodisc_in_halfplane: bool },
    Secant,
    Disjoint,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Role {
    Point,
    Line,
    Horocycle,
}

fn role(v: &Vec3L) -> Result<Role> {
    match v.classify()? {
        Causal::Timelike => v.check_point().map(|_| Role::Point),
        Causal::Spacelike => v.check_line().map(|_| Role::Line),
        Causal::Lightlike => v.check_horocycle().map(|_| Role::Horocycle),
    }
}

const EPS_INCIDENCE: f64 = 1e-9;

/// Geometric relation between two normalized Lorentz vectors.
pub fn incidence(u: Vec3L, v: Vec3L) -> Result<Incidence> {
    let (ru, rv) = (role(&u)?, role(&v)?);
    let p = lorentz_dot(u, v);
    Ok(match (ru, rv) {
        (Role::Point, Role::Point) => Incidence::PointPoint { distance: point_distance(u, v) },
        (Role::Point, Role::Line) | (Role::Line, Role::Point) => {
            Incidence::PointLine { signed_distance: p.asinh() }
        }
        (Role::Point, Role::Horocycle) | (Role::Horocycle, Role::Point) => {
            Incidence::PointHorocycle { product: p }
        }
        (Role::Horocycle, Role::Line) | (Role::Line, Role::Horocycle) => {
            let relation = if p.abs() <= EPS_INCIDENCE {
                HorocycleLine::CenteredAtEndpoint
            } else if (p.abs() - 1.0).abs() <= EPS_INCIDENCE {
                HorocycleLine::Tangent { horodisc_in_halfplane: p < 0.0 }
            } else if p.abs() < 1.0 {
                HorocycleLine::Secant
            } else {
                HorocycleLine::Disjoint
            };
            Incidence::HorocycleLine { product: p, relation }
        }
        (Role::Line, Role::Line) => {
            if p.abs() < 1.0 - EPS_INCIDENCE {
                Incidence::LinesIntersecting { angle: p.acos() }
            } else {
                Incidence::LinesDisjoint {
                    distance: acosh1p(p.abs() - 1.0),
                    compatible: p > 0.0,
                }
            }
        }
        (Role::Horocycle, Role::Horocycle) => Incidence::HorocycleHorocycle { product: p },
    })
}

/// Poincaré disc coordinates of a point of the hyperboloid.
pub fn poincare_project(p: Vec3L) -> Result<(f64, f64)> {
    p.check_point()?;
    let d = 1.0 + p.x0;
    Ok((p.x1 / d, p.x2 / d))
}

/// Inverse of [`poincare_project`].
pub fn poincare_lift(x: f64, y: f64) -> Vec3L {
    let r2 = x * x + y * y;
    let d = 1.0 - r2;
    Vec3L::new((1.0 + r2) / d, 2.0 * x / d, 2.0 * y / d)
}
