//! The distinguished object `c` (cusp, cone point or geodesic) and its
//! canonical Lorentz frame.
//!
//! All three kinds share the base line `e0 = (0,0,1)` and base point
//! `p0 = (1,0,0)`. The geodesic `g(s) = (cosh s, -sinh s, 0)` runs along
//! `e0` away from `c`, and the holonomy `γ = exp(x0, s)` moves `p0` in the
//! direction `-e0`, so that polygons wind counterclockwise around `c`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lorentz::{exp_so21, Isometry, Vec3L};

/// What the polygons enclose.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "param", rename_all = "lowercase")]
pub enum CenterKind {
    Cusp,
    /// Cone point of angle `alpha ∈ (0, 2π)`.
    Cone(f64),
    /// Closed geodesic of length `r > 0`.
    Geodesic(f64),
}

impl CenterKind {
    pub fn validate(&self) -> Result<()> {
        match *self {
            CenterKind::Cusp => Ok(()),
            CenterKind::Cone(a) if a > 0.0 && a < 2.0 * std::f64::consts::PI => Ok(()),
            CenterKind::Cone(a) => Err(Error::InvalidCenter(format!(
                "cone angle {a} outside (0, 2pi)"
            ))),
            CenterKind::Geodesic(r) if r > 0.0 && r.is_finite() => Ok(()),
            CenterKind::Geodesic(r) => Err(Error::InvalidCenter(format!(
                "geodesic length {r} must be positive"
            ))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            CenterKind::Cusp => "cusp",
            CenterKind::Cone(_) => "cone",
            CenterKind::Geodesic(_) => "geodesic",
        }
    }

    /// `-<x0, x0>`: `1` for a cone point, `0` for a cusp, `-1` for a geodesic.
    pub fn causal_sign(&self) -> f64 {
        match self {
            CenterKind::Cone(_) => 1.0,
            CenterKind::Cusp => 0.0,
            CenterKind::Geodesic(_) => -1.0,
        }
    }

    /// Whether `l0` is in the chart interval `I` of this kind.
    pub fn l0_in_interval(&self, l0: f64) -> bool {
        match self {
            CenterKind::Cusp => l0.is_finite(),
            CenterKind::Cone(_) => l0 >= 0.0 && l0.is_finite(),
            CenterKind::Geodesic(_) => l0 > 0.0 && l0.is_finite(),
        }
    }
}

/// Signed common value `<e_i, x0>` of lines tangent to one equidistant.
///
/// Negative when `x0` lies on the half-plane side of the lines.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct EquidistantLevel(pub f64);

/// Canonical frame attached to a center.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CenterFrame {
    pub kind: CenterKind,
    pub x0: Vec3L,
    pub e0: Vec3L,
    pub p0: Vec3L,
    pub gamma: Isometry,
    /// Parameter `s` with `gamma = exp_so21(x0, s)`.
    pub holonomy: f64,
}

pub fn make_center(kind: CenterKind) -> Result<CenterFrame> {
    kind.validate()?;
    let e0 = Vec3L::new(0.0, 0.0, 1.0);
    let p0 = Vec3L::origin();
    let (x0, s) = match kind {
        CenterKind::Cusp => (Vec3L::new(1.0, 1.0, 0.0), 1.0),
        CenterKind::Cone(alpha) => (p0, alpha),
        CenterKind::Geodesic(r) => (Vec3L::new(0.0, 1.0, 0.0), r),
    };
    Ok(CenterFrame {
        kind,
        x0,
        e0,
        p0,
        gamma: exp_so21(x0, s)?,
        holonomy: s,
    })
}

impl CenterFrame {
    /// `q0 = g(l0)`.
    pub fn base_point(&self, l0: f64) -> Result<Vec3L> {
        if !self.kind.l0_in_interval(l0) {
            return Err(Error::Domain(format!(
                "l0 = {l0} outside the chart interval of a {}",
                self.kind.name()
            )));
        }
        Ok(Vec3L::new(l0.cosh(), -l0.sinh(), 0.0))
    }

    /// Element `exp(x0, s)` of the one-parameter group containing `gamma`.
    /// Its orbits are the equidistants to the center.
    pub fn flow(&self, s: f64) -> Isometry {
        Isometry::exp(self.x0 * s)
    }

    pub fn equidistant_values(&self, lines: &[Vec3L]) -> Vec<f64> {
        lines.iter().map(|e| e.dot(&self.x0)).collect()
    }

    /// `max − min` of [`Self::equidistant_values`]; zero iff the lines are
    /// tangent to one equidistant with consistent orientation.
    pub fn tangency_spread(&self, lines: &[Vec3L]) -> Result<f64> {
        if lines.is_empty() {
            return Err(Error::Domain("tangency spread of an empty line list".into()));
        }
        let vals = self.equidistant_values(lines);
        let (lo, hi) = vals
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
        Ok(hi - lo)
    }
}
