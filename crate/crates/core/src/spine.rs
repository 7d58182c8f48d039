//! Lower bounds for the length of spines of punctured hyperbolic surfaces.
//!
//! Cutting a punctured surface along a minimal spine leaves one cusped
//! polygon per puncture with all angles `2π/3`. Each edge of the trivalent
//! spine borders two such polygons, and every polygon edge is at least
//! `log 3` long, which gives the bound.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::center::{make_center, CenterKind};
use crate::construct::{construct_optimal, cusp_edge_length};
use crate::error::{Error, Result};
use crate::polygon::AngleSpec;

/// Topological type of a surface of genus `g` with `p` punctures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceType {
    genus: u32,
    punctures: u32,
}

impl SurfaceType {
    pub fn new(genus: u32, punctures: u32) -> Result<Self> {
        if punctures == 0 {
            return Err(Error::InvalidSurface("at least one puncture is required".into()));
        }
        if genus == 0 && punctures < 3 {
            return Err(Error::InvalidSurface(format!(
                "a sphere with {punctures} punctures carries no hyperbolic metric"
            )));
        }
        Ok(SurfaceType { genus, punctures })
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn punctures(&self) -> u32 {
        self.punctures
    }

    pub fn euler_characteristic(&self) -> i64 {
        2 - 2 * self.genus as i64 - self.punctures as i64
    }
}

/// Number of edges `−3χ = 3(2g + p − 2)` of a trivalent spine.
pub fn spine_edge_count(st: &SurfaceType) -> u64 {
    (-3 * st.euler_characteristic()) as u64
}

/// `3(2g + p − 2)·log 3`.
pub fn spine_lower_bound(st: &SurfaceType) -> f64 {
    spine_edge_count(st) as f64 * 3f64.ln()
}

/// Minimal perimeter of a polygon with `n` angles equal to `2π/3` around a
/// center of the given kind.
pub fn per_end_minimum(n: usize, kind: &CenterKind) -> Result<f64> {
    let beta = 2.0 * PI / 3.0;
    if n == 0 {
        return Err(Error::InvalidAngles("at least one angle is required".into()));
    }
    match kind {
        CenterKind::Cusp => Ok(n as f64 * cusp_edge_length(beta)?),
        _ => {
            let cf = make_center(*kind)?;
            let (params, _, _) = construct_optimal(&cf, &AngleSpec::regular(n, beta)?)?;
            Ok(params.perimeter())
        }
    }
}
