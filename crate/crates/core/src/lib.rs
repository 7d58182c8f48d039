//! Minimal-perimeter hyperbolic polygons with prescribed angles around a
//! cusp, a cone point or a closed geodesic.
//!
//! The crate works in the Lorentz model. [`polygon`] parametrises the space
//! of polygons and its closure condition, [`optimize`] minimises the
//! perimeter numerically on that space, and [`construct`] builds the
//! minimiser directly as the polygon circumscribed about an equidistant
//! curve. [`spine`] turns the cusp case into lower bounds for spines of
//! punctured surfaces.

pub mod center;
pub mod construct;
pub mod document;
pub mod error;
pub mod lorentz;
pub mod optimize;
pub mod polygon;
pub mod render;
pub mod roots;
pub mod spine;

pub use center::{make_center, CenterFrame, CenterKind, EquidistantLevel};
pub use error::{Error, Result};
pub use lorentz::{boxtimes, exp_so21, incidence, lorentz_dot, poincare_project, Incidence, Isometry, Vec3L};
pub use polygon::{
    closure_residual, develop_polygon, jacobian_m, map_v, map_w, validate_membership, AngleSpec, JacobianM,
    residual_norm, MembershipReport, Polygon, PolygonParams,
};
pub use construct::{
    block_width, construct_optimal, cusp_edge_length, reconstruct_from_lengths, solve_equidistant_level,
    ConstructionCertificate,
};
pub use optimize::{
    boundary_escape, collapse_edge, criticality_certificate, minimize_perimeter, project_to_constraint, random_feasible,
    CriticalityCertificate, OptOptions, OptResult,
};
pub use spine::{per_end_minimum, spine_edge_count, spine_lower_bound, SurfaceType};
pub use document::{parse_angle_token, parse_angles, parse_center, Certificates, PolygonDocument};
pub use render::{render_svg, RenderOptions};
