//! Convexity of ordinary cyclic polygons.
//!
//! The primary classifier, [`classify_by_angles`], decides convexity in one
//! pass over the central angles of the polygon. Two slower, independent
//! routes are provided for cross-checking: the determinant sign test in
//! [`determinants`] and the geometric oracles in [`oracle`]. The
//! [`patterns`] module produces explicit non-convexity certificates, and
//! [`generators`], [`fuzz`] and [`bench`] drive differential testing and
//! timing.

pub mod angles;
pub mod bench;
pub mod determinants;
mod error;
pub mod fuzz;
pub mod generators;
pub mod io;
pub mod oracle;
pub mod patterns;
pub mod svg;

pub use angles::{
    analyze_profile, analyze_vertices, canonicalize, central_angles, classify_by_angles, fit_circumcircle, lift_sigma,
    profile_to_vertices, Alternative, Analysis, AngleProfile, CanonicalPolygon, Circle, Condition, ConvexityVerdict,
    SigmaSequence, Tolerance, Vertex, EPS_GEOM, EPS_WINDING,
};
pub use error::{Error, Result};
