//! Fermat points and Steiner trees: triangles in a hyperbolic plane and
//! triples of pairwise disjoint geodesics in H³.

mod descent;
mod steiner;
mod triangle;
mod triple;

pub use steiner::{steiner_tree, SteinerKind, SteinerTree};
pub use triangle::{
    classify_triangle, fermat_point_triangle, Triangle, TriangleClass, TriangleFermat,
};
pub use triple::{
    fermat_point_triple, planar_point, FermatPointKind, GeodesicTriple, PlanarPoint, TripleFermat,
};

pub(crate) use descent::{minimize_sum, Target};

use thiserror::Error;

use crate::hyp3::Hyp3Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FermatError {
    #[error("triangle is degenerate (coincident or collinear vertices)")]
    DegenerateTriangle,
    #[error("geodesic triple is not in general position: {0}")]
    GenericityViolation(String),
    #[error(transparent)]
    Geometry(#[from] Hyp3Error),
}

/// Angle between two unit tangent vectors at the same point.
pub(crate) fn angle_between(u: &crate::lorentz::Lv, v: &crate::lorentz::Lv) -> f64 {
    u.dot(v).clamp(-1.0, 1.0).acos()
}

pub(crate) const TWO_PI_3: f64 = 2.0 * std::f64::consts::PI / 3.0;
