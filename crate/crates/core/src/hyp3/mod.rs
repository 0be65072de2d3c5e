//! Upper half-space geometry: boundary points, points of H³, isometries as
//! SL(2,C) matrices, geodesics, π-rotations, complex distances, the Coxeter
//! decomposition of a pair of isometries and right-angled hexagons.

mod coxeter;
mod geodesic;
mod hexagon;
mod isometry;
mod point;

pub use coxeter::{coxeter_decomposition, CoxeterTriple};
pub use geodesic::{
    common_perpendicular, common_perpendicular_feet, complex_distance, cross_ratio,
    dist_point_geodesic, geodesic_distance, pi_rotation, pi_rotation_axis, ComplexDistance,
    Geodesic,
};
pub use hexagon::{cosine_rule_residuals, hexagon_of_triple, RightAngledHexagon};
pub use isometry::{axis_of, classify_isometry, translation_lengths, Isometry, IsometryClass};
pub use point::{dist_h3, ExtendedComplex, H3Point};

use thiserror::Error;

/// Failures of the hyperbolic geometry primitives.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Hyp3Error {
    #[error("determinant {0} is not 1 within tolerance")]
    BadDeterminant(num_complex::Complex64),
    #[error("point must satisfy c > 0 with finite coordinates")]
    InvalidPoint,
    #[error("geodesic endpoints coincide")]
    DegenerateGeodesic,
    #[error("isometry has no axis (parabolic or identity)")]
    NotAxial,
    #[error("isometry is the identity")]
    Identity,
    #[error("geodesics intersect")]
    Intersecting,
    #[error("geodesics share an endpoint")]
    Parallel,
    #[error("geodesics are not both orthogonal to the axis")]
    NotADoubleCross,
    #[error("cross ratio is undefined for these points")]
    DegenerateCrossRatio,
    #[error("isometries share a fixed point")]
    CommonFixedPoint,
    #[error("matrix is not a π-rotation")]
    NotAPiRotation,
}
