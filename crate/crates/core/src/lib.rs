//! Geometry of rank-two Kleinian representations in the upper half-space
//! model: isometries and π-rotations, trace coordinates, the superbasis tree
//! with a Bowditch Q-condition search, Fermat points and Steiner trees of
//! geodesic triples, and minimal carrier graphs.

pub mod bqtree;
pub mod carrier;
pub mod charvar;
pub mod fermat;
pub mod hyp3;
pub mod json;
pub mod literal;
pub mod lorentz;
pub mod presets;
pub mod scan;
pub mod tolerance;

pub use num_complex::Complex64;
pub use tolerance::Tolerance;
