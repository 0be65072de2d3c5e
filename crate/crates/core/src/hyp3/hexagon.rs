use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::geodesic::{common_perpendicular, pi_rotation, ComplexDistance, Geodesic};
use super::isometry::Isometry;
use super::Hyp3Error;
use crate::tolerance::Tolerance;

/// A right-angled hexagon with sides `g1, c12, g2, c23, g3, c31`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RightAngledHexagon {
    pub sides: [Geodesic; 6],
    /// Complex length of each side, measured between its two neighbours.
    pub side_lengths: [ComplexDistance; 6],
    /// Sides whose real length vanishes within tolerance.
    pub degenerate_flags: [bool; 6],
    /// Cosine-rule residual at each side.
    pub residuals: [f64; 6],
}

/// Builds the hexagon cut out by three pairwise disjoint geodesics.
pub fn hexagon_of_triple(
    g1: &Geodesic,
    g2: &Geodesic,
    g3: &Geodesic,
    tol: &Tolerance,
) -> Result<RightAngledHexagon, Hyp3Error> {
    let sides = [
        *g1,
        common_perpendicular(g1, g2, tol)?,
        *g2,
        common_perpendicular(g2, g3, tol)?,
        *g3,
        common_perpendicular(g3, g1, tol)?,
    ];
    let rots = sides.map(|s| pi_rotation(&s));
    let side_lengths = std::array::from_fn(|n| side_length(&rots, n));
    let degenerate_flags = std::array::from_fn(|n| {
        let l: &ComplexDistance = &side_lengths[n];
        l.real_part.abs() <= tol.degenerate
    });
    Ok(RightAngledHexagon {
        sides,
        side_lengths,
        degenerate_flags,
        residuals: cosine_rule_residuals(&rots),
    })
}

/// `e^{l_n} = cosh l_n + sinh l_n` with `cosh l_n = −½ tr(r_{n+1} r_{n−1})` and
/// `sinh l_n = ½ i tr(r_{n+1} r_n r_{n−1})`.
fn side_length(r: &[Isometry; 6], n: usize) -> ComplexDistance {
    let next = r[(n + 1) % 6];
    let prev = r[(n + 5) % 6];
    let cosh = -(next * prev).trace() / 2.0;
    let sinh = Complex64::i() * (next * r[n] * prev).trace() / 2.0;
    ComplexDistance::from_exp(cosh + sinh)
}

/// Residuals of the hexagon cosine rule written with π-rotation traces,
/// `cosh l_n = cosh l_{n−2} cosh l_{n+2} + sinh l_{n−2} sinh l_{n+2} cosh l_{n+3}`.
///
/// The identity is insensitive to the sign (orientation) of each rotation.
pub fn cosine_rule_residuals(r: &[Isometry; 6]) -> [f64; 6] {
    let at = |k: isize| r[k.rem_euclid(6) as usize];
    std::array::from_fn(|n| {
        let n = n as isize;
        let lhs = -(at(n + 1) * at(n - 1)).trace() / 2.0
            - (at(n - 1) * at(n - 3)).trace() * (at(n - 3) * at(n + 1)).trace() / 4.0;
        let rhs = (at(n - 1) * at(n - 2) * at(n - 3)).trace()
            * (at(n - 3) * at(n + 2) * at(n + 1)).trace()
            * (at(n - 2) * at(n + 2)).trace()
            / 8.0;
        (lhs - rhs).norm()
    })
}
