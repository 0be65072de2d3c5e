use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::geodesic::{common_perpendicular, pi_rotation, Geodesic};
use super::isometry::{axis_of, Isometry};
use super::point::ExtendedComplex;
use super::Hyp3Error;
use crate::tolerance::Tolerance;

/// Three π-rotations with `ξ = r3·r2`, `η = r2·r1` and `(ξη)⁻¹ = −r1·r3`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoxeterTriple {
    pub r1: Isometry,
    pub r2: Isometry,
    pub r3: Isometry,
}

/// Decomposes an irreducible pair into π-rotations.
///
/// `r2` is the π-rotation about the common perpendicular of the two axes,
/// oriented from the axis of `xi` toward the axis of `eta`. Crossing axes use the
/// perpendicular through the crossing point oriented by the right-hand rule
/// (axis of `xi`, axis of `eta`, perpendicular). Without two axes the normalized
/// commutator `ξη − ηξ` is used with a fixed sign convention.
pub fn coxeter_decomposition(
    xi: &Isometry,
    eta: &Isometry,
    tol: &Tolerance,
) -> Result<CoxeterTriple, Hyp3Error> {
    let comm = (*xi * *eta).sub(&(*eta * *xi));
    let scale = xi.norm_sqr() * eta.norm_sqr();
    let shared_fixed_point = || comm.det().norm() <= tol.residual * scale.max(1.0);
    let r2 = match (axis_of(xi, tol), axis_of(eta, tol)) {
        (Ok(a1), Ok(a2)) => match common_perpendicular(&a1, &a2, tol) {
            Ok(p) => pi_rotation(&p),
            Err(_) if shared_fixed_point() => return Err(Hyp3Error::CommonFixedPoint),
            Err(Hyp3Error::Intersecting) => pi_rotation(&crossing_perpendicular(&a1, &a2)?),
            Err(Hyp3Error::Parallel) => return Err(Hyp3Error::CommonFixedPoint),
            Err(e) => return Err(e),
        },
        _ if shared_fixed_point() => return Err(Hyp3Error::CommonFixedPoint),
        _ => normalized_commutator(&comm)?,
    };
    Ok(CoxeterTriple {
        r1: -(r2 * *eta),
        r2,
        r3: -(*xi * r2),
    })
}

fn crossing_perpendicular(a1: &Geodesic, a2: &Geodesic) -> Result<Geodesic, Hyp3Error> {
    let n = a1.normalizer();
    let (w, v) = match (n.apply_boundary(&a2.start), n.apply_boundary(&a2.end)) {
        (ExtendedComplex::Finite(w), ExtendedComplex::Finite(v)) => (w, v),
        _ => return Err(Hyp3Error::CommonFixedPoint),
    };
    // a1 is the upward vertical line; a2 crosses it at height √(|w||v|) heading
    // horizontally along v − w. The cross product of "up" with that heading is i·(v − w).
    let height = (w.norm() * v.norm()).sqrt();
    let heading = (v - w) / (v - w).norm();
    let normal = Complex64::i() * heading * height;
    let back = n.inverse();
    Geodesic::new(
        back.apply_boundary(&ExtendedComplex::Finite(-normal)),
        back.apply_boundary(&ExtendedComplex::Finite(normal)),
    )
}

fn normalized_commutator(comm: &Isometry) -> Result<Isometry, Hyp3Error> {
    let det = comm.det();
    let r = comm.scale(det.sqrt().inv());
    let scale = r.norm_sqr().sqrt();
    let lead = [r.m11, r.m12, r.m21, r.m22]
        .into_iter()
        .find(|z| z.norm() > 1e-9 * scale)
        .ok_or(Hyp3Error::CommonFixedPoint)?;
    let positive = if lead.re.abs() > 1e-12 * lead.norm() {
        lead.re > 0.0
    } else {
        lead.im > 0.0
    };
    Ok(if positive { r } else { -r })
}
