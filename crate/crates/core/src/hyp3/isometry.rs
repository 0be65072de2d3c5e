use std::f64::consts::{PI, TAU};
use std::ops::{Mul, Neg};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::geodesic::{ComplexDistance, Geodesic};
use super::point::{ExtendedComplex, H3Point};
use super::Hyp3Error;
use crate::tolerance::Tolerance;

const DET_TOL: f64 = 1e-12;

/// An orientation-preserving isometry of H³, stored as an SL(2,C) lift.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Isometry {
    #[serde(with = "crate::json::complex")]
    pub m11: Complex64,
    #[serde(with = "crate::json::complex")]
    pub m12: Complex64,
    #[serde(with = "crate::json::complex")]
    pub m21: Complex64,
    #[serde(with = "crate::json::complex")]
    pub m22: Complex64,
}

/// Conjugacy type of an isometry, read off from its trace.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum IsometryClass {
    Identity,
    Loxodromic,
    Parabolic,
    Elliptic,
}

impl Isometry {
    /// Builds an isometry, rejecting matrices whose determinant is not 1.
    pub fn new(
        m11: Complex64,
        m12: Complex64,
        m21: Complex64,
        m22: Complex64,
    ) -> Result<Self, Hyp3Error> {
        let m = Self { m11, m12, m21, m22 };
        let det = m.det();
        if (det - 1.0).norm() <= DET_TOL * m.norm_sqr().max(1.0) {
            Ok(m)
        } else {
            Err(Hyp3Error::BadDeterminant(det))
        }
    }

    /// Rescales an invertible matrix by `1/√det` so that it lies in SL(2,C).
    pub fn normalized(
        m11: Complex64,
        m12: Complex64,
        m21: Complex64,
        m22: Complex64,
    ) -> Result<Self, Hyp3Error> {
        let det = m11 * m22 - m12 * m21;
        if det.norm() == 0.0 || !det.is_finite() {
            return Err(Hyp3Error::BadDeterminant(det));
        }
        let s = det.sqrt().inv();
        Ok(Self::raw(m11 * s, m12 * s, m21 * s, m22 * s))
    }

    pub(crate) fn raw(m11: Complex64, m12: Complex64, m21: Complex64, m22: Complex64) -> Self {
        Self { m11, m12, m21, m22 }
    }

    pub fn identity() -> Self {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        Self::raw(one, zero, zero, one)
    }

    /// `diag(λ, 1/λ)`.
    pub fn diagonal(lambda: Complex64) -> Self {
        let zero = Complex64::new(0.0, 0.0);
        Self::raw(lambda, zero, zero, lambda.inv())
    }

    pub fn det(&self) -> Complex64 {
        self.m11 * self.m22 - self.m12 * self.m21
    }

    pub fn trace(&self) -> Complex64 {
        self.m11 + self.m22
    }

    /// Squared Frobenius norm.
    pub fn norm_sqr(&self) -> f64 {
        self.m11.norm_sqr() + self.m12.norm_sqr() + self.m21.norm_sqr() + self.m22.norm_sqr()
    }

    /// Inverse, using the adjugate since the determinant is 1.
    pub fn inverse(&self) -> Self {
        Self::raw(self.m22, -self.m12, -self.m21, self.m11)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::raw(self.m11 * s, self.m12 * s, self.m21 * s, self.m22 * s)
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::raw(
            self.m11 - other.m11,
            self.m12 - other.m12,
            self.m21 - other.m21,
            self.m22 - other.m22,
        )
    }

    /// Largest entrywise difference.
    pub fn max_diff(&self, other: &Self) -> f64 {
        let d = self.sub(other);
        d.m11
            .norm()
            .max(d.m12.norm())
            .max(d.m21.norm())
            .max(d.m22.norm())
    }

    /// Difference as elements of PSL(2,C): the smaller of `|self − other|` and `|self + other|`.
    pub fn projective_diff(&self, other: &Self) -> f64 {
        self.max_diff(other).min(self.max_diff(&-*other))
    }

    pub fn conjugate_by(&self, g: &Self) -> Self {
        *g * *self * g.inverse()
    }

    /// Action on the boundary sphere, `u ↦ (m11 u + m12)/(m21 u + m22)`.
    pub fn apply_boundary(&self, u: &ExtendedComplex) -> ExtendedComplex {
        match u {
            ExtendedComplex::Infinity => {
                if self.m21.norm() == 0.0 {
                    ExtendedComplex::Infinity
                } else {
                    ExtendedComplex::from(self.m11 / self.m21)
                }
            }
            ExtendedComplex::Finite(z) => {
                let num = self.m11 * z + self.m12;
                let den = self.m21 * z + self.m22;
                if den.norm() == 0.0 {
                    ExtendedComplex::Infinity
                } else {
                    ExtendedComplex::from(num / den)
                }
            }
        }
    }

    /// Action on H³ through the quaternion formula for `z + t j`.
    pub fn apply_point(&self, p: &H3Point) -> H3Point {
        let z = p.horizontal();
        let t = p.c;
        let num = self.m11 * z + self.m12;
        let den = self.m21 * z + self.m22;
        let scale = den.norm_sqr() + self.m21.norm_sqr() * t * t;
        let w = (num * den.conj() + self.m11 * self.m21.conj() * t * t) / scale;
        H3Point::from_parts(w, t / scale)
    }

    fn is_plus_minus_identity(&self, tol: f64) -> bool {
        let scale = self.norm_sqr().sqrt().max(1.0);
        let off = self.m12.norm().max(self.m21.norm());
        let plus = (self.m11 - 1.0).norm().max((self.m22 - 1.0).norm());
        let minus = (self.m11 + 1.0).norm().max((self.m22 + 1.0).norm());
        off <= tol * scale && plus.min(minus) <= tol * scale
    }
}

impl Mul for Isometry {
    type Output = Isometry;
    fn mul(self, o: Isometry) -> Isometry {
        Isometry::raw(
            self.m11 * o.m11 + self.m12 * o.m21,
            self.m11 * o.m12 + self.m12 * o.m22,
            self.m21 * o.m11 + self.m22 * o.m21,
            self.m21 * o.m12 + self.m22 * o.m22,
        )
    }
}

impl Neg for Isometry {
    type Output = Isometry;
    fn neg(self) -> Isometry {
        Isometry::raw(-self.m11, -self.m12, -self.m21, -self.m22)
    }
}

/// Classifies by trace; membership in `[-2, 2]` is inflated by `tol.interval`.
pub fn classify_isometry(m: &Isometry, tol: &Tolerance) -> IsometryClass {
    if m.is_plus_minus_identity(tol.residual) {
        return IsometryClass::Identity;
    }
    let tr = m.trace();
    let eps = tol.interval;
    if tr.im.abs() > eps || tr.re.abs() > 2.0 + eps {
        IsometryClass::Loxodromic
    } else if (tr.re.abs() - 2.0).abs() <= eps {
        IsometryClass::Parabolic
    } else {
        IsometryClass::Elliptic
    }
}

/// Fixed points of a non-parabolic isometry with their eigenvalues.
///
/// The eigenvalue attached to a fixed point `w` is `m21 w + m22`; for `w = ∞`
/// it is `m11`. The pair is returned as `(start, end, λ_end)` where the end is
/// the attracting point (loxodromic) or the point giving a rotation angle in
/// `[0, π]` (elliptic).
pub(crate) fn fixed_points(m: &Isometry) -> (ExtendedComplex, ExtendedComplex, Complex64) {
    let tr = m.trace();
    let disc = (tr * tr - 4.0).sqrt();
    let diff = m.m11 - m.m22;
    let (num, lam1) = if (diff + disc).norm() >= (diff - disc).norm() {
        (diff + disc, (tr + disc) / 2.0)
    } else {
        (diff - disc, (tr - disc) / 2.0)
    };
    let w1 = if m.m21.norm() == 0.0 {
        ExtendedComplex::Infinity
    } else {
        ExtendedComplex::from(num / (m.m21 * 2.0))
    };
    let w2 = if num.norm() == 0.0 {
        ExtendedComplex::Infinity
    } else {
        ExtendedComplex::from(-m.m12 * 2.0 / num)
    };
    let lam2 = lam1.inv();
    let mag1 = lam1.norm();
    let mag2 = lam2.norm();
    let first_is_end = if (mag1 - mag2).abs() > 1e-12 * mag1.max(mag2) {
        mag1 > mag2
    } else {
        (2.0 * lam1.arg()).rem_euclid(TAU) <= PI + 1e-12
    };
    if first_is_end {
        (w2, w1, lam1)
    } else {
        (w1, w2, lam2)
    }
}

/// The oriented axis of a loxodromic or elliptic isometry.
///
/// Loxodromic axes point from the repelling to the attracting fixed point.
pub fn axis_of(m: &Isometry, tol: &Tolerance) -> Result<Geodesic, Hyp3Error> {
    match classify_isometry(m, tol) {
        IsometryClass::Identity | IsometryClass::Parabolic => Err(Hyp3Error::NotAxial),
        _ => {
            let (start, end, _) = fixed_points(m);
            Geodesic::new(start, end)
        }
    }
}

/// Complex translation length `(a, α)` with `a ≥ 0` and `α ∈ [0, 2π)`.
///
/// Parabolic elements report `(0, 0)`, the value of both `0` and `2πi` modulo `2πi`.
pub fn translation_lengths(m: &Isometry, tol: &Tolerance) -> Result<ComplexDistance, Hyp3Error> {
    match classify_isometry(m, tol) {
        IsometryClass::Identity => Err(Hyp3Error::Identity),
        IsometryClass::Parabolic => Ok(ComplexDistance::new(0.0, 0.0)),
        _ => {
            let (_, _, lam) = fixed_points(m);
            Ok(ComplexDistance::new(2.0 * lam.norm().ln(), 2.0 * lam.arg()))
        }
    }
}
