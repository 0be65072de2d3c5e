use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::Hyp3Error;
use crate::json::JsonComplex;

/// A point of the Riemann sphere, the boundary of H³.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ExtendedComplex {
    Finite(Complex64),
    Infinity,
}

impl ExtendedComplex {
    pub fn new(re: f64, im: f64) -> Self {
        Self::Finite(Complex64::new(re, im))
    }

    pub fn real(re: f64) -> Self {
        Self::new(re, 0.0)
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Self::Infinity)
    }

    pub fn finite(&self) -> Option<Complex64> {
        match self {
            Self::Finite(z) => Some(*z),
            Self::Infinity => None,
        }
    }

    /// Chordal distance on the unit Riemann sphere (diameter 2).
    pub fn chordal(&self, other: &Self) -> f64 {
        match (self, other) {
            (Self::Infinity, Self::Infinity) => 0.0,
            (Self::Finite(z), Self::Infinity) | (Self::Infinity, Self::Finite(z)) => {
                2.0 / (1.0 + z.norm_sqr()).sqrt()
            }
            (Self::Finite(a), Self::Finite(b)) => {
                2.0 * (a - b).norm() / ((1.0 + a.norm_sqr()) * (1.0 + b.norm_sqr())).sqrt()
            }
        }
    }

    /// Equality up to chordal distance `tol`.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.chordal(other) <= tol
    }
}

impl From<Complex64> for ExtendedComplex {
    fn from(z: Complex64) -> Self {
        if z.re.is_finite() && z.im.is_finite() {
            Self::Finite(z)
        } else {
            Self::Infinity
        }
    }
}

impl Serialize for ExtendedComplex {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Self::Finite(z) => JsonComplex::from(*z).serialize(s),
            Self::Infinity => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for ExtendedComplex {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Tag(String),
            Num(JsonComplex),
        }
        match Repr::deserialize(d)? {
            Repr::Tag(t) if t == "inf" => Ok(Self::Infinity),
            Repr::Tag(t) => Err(D::Error::custom(format!(
                "unknown boundary point tag {t:?}"
            ))),
            Repr::Num(z) => Ok(Self::Finite(z.into())),
        }
    }
}

/// A point `(a, b, c)` of the upper half-space, `c > 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct H3Point {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl H3Point {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self, Hyp3Error> {
        if a.is_finite() && b.is_finite() && c.is_finite() && c > 0.0 {
            Ok(Self { a, b, c })
        } else {
            Err(Hyp3Error::InvalidPoint)
        }
    }

    /// The horizontal coordinate `a + bi`.
    pub fn horizontal(&self) -> Complex64 {
        Complex64::new(self.a, self.b)
    }

    pub(crate) fn from_parts(z: Complex64, c: f64) -> Self {
        Self {
            a: z.re,
            b: z.im,
            c,
        }
    }
}

/// Hyperbolic distance, `cosh d = 1 + |p − q|² / (2 c_p c_q)`.
///
/// Evaluated through `sinh(d/2)` to keep precision for nearby points.
pub fn dist_h3(p: &H3Point, q: &H3Point) -> f64 {
    let e2 = (p.a - q.a).powi(2) + (p.b - q.b).powi(2) + (p.c - q.c).powi(2);
    2.0 * (e2.sqrt() / (2.0 * (p.c * q.c).sqrt())).asinh()
}
