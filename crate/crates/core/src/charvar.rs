//! Trace coordinates on the SL(2,C) character variety of the free group of
//! rank two: the Markoff-type invariant μ, reducibility, neighbor moves and an
//! explicit matrix realization of a trace triple.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hyp3::Isometry;
use crate::tolerance::Tolerance;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CharVarError {
    #[error("trace triple is reducible (mu = 4)")]
    ReducibleTriple,
    #[error("invalid letter {0:?} in word; expected X, x, Y or y")]
    InvalidLetter(char),
}

/// One of the three positions of a superbasis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Slot {
    X,
    Y,
    Z,
}

impl Slot {
    pub const ALL: [Slot; 3] = [Slot::X, Slot::Y, Slot::Z];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Slot {
        Self::ALL[i % 3]
    }

    /// The two other slots in cyclic order.
    pub fn others(self) -> (Slot, Slot) {
        let i = self.index();
        (Slot::from_index(i + 1), Slot::from_index(i + 2))
    }
}

/// Traces `(x, y, z)` of `(X, Y, XY)` together with `μ = x² + y² + z² − xyz`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TraceTriple {
    pub x: Complex64,
    pub y: Complex64,
    pub z: Complex64,
    mu: Complex64,
}

impl TraceTriple {
    pub fn new(x: Complex64, y: Complex64, z: Complex64) -> Self {
        Self {
            x,
            y,
            z,
            mu: x * x + y * y + z * z - x * y * z,
        }
    }

    pub fn real(x: f64, y: f64, z: f64) -> Self {
        Self::new(x.into(), y.into(), z.into())
    }

    pub fn from_array(t: [Complex64; 3]) -> Self {
        Self::new(t[0], t[1], t[2])
    }

    pub fn as_array(&self) -> [Complex64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn get(&self, slot: Slot) -> Complex64 {
        self.as_array()[slot.index()]
    }

    /// The cached value of μ.
    pub fn mu(&self) -> Complex64 {
        self.mu
    }
}

impl Serialize for TraceTriple {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use crate::json::JsonComplex;
        #[derive(Serialize)]
        struct Repr {
            x: JsonComplex,
            y: JsonComplex,
            z: JsonComplex,
        }
        Repr {
            x: self.x.into(),
            y: self.y.into(),
            z: self.z.into(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for TraceTriple {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use crate::json::JsonComplex;
        #[derive(Deserialize)]
        struct Repr {
            x: JsonComplex,
            y: JsonComplex,
            z: JsonComplex,
        }
        let r = Repr::deserialize(d)?;
        Ok(TraceTriple::new(r.x.into(), r.y.into(), r.z.into()))
    }
}

pub fn mu_of(t: &TraceTriple) -> Complex64 {
    t.x * t.x + t.y * t.y + t.z * t.z - t.x * t.y * t.z
}

/// `μ = 4` within a residual scaled by the size of the traces.
pub fn is_reducible(t: &TraceTriple, tol: &Tolerance) -> bool {
    let scale = (t.x.norm_sqr() + t.y.norm_sqr() + t.z.norm_sqr()).max(1.0);
    (mu_of(t) - 4.0).norm() <= tol.residual * scale
}

/// Replaces the trace in `slot` by the product of the other two minus itself.
pub fn neighbor_trace(t: &TraceTriple, slot: Slot) -> TraceTriple {
    let mut v = t.as_array();
    let (a, b) = slot.others();
    v[slot.index()] = v[a.index()] * v[b.index()] - v[slot.index()];
    TraceTriple {
        x: v[0],
        y: v[1],
        z: v[2],
        mu: t.mu,
    }
}

/// Images `(ξ, η)` of the base generators.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RepresentationPair {
    pub xi: Isometry,
    pub eta: Isometry,
}

impl RepresentationPair {
    pub fn traces(&self) -> TraceTriple {
        TraceTriple::new(
            self.xi.trace(),
            self.eta.trace(),
            (self.xi * self.eta).trace(),
        )
    }

    pub fn conjugate_by(&self, g: &Isometry) -> Self {
        Self {
            xi: self.xi.conjugate_by(g),
            eta: self.eta.conjugate_by(g),
        }
    }
}

/// Realizes a triple as `ξ = [[x, −1],[1, 0]]`, `η = [[0, ζ],[−1/ζ, y]]` with
/// `ζ² − zζ + 1 = 0`, taking the root with `|ζ| ≥ 1`.
pub fn realize(t: &TraceTriple, tol: &Tolerance) -> Result<RepresentationPair, CharVarError> {
    if is_reducible(t, tol) {
        return Err(CharVarError::ReducibleTriple);
    }
    let disc = (t.z * t.z - 4.0).sqrt();
    let a = (t.z + disc) / 2.0;
    let b = (t.z - disc) / 2.0;
    let key = |w: &Complex64| (w.norm(), w.re, w.im);
    let zeta = if key(&a) >= key(&b) { a } else { b };
    // The larger root is never tiny, so recompute the other from the product.
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let xi = Isometry::raw(t.x, -one, one, zero);
    let eta = Isometry::raw(zero, zeta, -zeta.inv(), t.y);
    Ok(RepresentationPair { xi, eta })
}

/// A freely reduced word in `X, Y` and their inverses `x, y`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Word(String);

impl Word {
    pub fn identity() -> Self {
        Word(String::new())
    }

    pub fn parse(s: &str) -> Result<Self, CharVarError> {
        if let Some(c) = s.chars().find(|c| !matches!(c, 'X' | 'x' | 'Y' | 'y')) {
            return Err(CharVarError::InvalidLetter(c));
        }
        Ok(Self::reduce(s.chars()))
    }

    fn reduce(letters: impl Iterator<Item = char>) -> Self {
        let mut out: Vec<char> = Vec::new();
        for c in letters {
            if out
                .last()
                .is_some_and(|&l| l != c && l.eq_ignore_ascii_case(&c))
            {
                out.pop();
            } else {
                out.push(c);
            }
        }
        Word(out.into_iter().collect())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Self {
        Word(self.0.chars().rev().map(swap_case).collect())
    }

    pub fn concat(&self, other: &Self) -> Self {
        Self::reduce(self.0.chars().chain(other.0.chars()))
    }
}

fn swap_case(c: char) -> char {
    if c.is_ascii_uppercase() {
        c.to_ascii_lowercase()
    } else {
        c.to_ascii_uppercase()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl TryFrom<String> for Word {
    type Error = CharVarError;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        Word::parse(&s)
    }
}

impl From<Word> for String {
    fn from(w: Word) -> String {
        w.0
    }
}

/// The image of a word under the representation.
pub fn word_image(pair: &RepresentationPair, word: &Word) -> Isometry {
    let xi_inv = pair.xi.inverse();
    let eta_inv = pair.eta.inverse();
    word.0.chars().fold(Isometry::identity(), |acc, c| {
        acc * match c {
            'X' => pair.xi,
            'x' => xi_inv,
            'Y' => pair.eta,
            _ => eta_inv,
        }
    })
}
