//! Hyperboloid-model helpers for the minimization code.
//!
//! Points of H³ are unit timelike vectors of R^{3,1} with positive first
//! coordinate; tangent vectors at `p` are spacelike vectors orthogonal to `p`.

use crate::hyp3::{Geodesic, H3Point};

/// A vector of Minkowski space R^{3,1}, time coordinate first.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Lv(pub [f64; 4]);

impl Lv {
    pub fn dot(&self, o: &Lv) -> f64 {
        let (a, b) = (self.0, o.0);
        -a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3]
    }

    pub fn add(&self, o: &Lv) -> Lv {
        Lv(std::array::from_fn(|k| self.0[k] + o.0[k]))
    }

    pub fn sub(&self, o: &Lv) -> Lv {
        Lv(std::array::from_fn(|k| self.0[k] - o.0[k]))
    }

    pub fn scale(&self, s: f64) -> Lv {
        Lv(self.0.map(|x| x * s))
    }

    /// `self + s·o`.
    pub fn axpy(&self, s: f64, o: &Lv) -> Lv {
        Lv(std::array::from_fn(|k| self.0[k] + s * o.0[k]))
    }

    /// Norm of a spacelike vector.
    pub fn space_norm(&self) -> f64 {
        self.dot(self).max(0.0).sqrt()
    }

    /// Rescales a timelike vector onto the upper sheet of the hyperboloid.
    pub fn to_hyperboloid(&self) -> Lv {
        let n = (-self.dot(self)).sqrt();
        let s = if self.0[0] < 0.0 { -1.0 / n } else { 1.0 / n };
        self.scale(s)
    }

    pub fn from_point(p: &H3Point) -> Lv {
        let s = p.a * p.a + p.b * p.b + p.c * p.c;
        Lv([
            (s + 1.0) / (2.0 * p.c),
            p.a / p.c,
            p.b / p.c,
            (s - 1.0) / (2.0 * p.c),
        ])
    }

    pub fn to_point(&self) -> H3Point {
        let t = 1.0 / (self.0[0] - self.0[3]);
        H3Point {
            a: self.0[1] * t,
            b: self.0[2] * t,
            c: t,
        }
    }
}

/// Distance between two hyperboloid points, through the chord length.
pub fn dist(p: &Lv, q: &Lv) -> f64 {
    let chord = p.sub(q).space_norm();
    2.0 * (chord / 2.0).asinh()
}

/// Unit tangent at `p` pointing toward `q`, or zero when they coincide.
pub fn toward(p: &Lv, q: &Lv) -> Lv {
    let v = q.axpy(p.dot(q), p);
    let n = v.space_norm();
    if n < 1e-300 {
        Lv([0.0; 4])
    } else {
        v.scale(1.0 / n)
    }
}

/// Projects `v` onto the tangent space at `p`.
pub fn to_tangent(p: &Lv, v: &Lv) -> Lv {
    v.axpy(v.dot(p), p)
}

/// Exponential map at `p`.
pub fn exp(p: &Lv, v: &Lv) -> Lv {
    let n = v.space_norm();
    if n < 1e-300 {
        return *p;
    }
    p.scale(n.cosh()).axpy(n.sinh() / n, v).to_hyperboloid()
}

/// Orthonormal basis of the tangent space at `p`.
pub fn tangent_basis(p: &Lv) -> [Lv; 3] {
    let mut basis: Vec<Lv> = Vec::with_capacity(3);
    let mut k = 1;
    while basis.len() < 3 {
        assert!(k < 16, "tangent basis at a non-finite point {p:?}");
        let mut e = Lv([0.0; 4]);
        e.0[k % 4] = 1.0;
        k += 1;
        let mut v = to_tangent(p, &e);
        for _ in 0..2 {
            for b in &basis {
                v = v.axpy(-v.dot(b), b);
            }
            v = to_tangent(p, &v);
        }
        let n = v.space_norm();
        if n > 1e-6 {
            basis.push(v.scale(1.0 / n));
        }
    }
    [basis[0], basis[1], basis[2]]
}

/// A geodesic as `s ↦ cosh s·base + sinh s·dir`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Line {
    pub base: Lv,
    pub dir: Lv,
}

/// Distance from a point to a line with the foot and the unit tangent toward it.
#[derive(Clone, Copy, Debug)]
pub struct LineProjection {
    pub dist: f64,
    pub foot: Lv,
    pub toward: Lv,
}

impl Line {
    /// The line through `g`, based at its normalizer's base point and pointing to `g.end`.
    pub fn from_geodesic(g: &Geodesic) -> Line {
        let base = Lv::from_point(&g.point_at(0.0));
        let ahead = Lv::from_point(&g.point_at(1.0));
        Line {
            base,
            dir: toward(&base, &ahead),
        }
    }

    pub fn at(&self, s: f64) -> Lv {
        self.base
            .scale(s.cosh())
            .axpy(s.sinh(), &self.dir)
            .to_hyperboloid()
    }

    pub fn tangent_at(&self, s: f64) -> Lv {
        self.base.scale(s.sinh()).axpy(s.cosh(), &self.dir)
    }

    /// Arclength parameter of the foot of `q`.
    pub fn param_of(&self, q: &Lv) -> f64 {
        let c = -q.dot(&self.base);
        let s = q.dot(&self.dir);
        (s / c).atanh()
    }

    pub fn project(&self, q: &Lv) -> LineProjection {
        let along = self
            .base
            .scale(-q.dot(&self.base))
            .axpy(q.dot(&self.dir), &self.dir);
        let perp = q.sub(&along);
        let dist = perp.space_norm().asinh();
        let foot = along.to_hyperboloid();
        LineProjection {
            dist,
            foot,
            toward: toward(q, &foot),
        }
    }

    /// Unit tangent at `q` orthogonal to the direction toward the line and lying
    /// in the plane spanned by `q` and the line.
    pub fn parallel_direction(&self, q: &Lv, toward_line: &Lv) -> Lv {
        let mut v = to_tangent(q, &self.tangent_at(self.param_of(q)));
        v = v.axpy(-v.dot(toward_line), toward_line);
        let n = v.space_norm();
        if n < 1e-300 {
            v
        } else {
            v.scale(1.0 / n)
        }
    }
}
