use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::isometry::{fixed_points, Isometry};
use super::point::{ExtendedComplex, H3Point};
use super::Hyp3Error;
use crate::tolerance::Tolerance;

const ENDPOINT_TOL: f64 = 1e-12;

/// An oriented geodesic, given by its boundary endpoints.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Geodesic {
    pub start: ExtendedComplex,
    pub end: ExtendedComplex,
}

/// Signed distance plus rotation angle, the complex length `real_part + i·angle`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexDistance {
    pub real_part: f64,
    /// Normalized to `[0, 2π)`.
    pub angle: f64,
}

impl ComplexDistance {
    pub fn new(real_part: f64, angle: f64) -> Self {
        let mut angle = angle.rem_euclid(TAU);
        if angle >= TAU {
            angle = 0.0;
        }
        Self { real_part, angle }
    }

    /// `ln` of a non-zero complex number, as a complex distance.
    pub fn from_exp(w: Complex64) -> Self {
        Self::new(w.norm().ln(), w.arg())
    }

    pub fn as_complex(&self) -> Complex64 {
        Complex64::new(self.real_part, self.angle)
    }

    /// Distance between the angles on the circle.
    pub fn angle_gap(&self, other: &Self) -> f64 {
        let d = (self.angle - other.angle).rem_euclid(TAU);
        d.min(TAU - d)
    }
}

impl Geodesic {
    pub fn new(start: ExtendedComplex, end: ExtendedComplex) -> Result<Self, Hyp3Error> {
        if start.chordal(&end) <= ENDPOINT_TOL {
            Err(Hyp3Error::DegenerateGeodesic)
        } else {
            Ok(Self { start, end })
        }
    }

    /// Geodesic between two finite complex endpoints.
    pub fn between(start: Complex64, end: Complex64) -> Result<Self, Hyp3Error> {
        Self::new(ExtendedComplex::Finite(start), ExtendedComplex::Finite(end))
    }

    pub fn reversed(&self) -> Self {
        Self {
            start: self.end,
            end: self.start,
        }
    }

    pub fn transform(&self, m: &Isometry) -> Self {
        Self {
            start: m.apply_boundary(&self.start),
            end: m.apply_boundary(&self.end),
        }
    }

    /// Same oriented geodesic up to chordal tolerance.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.start.approx_eq(&other.start, tol) && self.end.approx_eq(&other.end, tol)
    }

    /// Same underlying set, ignoring orientation.
    pub fn same_line(&self, other: &Self, tol: f64) -> bool {
        self.approx_eq(other, tol) || self.approx_eq(&other.reversed(), tol)
    }

    /// The isometry sending `start ↦ 0` and `end ↦ ∞`, i.e. `w ↦ (w−u)/(w−u′)`.
    pub fn normalizer(&self) -> Isometry {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let i = Complex64::i();
        match (self.start, self.end) {
            (ExtendedComplex::Finite(u), ExtendedComplex::Finite(v)) => {
                let s = (u - v).sqrt().inv();
                Isometry::raw(s, -u * s, s, -v * s)
            }
            (ExtendedComplex::Infinity, ExtendedComplex::Finite(v)) => {
                Isometry::raw(zero, i, i, -i * v)
            }
            (ExtendedComplex::Finite(u), ExtendedComplex::Infinity) => {
                Isometry::raw(one, -u, zero, one)
            }
            (ExtendedComplex::Infinity, ExtendedComplex::Infinity) => {
                unreachable!("geodesic endpoints are distinct by construction")
            }
        }
    }

    /// The point at arclength `s` from the normalizer's base point, moving toward `end`.
    pub fn point_at(&self, s: f64) -> H3Point {
        let p = H3Point {
            a: 0.0,
            b: 0.0,
            c: s.exp(),
        };
        self.normalizer().inverse().apply_point(&p)
    }
}

/// The π-rotation about `g`, lifted as in `(i/(u−u′))·[[u+u′, −2uu′],[2, −(u+u′)]]`.
///
/// The lift squares to `−Id`; reversing the orientation negates it.
pub fn pi_rotation(g: &Geodesic) -> Isometry {
    let i = Complex64::i();
    let zero = Complex64::new(0.0, 0.0);
    match (g.start, g.end) {
        (ExtendedComplex::Finite(u), ExtendedComplex::Finite(v)) => {
            let k = i / (u - v);
            Isometry::raw(k * (u + v), -k * 2.0 * u * v, k * 2.0, -k * (u + v))
        }
        (ExtendedComplex::Infinity, ExtendedComplex::Finite(v)) => {
            Isometry::raw(i, -i * 2.0 * v, zero, -i)
        }
        (ExtendedComplex::Finite(u), ExtendedComplex::Infinity) => {
            Isometry::raw(-i, i * 2.0 * u, zero, i)
        }
        (ExtendedComplex::Infinity, ExtendedComplex::Infinity) => {
            unreachable!("geodesic endpoints are distinct by construction")
        }
    }
}

/// Recovers the oriented geodesic of a π-rotation lift, inverting [`pi_rotation`].
pub fn pi_rotation_axis(r: &Isometry, tol: &Tolerance) -> Result<Geodesic, Hyp3Error> {
    let scale = r.norm_sqr().sqrt().max(1.0);
    if r.trace().norm() > tol.residual * scale {
        return Err(Hyp3Error::NotAPiRotation);
    }
    let (a, b, lam) = fixed_points(r);
    // The end point carries eigenvalue −i.
    let minus_i = -Complex64::i();
    if (lam - minus_i).norm() <= (lam + minus_i).norm() {
        Geodesic::new(a, b)
    } else {
        Geodesic::new(b, a)
    }
}

/// Distance from `p` to `g` and the foot of the perpendicular.
pub fn dist_point_geodesic(p: &H3Point, g: &Geodesic) -> (f64, H3Point) {
    let n = g.normalizer();
    let q = n.apply_point(p);
    let horiz = (q.a * q.a + q.b * q.b).sqrt();
    let d = (horiz / q.c).asinh();
    let height = (horiz * horiz + q.c * q.c).sqrt();
    let foot = n.inverse().apply_point(&H3Point {
        a: 0.0,
        b: 0.0,
        c: height,
    });
    (d, foot)
}

/// Images of the second geodesic's endpoints in the frame where the first is `(0, ∞)`.
fn relative_endpoints(
    g1: &Geodesic,
    g2: &Geodesic,
    tol: &Tolerance,
) -> Result<(Isometry, Complex64, Complex64), Hyp3Error> {
    let n = g1.normalizer();
    let shared = |e: &ExtendedComplex| {
        e.approx_eq(&g1.start, tol.residual) || e.approx_eq(&g1.end, tol.residual)
    };
    if shared(&g2.start) || shared(&g2.end) {
        return Err(Hyp3Error::Parallel);
    }
    let w = n.apply_boundary(&g2.start);
    let v = n.apply_boundary(&g2.end);
    match (w, v) {
        (ExtendedComplex::Finite(w), ExtendedComplex::Finite(v))
            if w.norm() > 0.0 && v.norm() > 0.0 =>
        {
            Ok((n, w, v))
        }
        _ => Err(Hyp3Error::Parallel),
    }
}

/// The common perpendicular of two disjoint geodesics, oriented from `g1` toward `g2`.
pub fn common_perpendicular(
    g1: &Geodesic,
    g2: &Geodesic,
    tol: &Tolerance,
) -> Result<Geodesic, Hyp3Error> {
    let (n, w, v) = relative_endpoints(g1, g2, tol)?;
    let ratio = v / w;
    if ratio.im.abs() <= tol.interval * ratio.norm() && ratio.re < 0.0 {
        return Err(Hyp3Error::Intersecting);
    }
    // The π-rotation about the perpendicular swaps 0 ↔ ∞ and w ↔ v, so it is z ↦ wv/z.
    let rho = (w * v).sqrt();
    let top = H3Point {
        a: 0.0,
        b: 0.0,
        c: rho.norm(),
    };
    let g2n = Geodesic::between(w, v)?;
    let (_, foot2) = dist_point_geodesic(&top, &g2n);
    let toward = (rho.conj() * foot2.horizontal()).re;
    let (s, e) = if toward > 0.0 {
        (-rho, rho)
    } else {
        (rho, -rho)
    };
    let back = n.inverse();
    Geodesic::new(
        back.apply_boundary(&ExtendedComplex::Finite(s)),
        back.apply_boundary(&ExtendedComplex::Finite(e)),
    )
}

/// Feet of the common perpendicular on `g1` and on `g2`.
pub fn common_perpendicular_feet(
    g1: &Geodesic,
    g2: &Geodesic,
    tol: &Tolerance,
) -> Result<(H3Point, H3Point), Hyp3Error> {
    common_perpendicular(g1, g2, tol)?;
    let (n, w, v) = relative_endpoints(g1, g2, tol)?;
    let top = H3Point {
        a: 0.0,
        b: 0.0,
        c: (w * v).sqrt().norm(),
    };
    let foot1 = n.inverse().apply_point(&top);
    let (_, foot2) = dist_point_geodesic(&foot1, g2);
    Ok((foot1, foot2))
}

/// Distance between two disjoint geodesics.
pub fn geodesic_distance(g1: &Geodesic, g2: &Geodesic, tol: &Tolerance) -> Result<f64, Hyp3Error> {
    let (f1, f2) = common_perpendicular_feet(g1, g2, tol)?;
    Ok(super::dist_h3(&f1, &f2))
}

/// `Cr(u1, u2; u3, u4) = (u1−u3)(u2−u4) / ((u1−u4)(u2−u3))`, with limits at ∞.
pub fn cross_ratio(
    u1: &ExtendedComplex,
    u2: &ExtendedComplex,
    u3: &ExtendedComplex,
    u4: &ExtendedComplex,
) -> Result<Complex64, Hyp3Error> {
    let pts = [u1, u2, u3, u4];
    // Factor (a, b) stands for u_a − u_b; a factor touching ∞ cancels with its partner.
    let numer = [(0usize, 2usize), (1, 3)];
    let denom = [(0usize, 3usize), (1, 2)];
    let inf: Vec<usize> = (0..4).filter(|&k| pts[k].is_infinite()).collect();
    if inf.len() > 1 {
        return Err(Hyp3Error::DegenerateCrossRatio);
    }
    let value = |pairs: &[(usize, usize)]| -> Complex64 {
        pairs
            .iter()
            .filter(|(a, b)| !inf.contains(a) && !inf.contains(b))
            .map(|&(a, b)| pts[a].finite().unwrap() - pts[b].finite().unwrap())
            .product()
    };
    let num = value(&numer);
    let den = value(&denom);
    if den.norm() == 0.0 {
        return Err(Hyp3Error::DegenerateCrossRatio);
    }
    Ok(num / den)
}

/// Complex distance of a double-cross: from `g1` to `g2` along the oriented `axis`.
///
/// The real part is the signed distance between the feet on the axis; the angle
/// turns the half-plane spanned by the axis and the end of `g1` onto the one
/// spanned by the end of `g2`, counter-clockwise when the axis points at the
/// viewer (right-hand rule). The value satisfies `exp(l) = Cr(v′, w′; u′, u)`.
pub fn complex_distance(
    axis: &Geodesic,
    g1: &Geodesic,
    g2: &Geodesic,
    tol: &Tolerance,
) -> Result<ComplexDistance, Hyp3Error> {
    let n = axis.normalizer();
    for g in [g1, g2] {
        let a = n.apply_boundary(&g.start);
        let b = n.apply_boundary(&g.end);
        match (a, b) {
            (ExtendedComplex::Finite(a), ExtendedComplex::Finite(b))
                if a.norm() > 0.0 && (a + b).norm() <= tol.degenerate * (a.norm() + b.norm()) => {}
            _ => return Err(Hyp3Error::NotADoubleCross),
        }
    }
    let cr = cross_ratio(&g1.end, &g2.end, &axis.end, &axis.start)?;
    Ok(ComplexDistance::from_exp(cr))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyp3::{axis_of, dist_h3};
    use proptest::prelude::*;
    use std::f64::consts::E;

    fn fin(re: f64, im: f64) -> ExtendedComplex {
        ExtendedComplex::new(re, im)
    }

    fn geo(a: ExtendedComplex, b: ExtendedComplex) -> Geodesic {
        Geodesic::new(a, b).unwrap()
    }

    #[test]
    fn pi_rotation_examples() {
        let r = pi_rotation(&geo(ExtendedComplex::Infinity, fin(0.0, 0.0)));
        let expect = Isometry::diagonal(Complex64::i());
        assert!(r.max_diff(&expect) < 1e-15);
        let r = pi_rotation(&geo(fin(1.0, 0.0), fin(-1.0, 0.0)));
        let i = Complex64::i();
        let expect = Isometry::raw(0.0 * i, i, i, 0.0 * i);
        assert!(r.max_diff(&expect) < 1e-15);
    }

    #[test]
    fn pi_rotation_limits_agree_with_finite_formula() {
        let g = geo(fin(0.3, 0.2), ExtendedComplex::Infinity);
        let near = geo(fin(0.3, 0.2), fin(1e9, 0.0));
        assert!(pi_rotation(&g).max_diff(&pi_rotation(&near)) < 1e-8);
        let h = geo(ExtendedComplex::Infinity, fin(0.3, 0.2));
        let near = geo(fin(-1e9, 0.0), fin(0.3, 0.2));
        assert!(pi_rotation(&h).max_diff(&pi_rotation(&near)) < 1e-8);
    }

    #[test]
    fn common_perpendicular_examples() {
        let tol = Tolerance::default();
        let g1 = geo(fin(-1.0, 0.0), fin(1.0, 0.0));
        let g2 = geo(fin(-E, 0.0), fin(E, 0.0));
        let p = common_perpendicular(&g1, &g2, &tol).unwrap();
        let vertical = geo(fin(0.0, 0.0), ExtendedComplex::Infinity);
        assert!(p.same_line(&vertical, 1e-12));
        assert!(
            p.approx_eq(&vertical, 1e-12),
            "orientation runs from g1 outward to g2"
        );

        let g1 = geo(fin(0.0, 0.0), ExtendedComplex::Infinity);
        let g2 = geo(fin(1.0, 0.0), fin(2.0, 0.0));
        let p = common_perpendicular(&g1, &g2, &tol).unwrap();
        let r2 = 2f64.sqrt();
        assert!(p.approx_eq(&geo(fin(-r2, 0.0), fin(r2, 0.0)), 1e-12));

        let g1 = geo(fin(0.0, 0.0), fin(1.0, 0.0));
        assert_eq!(
            common_perpendicular(&g1, &g2, &tol),
            Err(Hyp3Error::Parallel)
        );
        let g1 = geo(fin(0.0, -1.0), fin(0.0, 1.0));
        let g2 = geo(fin(-1.0, 0.0), fin(1.0, 0.0));
        assert_eq!(
            common_perpendicular(&g1, &g2, &tol),
            Err(Hyp3Error::Intersecting)
        );
    }

    #[test]
    fn point_geodesic_examples() {
        let p = H3Point::new(1.0, 0.0, 1.0).unwrap();
        let g = geo(fin(0.0, 0.0), ExtendedComplex::Infinity);
        let (d, foot) = dist_point_geodesic(&p, &g);
        assert!((d - 1f64.asinh()).abs() < 1e-14);
        assert!(foot.a.abs() < 1e-14 && (foot.c - 2f64.sqrt()).abs() < 1e-14);
        let on = g.point_at(0.7);
        let (d, foot) = dist_point_geodesic(&on, &g);
        assert!(d.abs() < 1e-15 && dist_h3(&foot, &on) < 1e-14);
    }

    #[test]
    fn cross_ratio_examples() {
        let inf = ExtendedComplex::Infinity;
        // The limit of the displayed formula at u3 = ∞ is (u2 − u4)/(u1 − u4).
        let cr = cross_ratio(&fin(0.0, 0.0), &fin(1.0, 0.0), &inf, &fin(2.0, 0.0)).unwrap();
        assert!((cr - 0.5).norm() < 1e-15);
        let cr = cross_ratio(&fin(1.0, 0.0), &fin(E, 0.0), &inf, &fin(0.0, 0.0)).unwrap();
        assert!((cr - E).norm() < 1e-15);
    }

    #[test]
    fn complex_distance_examples() {
        let tol = Tolerance::default();
        let axis = geo(fin(0.0, 0.0), ExtendedComplex::Infinity);
        let g1 = geo(fin(-1.0, 0.0), fin(1.0, 0.0));
        let g2 = geo(fin(-E, 0.0), fin(E, 0.0));
        let l = complex_distance(&axis, &g1, &g2, &tol).unwrap();
        assert!((l.real_part - 1.0).abs() < 1e-14 && l.angle.abs() < 1e-14);

        let (t, beta) = (0.8f64, 1.1f64);
        let m = Isometry::diagonal(Complex64::from_polar((t / 2.0).exp(), beta / 2.0));
        let l = complex_distance(&axis, &g1, &g1.transform(&m), &tol).unwrap();
        assert!((l.real_part - t).abs() < 1e-13 && (l.angle - beta).abs() < 1e-13);

        let skew = geo(fin(1.0, 0.0), fin(2.0, 0.0));
        assert_eq!(
            complex_distance(&axis, &g1, &skew, &tol),
            Err(Hyp3Error::NotADoubleCross)
        );
    }

    #[test]
    fn pi_rotation_axis_round_trip_example() {
        let tol = Tolerance::default();
        let g = geo(fin(1.0, 0.0), fin(-1.0, 0.0));
        assert!(pi_rotation_axis(&pi_rotation(&g), &tol)
            .unwrap()
            .approx_eq(&g, 1e-12));
        assert!(pi_rotation_axis(&Isometry::diagonal(Complex64::new(2.0, 0.0)), &tol).is_err());
    }

    fn arb_boundary() -> impl Strategy<Value = ExtendedComplex> {
        prop_oneof![
            9 => (-3.0f64..3.0, -3.0f64..3.0).prop_map(|(a, b)| fin(a, b)),
            1 => Just(ExtendedComplex::Infinity),
        ]
    }

    fn arb_geodesic() -> impl Strategy<Value = Geodesic> {
        (arb_boundary(), arb_boundary()).prop_filter_map("distinct", |(a, b)| {
            if a.chordal(&b) < 0.05 {
                None
            } else {
                Geodesic::new(a, b).ok()
            }
        })
    }

    proptest! {
        #[test]
        fn pi_rotation_algebra(g in arb_geodesic()) {
            let tol = Tolerance::default();
            let r = pi_rotation(&g);
            let minus_id = -Isometry::identity();
            let scale = r.norm_sqr().max(1.0);
            prop_assert!((r * r).max_diff(&minus_id) < 1e-10 * scale);
            let rbar = pi_rotation(&g.reversed());
            prop_assert!((r * rbar).max_diff(&Isometry::identity()) < 1e-10 * scale);
            prop_assert!(rbar.max_diff(&-r) < 1e-10 * scale.sqrt());
            let back = axis_of(&r, &tol).unwrap();
            prop_assert!(back.same_line(&g, 1e-9));
            prop_assert!(pi_rotation_axis(&r, &tol).unwrap().approx_eq(&g, 1e-9));
        }

        #[test]
        fn perpendicular_meets_both_at_right_angles(g1 in arb_geodesic(), g2 in arb_geodesic()) {
            let tol = Tolerance::default();
            let Ok(p) = common_perpendicular(&g1, &g2, &tol) else { return Ok(()); };
            // The π-rotation about the perpendicular reverses both geodesics.
            let r = pi_rotation(&p);
            prop_assert!(g1.transform(&r).approx_eq(&g1.reversed(), 1e-7));
            prop_assert!(g2.transform(&r).approx_eq(&g2.reversed(), 1e-7));
            let (f1, f2) = common_perpendicular_feet(&g1, &g2, &tol).unwrap();
            let along = complex_distance(&p, &g1, &g2, &tol);
            if let Ok(l) = along {
                prop_assert!((l.real_part - dist_h3(&f1, &f2)).abs() < 1e-7 * l.real_part.max(1.0));
            }
        }

        #[test]
        fn distance_to_foot_is_minimal(g in arb_geodesic(), a in -2.0f64..2.0, b in -2.0f64..2.0, c in 0.2f64..3.0, s in -3.0f64..3.0) {
            let p = H3Point::new(a, b, c).unwrap();
            let (d, foot) = dist_point_geodesic(&p, &g);
            prop_assert!((dist_h3(&p, &foot) - d).abs() < 1e-8 * d.max(1.0));
            prop_assert!(dist_h3(&p, &g.point_at(s)) >= d - 1e-9);
        }
    }
}
