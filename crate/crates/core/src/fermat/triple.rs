use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::triangle::{fermat_point_triangle, Triangle, TriangleClass};
use super::{angle_between, minimize_sum, FermatError, Target, TWO_PI_3};
use crate::hyp3::{
    common_perpendicular_feet, geodesic_distance, hexagon_of_triple, Geodesic, H3Point, Hyp3Error,
    Isometry, RightAngledHexagon,
};
use crate::lorentz::{Line, Lv};
use crate::tolerance::Tolerance;

/// Three pairwise disjoint geodesics in general position.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GeodesicTriple {
    geodesics: [Geodesic; 3],
    hexagon: RightAngledHexagon,
}

impl GeodesicTriple {
    pub fn new(
        g1: Geodesic,
        g2: Geodesic,
        g3: Geodesic,
        tol: &Tolerance,
    ) -> Result<Self, FermatError> {
        let geodesics = [g1, g2, g3];
        for i in 0..3 {
            let j = (i + 1) % 3;
            let d = geodesic_distance(&geodesics[i], &geodesics[j], tol).map_err(|e| match e {
                Hyp3Error::Intersecting => genericity(format!("geodesics {i} and {j} intersect")),
                Hyp3Error::Parallel => {
                    genericity(format!("geodesics {i} and {j} share an endpoint"))
                }
                other => FermatError::Geometry(other),
            })?;
            if d <= tol.degenerate {
                return Err(genericity(format!("geodesics {i} and {j} are too close")));
            }
        }
        let hexagon = hexagon_of_triple(&g1, &g2, &g3, tol)?;
        let common_orthogonal = [0, 2, 4].iter().all(|&k| {
            let l = &hexagon.side_lengths[k];
            l.real_part.abs() <= tol.degenerate && l.angle.sin().abs() <= tol.degenerate
        });
        if common_orthogonal {
            return Err(genericity(
                "all three geodesics are orthogonal to one geodesic".into(),
            ));
        }
        Ok(Self { geodesics, hexagon })
    }

    pub fn geodesics(&self) -> &[Geodesic; 3] {
        &self.geodesics
    }

    pub fn hexagon(&self) -> &RightAngledHexagon {
        &self.hexagon
    }

    /// All three geodesics are orthogonal to one plane, so the hexagon collapses to a triangle.
    pub fn is_triangle_case(&self) -> bool {
        [0, 2, 4].iter().all(|&k| self.hexagon.degenerate_flags[k])
    }

    pub fn transform(&self, m: &Isometry, tol: &Tolerance) -> Result<Self, FermatError> {
        let [a, b, c] = self.geodesics.map(|g| g.transform(m));
        Self::new(a, b, c, tol)
    }

    /// A copy moved so that the middle geodesic runs through the base point
    /// halfway between its two perpendicular feet, with the map back.
    pub(crate) fn centered(&self, tol: &Tolerance) -> (Self, Isometry) {
        let n = self.geodesics[1].normalizer();
        let moved = self.geodesics.map(|g| g.transform(&n));
        let height = |k: usize| common_perpendicular_feet(&moved[1], &moved[k], tol).map(|f| f.0.c);
        let recentred = match (height(0), height(2)) {
            (Ok(a), Ok(b)) if (a * b).is_normal() => {
                let m = Isometry::diagonal(Complex64::new((a * b).sqrt().sqrt().recip(), 0.0)) * n;
                self.transform(&m, tol).ok().map(|t| (t, m.inverse()))
            }
            _ => None,
        };
        recentred.unwrap_or_else(|| (self.clone(), Isometry::identity()))
    }

    pub(crate) fn lines(&self) -> [Line; 3] {
        self.geodesics.map(|g| Line::from_geodesic(&g))
    }
}

fn genericity(reason: String) -> FermatError {
    FermatError::GenericityViolation(reason)
}

/// The point on one geodesic that balances the base angles toward the other two.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlanarPoint {
    pub index: usize,
    pub point: H3Point,
    /// Sum of the distances to the other two geodesics.
    pub value: f64,
    pub internal_angle: f64,
    /// The two base angles, toward the previous and the next geodesic.
    pub base_angles: [f64; 2],
}

/// Root of an increasing function on the real line, by bracketing and bisection.
pub(crate) fn increasing_root(f: impl Fn(f64) -> f64) -> f64 {
    let (mut lo, mut hi) = (-1.0, 1.0);
    while f(lo) > 0.0 && lo > -700.0 {
        hi = lo;
        lo *= 2.0;
    }
    while f(hi) < 0.0 && hi < 700.0 {
        lo = hi;
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Derivative along `line` of the distance to `other` at arclength `s`.
pub(crate) fn distance_slope(line: &Line, other: &Line, s: f64) -> f64 {
    let p = line.at(s);
    -other.project(&p).toward.dot(&line.tangent_at(s))
}

pub fn planar_point(triple: &GeodesicTriple, j: usize) -> PlanarPoint {
    let lines = triple.lines();
    let (prev, next) = (&lines[(j + 2) % 3], &lines[(j + 1) % 3]);
    let line = &lines[j];
    let s = increasing_root(|s| distance_slope(line, prev, s) + distance_slope(line, next, s));
    let p = line.at(s);
    let (a, b) = (prev.project(&p), next.project(&p));
    let t = line.tangent_at(s);
    PlanarPoint {
        index: j,
        point: p.to_point(),
        value: a.dist + b.dist,
        internal_angle: angle_between(&a.toward, &b.toward),
        base_angles: [
            angle_between(&a.toward, &t.scale(-1.0)),
            angle_between(&b.toward, &t),
        ],
    }
}

/// How the Fermat point of a triple was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FermatPointKind {
    /// Interior balanced point: projection directions pairwise at 2π/3.
    Balanced,
    /// The planar point on the geodesic with an internal angle of at least 2π/3.
    Planar(usize),
    /// All geodesics orthogonal to a plane; solved as a triangle in that plane.
    Triangle,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TripleFermat {
    pub point: H3Point,
    pub value: f64,
    pub kind: FermatPointKind,
    /// Set when the point lies on one of the geodesics.
    pub on_axis: Option<usize>,
    pub feet: [H3Point; 3],
    pub legs: [f64; 3],
    pub iterations: usize,
    pub residual: f64,
}

impl TripleFermat {
    pub(crate) fn transform(mut self, m: &Isometry) -> Self {
        self.point = m.apply_point(&self.point);
        self.feet = self.feet.map(|f| m.apply_point(&f));
        self
    }
}

/// Minimizer of the sum of distances to the three geodesics.
pub fn fermat_point_triple(
    triple: &GeodesicTriple,
    tol: &Tolerance,
) -> Result<TripleFermat, FermatError> {
    let (moved, back) = triple.centered(tol);
    Ok(solve_triple(&moved, tol)?.transform(&back))
}

pub(crate) fn solve_triple(
    triple: &GeodesicTriple,
    tol: &Tolerance,
) -> Result<TripleFermat, FermatError> {
    let lines = triple.lines();
    let finish = |p: Lv, kind, on_axis: Option<usize>, iterations, residual| {
        let proj = lines.map(|l| l.project(&p));
        let mut legs = proj.map(|pr| pr.dist);
        let mut feet = proj.map(|pr| pr.foot.to_point());
        let on_axis = on_axis.or_else(|| (0..3).find(|&k| legs[k] <= tol.degenerate));
        if let Some(k) = on_axis {
            legs[k] = 0.0;
            feet[k] = p.to_point();
        }
        TripleFermat {
            point: p.to_point(),
            value: legs.iter().sum(),
            kind,
            on_axis,
            feet,
            legs,
            iterations,
            residual,
        }
    };

    if triple.is_triangle_case() {
        let g = triple.geodesics();
        let v: Vec<H3Point> = (0..3)
            .map(|i| common_perpendicular_feet(&g[i], &g[(i + 1) % 3], tol).map(|f| f.0))
            .collect::<Result<_, _>>()?;
        match Triangle::new(v[0], v[1], v[2]) {
            Ok(tri) => {
                let f = fermat_point_triangle(&tri);
                let on_axis = match f.class {
                    TriangleClass::Obtuse2pi3(j) => Some(j),
                    TriangleClass::Acute2pi3 => None,
                };
                let p = Lv::from_point(&f.point);
                return Ok(finish(
                    p,
                    FermatPointKind::Triangle,
                    on_axis,
                    f.iterations,
                    f.residual,
                ));
            }
            // Collinear feet: the middle one is the minimizer.
            Err(FermatError::DegenerateTriangle) => {
                let points = v.iter().map(Lv::from_point).collect::<Vec<_>>();
                let cost = |j: usize| -> f64 {
                    (0..3)
                        .filter(|&k| k != j)
                        .map(|k| lines[k].project(&points[j]).dist)
                        .sum()
                };
                let j = (0..3)
                    .min_by(|&a, &b| cost(a).total_cmp(&cost(b)))
                    .unwrap_or(0);
                return Ok(finish(
                    points[j],
                    FermatPointKind::Triangle,
                    Some(j),
                    0,
                    0.0,
                ));
            }
            Err(e) => return Err(e),
        }
    }

    let planar: Vec<PlanarPoint> = (0..3).map(|j| planar_point(triple, j)).collect();
    if let Some(pp) = planar
        .iter()
        .filter(|pp| pp.internal_angle >= TWO_PI_3 - 1e-12)
        .max_by(|a, b| a.internal_angle.total_cmp(&b.internal_angle))
    {
        let p = Lv::from_point(&pp.point);
        return Ok(finish(
            p,
            FermatPointKind::Planar(pp.index),
            Some(pp.index),
            0,
            0.0,
        ));
    }
    let start = planar
        .iter()
        .fold(Lv([0.0; 4]), |acc, pp| acc.add(&Lv::from_point(&pp.point)));
    let targets = lines.map(Target::Line);
    let m = minimize_sum(&targets, start);
    Ok(finish(
        m.point,
        FermatPointKind::Balanced,
        None,
        m.iterations,
        m.residual,
    ))
}
