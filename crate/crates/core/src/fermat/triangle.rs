use serde::{Deserialize, Serialize};

use super::{angle_between, minimize_sum, FermatError, Target, TWO_PI_3};
use crate::hyp3::{dist_h3, H3Point};
use crate::lorentz::{self, Lv};

/// A compact triangle; its vertices always span a plane.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Triangle {
    pub v1: H3Point,
    pub v2: H3Point,
    pub v3: H3Point,
}

/// Whether every internal angle is below 2π/3, and otherwise which vertex is not.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TriangleClass {
    Acute2pi3,
    /// 0-based index of the vertex whose angle is at least 2π/3.
    Obtuse2pi3(usize),
}

/// Fermat point of a triangle and the minimal sum of distances.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TriangleFermat {
    pub point: H3Point,
    pub value: f64,
    pub class: TriangleClass,
    pub iterations: usize,
    pub residual: f64,
}

const ANGLE_FLOOR: f64 = 1e-9;

impl Triangle {
    pub fn new(v1: H3Point, v2: H3Point, v3: H3Point) -> Result<Self, FermatError> {
        let t = Self { v1, v2, v3 };
        let [a, b, c] = t.vertices();
        if dist_h3(&a, &b).min(dist_h3(&b, &c)).min(dist_h3(&c, &a)) <= ANGLE_FLOOR {
            return Err(FermatError::DegenerateTriangle);
        }
        let angles = t.angles();
        if angles
            .iter()
            .any(|&x| !(ANGLE_FLOOR..=std::f64::consts::PI - ANGLE_FLOOR).contains(&x))
        {
            return Err(FermatError::DegenerateTriangle);
        }
        Ok(t)
    }

    pub fn vertices(&self) -> [H3Point; 3] {
        [self.v1, self.v2, self.v3]
    }

    /// Internal angle at each vertex.
    pub fn angles(&self) -> [f64; 3] {
        let v = self.vertices().map(|p| Lv::from_point(&p));
        std::array::from_fn(|i| {
            let p = &v[i];
            angle_between(
                &lorentz::toward(p, &v[(i + 1) % 3]),
                &lorentz::toward(p, &v[(i + 2) % 3]),
            )
        })
    }
}

pub fn classify_triangle(tr: &Triangle) -> TriangleClass {
    let angles = tr.angles();
    (0..3)
        .filter(|&i| angles[i] >= TWO_PI_3 - 1e-12)
        .max_by(|&i, &j| angles[i].total_cmp(&angles[j]))
        .map_or(TriangleClass::Acute2pi3, TriangleClass::Obtuse2pi3)
}

/// Minimizer of the sum of distances to the vertices.
pub fn fermat_point_triangle(tr: &Triangle) -> TriangleFermat {
    let verts = tr.vertices();
    let class = classify_triangle(tr);
    if let TriangleClass::Obtuse2pi3(j) = class {
        let p = verts[j];
        let value = dist_h3(&p, &verts[(j + 1) % 3]) + dist_h3(&p, &verts[(j + 2) % 3]);
        return TriangleFermat {
            point: p,
            value,
            class,
            iterations: 0,
            residual: 0.0,
        };
    }
    let lv = verts.map(|p| Lv::from_point(&p));
    let start = lv[0].add(&lv[1]).add(&lv[2]);
    let targets = lv.map(Target::Point);
    let m = minimize_sum(&targets, start);
    TriangleFermat {
        point: m.point.to_point(),
        value: m.value,
        class,
        iterations: m.iterations,
        residual: m.residual,
    }
}
