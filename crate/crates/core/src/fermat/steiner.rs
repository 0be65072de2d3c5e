use serde::{Deserialize, Serialize};

use super::triple::{distance_slope, increasing_root, solve_triple, GeodesicTriple};
use super::{angle_between, FermatError};
use crate::hyp3::{H3Point, Isometry};
use crate::lorentz::{self, Lv};
use crate::tolerance::Tolerance;

/// The two combinatorial types of a Steiner tree of three geodesics.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type")]
pub enum SteinerKind {
    /// A trivalent center joined to its projections on the three geodesics.
    FermatTripod {
        center: H3Point,
        feet: [H3Point; 3],
        legs: [f64; 3],
        /// The center lies on this geodesic (the valence-four boundary case).
        on_axis: Option<usize>,
    },
    /// A segment `q2 q3` on one geodesic, with `q2` joined to the next
    /// geodesic in cyclic order and `q3` to the one after.
    AxisPath {
        axis_index: usize,
        partners: [usize; 2],
        q2: H3Point,
        q3: H3Point,
        feet: [H3Point; 2],
        legs: [f64; 2],
        bar: f64,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SteinerTree {
    pub kind: SteinerKind,
    /// Length with the part lying on a geodesic counted with weight one half.
    pub steiner_length: f64,
    pub plain_length: f64,
    /// Tripod: angles between consecutive legs. Axis path: angle between each
    /// leg and the bar.
    pub junction_angles: Vec<f64>,
}

impl SteinerTree {
    fn order_key(&self) -> (u8, usize) {
        match &self.kind {
            SteinerKind::FermatTripod { .. } => (0, 0),
            SteinerKind::AxisPath { axis_index, .. } => (1, *axis_index),
        }
    }

    pub fn is_tripod(&self) -> bool {
        matches!(self.kind, SteinerKind::FermatTripod { .. })
    }

    fn transform(mut self, m: &Isometry) -> Self {
        let map = |p: &mut H3Point| *p = m.apply_point(p);
        match &mut self.kind {
            SteinerKind::FermatTripod { center, feet, .. } => {
                map(center);
                feet.iter_mut().for_each(map);
            }
            SteinerKind::AxisPath { q2, q3, feet, .. } => {
                map(q2);
                map(q3);
                feet.iter_mut().for_each(map);
            }
        }
        self
    }
}

fn tripod(triple: &GeodesicTriple, tol: &Tolerance) -> Result<SteinerTree, FermatError> {
    let f = solve_triple(triple, tol)?;
    let p = Lv::from_point(&f.point);
    let dirs: Vec<Option<Lv>> = (0..3)
        .map(|k| (f.legs[k] > 0.0).then(|| lorentz::toward(&p, &Lv::from_point(&f.feet[k]))))
        .collect();
    let junction_angles = (0..3)
        .filter_map(|k| match (&dirs[k], &dirs[(k + 1) % 3]) {
            (Some(u), Some(v)) => Some(angle_between(u, v)),
            _ => None,
        })
        .collect();
    Ok(SteinerTree {
        kind: SteinerKind::FermatTripod {
            center: f.point,
            feet: f.feet,
            legs: f.legs,
            on_axis: f.on_axis,
        },
        steiner_length: f.value,
        plain_length: f.value,
        junction_angles,
    })
}

/// The stationary axis path on geodesic `j`, if its bar has positive length.
fn axis_path(triple: &GeodesicTriple, j: usize, tol: &Tolerance) -> Option<SteinerTree> {
    let lines = triple.lines();
    let line = &lines[j];
    let partners = [(j + 1) % 3, (j + 2) % 3];
    let slope_root =
        |k: usize, target: f64| increasing_root(|s| distance_slope(line, &lines[k], s) - target);
    // Leg k sits where the slope of its distance is +½ if the bar continues
    // forward from it, and −½ if the bar continues backward.
    let (a, b) = (partners[0], partners[1]);
    let forward = (slope_root(a, 0.5), slope_root(b, -0.5));
    let backward = (slope_root(a, -0.5), slope_root(b, 0.5));
    let (sa, sb) = if forward.1 - forward.0 > tol.degenerate {
        forward
    } else if backward.0 - backward.1 > tol.degenerate {
        backward
    } else {
        return None;
    };
    let (qa, qb) = (line.at(sa), line.at(sb));
    let (pa, pb) = (lines[a].project(&qa), lines[b].project(&qb));
    let bar = (sb - sa).abs();
    let along = line.tangent_at(sa).scale((sb - sa).signum());
    let back = line.tangent_at(sb).scale((sa - sb).signum());
    Some(SteinerTree {
        kind: SteinerKind::AxisPath {
            axis_index: j,
            partners,
            q2: qa.to_point(),
            q3: qb.to_point(),
            feet: [pa.foot.to_point(), pb.foot.to_point()],
            legs: [pa.dist, pb.dist],
            bar,
        },
        steiner_length: pa.dist + pb.dist + bar / 2.0,
        plain_length: pa.dist + pb.dist + bar,
        junction_angles: vec![
            angle_between(&pa.toward, &along),
            angle_between(&pb.toward, &back),
        ],
    })
}

/// All Steiner trees of the triple: every candidate within the tie tolerance
/// of the shortest, ordered by length, then tripod before axis path, then axis.
pub fn steiner_tree(
    triple: &GeodesicTriple,
    tol: &Tolerance,
) -> Result<Vec<SteinerTree>, FermatError> {
    let (moved, back) = triple.centered(tol);
    let mut candidates = vec![tripod(&moved, tol)?];
    candidates.extend((0..3).filter_map(|j| axis_path(&moved, j, tol)));
    let best = candidates
        .iter()
        .map(|c| c.steiner_length)
        .fold(f64::INFINITY, f64::min);
    let mut trees: Vec<SteinerTree> = candidates
        .into_iter()
        .filter(|c| c.steiner_length <= best + tol.tie)
        .map(|c| c.transform(&back))
        .collect();
    trees.sort_by(|x, y| {
        x.steiner_length
            .total_cmp(&y.steiner_length)
            .then_with(|| x.order_key().cmp(&y.order_key()))
    });
    Ok(trees)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fermat::TWO_PI_3;
    use crate::hyp3::{geodesic_distance, ExtendedComplex, Geodesic};

    fn geo(a: f64, b: f64) -> Geodesic {
        Geodesic::new(ExtendedComplex::real(a), ExtendedComplex::real(b)).unwrap()
    }

    fn vertical() -> Geodesic {
        Geodesic::new(ExtendedComplex::real(0.0), ExtendedComplex::Infinity).unwrap()
    }

    fn far() -> Geodesic {
        Geodesic::new(
            ExtendedComplex::new(0.0, 10.0),
            ExtendedComplex::new(0.0, 20.0),
        )
        .unwrap()
    }

    /// Coplanar geodesics with pairwise distances `a`, `a` (to the middle one) and `2a`.
    fn a_a_2a(a: f64) -> [Geodesic; 3] {
        let t = (a / 2.0).tanh();
        let cosh_b = ((2.0 * a).cosh() + a.cosh().powi(2)) / a.sinh().powi(2);
        let r = cosh_b.acosh().exp();
        let axis = Geodesic::new(ExtendedComplex::real(0.0), ExtendedComplex::Infinity).unwrap();
        [geo(t, 1.0 / t), geo(r * t, r / t), axis]
    }

    #[test]
    fn a_a_2a_configuration_has_two_steiner_trees() {
        let tol = Tolerance::default();
        let a = 0.5;
        let [g1, g2, g3] = a_a_2a(a);
        assert!((geodesic_distance(&g1, &g3, &tol).unwrap() - a).abs() < 1e-12);
        assert!((geodesic_distance(&g2, &g3, &tol).unwrap() - a).abs() < 1e-12);
        assert!((geodesic_distance(&g1, &g2, &tol).unwrap() - 2.0 * a).abs() < 1e-12);
        let t = GeodesicTriple::new(g1, g2, g3, &tol).unwrap();
        let trees = steiner_tree(&t, &tol).unwrap();
        assert_eq!(trees.len(), 2, "{trees:#?}");
        assert!(trees[0].is_tripod());
        assert!(matches!(
            trees[1].kind,
            SteinerKind::AxisPath { axis_index: 2, .. }
        ));
        assert!((trees[0].steiner_length - trees[1].steiner_length).abs() < 1e-6);
    }

    #[test]
    fn axis_path_junctions_are_two_pi_over_three() {
        let tol = Tolerance::default();
        let t = GeodesicTriple::new(geo(0.1, 0.2), vertical(), far(), &tol).unwrap();
        let trees = steiner_tree(&t, &tol).unwrap();
        let path = trees.iter().find(|t| !t.is_tripod()).expect("axis path");
        for a in &path.junction_angles {
            assert!((a - TWO_PI_3).abs() < 1e-6);
        }
        assert!(path.steiner_length <= tripod(&t, &tol).unwrap().plain_length);
    }

    #[test]
    fn axis_path_agrees_with_coordinate_golden_section() {
        let tol = Tolerance::default();
        let t = GeodesicTriple::new(geo(0.1, 0.2), vertical(), far(), &tol).unwrap();
        let path = axis_path(&t, 1, &tol).unwrap();
        let lines = t.lines();
        let f = |s2: f64, s3: f64| {
            lines[2].project(&lines[1].at(s2)).dist
                + lines[0].project(&lines[1].at(s3)).dist
                + (s3 - s2).abs() / 2.0
        };
        let golden = |g: &dyn Fn(f64) -> f64| {
            let r = (5f64.sqrt() - 1.0) / 2.0;
            let (mut a, mut b) = (-20.0, 20.0);
            while b - a > 1e-11 {
                let (c, d) = (b - r * (b - a), a + r * (b - a));
                if g(c) < g(d) {
                    b = d;
                } else {
                    a = c;
                }
            }
            0.5 * (a + b)
        };
        // Nested search: the partial minimum over s3 is convex in s2.
        let inner = |s2: f64| f(s2, golden(&|s3| f(s2, s3)));
        let s2 = golden(&inner);
        assert!(
            (inner(s2) - path.steiner_length).abs() < 1e-7,
            "{} vs {}",
            inner(s2),
            path.steiner_length
        );
    }
}
