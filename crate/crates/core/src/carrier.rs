//! Carrier graphs: rotation axes per superbasis, doubling of Steiner trees
//! into Buckles and Dumbbells, and the search for critical and minimal ones.

use std::collections::BTreeSet;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bqtree::{
    bq_test, vertex_at, Address, BqError, BqVerdict, OrientationKind, Orienter, TreeVertex,
};
use crate::charvar::{word_image, RepresentationPair, Slot, TraceTriple, Word};
use crate::fermat::{steiner_tree, FermatError, GeodesicTriple, SteinerKind, SteinerTree};
use crate::hyp3::{
    axis_of, coxeter_decomposition, dist_h3, pi_rotation, pi_rotation_axis, ExtendedComplex,
    Geodesic, H3Point, Hyp3Error, Isometry,
};
use crate::tolerance::Tolerance;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CarrierError {
    #[error("trace of slot {slot:?} at vertex '{address}' is not loxodromic")]
    NonLoxodromicPrimitive { address: Address, slot: Slot },
    #[error("the generators share a fixed point")]
    CommonFixedPoint,
    #[error("the triple does not satisfy the Q-conditions: {0}")]
    NotBqAccepted(String),
    #[error("search exceeded depth cap {depth_cap}")]
    CapExceeded { depth_cap: usize },
    #[error("the Steiner tree at vertex '{address}' has a valence-four vertex")]
    DegenerateValenceFour { address: Address },
    #[error(transparent)]
    Bq(BqError),
    #[error(transparent)]
    Fermat(#[from] FermatError),
    #[error(transparent)]
    Geometry(Hyp3Error),
}

impl From<Hyp3Error> for CarrierError {
    fn from(e: Hyp3Error) -> Self {
        match e {
            Hyp3Error::CommonFixedPoint => CarrierError::CommonFixedPoint,
            other => CarrierError::Geometry(other),
        }
    }
}

impl From<BqError> for CarrierError {
    fn from(e: BqError) -> Self {
        match e {
            BqError::NonLoxodromicPrimitive { address, slot } => {
                CarrierError::NonLoxodromicPrimitive { address, slot }
            }
            BqError::CapExceeded { depth_cap } => CarrierError::CapExceeded { depth_cap },
            BqError::Geometry(g) => g.into(),
            BqError::Fermat(f) => CarrierError::Fermat(f),
            other => CarrierError::Bq(other),
        }
    }
}

/// Axes `(γ_X, γ_Y, γ_Z)` of the π-rotations at the root superbasis, with
/// `ρX = r_Y r_Z`, `ρY = r_Z r_X` and `ρZ = −r_X r_Y`.
pub fn root_axes(rep: &RepresentationPair, tol: &Tolerance) -> Result<[Geodesic; 3], Hyp3Error> {
    let c = coxeter_decomposition(&rep.xi, &rep.eta, tol)?;
    Ok([
        pi_rotation_axis(&c.r1, tol)?,
        pi_rotation_axis(&c.r3, tol)?,
        pi_rotation_axis(&c.r2, tol)?,
    ])
}

/// Axes after the move replacing `slot`: the axis following `slot` in
/// cyclic order is reflected in the axis of `slot`.
pub fn step_axes(axes: &[Geodesic; 3], slot: Slot) -> [Geodesic; 3] {
    let mut out = *axes;
    let k = (slot.index() + 1) % 3;
    out[k] = axes[k].transform(&pi_rotation(&axes[slot.index()]));
    out
}

/// Length of the shortest Steiner tree of an axes triple.
pub fn vertex_steiner_length(axes: &[Geodesic; 3], tol: &Tolerance) -> Result<f64, FermatError> {
    let triple = GeodesicTriple::new(axes[0], axes[1], axes[2], tol)?;
    Ok(steiner_tree(&triple, tol)?[0].steiner_length)
}

/// An axes triple with the given traces, placed with the axis opposite the
/// longest common perpendicular on `(0, ∞)` and that perpendicular's
/// neighbours crossing it near height one. The Steiner length of this triple
/// equals that of any realization, and stays well conditioned when traces are
/// large.
pub fn trace_axes(t: &TraceTriple, tol: &Tolerance) -> Result<GeodesicTriple, FermatError> {
    let c = [-t.x / 2.0, -t.y / 2.0, t.z / 2.0];
    let delta = c.map(|w| w.acosh());
    let m = (0..3)
        .max_by(|&i, &j| delta[i].re.abs().total_cmp(&delta[j].re.abs()))
        .unwrap_or(0);
    let (a, b) = ((m + 1) % 3, (m + 2) % 3);
    // γ_a is at distance delta[b] from γ_m, and γ_b at distance delta[a].
    let cosh_side = (c[m] - c[a] * c[b]) / (delta[a].sinh() * delta[b].sinh());
    let side = cosh_side.acosh();
    let one = Complex64::new(1.0, 0.0);
    let offset = |d: Complex64, shift: Complex64| -> Result<Geodesic, Hyp3Error> {
        let h = d / 2.0;
        let scale = shift.exp();
        Geodesic::new(
            ExtendedComplex::Finite(scale * h.tanh()),
            ExtendedComplex::Finite(scale * one / h.tanh()),
        )
    };
    let vertical = Geodesic::new(ExtendedComplex::real(0.0), ExtendedComplex::Infinity)?;
    let ga = offset(delta[b], Complex64::new(0.0, 0.0))?;
    let mut best: Option<(f64, GeodesicTriple)> = None;
    let mut last_err = None;
    for (shift, sign) in [(side, 1.0), (-side, 1.0), (side, -1.0), (-side, -1.0)] {
        let gb = offset(delta[a] * sign, shift)?;
        let mut g = [vertical; 3];
        g[m] = vertical;
        g[a] = ga;
        g[b] = gb;
        let triple = match GeodesicTriple::new(g[0], g[1], g[2], tol) {
            Ok(triple) => triple,
            Err(e) => {
                last_err = Some(e);
                continue;
            }
        };
        let found = triple.hexagon().side_lengths[2 * a + 1].as_complex().cosh();
        let err = (found * found - c[m] * c[m]).norm() / c[m].norm_sqr().max(1.0);
        if best.as_ref().is_none_or(|(e, _)| err < *e) {
            best = Some((err, triple));
        }
    }
    match (best, last_err) {
        (Some((_, triple)), _) => Ok(triple),
        (None, Some(e)) => Err(e),
        (None, None) => unreachable!("at least one candidate is tried"),
    }
}

/// Length of the shortest Steiner tree of the axes triple with traces `t`.
pub fn trace_steiner_length(t: &TraceTriple, tol: &Tolerance) -> Result<f64, FermatError> {
    Ok(steiner_tree(&trace_axes(t, tol)?, tol)?[0].steiner_length)
}

/// The rotation axes and translation axes attached to a superbasis.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AxesTriple {
    pub vertex: TreeVertex,
    pub axes: GeodesicTriple,
    /// Oriented axes of `ρX, ρY, ρZ`.
    pub delta_axes: [Geodesic; 3],
    #[serde(skip)]
    rotations: [Isometry; 3],
    #[serde(skip)]
    images: [Isometry; 3],
}

impl AxesTriple {
    pub fn rotations(&self) -> &[Isometry; 3] {
        &self.rotations
    }

    /// `ρX, ρY, ρZ` for the words of the vertex.
    pub fn images(&self) -> &[Isometry; 3] {
        &self.images
    }

    /// Largest projective discrepancy in `ρW = ± r_{W+1} r_{W+2}`.
    pub fn relation_residual(&self) -> f64 {
        let r = &self.rotations;
        (0..3)
            .map(|k| self.images[k].projective_diff(&(r[(k + 1) % 3] * r[(k + 2) % 3])))
            .fold(0.0, f64::max)
    }
}

pub fn axes_for_vertex(
    rep: &RepresentationPair,
    v: &TreeVertex,
    tol: &Tolerance,
) -> Result<AxesTriple, CarrierError> {
    let images = v.words.clone().map(|w| word_image(rep, &w));
    for slot in Slot::ALL {
        axis_of(&images[slot.index()], tol).map_err(|_| CarrierError::NonLoxodromicPrimitive {
            address: v.address.clone(),
            slot,
        })?;
        if crate::bqtree::trace_band(images[slot.index()].trace(), tol)
            == crate::bqtree::TraceBand::Inside
        {
            return Err(CarrierError::NonLoxodromicPrimitive {
                address: v.address.clone(),
                slot,
            });
        }
    }
    let g = v
        .address
        .moves()
        .iter()
        .try_fold(root_axes(rep, tol)?, |g, &s| {
            Ok::<_, Hyp3Error>(step_axes(&g, s))
        })?;
    let delta_axes = [
        axis_of(&images[0], tol)?,
        axis_of(&images[1], tol)?,
        axis_of(&images[2], tol)?,
    ];
    Ok(AxesTriple {
        vertex: v.clone(),
        axes: GeodesicTriple::new(g[0], g[1], g[2], tol)?,
        delta_axes,
        rotations: g.map(|a| pi_rotation(&a)),
        images,
    })
}

/// Combinatorial type of a trivalent rank-two graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Combinatorics {
    /// Two trivalent vertices joined by three edges.
    Buckle,
    /// Two loops joined by a bar.
    Dumbbell,
}

/// A carrier graph obtained by doubling the Steiner tree of a superbasis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CarrierGraph {
    pub combinatorics: Combinatorics,
    /// Buckle: the three edges in slot order. Dumbbell: the two loops, then the bar.
    pub edge_lengths: Vec<f64>,
    pub total_length: f64,
    pub marking_words: [Word; 3],
    pub vertex_address: Address,
    pub steiner_kind: String,
    /// The slot whose rotation axis the tree is doubled across.
    pub doubled_slot: Slot,
    /// Distance moved by the two gluing maps on the feet; zero up to rounding.
    pub identification_residual: f64,
    /// For critical carriers: the smallest increase of the Steiner length to a
    /// neighbouring superbasis, and whether that increase is within the tie tolerance.
    pub sink_margin: Option<f64>,
    pub sink_tie: bool,
    pub source: SteinerTree,
}

fn gluing_residual(axes: &AxesTriple, slot: Slot, feet: [(Slot, H3Point); 2]) -> f64 {
    let (a, b) = slot.others();
    let r = &axes.rotations[slot.index()];
    let img = |s: Slot| axes.images[s.index()];
    feet.iter()
        .map(|&(s, p)| {
            let glue = if s == a {
                img(b).inverse() * *r
            } else {
                img(a) * *r
            };
            dist_h3(&glue.apply_point(&p), &p)
        })
        .fold(0.0, f64::max)
}

/// Doubles a Steiner tree of the axes triple into a carrier graph.
pub fn double_steiner(tree: &SteinerTree, axes: &AxesTriple) -> Result<CarrierGraph, CarrierError> {
    let address = axes.vertex.address.clone();
    let (combinatorics, edge_lengths, doubled_slot, feet) = match &tree.kind {
        SteinerKind::FermatTripod {
            on_axis: Some(_), ..
        } => {
            return Err(CarrierError::DegenerateValenceFour { address });
        }
        SteinerKind::FermatTripod { feet, legs, .. } => {
            let k = (0..3)
                .min_by(|&i, &j| legs[i].total_cmp(&legs[j]))
                .unwrap_or(0);
            let slot = Slot::from_index(k);
            let (a, b) = slot.others();
            let glued = [(a, feet[a.index()]), (b, feet[b.index()])];
            (
                Combinatorics::Buckle,
                legs.iter().map(|l| 2.0 * l).collect(),
                slot,
                glued,
            )
        }
        SteinerKind::AxisPath {
            axis_index,
            partners,
            feet,
            legs,
            bar,
            ..
        } => {
            let slot = Slot::from_index(*axis_index);
            let glued = [
                (Slot::from_index(partners[0]), feet[0]),
                (Slot::from_index(partners[1]), feet[1]),
            ];
            (
                Combinatorics::Dumbbell,
                vec![2.0 * legs[0], 2.0 * legs[1], *bar],
                slot,
                glued,
            )
        }
    };
    let steiner_kind = match tree.kind {
        SteinerKind::FermatTripod { .. } => "FermatTripod",
        SteinerKind::AxisPath { .. } => "AxisPath",
    };
    Ok(CarrierGraph {
        combinatorics,
        total_length: edge_lengths.iter().sum(),
        edge_lengths,
        marking_words: axes.vertex.words.clone(),
        vertex_address: address,
        steiner_kind: steiner_kind.into(),
        doubled_slot,
        identification_residual: gluing_residual(axes, doubled_slot, feet),
        sink_margin: None,
        sink_tie: false,
        source: tree.clone(),
    })
}

/// Critical carrier graphs: one per Steiner tree at every sink of the
/// Steiner-length orientation, sorted by total length and then address.
/// A vertex counts as a sink when no neighbour is shorter by more than the
/// tie tolerance, so both ends of a tied edge are reported.
pub fn find_critical_carriers(
    rep: &RepresentationPair,
    depth_cap: usize,
    tol: &Tolerance,
) -> Result<Vec<CarrierGraph>, CarrierError> {
    let t = rep.traces();
    match bq_test(&t, depth_cap, tol) {
        BqVerdict::Accept { .. } => {}
        other => return Err(CarrierError::NotBqAccepted(verdict_summary(&other))),
    }
    let mut orienter = Orienter::new(t, OrientationKind::SteinerLength, Some(*rep), *tol);
    let region = orienter.attracting_subtree(depth_cap)?;
    let mut candidates: BTreeSet<Address> = region.subtree.iter().cloned().collect();
    for a in &region.subtree {
        candidates.extend(Slot::ALL.map(|s| a.step(s)));
    }
    let mut out = Vec::new();
    for a in &candidates {
        let here = orienter.value(a, Slot::X)?;
        let mut margin = f64::INFINITY;
        for s in Slot::ALL {
            margin = margin.min(orienter.value(&a.step(s), Slot::X)? - here);
        }
        let slack = tol.tie * here.abs().max(1.0);
        if margin < -slack {
            continue;
        }
        let vertex = vertex_at(&t, a);
        let axes = axes_for_vertex(rep, &vertex, tol)?;
        for tree in steiner_tree(&axes.axes, tol)? {
            match double_steiner(&tree, &axes) {
                Ok(mut g) => {
                    g.sink_margin = Some(margin);
                    g.sink_tie = margin <= slack;
                    out.push(g);
                }
                Err(CarrierError::DegenerateValenceFour { .. }) => {}
                Err(e) => return Err(e),
            }
        }
    }
    Ok(sort_carriers(out, tol))
}

/// Orders by total length; lengths tied within the tolerance are ordered by address.
fn sort_carriers(mut all: Vec<CarrierGraph>, tol: &Tolerance) -> Vec<CarrierGraph> {
    all.sort_by(|x, y| x.total_length.total_cmp(&y.total_length));
    let mut out = Vec::with_capacity(all.len());
    let mut group: Vec<CarrierGraph> = Vec::new();
    for g in all {
        if let Some(first) = group.first() {
            if g.total_length - first.total_length > tol.tie * first.total_length.abs().max(1.0) {
                group.sort_by(|x, y| x.vertex_address.cmp(&y.vertex_address));
                out.append(&mut group);
            }
        }
        group.push(g);
    }
    group.sort_by(|x, y| x.vertex_address.cmp(&y.vertex_address));
    out.append(&mut group);
    out
}

/// The critical carriers of least total length, ties within the tolerance included.
pub fn minimal_carrier(
    rep: &RepresentationPair,
    depth_cap: usize,
    tol: &Tolerance,
) -> Result<Vec<CarrierGraph>, CarrierError> {
    let all = find_critical_carriers(rep, depth_cap, tol)?;
    Ok(minimal_of(all, tol))
}

pub(crate) fn minimal_of(all: Vec<CarrierGraph>, tol: &Tolerance) -> Vec<CarrierGraph> {
    let best = all
        .iter()
        .map(|g| g.total_length)
        .fold(f64::INFINITY, f64::min);
    all.into_iter()
        .filter(|g| g.total_length <= best + tol.tie * best.abs().max(1.0))
        .collect()
}

fn verdict_summary(v: &BqVerdict) -> String {
    match v {
        BqVerdict::Accept { .. } => "accepted".into(),
        BqVerdict::RejectElliptic {
            witness,
            slot,
            trace,
        } => {
            format!("elliptic trace {trace} in slot {slot:?} at vertex '{witness}'")
        }
        BqVerdict::RejectReducible => "reducible".into(),
        BqVerdict::Indeterminate { depth_cap, .. } => format!("undecided within depth {depth_cap}"),
    }
}
