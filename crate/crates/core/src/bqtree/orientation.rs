use std::collections::{BTreeSet, HashMap, VecDeque};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::node::{Address, TreeEdge, TreeVertex};
use super::search::{edge_escapes, trace_band, TraceBand};
use super::BqError;
use crate::carrier::{root_axes, step_axes, trace_steiner_length};
use crate::charvar::{neighbor_trace, RepresentationPair, Slot, TraceTriple};
use crate::hyp3::Geodesic;
use crate::tolerance::Tolerance;

/// The functions used to orient the edges of the tree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OrientationKind {
    /// Modulus of the trace of the replaced class.
    TraceModulus,
    /// Real translation length of the replaced class.
    RealLength,
    /// Complement of the angle between consecutive rotation axes, read off
    /// the hexagon of the vertex.
    Angle,
    /// Steiner length of the axes triple of the vertex.
    SteinerLength,
}

impl OrientationKind {
    pub const ALL: [OrientationKind; 4] = [
        OrientationKind::TraceModulus,
        OrientationKind::RealLength,
        OrientationKind::Angle,
        OrientationKind::SteinerLength,
    ];

    fn per_vertex(self) -> bool {
        self == OrientationKind::SteinerLength
    }
}

/// The oriented form of an edge.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeDirection {
    pub from: Address,
    pub toward: Address,
    /// Values compared at the tail and at the head.
    pub values: (f64, f64),
    /// The values agreed within the tie tolerance.
    pub tie: bool,
}

/// A connected subtree with every outside edge pointing into it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AttractingSubtree {
    pub kind: OrientationKind,
    pub subtree: Vec<Address>,
    pub sinks: Vec<Address>,
}

/// Memoized orientation values over one representation.
#[derive(Clone, Debug)]
pub struct Orienter {
    kind: OrientationKind,
    tol: Tolerance,
    rep: Option<RepresentationPair>,
    traces: HashMap<Address, TraceTriple>,
    axes: HashMap<Address, [Geodesic; 3]>,
    values: HashMap<(Address, Slot), f64>,
}

impl Orienter {
    pub fn new(
        t: TraceTriple,
        kind: OrientationKind,
        rep: Option<RepresentationPair>,
        tol: Tolerance,
    ) -> Self {
        let traces = HashMap::from([(Address::root(), t)]);
        Self {
            kind,
            tol,
            rep,
            traces,
            axes: HashMap::new(),
            values: HashMap::new(),
        }
    }

    pub fn kind(&self) -> OrientationKind {
        self.kind
    }

    pub fn traces_at(&mut self, a: &Address) -> TraceTriple {
        if let Some(t) = self.traces.get(a) {
            return *t;
        }
        let slot = a.parent_slot().expect("root traces are seeded");
        let t = neighbor_trace(&self.traces_at(&a.step(slot)), slot);
        self.traces.insert(a.clone(), t);
        t
    }

    /// Rotation axes `(γ_X, γ_Y, γ_Z)` at a vertex, obtained by reflecting
    /// the root axes along the path.
    pub fn axes_at(&mut self, a: &Address) -> Result<[Geodesic; 3], BqError> {
        if let Some(g) = self.axes.get(a) {
            return Ok(*g);
        }
        let g = match a.parent_slot() {
            None => {
                let rep = self.rep.as_ref().ok_or(BqError::MissingRepresentation)?;
                root_axes(rep, &self.tol)?
            }
            Some(slot) => step_axes(&self.axes_at(&a.step(slot))?, slot),
        };
        self.axes.insert(a.clone(), g);
        Ok(g)
    }

    fn require_loxodromic(&mut self, a: &Address) -> Result<TraceTriple, BqError> {
        let t = self.traces_at(a);
        for slot in Slot::ALL {
            if trace_band(t.get(slot), &self.tol) == TraceBand::Inside {
                return Err(BqError::NonLoxodromicPrimitive {
                    address: a.clone(),
                    slot,
                });
            }
        }
        Ok(t)
    }

    /// The value of the orientation function at `(slot, vertex)`.
    pub fn value(&mut self, a: &Address, slot: Slot) -> Result<f64, BqError> {
        let slot = if self.kind.per_vertex() {
            Slot::X
        } else {
            slot
        };
        let key = (a.clone(), slot);
        if let Some(v) = self.values.get(&key) {
            return Ok(*v);
        }
        let v = match self.kind {
            OrientationKind::TraceModulus => self.traces_at(a).get(slot).norm(),
            OrientationKind::RealLength => real_length(self.traces_at(a).get(slot)),
            OrientationKind::Angle => {
                complementary_angles(&self.require_loxodromic(a)?)[slot.index()]
            }
            OrientationKind::SteinerLength => {
                let t = self.require_loxodromic(a)?;
                trace_steiner_length(&t, &self.tol)?
            }
        };
        self.values.insert(key, v);
        Ok(v)
    }

    /// Orients the edge leaving `a` through `slot`.
    pub fn orient(&mut self, a: &Address, slot: Slot) -> Result<EdgeDirection, BqError> {
        let b = a.step(slot);
        let (fa, fb) = (self.value(a, slot)?, self.value(&b, slot)?);
        let scale = fa.abs().max(fb.abs()).max(1.0);
        let tie = (fa - fb).abs() <= self.tol.tie * scale;
        let toward_b = if tie { b < *a } else { fb < fa };
        let (from, toward, values) = if toward_b {
            (a.clone(), b, (fa, fb))
        } else {
            (b, a.clone(), (fb, fa))
        };
        Ok(EdgeDirection {
            from,
            toward,
            values,
            tie,
        })
    }

    fn points_to(&mut self, a: &Address, slot: Slot) -> Result<bool, BqError> {
        Ok(self.orient(a, slot)?.toward == *a)
    }

    pub fn is_sink(&mut self, a: &Address) -> Result<bool, BqError> {
        for slot in Slot::ALL {
            if !self.points_to(a, slot)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Whether the outside edge from `inside` through `slot` may be left out:
    /// it points inward and traces beyond it escape. Orientations other than
    /// the trace modulus also need the next two levels to point inward.
    fn certified(&mut self, inside: &Address, slot: Slot) -> Result<bool, BqError> {
        if !self.points_to(inside, slot)? || !edge_escapes(&self.traces_at(inside), slot, &self.tol)
        {
            return Ok(false);
        }
        if self.kind == OrientationKind::TraceModulus {
            return Ok(true);
        }
        let mut layer = vec![(inside.step(slot), slot)];
        for _ in 0..2 {
            let mut next = Vec::new();
            for (v, came) in layer {
                let (s1, s2) = came.others();
                for s in [s1, s2] {
                    if !self.points_to(&v, s)? {
                        return Ok(false);
                    }
                    next.push((v.step(s), s));
                }
            }
            layer = next;
        }
        Ok(true)
    }

    /// Walks downhill from the root to a sink.
    fn descend(&mut self, depth_cap: usize) -> Result<Address, BqError> {
        let mut v = Address::root();
        loop {
            let mut best: Option<(f64, Slot)> = None;
            for slot in Slot::ALL {
                let d = self.orient(&v, slot)?;
                if d.from == v {
                    let drop = d.values.0 - d.values.1;
                    if best.is_none_or(|(b, _)| drop > b) {
                        best = Some((drop, slot));
                    }
                }
            }
            let Some((_, slot)) = best else { return Ok(v) };
            v = v.step(slot);
            if v.depth() > depth_cap {
                return Err(BqError::CapExceeded { depth_cap });
            }
        }
    }

    /// The smallest connected subtree around the sinks with every outside
    /// edge pointing into it.
    pub fn attracting_subtree(&mut self, depth_cap: usize) -> Result<AttractingSubtree, BqError> {
        const MAX_SIZE: usize = 100_000;
        let start = self.descend(depth_cap)?;
        let mut inside = BTreeSet::from([start.clone()]);
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for slot in Slot::ALL {
                let u = v.step(slot);
                if inside.contains(&u) || self.certified(&v, slot)? {
                    continue;
                }
                if u.depth() > depth_cap || inside.len() >= MAX_SIZE {
                    return Err(BqError::CapExceeded { depth_cap });
                }
                inside.insert(u.clone());
                queue.push_back(u);
            }
        }
        self.prune(&mut inside)?;
        let mut sinks = Vec::new();
        for a in &inside {
            if self.is_sink(a)? {
                sinks.push(a.clone());
            }
        }
        Ok(AttractingSubtree {
            kind: self.kind,
            subtree: inside.into_iter().collect(),
            sinks,
        })
    }

    /// Removes leaves whose single inside edge points strictly away from them.
    fn prune(&mut self, inside: &mut BTreeSet<Address>) -> Result<(), BqError> {
        loop {
            let mut removed = false;
            let leaves: Vec<Address> = inside.iter().cloned().collect();
            for leaf in leaves {
                if inside.len() == 1 {
                    return Ok(());
                }
                let links: Vec<Slot> = Slot::ALL
                    .into_iter()
                    .filter(|&s| inside.contains(&leaf.step(s)))
                    .collect();
                if let [slot] = links[..] {
                    let d = self.orient(&leaf, slot)?;
                    if d.from == leaf && !d.tie {
                        inside.remove(&leaf);
                        removed = true;
                    }
                }
            }
            if !removed {
                return Ok(());
            }
        }
    }
}

/// `2·Re arccosh(t/2)`, the real translation length for trace `t`.
pub(crate) fn real_length(t: Complex64) -> f64 {
    2.0 * (t / 2.0).acosh().re.abs()
}

/// Complex cosh of the hexagon sides lying on `(γ_X, γ_Y, γ_Z)`, from the traces.
pub(crate) fn axis_side_cosh(t: &TraceTriple) -> [Complex64; 3] {
    let c = [-t.x / 2.0, -t.y / 2.0, t.z / 2.0];
    let s = c.map(|w| w.acosh().sinh());
    std::array::from_fn(|k| {
        let (i, j) = ((k + 1) % 3, (k + 2) % 3);
        (c[k] - c[i] * c[j]) / (s[i] * s[j])
    })
}

/// `π − |Im arccosh(·)|` for each of the three axis sides.
pub(crate) fn complementary_angles(t: &TraceTriple) -> [f64; 3] {
    axis_side_cosh(t).map(|c| std::f64::consts::PI - c.acosh().im.abs())
}

/// The orientation value of a single `(slot, vertex)` pair.
pub fn orientation_value(
    v: &TreeVertex,
    slot: Slot,
    kind: OrientationKind,
    rep: Option<&RepresentationPair>,
    tol: &Tolerance,
) -> Result<f64, BqError> {
    let root = rep.map_or(v.traces, |r| r.traces());
    let mut o = Orienter::new(root, kind, rep.copied(), *tol);
    o.traces.insert(v.address.clone(), v.traces);
    o.value(&v.address, slot)
}

/// Orients a tree edge for the representation with root traces `t`.
pub fn orient_edge(
    e: &TreeEdge,
    t: &TraceTriple,
    kind: OrientationKind,
    rep: Option<&RepresentationPair>,
    tol: &Tolerance,
) -> Result<EdgeDirection, BqError> {
    Orienter::new(*t, kind, rep.copied(), *tol).orient(&e.from, e.slot)
}

/// Attracting subtree and sinks of one orientation.
pub fn attracting_subtree(
    t: &TraceTriple,
    kind: OrientationKind,
    rep: Option<&RepresentationPair>,
    depth_cap: usize,
    tol: &Tolerance,
) -> Result<AttractingSubtree, BqError> {
    Orienter::new(*t, kind, rep.copied(), *tol).attracting_subtree(depth_cap)
}
