use std::collections::{BTreeSet, VecDeque};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::node::Address;
use super::orientation::{OrientationKind, Orienter};
use crate::charvar::{is_reducible, neighbor_trace, Slot, TraceTriple};
use crate::tolerance::Tolerance;

/// Outcome of the Q-condition search.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict")]
pub enum BqVerdict {
    /// Every primitive trace outside the explored subtree provably escapes.
    /// `sinks` are the sinks of the trace-modulus orientation inside it.
    Accept {
        subtree: Vec<Address>,
        sinks: Vec<Address>,
    },
    RejectElliptic {
        witness: Address,
        slot: Slot,
        #[serde(with = "crate::json::complex")]
        trace: Complex64,
    },
    RejectReducible,
    /// The cap was hit with edges still open, or a trace sits too close to
    /// `[−2, 2]` to decide.
    Indeterminate {
        frontier: Vec<Address>,
        near_boundary: Vec<Address>,
        depth_cap: usize,
    },
}

impl BqVerdict {
    pub fn is_accept(&self) -> bool {
        matches!(self, BqVerdict::Accept { .. })
    }

    pub fn is_reject(&self) -> bool {
        matches!(
            self,
            BqVerdict::RejectElliptic { .. } | BqVerdict::RejectReducible
        )
    }

    /// 0 for accept, 1 for reject, 2 for indeterminate.
    pub fn exit_code(&self) -> i32 {
        match self {
            BqVerdict::Accept { .. } => 0,
            BqVerdict::RejectElliptic { .. } | BqVerdict::RejectReducible => 1,
            BqVerdict::Indeterminate { .. } => 2,
        }
    }
}

/// Position of a trace relative to the real interval `[−2, 2]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TraceBand {
    Inside,
    /// Within ten times the interval tolerance of the interval, but not inside.
    Near,
    Clear,
}

pub fn trace_band(t: Complex64, tol: &Tolerance) -> TraceBand {
    let within = |eps: f64| t.im.abs() <= eps && t.re.abs() <= 2.0 + eps;
    if within(tol.interval) {
        TraceBand::Inside
    } else if within(10.0 * tol.interval) {
        TraceBand::Near
    } else {
        TraceBand::Clear
    }
}

/// Whether every trace beyond the edge leaving a vertex with traces `t`
/// through `slot` grows: both traces shared across the edge exceed 2 and the
/// replaced trace does not shrink.
pub fn edge_escapes(t: &TraceTriple, slot: Slot, tol: &Tolerance) -> bool {
    let bound = 2.0 + tol.interval;
    let (a, b) = slot.others();
    let (x, y) = (t.get(a), t.get(b));
    let z = t.get(slot);
    x.norm() > bound && y.norm() > bound && (x * y - z).norm() >= z.norm()
}

const MAX_VISITED: usize = 250_000;

/// Decides the Q-conditions by breadth-first search from the root, closing
/// edges with [`edge_escapes`] and reporting the first elliptic witness.
pub fn bq_test(t: &TraceTriple, depth_cap: usize, tol: &Tolerance) -> BqVerdict {
    if is_reducible(t, tol) {
        return BqVerdict::RejectReducible;
    }
    let mut visited = BTreeSet::new();
    let mut frontier = BTreeSet::new();
    let mut near = BTreeSet::new();
    let mut queue = VecDeque::from([(Address::root(), *t)]);
    visited.insert(Address::root());
    let check = |address: &Address, slot: Slot, trace: Complex64, near: &mut BTreeSet<Address>| {
        match trace_band(trace, tol) {
            TraceBand::Inside => Some(BqVerdict::RejectElliptic {
                witness: address.clone(),
                slot,
                trace,
            }),
            TraceBand::Near => {
                near.insert(address.clone());
                None
            }
            TraceBand::Clear => None,
        }
    };
    while let Some((address, traces)) = queue.pop_front() {
        for slot in Slot::ALL {
            if let Some(v) = check(&address, slot, traces.get(slot), &mut near) {
                return v;
            }
        }
        for slot in Slot::ALL {
            if address.parent_slot() == Some(slot) {
                continue;
            }
            let next = neighbor_trace(&traces, slot);
            let child = address.step(slot);
            if edge_escapes(&traces, slot, tol) {
                if let Some(v) = check(&child, slot, next.get(slot), &mut near) {
                    return v;
                }
                continue;
            }
            if child.depth() > depth_cap || visited.len() >= MAX_VISITED {
                frontier.insert(address.clone());
                continue;
            }
            visited.insert(child.clone());
            queue.push_back((child, next));
        }
    }
    if !frontier.is_empty() || !near.is_empty() {
        return BqVerdict::Indeterminate {
            frontier: frontier.into_iter().collect(),
            near_boundary: near.into_iter().collect(),
            depth_cap,
        };
    }
    let mut orienter = Orienter::new(*t, OrientationKind::TraceModulus, None, *tol);
    let sinks = visited
        .iter()
        .filter(|a| orienter.is_sink(a).unwrap_or(false))
        .cloned()
        .collect();
    BqVerdict::Accept {
        subtree: visited.into_iter().collect(),
        sinks,
    }
}
