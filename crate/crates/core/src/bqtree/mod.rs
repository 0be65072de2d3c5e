//! The trivalent tree of superbases, the Q-condition search over it, and the
//! four edge orientations with their attracting subtrees.

mod node;
mod orientation;
mod search;

pub use node::{
    fibonacci_value, fibonacci_values, neighbor, parse_words, root_vertex, vertex_at, Address,
    AddressError, TreeEdge, TreeVertex,
};
pub use orientation::{
    attracting_subtree, orient_edge, orientation_value, AttractingSubtree, EdgeDirection,
    OrientationKind, Orienter,
};
pub use search::{bq_test, edge_escapes, trace_band, BqVerdict, TraceBand};

use thiserror::Error;

use crate::charvar::Slot;
use crate::fermat::FermatError;
use crate::hyp3::Hyp3Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BqError {
    #[error("trace of slot {slot:?} at vertex '{address}' is not loxodromic")]
    NonLoxodromicPrimitive { address: Address, slot: Slot },
    #[error("search exceeded depth cap {depth_cap}")]
    CapExceeded { depth_cap: usize },
    #[error("this orientation needs a realized representation")]
    MissingRepresentation,
    #[error(transparent)]
    Geometry(#[from] Hyp3Error),
    #[error(transparent)]
    Fermat(#[from] FermatError),
}
