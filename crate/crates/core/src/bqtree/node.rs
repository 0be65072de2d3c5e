use std::fmt;

use serde::{Deserialize, Serialize};

use crate::charvar::{neighbor_trace, CharVarError, Slot, TraceTriple, Word};

/// Path from the root vertex: each letter names the slot replaced by a move
/// (`A` for X, `B` for Y, `C` for Z). A letter never repeats its predecessor.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Address(Vec<Slot>);

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum AddressError {
    #[error("invalid move letter {0:?}; expected A, B or C")]
    InvalidLetter(char),
    #[error("address repeats a move at position {0}")]
    Backtrack(usize),
}

fn letter(s: Slot) -> char {
    match s {
        Slot::X => 'A',
        Slot::Y => 'B',
        Slot::Z => 'C',
    }
}

impl Address {
    pub fn root() -> Self {
        Self(Vec::new())
    }

    pub fn parse(s: &str) -> Result<Self, AddressError> {
        let mut out = Vec::with_capacity(s.len());
        for (i, c) in s.chars().enumerate() {
            let slot = match c {
                'A' => Slot::X,
                'B' => Slot::Y,
                'C' => Slot::Z,
                other => return Err(AddressError::InvalidLetter(other)),
            };
            if out.last() == Some(&slot) {
                return Err(AddressError::Backtrack(i));
            }
            out.push(slot);
        }
        Ok(Self(out))
    }

    pub fn moves(&self) -> &[Slot] {
        &self.0
    }

    pub fn depth(&self) -> usize {
        self.0.len()
    }

    /// The address one move away along `slot`.
    pub fn step(&self, slot: Slot) -> Self {
        let mut v = self.0.clone();
        if v.last() == Some(&slot) {
            v.pop();
        } else {
            v.push(slot);
        }
        Self(v)
    }

    /// The slot leading back toward the root, if any.
    pub fn parent_slot(&self) -> Option<Slot> {
        self.0.last().copied()
    }
}

impl fmt::Display for Address {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.iter().try_for_each(|&s| write!(f, "{}", letter(s)))
    }
}

impl TryFrom<String> for Address {
    type Error = AddressError;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        Address::parse(&s)
    }
}

impl From<Address> for String {
    fn from(a: Address) -> String {
        a.to_string()
    }
}

/// A superbasis: its address, an ordered word triple with `XYZ = 1`, and traces.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TreeVertex {
    pub address: Address,
    pub words: [Word; 3],
    pub traces: TraceTriple,
}

/// An edge of the tree: a vertex and the slot replaced when crossing it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TreeEdge {
    pub from: Address,
    pub slot: Slot,
}

impl TreeEdge {
    pub fn endpoints(&self) -> (Address, Address) {
        (self.from.clone(), self.from.step(self.slot))
    }

    /// The two slots labelling the regions on either side of the edge.
    pub fn shared_slots(&self) -> (Slot, Slot) {
        self.slot.others()
    }
}

pub fn root_vertex(t: &TraceTriple) -> TreeVertex {
    let w = |s: &str| Word::parse(s).expect("literal word");
    TreeVertex {
        address: Address::root(),
        words: [w("X"), w("Y"), w("yx")],
        traces: *t,
    }
}

/// The superbasis obtained by replacing the word in `slot`.
///
/// With `(X, Y, Z)` the moves are `(ZY⁻¹, Y, Z⁻¹)`, `(X⁻¹, XZ⁻¹, Z)` and
/// `(X, Y⁻¹, YX⁻¹)`; each is an involution and keeps `XYZ = 1`.
pub fn neighbor(v: &TreeVertex, slot: Slot) -> TreeVertex {
    let [x, y, z] = &v.words;
    let words = match slot {
        Slot::X => [z.concat(&y.inverse()), y.clone(), z.inverse()],
        Slot::Y => [x.inverse(), x.concat(&z.inverse()), z.clone()],
        Slot::Z => [x.clone(), y.inverse(), y.concat(&x.inverse())],
    };
    TreeVertex {
        address: v.address.step(slot),
        words,
        traces: neighbor_trace(&v.traces, slot),
    }
}

/// The vertex at `address`, reached from the root.
pub fn vertex_at(t: &TraceTriple, address: &Address) -> TreeVertex {
    address
        .moves()
        .iter()
        .fold(root_vertex(t), |v, &s| neighbor(&v, s))
}

/// Fibonacci weights of the three regions at `address`, for the root edge
/// joining the root to `C`: the regions along that edge weigh 1, the two it
/// separates weigh 2, and every new region weighs the sum of the other two.
pub fn fibonacci_values(address: &Address) -> [u64; 3] {
    let mut v = [1u64, 1, 2];
    for &s in address.moves() {
        let (a, b) = s.others();
        v[s.index()] = v[a.index()].saturating_add(v[b.index()]);
    }
    v
}

pub fn fibonacci_value(address: &Address, slot: Slot) -> u64 {
    fibonacci_values(address)[slot.index()]
}

/// Parses a word triple, used when reading fixtures.
pub fn parse_words(words: [&str; 3]) -> Result<[Word; 3], CharVarError> {
    Ok([
        Word::parse(words[0])?,
        Word::parse(words[1])?,
        Word::parse(words[2])?,
    ])
}
