//! Face-pairings of tetrahedra.
//!
//! Each tetrahedron has vertices `0..4`; face `i` is the face opposite vertex
//! `i`. A gluing sends a face slot `(tet, face)` to a partner slot together
//! with a vertex permutation carrying the source tetrahedron's labels to the
//! target's. Every face slot must be glued: closed and ideal triangulations
//! only.

mod classes;
mod format;
mod homology;
mod iso;
mod pachner;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use classes::{
    Skeleton,
    EdgeClass, LinkSurface, TriangleClass, TriangulationKind, VertexClass, EDGE_VERTICES,
};
pub use format::ParseError;
pub use homology::{smith_invariants, HomologyError, H1};
pub use iso::canonical_table;
pub use pachner::{
    applicable_moves, pachner_14, pachner_23, pachner_32, random_pachner_walk, walk_trace, MoveError,
    SplitMix64,
};

/// Edge index (`0..6`) of the tetrahedron edge joining vertices `a` and `b`.
/// Opposite edges have indices summing to 5.
pub fn edge_index(a: u8, b: u8) -> usize {
    let (a, b) = if a < b { (a, b) } else { (b, a) };
    match (a, b) {
        (0, 1) => 0,
        (0, 2) => 1,
        (0, 3) => 2,
        (1, 2) => 3,
        (1, 3) => 4,
        (2, 3) => 5,
        _ => panic!("not an edge: {a}{b}"),
    }
}

/// A permutation of `{0,1,2,3}`, stored as the images of `0,1,2,3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Perm(pub [u8; 4]);

impl Perm {
    pub const IDENTITY: Perm = Perm([0, 1, 2, 3]);

    pub fn new(images: [u8; 4]) -> Option<Perm> {
        let mut seen = [false; 4];
        for &x in &images {
            if x > 3 || seen[x as usize] {
                return None;
            }
            seen[x as usize] = true;
        }
        Some(Perm(images))
    }

    #[inline]
    pub fn apply(self, i: u8) -> u8 {
        self.0[i as usize]
    }

    pub fn inverse(self) -> Perm {
        let mut inv = [0u8; 4];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x as usize] = i as u8;
        }
        Perm(inv)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(self, other: Perm) -> Perm {
        Perm(other.0.map(|x| self.0[x as usize]))
    }

    /// +1 for even permutations, -1 for odd.
    pub fn sign(self) -> i32 {
        let mut inversions = 0;
        for i in 0..4 {
            for j in i + 1..4 {
                if self.0[i] > self.0[j] {
                    inversions += 1;
                }
            }
        }
        if inversions % 2 == 0 {
            1
        } else {
            -1
        }
    }

    pub fn all() -> impl Iterator<Item = Perm> {
        (0..4u8).flat_map(|a| {
            (0..4u8).flat_map(move |b| {
                (0..4u8).flat_map(move |c| {
                    (0..4u8).filter_map(move |d| Perm::new([a, b, c, d]))
                })
            })
        })
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}{}{}", self.0[0], self.0[1], self.0[2], self.0[3])
    }
}

/// A face slot: face `face` (opposite vertex `face`) of tetrahedron `tet`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Slot {
    pub tet: usize,
    pub face: u8,
}

impl Slot {
    pub fn new(tet: usize, face: u8) -> Slot {
        Slot { tet, face }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Gluing {
    pub target: Slot,
    pub perm: Perm,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GluingError {
    #[error("face {0:?} is glued to itself")]
    SelfGlued(Slot),
    #[error("gluing {from:?} -> {to:?} does not carry the face onto the target face")]
    FaceMismatch { from: Slot, to: Slot },
    #[error("gluing {from:?} -> {to:?} has no matching inverse gluing")]
    NotInvolutive { from: Slot, to: Slot },
    #[error("slot {0:?} refers to a tetrahedron out of range")]
    OutOfRange(Slot),
    #[error("face {0:?} is unglued")]
    Unglued(Slot),
}

/// A closed or ideal triangulation: every face slot glued.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Triangulation {
    gluings: Vec<[Gluing; 4]>,
}

impl Triangulation {
    /// Builds and validates a triangulation from per-slot gluings.
    pub fn from_gluings(gluings: Vec<[Option<Gluing>; 4]>) -> Result<Self, GluingError> {
        let mut out = Vec::with_capacity(gluings.len());
        for (t, faces) in gluings.iter().enumerate() {
            let mut row = [Gluing { target: Slot::new(0, 0), perm: Perm::IDENTITY }; 4];
            for (f, g) in faces.iter().enumerate() {
                row[f] = g.ok_or(GluingError::Unglued(Slot::new(t, f as u8)))?;
            }
            out.push(row);
        }
        let tri = Triangulation { gluings: out };
        tri.validate()?;
        Ok(tri)
    }

    pub fn validate(&self) -> Result<(), GluingError> {
        let n = self.gluings.len();
        for (t, row) in self.gluings.iter().enumerate() {
            for (f, g) in row.iter().enumerate() {
                let from = Slot::new(t, f as u8);
                let to = g.target;
                if to.tet >= n || to.face > 3 {
                    return Err(GluingError::OutOfRange(from));
                }
                if to == from {
                    return Err(GluingError::SelfGlued(from));
                }
                if g.perm.apply(f as u8) != to.face {
                    return Err(GluingError::FaceMismatch { from, to });
                }
                let back = self.gluings[to.tet][to.face as usize];
                if back.target != from || back.perm != g.perm.inverse() {
                    return Err(GluingError::NotInvolutive { from, to });
                }
            }
        }
        Ok(())
    }

    /// Number of tetrahedra.
    pub fn size(&self) -> usize {
        self.gluings.len()
    }

    pub fn gluing(&self, slot: Slot) -> Gluing {
        self.gluings[slot.tet][slot.face as usize]
    }

    pub fn slots(&self) -> impl Iterator<Item = Slot> + '_ {
        (0..self.size()).flat_map(|t| (0..4u8).map(move |f| Slot::new(t, f)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perm_algebra() {
        let p = Perm([1, 2, 3, 0]);
        assert_eq!(p.compose(p.inverse()), Perm::IDENTITY);
        assert_eq!(p.inverse(), Perm([3, 0, 1, 2]));
        assert_eq!(p.sign(), -1);
        assert_eq!(Perm([1, 0, 3, 2]).sign(), 1);
        assert_eq!(Perm::all().count(), 24);
        assert!(Perm::new([0, 0, 1, 2]).is_none());
        assert!(Perm::new([0, 1, 2, 4]).is_none());
    }

    #[test]
    fn edge_indices_pair_opposites() {
        for (e, &(a, b)) in EDGE_VERTICES.iter().enumerate() {
            assert_eq!(edge_index(a, b), e);
            assert_eq!(edge_index(b, a), e);
            let (c, d) = EDGE_VERTICES[5 - e];
            assert!(a != c && a != d && b != c && b != d);
        }
    }

    #[test]
    fn rejects_self_gluing() {
        let g = |t, f, perm: [u8; 4]| Some(Gluing { target: Slot::new(t, f), perm: Perm(perm) });
        let rows = vec![[
            g(0, 0, [0, 1, 2, 3]),
            g(0, 2, [0, 2, 1, 3]),
            g(0, 1, [0, 2, 1, 3]),
            g(0, 3, [0, 1, 2, 3]),
        ]];
        assert_eq!(
            Triangulation::from_gluings(rows),
            Err(GluingError::SelfGlued(Slot::new(0, 0)))
        );
    }
}
