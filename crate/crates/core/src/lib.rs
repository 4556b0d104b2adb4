//! Exact combinatorics for triangulated 3-manifolds: dual special spines,
//! simple subpolyhedra, the t-invariant in `Z[e]`, normal surfaces of types I
//! and II, and layered lens-space triangulations.

mod dsu;
pub mod golden;
pub mod lens;
pub mod normal;
pub mod spine;
pub mod triangulation;

pub use golden::GoldenInt;
pub use triangulation::{Perm, Slot, Triangulation};
