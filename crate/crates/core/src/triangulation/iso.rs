//! Canonical relabeling for isomorphism tests.

use super::{Perm, Slot, Triangulation};

/// One row per (tetrahedron, face) in canonical order.
pub type CanonicalTable = Vec<(usize, u8, Perm)>;

/// Lexicographically minimal gluing table over every choice of starting
/// tetrahedron and starting labeling. Two connected triangulations are
/// combinatorially isomorphic iff their tables are equal.
pub fn canonical_table(tri: &Triangulation) -> CanonicalTable {
    let mut best: Option<CanonicalTable> = None;
    for start in 0..tri.size() {
        for labeling in Perm::all() {
            let table = relabel_from(tri, start, labeling);
            if best.as_ref().is_none_or(|b| table < *b) {
                best = Some(table);
            }
        }
    }
    best.unwrap_or_default()
}

/// `labeling` maps new vertex labels of the start tetrahedron to old ones.
/// Newly reached tetrahedra are labeled so that the discovering gluing is the
/// identity.
fn relabel_from(tri: &Triangulation, start: usize, labeling: Perm) -> CanonicalTable {
    let n = tri.size();
    let mut index = vec![usize::MAX; n];
    let mut label: Vec<Perm> = vec![Perm::IDENTITY; n];
    let mut order = vec![start];
    index[start] = 0;
    label[start] = labeling;
    let mut table = Vec::with_capacity(4 * n);
    let mut k = 0;
    while k < order.len() {
        let old = order[k];
        let lam = label[old];
        for f in 0..4u8 {
            let g = tri.gluing(Slot::new(old, lam.apply(f)));
            let partner = g.target.tet;
            if index[partner] == usize::MAX {
                index[partner] = order.len();
                label[partner] = g.perm.compose(lam);
                order.push(partner);
            }
            let mu = label[partner].inverse().compose(g.perm).compose(lam);
            table.push((index[partner], mu.apply(f), mu));
        }
        k += 1;
    }
    table
}

impl Triangulation {
    pub fn is_isomorphic(&self, other: &Triangulation) -> bool {
        self.size() == other.size() && canonical_table(self) == canonical_table(other)
    }
}
