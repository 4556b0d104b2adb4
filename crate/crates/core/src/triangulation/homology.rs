//! First homology of closed triangulations via Smith normal form.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{TriangulationKind, Triangulation, EDGE_VERTICES};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HomologyError {
    #[error("triangulation is not closed")]
    NotClosed,
}

/// `Z^betti ⊕ Z/t1 ⊕ ... ⊕ Z/tk` with `t1 | t2 | ... | tk`, all `ti > 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct H1 {
    pub betti: usize,
    pub torsion: Vec<i128>,
}

impl H1 {
    /// Order of the group, or `None` when infinite.
    pub fn order(&self) -> Option<i128> {
        (self.betti == 0).then(|| self.torsion.iter().product())
    }
}

/// Nonzero diagonal entries of the Smith normal form of `m`, in divisibility
/// order. Pivots are chosen deterministically (smallest absolute value, first
/// in row-major order).
pub fn smith_invariants(mut m: Vec<Vec<i128>>) -> Vec<i128> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut diag = Vec::new();
    let mut top = 0;
    while top < rows.min(cols) {
        let mut pivot = None;
        for i in top..rows {
            for j in top..cols {
                let v = m[i][j].abs();
                if v != 0 && pivot.is_none_or(|(_, _, best)| v < best) {
                    pivot = Some((i, j, v));
                }
            }
        }
        let Some((pi, pj, _)) = pivot else { break };
        m.swap(top, pi);
        for row in m.iter_mut() {
            row.swap(top, pj);
        }
        loop {
            let p = m[top][top];
            let mut clean = true;
            for i in top + 1..rows {
                let q = m[i][top] / p;
                if q != 0 {
                    for j in top..cols {
                        m[i][j] -= q * m[top][j];
                    }
                }
                if m[i][top] != 0 {
                    clean = false;
                }
            }
            for j in top + 1..cols {
                let q = m[top][j] / p;
                if q != 0 {
                    for row in m.iter_mut().skip(top) {
                        row[j] -= q * row[top];
                    }
                }
                if m[top][j] != 0 {
                    clean = false;
                }
            }
            if clean {
                // The pivot must divide everything below-right of it.
                let bad = (top + 1..rows)
                    .flat_map(|i| (top + 1..cols).map(move |j| (i, j)))
                    .find(|&(i, j)| m[i][j] % p != 0);
                match bad {
                    None => break,
                    Some((i, _)) => {
                        for j in top..cols {
                            let v = m[i][j];
                            m[top][j] += v;
                        }
                        continue;
                    }
                }
            }
            // Move the smallest remaining entry of the pivot row/column into place.
            let mut best = (top, top, m[top][top].abs());
            for i in top + 1..rows {
                let v = m[i][top].abs();
                if v != 0 && v < best.2 {
                    best = (i, top, v);
                }
            }
            for j in top + 1..cols {
                let v = m[top][j].abs();
                if v != 0 && v < best.2 {
                    best = (top, j, v);
                }
            }
            m.swap(top, best.0);
            for row in m.iter_mut() {
                row.swap(top, best.1);
            }
        }
        diag.push(m[top][top].abs());
        top += 1;
    }
    diag
}

impl Triangulation {
    /// `H_1` of the quotient cell complex; edge orientations follow the first
    /// member of each edge class.
    pub fn h1(&self) -> Result<H1, HomologyError> {
        if self.kind() != TriangulationKind::Closed {
            return Err(HomologyError::NotClosed);
        }
        let sk = self.skeleton();
        let (nv, ne) = (sk.vertices.len(), sk.edges.len());

        // boundary of edges: rows = vertices, cols = edges
        let mut d1 = vec![vec![0i128; ne]; nv];
        for (c, class) in sk.edges.iter().enumerate() {
            let (tail, head) = class.ends;
            d1[head][c] += 1;
            d1[tail][c] -= 1;
        }
        // boundary of triangles: rows = edges, cols = triangles
        let mut d2 = vec![vec![0i128; sk.triangles.len()]; ne];
        for (c, tc) in sk.triangles.iter().enumerate() {
            let slot = tc.first;
            let mut verts: Vec<u8> = (0..4u8).filter(|&v| v != slot.face).collect();
            verts.sort_unstable();
            let (i, j, k) = (verts[0], verts[1], verts[2]);
            // ∂[i,j,k] = [j,k] - [i,k] + [i,j]
            for (a, b, s) in [(j, k, 1i128), (i, k, -1), (i, j, 1)] {
                let e = super::edge_index(a, b);
                debug_assert_eq!(EDGE_VERTICES[e], (a, b));
                let class = sk.edge_of(slot.tet, e);
                d2[class][c] += s * sk.edge_sign(slot.tet, e) as i128;
            }
        }

        let rank1 = smith_invariants(d1).len();
        let inv2 = smith_invariants(d2);
        Ok(H1 {
            betti: ne - rank1 - inv2.len(),
            torsion: inv2.into_iter().filter(|&d| d > 1).collect(),
        })
    }
}
