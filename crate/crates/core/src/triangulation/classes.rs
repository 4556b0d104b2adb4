//! Edge, vertex and triangle classes, vertex links and cell counts.

use serde::{Deserialize, Serialize};

use super::{edge_index, Slot, Triangulation};
use crate::dsu::ParityDsu;

/// Vertex pairs of the six tetrahedron edges, by edge index.
pub const EDGE_VERTICES: [(u8, u8); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Tetrahedron-local edge slots identified by the gluings.
///
/// `signs[i]` is +1 when member `i`, oriented from its lower to its higher
/// vertex label, agrees with the orientation of the first member.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeClass {
    pub members: Vec<(usize, u8)>,
    pub signs: Vec<i8>,
    /// Vertex classes of the (tail, head) of the first member.
    pub ends: (usize, usize),
}

impl EdgeClass {
    pub fn degree(&self) -> usize {
        self.members.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexClass {
    pub members: Vec<(usize, u8)>,
}

impl VertexClass {
    pub fn degree(&self) -> usize {
        self.members.len()
    }
}

/// A pair of glued face slots, `first < second`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriangleClass {
    pub first: Slot,
    pub second: Slot,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkSurface {
    pub chi: i64,
    pub orientable: bool,
    pub triangles: usize,
}

impl LinkSurface {
    pub fn is_sphere(&self) -> bool {
        self.chi == 2 && self.orientable
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TriangulationKind {
    Closed,
    Ideal,
}

impl std::fmt::Display for TriangulationKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            TriangulationKind::Closed => "closed",
            TriangulationKind::Ideal => "ideal",
        })
    }
}

/// Derived combinatorics of a triangulation, computed once.
#[derive(Debug, Clone)]
pub struct Skeleton {
    pub edges: Vec<EdgeClass>,
    pub vertices: Vec<VertexClass>,
    pub triangles: Vec<TriangleClass>,
    edge_of: Vec<[usize; 6]>,
    edge_sign: Vec<[i8; 6]>,
    vertex_of: Vec<[usize; 4]>,
    triangle_of: Vec<[usize; 4]>,
}

impl Skeleton {
    pub fn new(tri: &Triangulation) -> Skeleton {
        let n = tri.size();

        let mut edsu = ParityDsu::new(6 * n);
        let mut vdsu = ParityDsu::new(4 * n);
        for slot in tri.slots() {
            let g = tri.gluing(slot);
            let f = slot.face;
            for (e, &(a, b)) in EDGE_VERTICES.iter().enumerate() {
                if a == f || b == f {
                    continue;
                }
                let (ia, ib) = (g.perm.apply(a), g.perm.apply(b));
                let e2 = edge_index(ia, ib);
                edsu.union(6 * slot.tet + e, 6 * g.target.tet + e2, ia > ib);
            }
            for v in (0..4u8).filter(|&v| v != f) {
                vdsu.union(4 * slot.tet + v as usize, 4 * g.target.tet + g.perm.apply(v) as usize, false);
            }
        }

        let (elab, ecount) = edsu.labels();
        let (vlab, vcount) = vdsu.labels();

        let mut vertices = vec![VertexClass { members: Vec::new() }; vcount];
        let mut vertex_of = vec![[0usize; 4]; n];
        for t in 0..n {
            for v in 0..4 {
                let c = vlab[4 * t + v];
                vertex_of[t][v] = c;
                vertices[c].members.push((t, v as u8));
            }
        }

        let mut edges: Vec<EdgeClass> = (0..ecount)
            .map(|_| EdgeClass { members: Vec::new(), signs: Vec::new(), ends: (0, 0) })
            .collect();
        let mut edge_of = vec![[0usize; 6]; n];
        let mut edge_sign = vec![[1i8; 6]; n];
        for t in 0..n {
            for e in 0..6 {
                let c = elab[6 * t + e];
                let (_, par) = edsu.find(6 * t + e);
                edge_of[t][e] = c;
                let class = &mut edges[c];
                if class.members.is_empty() {
                    let (a, b) = EDGE_VERTICES[e];
                    class.ends = (vertex_of[t][a as usize], vertex_of[t][b as usize]);
                }
                class.members.push((t, e as u8));
                class.signs.push(if par { -1 } else { 1 });
            }
        }
        // Re-express signs relative to the first member rather than the root.
        for class in &mut edges {
            let s0 = class.signs[0];
            for s in &mut class.signs {
                *s *= s0;
            }
        }
        for (c, class) in edges.iter().enumerate() {
            for (&(t, e), &s) in class.members.iter().zip(&class.signs) {
                debug_assert_eq!(edge_of[t][e as usize], c);
                edge_sign[t][e as usize] = s;
            }
        }

        let mut triangles = Vec::with_capacity(2 * n);
        let mut triangle_of = vec![[usize::MAX; 4]; n];
        for slot in tri.slots() {
            if triangle_of[slot.tet][slot.face as usize] != usize::MAX {
                continue;
            }
            let other = tri.gluing(slot).target;
            let id = triangles.len();
            triangles.push(TriangleClass { first: slot, second: other });
            triangle_of[slot.tet][slot.face as usize] = id;
            triangle_of[other.tet][other.face as usize] = id;
        }

        Skeleton { edges, vertices, triangles, edge_of, edge_sign, vertex_of, triangle_of }
    }

    pub fn edge_of(&self, tet: usize, edge: usize) -> usize {
        self.edge_of[tet][edge]
    }

    /// Orientation of the local edge `(tet, edge)` relative to its class.
    pub fn edge_sign(&self, tet: usize, edge: usize) -> i8 {
        self.edge_sign[tet][edge]
    }

    pub fn vertex_of(&self, tet: usize, v: u8) -> usize {
        self.vertex_of[tet][v as usize]
    }

    pub fn triangle_of(&self, slot: Slot) -> usize {
        self.triangle_of[slot.tet][slot.face as usize]
    }
}

impl Triangulation {
    pub fn skeleton(&self) -> Skeleton {
        Skeleton::new(self)
    }

    pub fn edge_classes(&self) -> Vec<EdgeClass> {
        self.skeleton().edges
    }

    pub fn vertex_classes(&self) -> Vec<VertexClass> {
        self.skeleton().vertices
    }

    /// (vertices, edges, faces, tetrahedra) of the quotient cell complex.
    pub fn counts(&self) -> (usize, usize, usize, usize) {
        let sk = self.skeleton();
        (sk.vertices.len(), sk.edges.len(), sk.triangles.len(), self.size())
    }

    pub fn euler_characteristic(&self) -> i64 {
        let (v, e, f, t) = self.counts();
        v as i64 - e as i64 + f as i64 - t as i64
    }

    /// The link of vertex class `v`: one corner triangle per member.
    pub fn vertex_link(&self, v: usize) -> LinkSurface {
        let sk = self.skeleton();
        self.link_with(&sk, v)
    }

    pub fn vertex_links(&self) -> Vec<LinkSurface> {
        let sk = self.skeleton();
        (0..sk.vertices.len()).map(|v| self.link_with(&sk, v)).collect()
    }

    fn link_with(&self, sk: &Skeleton, v: usize) -> LinkSurface {
        let n = self.size();
        // link vertices: (tet, corner, other vertex) -> point on that edge near the corner
        let key = |t: usize, i: u8, w: u8| 16 * t + 4 * i as usize + w as usize;
        let mut points = ParityDsu::new(16 * n);
        let mut corners = ParityDsu::new(4 * n);
        for slot in self.slots() {
            let g = self.gluing(slot);
            let f = slot.face;
            for i in (0..4u8).filter(|&i| i != f) {
                for w in (0..4u8).filter(|&w| w != f && w != i) {
                    points.union(
                        key(slot.tet, i, w),
                        key(g.target.tet, g.perm.apply(i), g.perm.apply(w)),
                        false,
                    );
                }
                corners.union(
                    4 * slot.tet + i as usize,
                    4 * g.target.tet + g.perm.apply(i) as usize,
                    g.perm.sign() == 1,
                );
            }
        }
        let members = &sk.vertices[v].members;
        let mut roots = std::collections::BTreeSet::new();
        for &(t, i) in members {
            for w in (0..4u8).filter(|&w| w != i) {
                roots.insert(points.root(key(t, i, w)));
            }
        }
        let faces = members.len() as i64;
        let chi = roots.len() as i64 - 3 * faces / 2 + faces;
        let (t0, i0) = members[0];
        LinkSurface {
            chi,
            orientable: corners.is_consistent(4 * t0 + i0 as usize),
            triangles: members.len(),
        }
    }

    /// Closed iff every vertex link is a 2-sphere.
    pub fn kind(&self) -> TriangulationKind {
        if self.vertex_links().iter().all(LinkSurface::is_sphere) {
            TriangulationKind::Closed
        } else {
            TriangulationKind::Ideal
        }
    }

    pub fn is_orientable(&self) -> bool {
        let mut d = ParityDsu::new(self.size());
        for slot in self.slots() {
            let g = self.gluing(slot);
            d.union(slot.tet, g.target.tet, g.perm.sign() == 1);
        }
        (0..self.size()).all(|t| d.is_consistent(t))
    }

    pub fn is_connected(&self) -> bool {
        let mut d = ParityDsu::new(self.size());
        for slot in self.slots() {
            d.union(slot.tet, self.gluing(slot).target.tet, false);
        }
        d.labels().1 <= 1
    }
}
