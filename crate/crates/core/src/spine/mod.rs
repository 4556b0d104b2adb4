//! The special spine dual to a triangulation, its simple subpolyhedra and
//! the t-invariant.
//!
//! Spine vertices are tetrahedra, spine edges are triangle classes and spine
//! faces are edge classes. A subpolyhedron is a set of faces, stored as a
//! `u64` bitmask indexed by edge class.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dsu::ParityDsu;
use crate::golden::GoldenInt;
use crate::triangulation::{Triangulation, TriangulationKind, EDGE_VERTICES};

pub const DEFAULT_FACE_BUDGET: usize = 40;
pub const FACE_BUDGET_ENV: &str = "SPINE_FACE_BUDGET";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpineError {
    #[error("not simple: germ count 1 at spine edges {violations:?}")]
    NotSimple { violations: Vec<usize> },
    #[error("face {face} is out of range for a spine with {faces} faces")]
    FaceOutOfRange { face: usize, faces: usize },
    #[error("spine has {faces} faces, enumeration budget is {budget}")]
    EnumerationBudgetExceeded { faces: usize, budget: usize },
    #[error("t(P) = {t} is not divisible by (2+e)^{power}")]
    InvariantDivisionFailed { t: GoldenInt, power: i64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecialSpine {
    /// One vertex per tetrahedron.
    pub vertices: usize,
    /// Per spine edge (triangle class): the faces of its 3 germs, with
    /// repetition, taken from the first representative triangle.
    pub edges: Vec<[usize; 3]>,
    /// Per spine edge: the spine vertices (tetrahedra) at its two ends.
    pub edge_ends: Vec<(usize, usize)>,
    /// Per spine vertex: the face of each corner germ, indexed by the
    /// tetrahedron's edge slots. Corner germ `e` is the link-graph edge
    /// joining the tetrahedron faces not containing edge `e`.
    pub corners: Vec<[usize; 6]>,
    /// Per face: the degree of the dual edge class.
    pub face_degrees: Vec<usize>,
    /// Per face: the vertex classes at the two ends of the dual edge.
    pub face_ends: Vec<(usize, usize)>,
    pub vertex_classes: usize,
    pub kind: TriangulationKind,
}

/// The link-graph edge (a pair of tetrahedron faces) of corner germ `e`.
pub fn link_edge(e: usize) -> (u8, u8) {
    EDGE_VERTICES[5 - e]
}

pub fn dual_spine(tri: &Triangulation) -> SpecialSpine {
    let sk = tri.skeleton();
    let edges = sk
        .triangles
        .iter()
        .map(|tc| {
            let s = tc.first;
            let v: Vec<u8> = (0..4u8).filter(|&x| x != s.face).collect();
            let e = |a, b| sk.edge_of(s.tet, crate::triangulation::edge_index(a, b));
            [e(v[0], v[1]), e(v[0], v[2]), e(v[1], v[2])]
        })
        .collect();
    let edge_ends = sk.triangles.iter().map(|tc| (tc.first.tet, tc.second.tet)).collect();
    let corners = (0..tri.size())
        .map(|t| std::array::from_fn(|e| sk.edge_of(t, e)))
        .collect();
    SpecialSpine {
        vertices: tri.size(),
        edges,
        edge_ends,
        corners,
        face_degrees: sk.edges.iter().map(|c| c.degree()).collect(),
        face_ends: sk.edges.iter().map(|c| c.ends).collect(),
        vertex_classes: sk.vertices.len(),
        kind: tri.kind(),
    }
}

impl SpecialSpine {
    pub fn faces(&self) -> usize {
        self.face_degrees.len()
    }

    pub fn full_mask(&self) -> u64 {
        match self.faces() {
            64 => u64::MAX,
            f => (1u64 << f) - 1,
        }
    }

    /// `vertices - edges + faces`.
    pub fn euler_characteristic(&self) -> i64 {
        self.vertices as i64 - self.edges.len() as i64 + self.faces() as i64
    }

    /// Whether some face is dual to a degree-1 edge; the combinatorial `χ`
    /// is still used for such faces.
    pub fn has_degree_one_face(&self) -> bool {
        self.face_degrees.contains(&1)
    }

    /// Germ count of spine edge `e` into `mask`, with multiplicity.
    pub fn germ_count(&self, e: usize, mask: u64) -> usize {
        self.edges[e].iter().filter(|&&f| mask >> f & 1 == 1).count()
    }

    /// Connected components of the union of the closed faces in `mask`, as
    /// face masks ordered by lowest face. Closed faces meet only along the
    /// singular graph, so they are connected through shared spine vertices.
    pub fn components(&self, mask: u64) -> Vec<u64> {
        let f = self.faces();
        let mut dsu = ParityDsu::new(f);
        for corner in &self.corners {
            let inside: Vec<usize> = corner.iter().copied().filter(|&x| mask >> x & 1 == 1).collect();
            for w in inside.windows(2) {
                dsu.union(w[0], w[1], false);
            }
        }
        let mut comps: Vec<(usize, u64)> = Vec::new();
        for x in (0..f).filter(|&x| mask >> x & 1 == 1) {
            let r = dsu.root(x);
            match comps.iter_mut().find(|c| c.0 == r) {
                Some(c) => c.1 |= 1 << x,
                None => comps.push((r, 1 << x)),
            }
        }
        comps.into_iter().map(|c| c.1).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SubPolyhedron {
    pub faces: u64,
    pub v_q: usize,
    pub chi: i64,
    pub is_surface: bool,
    pub is_proper: bool,
    pub is_empty: bool,
}

impl SubPolyhedron {
    pub fn contains(&self, face: usize) -> bool {
        self.faces >> face & 1 == 1
    }

    pub fn face_count(&self) -> usize {
        self.faces.count_ones() as usize
    }

    /// `(-1)^v_Q e^(χ - v_Q)`
    pub fn weight(&self) -> GoldenInt {
        let w = GoldenInt::e_pow(self.chi - self.v_q as i64);
        if self.v_q % 2 == 0 {
            w
        } else {
            -w
        }
    }
}

pub fn subpolyhedron(spine: &SpecialSpine, faces: u64) -> Result<SubPolyhedron, SpineError> {
    let f = spine.faces();
    if f > 64 || faces & !spine.full_mask() != 0 {
        let face = (0..64).rev().find(|&b| faces >> b & 1 == 1).unwrap_or(64);
        return Err(SpineError::FaceOutOfRange { face, faces: f });
    }
    let counts: Vec<usize> = (0..spine.edges.len()).map(|e| spine.germ_count(e, faces)).collect();
    let violations: Vec<usize> = (0..counts.len()).filter(|&e| counts[e] == 1).collect();
    if !violations.is_empty() {
        return Err(SpineError::NotSimple { violations });
    }
    let touched = spine
        .corners
        .iter()
        .filter(|c| c.iter().any(|&x| faces >> x & 1 == 1))
        .count();
    let v_q = spine
        .corners
        .iter()
        .filter(|c| c.iter().all(|&x| faces >> x & 1 == 1))
        .count();
    let edges_in = counts.iter().filter(|&&c| c >= 2).count();
    Ok(SubPolyhedron {
        faces,
        v_q,
        chi: touched as i64 - edges_in as i64 + faces.count_ones() as i64,
        is_surface: counts.iter().all(|&c| c != 3),
        is_proper: faces != spine.full_mask(),
        is_empty: faces == 0,
    })
}

/// The enumeration cap: `SPINE_FACE_BUDGET` if set and valid, else 40.
pub fn face_budget() -> usize {
    std::env::var(FACE_BUDGET_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_FACE_BUDGET)
}

pub fn enumerate_simple_subpolyhedra(spine: &SpecialSpine) -> Result<Vec<SubPolyhedron>, SpineError> {
    enumerate_with_budget(spine, face_budget())
}

/// Every simple subpolyhedron, sorted by face mask. Backtracks over faces in
/// index order; after each decision, any spine edge with a single undecided
/// face is forced (or refuted) so that its germ count stays in `{0, 2, 3}`.
pub fn enumerate_with_budget(spine: &SpecialSpine, budget: usize) -> Result<Vec<SubPolyhedron>, SpineError> {
    let f = spine.faces();
    if f > budget.min(64) {
        return Err(SpineError::EnumerationBudgetExceeded { faces: f, budget: budget.min(64) });
    }
    let mut masks = Vec::new();
    let mut assign = vec![None; f];
    search(spine, &mut assign, &mut masks);
    masks.sort_unstable();
    Ok(masks
        .into_iter()
        .map(|m| subpolyhedron(spine, m).expect("enumerated subpolyhedra are simple"))
        .collect())
}

fn propagate(spine: &SpecialSpine, assign: &mut [Option<bool>], trail: &mut Vec<usize>) -> bool {
    loop {
        let mut changed = false;
        for germs in &spine.edges {
            let mut count = 0;
            let mut unknown: Option<(usize, usize)> = None;
            let mut several = false;
            for &g in germs {
                match assign[g] {
                    Some(true) => count += 1,
                    Some(false) => {}
                    None => match unknown {
                        None => unknown = Some((g, 1)),
                        Some((u, m)) if u == g => unknown = Some((u, m + 1)),
                        Some(_) => several = true,
                    },
                }
            }
            if several {
                continue;
            }
            match unknown {
                None if count == 1 => return false,
                None => {}
                Some((u, m)) => {
                    let ok = |x: usize| matches!(count + m * x, 0 | 2 | 3);
                    match (ok(0), ok(1)) {
                        (false, false) => return false,
                        (true, false) | (false, true) => {
                            assign[u] = Some(ok(1));
                            trail.push(u);
                            changed = true;
                        }
                        (true, true) => {}
                    }
                }
            }
        }
        if !changed {
            return true;
        }
    }
}

fn search(spine: &SpecialSpine, assign: &mut Vec<Option<bool>>, out: &mut Vec<u64>) {
    let Some(next) = assign.iter().position(Option::is_none) else {
        let mask = assign
            .iter()
            .enumerate()
            .filter(|(_, a)| **a == Some(true))
            .fold(0u64, |m, (i, _)| m | 1 << i);
        out.push(mask);
        return;
    };
    for value in [false, true] {
        let mut trail = vec![next];
        assign[next] = Some(value);
        if propagate(spine, assign, &mut trail) {
            search(spine, assign, out);
        }
        for x in trail {
            assign[x] = None;
        }
    }
}

/// Nullity over GF(2) of the face-to-edge germ-parity map.
pub fn surface_space_nullity(spine: &SpecialSpine) -> usize {
    let f = spine.faces();
    let mut rows: Vec<Vec<bool>> = spine
        .edges
        .iter()
        .map(|germs| {
            let mut row = vec![false; f];
            for &g in germs {
                row[g] ^= true;
            }
            row
        })
        .collect();
    let mut rank = 0;
    for col in 0..f {
        let Some(p) = (rank..rows.len()).find(|&r| rows[r][col]) else { continue };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row[col] {
                for (x, &y) in row.iter_mut().zip(&pivot) {
                    *x ^= y;
                }
            }
        }
        rank += 1;
    }
    f - rank
}

/// `Σ_Q (-1)^v_Q e^(χ(Q) - v_Q)` over all simple subpolyhedra, `∅` and `P`
/// included.
pub fn t_spine(spine: &SpecialSpine) -> Result<GoldenInt, SpineError> {
    Ok(t_of(&enumerate_simple_subpolyhedra(spine)?))
}

pub fn t_of(subs: &[SubPolyhedron]) -> GoldenInt {
    subs.iter().map(SubPolyhedron::weight).sum()
}

/// The t-invariant of the manifold: `t(P)` for ideal triangulations, and
/// `t(P) / (2+e)^(k-1)` for closed ones with `k` vertices.
pub fn t_manifold(tri: &Triangulation) -> Result<GoldenInt, SpineError> {
    let spine = dual_spine(tri);
    let t = t_spine(&spine)?;
    correct_for_vertices(&spine, t)
}

pub fn correct_for_vertices(spine: &SpecialSpine, t: GoldenInt) -> Result<GoldenInt, SpineError> {
    if spine.kind == TriangulationKind::Ideal {
        return Ok(t);
    }
    let power = spine.vertex_classes as i64 - 1;
    let d = GoldenInt::new(2, 1).pow(power).expect("non-negative power");
    t.div_exact(d).map_err(|_| SpineError::InvariantDivisionFailed { t, power })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Universal {
    pub omega: SubPolyhedron,
    /// The complement of the spine is connected; `omega` is empty.
    pub single_component: bool,
    pub components: usize,
}

/// Faces separating two different complementary regions of the spine, i.e.
/// faces dual to edges whose endpoints are different vertex classes.
pub fn universal_subpolyhedron(spine: &SpecialSpine) -> Universal {
    let mask = spine
        .face_ends
        .iter()
        .enumerate()
        .filter(|(_, (a, b))| a != b)
        .fold(0u64, |m, (i, _)| m | 1 << i);
    let omega = subpolyhedron(spine, mask).expect("the separating faces form a simple subpolyhedron");
    Universal {
        omega,
        single_component: spine.vertex_classes == 1,
        components: spine.components(mask).len(),
    }
}
