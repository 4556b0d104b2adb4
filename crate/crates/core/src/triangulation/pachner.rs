//! Bistellar moves and seeded random walks.
//!
//! Moves are expressed by naming the vertices of the affected region. Each
//! new tetrahedron carries a list of vertex names; gluings between old and
//! new tetrahedra are derived from shared names, with the vertex opposite the
//! glued face mapped to the vertex opposite the partner face.

use thiserror::Error;

use super::{Gluing, Perm, Slot, Triangulation, EDGE_VERTICES};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MoveError {
    #[error("move not applicable: {0}")]
    NotApplicable(String),
}

fn not_applicable(reason: impl Into<String>) -> MoveError {
    MoveError::NotApplicable(reason.into())
}

/// Permutation taking labels of a tetrahedron named `src` to labels of one
/// named `dst`, across faces opposite `src_opp` and `dst_opp` (names).
fn name_perm(src: [u8; 4], dst: [u8; 4], src_opp: u8, dst_opp: u8) -> Perm {
    let mut images = [0u8; 4];
    for (l, &name) in src.iter().enumerate() {
        let target = if name == src_opp { dst_opp } else { name };
        images[l] = dst.iter().position(|&d| d == target).expect("name present") as u8;
    }
    Perm::new(images).expect("names are distinct")
}

fn label_of(names: [u8; 4], name: u8) -> u8 {
    names.iter().position(|&n| n == name).expect("name present") as u8
}

/// An old face slot replaced by a face of a new tetrahedron. `relabel` takes
/// the new tetrahedron's labels to the old tetrahedron's labels.
struct Replacement {
    old: Slot,
    new_tet: usize,
    new_face: u8,
    relabel: Perm,
}

/// Replaces `removed` tetrahedra by `added` new ones, appended after the
/// surviving tetrahedra in their original order.
fn rebuild(
    tri: &Triangulation,
    removed: &[usize],
    added: usize,
    replacements: &[Replacement],
    internal: &[(usize, u8, usize, u8, Perm)],
) -> Result<Triangulation, MoveError> {
    let n = tri.size();
    let mut new_index = vec![usize::MAX; n];
    let mut next = 0;
    for (t, slot) in new_index.iter_mut().enumerate() {
        if !removed.contains(&t) {
            *slot = next;
            next += 1;
        }
    }
    let base = next;
    let total = base + added;

    // old slot -> (new slot, relabel new->old)
    let mut image: Vec<[Option<(Slot, Perm)>; 4]> = vec![[None; 4]; n];
    for t in 0..n {
        if new_index[t] != usize::MAX {
            for f in 0..4 {
                image[t][f] = Some((Slot::new(new_index[t], f as u8), Perm::IDENTITY));
            }
        }
    }
    for r in replacements {
        image[r.old.tet][r.old.face as usize] = Some((Slot::new(base + r.new_tet, r.new_face), r.relabel));
    }

    let mut rows: Vec<[Option<Gluing>; 4]> = vec![[None; 4]; total];
    for t in 0..n {
        for f in 0..4u8 {
            let Some((from, rho_from)) = image[t][f as usize] else { continue };
            let g = tri.gluing(Slot::new(t, f));
            let (to, rho_to) = image[g.target.tet][g.target.face as usize]
                .ok_or_else(|| not_applicable("external face glued into the removed region"))?;
            let perm = rho_to.inverse().compose(g.perm).compose(rho_from);
            rows[from.tet][from.face as usize] = Some(Gluing { target: to, perm });
        }
    }
    for &(a, fa, b, fb, perm) in internal {
        let (a, b) = (base + a, base + b);
        rows[a][fa as usize] = Some(Gluing { target: Slot::new(b, fb), perm });
        rows[b][fb as usize] = Some(Gluing { target: Slot::new(a, fa), perm: perm.inverse() });
    }
    Triangulation::from_gluings(rows).map_err(|e| not_applicable(format!("result invalid: {e}")))
}

/// 2-3 move across triangle class `triangle` (index into the skeleton's
/// triangle list). The two sides must be distinct tetrahedra.
pub fn pachner_23(tri: &Triangulation, triangle: usize) -> Result<Triangulation, MoveError> {
    let sk = tri.skeleton();
    let tc = *sk
        .triangles
        .get(triangle)
        .ok_or_else(|| not_applicable(format!("no triangle {triangle}")))?;
    let (sa, sb) = (tc.first, tc.second);
    if sa.tet == sb.tet {
        return Err(not_applicable("both sides of the triangle lie in one tetrahedron"));
    }
    let pi = tri.gluing(sa).perm;

    // Names: 0,1,2 equatorial vertices, 3 apex of A, 4 apex of B.
    let mut names_a = [0u8; 4];
    let mut names_b = [0u8; 4];
    names_a[sa.face as usize] = 3;
    names_b[sb.face as usize] = 4;
    let mut k = 0;
    for l in 0..4u8 {
        if l != sa.face {
            names_a[l as usize] = k;
            names_b[pi.apply(l) as usize] = k;
            k += 1;
        }
    }
    let new_names = |i: u8| -> [u8; 4] {
        let mut others = (0..3u8).filter(|&x| x != i);
        [3, 4, others.next().unwrap(), others.next().unwrap()]
    };

    let mut replacements = Vec::new();
    for i in 0..3u8 {
        let nn = new_names(i);
        // A's face opposite x_i becomes face 1 (opposite apex b) of N_i.
        replacements.push(Replacement {
            old: Slot::new(sa.tet, label_of(names_a, i)),
            new_tet: i as usize,
            new_face: 1,
            relabel: name_perm(nn, names_a, 4, i),
        });
        replacements.push(Replacement {
            old: Slot::new(sb.tet, label_of(names_b, i)),
            new_tet: i as usize,
            new_face: 0,
            relabel: name_perm(nn, names_b, 3, i),
        });
    }
    let mut internal = Vec::new();
    for i in 0..3u8 {
        for j in i + 1..3 {
            let (ni, nj) = (new_names(i), new_names(j));
            let fi = label_of(ni, j);
            let fj = label_of(nj, i);
            internal.push((i as usize, fi, j as usize, fj, name_perm(ni, nj, j, i)));
        }
    }
    rebuild(tri, &[sa.tet, sb.tet], 3, &replacements, &internal)
}

/// 3-2 move on edge class `edge`, which must have degree 3 with three
/// distinct incident tetrahedra.
pub fn pachner_32(tri: &Triangulation, edge: usize) -> Result<Triangulation, MoveError> {
    let sk = tri.skeleton();
    let class = sk
        .edges
        .get(edge)
        .ok_or_else(|| not_applicable(format!("no edge {edge}")))?;
    if class.degree() != 3 {
        return Err(not_applicable(format!("edge {edge} has degree {}", class.degree())));
    }
    // Names: 0 = U, 1 = W (edge ends), 2,3,4 = P0,P1,P2 around the edge.
    let (t0, e0) = class.members[0];
    let (u, w) = EDGE_VERTICES[e0 as usize];
    let (c, d) = EDGE_VERTICES[5 - e0 as usize];
    let mut tets = [t0, 0, 0];
    let mut names = [[0u8; 4]; 3];
    names[0][u as usize] = 0;
    names[0][w as usize] = 1;
    names[0][c as usize] = 2;
    names[0][d as usize] = 3;

    // Walk T0 -(face opp P0)-> T1 -(face opp P1)-> T2 -(face opp P2)-> T0.
    let mut cur = 0usize;
    let mut opp_name = 2u8;
    for step in 0..3 {
        let face = label_of(names[cur], opp_name);
        let g = tri.gluing(Slot::new(tets[cur], face));
        let mut mapped = [u8::MAX; 4];
        for l in 0..4u8 {
            if l != face {
                mapped[g.perm.apply(l) as usize] = names[cur][l as usize];
            }
        }
        let fresh = [4u8, 2, 3][step];
        mapped[g.target.face as usize] = fresh;
        if step < 2 {
            tets[step + 1] = g.target.tet;
            names[step + 1] = mapped;
            cur = step + 1;
            opp_name = [3u8, 4][step];
        } else if g.target.tet != t0 || mapped != names[0] {
            return Err(not_applicable("edge link does not close up consistently"));
        }
    }
    if tets[0] == tets[1] || tets[1] == tets[2] || tets[0] == tets[2] {
        return Err(not_applicable("tetrahedra around the edge are not distinct"));
    }

    let x_u = [0u8, 2, 3, 4];
    let x_w = [1u8, 2, 3, 4];
    let mut replacements = Vec::new();
    for i in 0..3 {
        let nm = names[i];
        let missing = (2..5u8).find(|p| !nm.contains(p)).unwrap();
        replacements.push(Replacement {
            old: Slot::new(tets[i], label_of(nm, 1)),
            new_tet: 0,
            new_face: label_of(x_u, missing),
            relabel: name_perm(x_u, nm, missing, 1),
        });
        replacements.push(Replacement {
            old: Slot::new(tets[i], label_of(nm, 0)),
            new_tet: 1,
            new_face: label_of(x_w, missing),
            relabel: name_perm(x_w, nm, missing, 0),
        });
    }
    let internal = [(0usize, 0u8, 1usize, 0u8, name_perm(x_u, x_w, 0, 1))];
    let mut removed = tets.to_vec();
    removed.sort_unstable();
    rebuild(tri, &removed, 2, &replacements, &internal)
}

/// 1-4 move: cone tetrahedron `tet` from a new interior vertex.
pub fn pachner_14(tri: &Triangulation, tet: usize) -> Result<Triangulation, MoveError> {
    if tet >= tri.size() {
        return Err(not_applicable(format!("no tetrahedron {tet}")));
    }
    let old = [0u8, 1, 2, 3];
    let cone = |i: u8| -> [u8; 4] {
        let mut nm = old;
        nm[i as usize] = 4;
        nm
    };
    let replacements: Vec<_> = (0..4u8)
        .map(|i| Replacement {
            old: Slot::new(tet, i),
            new_tet: i as usize,
            new_face: i,
            relabel: name_perm(cone(i), old, 4, i),
        })
        .collect();
    let mut internal = Vec::new();
    for i in 0..4u8 {
        for j in i + 1..4 {
            internal.push((i as usize, j, j as usize, i, name_perm(cone(i), cone(j), j, i)));
        }
    }
    rebuild(tri, &[tet], 4, &replacements, &internal)
}

/// SplitMix64: `state += 0x9E3779B97F4A7C15`, then the standard
/// xor-shift-multiply finalizer. Uniform choices use `next_u64() % len`.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    pub fn below(&mut self, len: usize) -> usize {
        (self.next_u64() % len as u64) as usize
    }
}

/// All results of applicable 2-3 moves (by triangle index) followed by all
/// applicable 3-2 moves (by edge index).
pub fn applicable_moves(tri: &Triangulation) -> Vec<Triangulation> {
    let sk = tri.skeleton();
    let mut out: Vec<_> = (0..sk.triangles.len())
        .filter_map(|i| pachner_23(tri, i).ok())
        .collect();
    out.extend(
        (0..sk.edges.len())
            .filter(|&e| sk.edges[e].degree() == 3)
            .filter_map(|e| pachner_32(tri, e).ok()),
    );
    out
}

/// `steps` uniformly random applicable 2-3/3-2 moves; a step with no
/// applicable move leaves the triangulation unchanged.
pub fn random_pachner_walk(tri: &Triangulation, steps: usize, seed: u64) -> Triangulation {
    walk_trace(tri, steps, seed).pop().expect("trace contains the start")
}

/// Every triangulation visited by the walk, starting with `tri` itself.
pub fn walk_trace(tri: &Triangulation, steps: usize, seed: u64) -> Vec<Triangulation> {
    let mut rng = SplitMix64::new(seed);
    let mut trace = vec![tri.clone()];
    for _ in 0..steps {
        let cur = trace.last().unwrap();
        let mut moves = applicable_moves(cur);
        let next = if moves.is_empty() {
            cur.clone()
        } else {
            let k = rng.below(moves.len());
            moves.swap_remove(k)
        };
        trace.push(next);
    }
    trace
}
