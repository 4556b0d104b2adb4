//! Normal surfaces of types I and II built from simple subpolyhedra, and
//! their topology recovered from normal coordinates.
//!
//! Coordinates per tetrahedron are `[t0, t1, t2, t3, q0, q1, q2]`: `ti`
//! triangles cutting off vertex `i`, and `qk` quads separating edge `k` from
//! the opposite edge `5 - k`.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dsu::ParityDsu;
use crate::spine::{enumerate_simple_subpolyhedra, SpecialSpine, SpineError, SubPolyhedron};
use crate::triangulation::{edge_index, Triangulation, EDGE_VERTICES};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NormalError {
    #[error("subpolyhedron {0:#x} is not a surface")]
    NotASurface(u64),
    #[error("subpolyhedron {0:#x} is not simple")]
    NotSimple(u64),
    #[error("subpolyhedron is empty")]
    EmptySubpolyhedron,
    #[error("tetrahedron {tet}: link subgraph {edges:#08b} is not a cycle, theta or K4")]
    InternalLinkError { tet: usize, edges: u8 },
    #[error("matching violation: {0}")]
    MatchingViolation(String),
    #[error(transparent)]
    Spine(#[from] SpineError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "type", content = "mask")]
pub enum Provenance {
    TypeI(u64),
    TypeII(u64),
    External,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::TypeI(m) => write!(f, "I:{m:#x}"),
            Provenance::TypeII(m) => write!(f, "II:{m:#x}"),
            Provenance::External => f.write_str("external"),
        }
    }
}

pub type TetCoords = [u64; 7];

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NormalSurface {
    pub coords: Vec<TetCoords>,
    pub provenance: Provenance,
}

/// Quad type separating the pair containing `v` and `f` from the other pair.
fn quad_type(v: u8, f: u8) -> usize {
    let e = edge_index(v, f);
    e.min(5 - e)
}

impl NormalSurface {
    pub fn is_empty(&self) -> bool {
        self.coords.iter().all(|c| c.iter().all(|&x| x == 0))
    }

    /// Made only of triangles.
    pub fn is_trivial(&self) -> bool {
        self.coords.iter().all(|c| c[4..].iter().all(|&x| x == 0))
    }

    /// Number of normal arcs at corner `v` of face `f` of `tet`.
    pub fn arcs(&self, tet: usize, f: u8, v: u8) -> u64 {
        let c = &self.coords[tet];
        c[v as usize] + c[4 + quad_type(v, f)]
    }

    /// Intersection points of the surface with edge slot `e` of `tet`.
    pub fn slot_weight(&self, tet: usize, e: usize) -> u64 {
        let c = &self.coords[tet];
        let (a, b) = EDGE_VERTICES[e];
        let quads: u64 = (0..3).filter(|&k| k != e && k != 5 - e).map(|k| c[4 + k]).sum();
        c[a as usize] + c[b as usize] + quads
    }

    /// Checks at most one quad type per tetrahedron and the matching
    /// equations across every glued face.
    pub fn check_matching(&self, tri: &Triangulation) -> Result<(), NormalError> {
        if self.coords.len() != tri.size() {
            return Err(NormalError::MatchingViolation(format!(
                "{} coordinate rows for {} tetrahedra",
                self.coords.len(),
                tri.size()
            )));
        }
        for (t, c) in self.coords.iter().enumerate() {
            if c[4..].iter().filter(|&&x| x > 0).count() > 1 {
                return Err(NormalError::MatchingViolation(format!("tetrahedron {t} has two quad types")));
            }
        }
        for s in tri.slots() {
            let g = tri.gluing(s);
            for v in (0..4u8).filter(|&v| v != s.face) {
                let here = self.arcs(s.tet, s.face, v);
                let there = self.arcs(g.target.tet, g.target.face, g.perm.apply(v));
                if here != there {
                    return Err(NormalError::MatchingViolation(format!(
                        "face {}:{} corner {v}: {here} arcs vs {there}",
                        s.tet, s.face
                    )));
                }
            }
        }
        Ok(())
    }

    /// Intersection count with each edge class.
    pub fn edge_weights(&self, tri: &Triangulation) -> Result<Vec<u64>, NormalError> {
        let sk = tri.skeleton();
        sk.edges
            .iter()
            .enumerate()
            .map(|(i, class)| {
                let (t0, e0) = class.members[0];
                let w = self.slot_weight(t0, e0 as usize);
                match class.members.iter().find(|&&(t, e)| self.slot_weight(t, e as usize) != w) {
                    None => Ok(w),
                    Some(_) => Err(NormalError::MatchingViolation(format!("edge class {i} has unequal weights"))),
                }
            })
            .collect()
    }

    pub fn max_edge_weight(&self, tri: &Triangulation) -> Result<u64, NormalError> {
        Ok(self.edge_weights(tri)?.into_iter().max().unwrap_or(0))
    }

    /// Number of tetrahedra met only in triangles.
    pub fn vertex_bound_after_cut(&self) -> usize {
        self.coords.iter().filter(|c| c[4..].iter().all(|&x| x == 0)).count()
    }
}

/// Link subgraph of `Q` in tetrahedron `t`: bit `e` set iff the corner germ
/// of edge slot `e` lies in `Q`.
fn link_subgraph(spine: &SpecialSpine, q: &SubPolyhedron, t: usize) -> u8 {
    (0..6).filter(|&e| q.contains(spine.corners[t][e])).fold(0u8, |m, e| m | 1 << e)
}

fn edges_at(v: u8) -> u8 {
    (0..6).filter(|&e| EDGE_VERTICES[e].0 == v || EDGE_VERTICES[e].1 == v).fold(0, |m, e| m | 1 << e)
}

/// Discs of type I or II in one tetrahedron for link subgraph `l`.
fn local_discs(l: u8, doubled: bool) -> Option<TetCoords> {
    let mut c = [0u64; 7];
    let k = if doubled { 2 } else { 1 };
    match l.count_ones() {
        0 => {}
        3 => {
            let m = (0..4u8).find(|&m| edges_at(m) == l)?;
            c[m as usize] = k;
        }
        4 => {
            let missing = !l & 0x3f;
            let e = missing.trailing_zeros() as usize;
            if missing != (1 << e) | (1 << (5 - e)) {
                return None;
            }
            c[4 + e.min(5 - e)] = k;
        }
        5 if doubled => {
            let uw = (!l & 0x3f).trailing_zeros() as usize;
            let (u, w) = EDGE_VERTICES[uw];
            for v in (0..4u8).filter(|&v| v != u && v != w) {
                c[v as usize] = 1;
            }
            c[4 + uw.min(5 - uw)] = 1;
        }
        6 if doubled => c[..4].fill(1),
        _ => return None,
    }
    Some(c)
}

fn assemble(
    tri: &Triangulation,
    spine: &SpecialSpine,
    q: &SubPolyhedron,
    doubled: bool,
) -> Result<NormalSurface, NormalError> {
    let coords = (0..tri.size())
        .map(|t| {
            let l = link_subgraph(spine, q, t);
            local_discs(l, doubled).ok_or(NormalError::InternalLinkError { tet: t, edges: l })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let provenance = if doubled { Provenance::TypeII(q.faces) } else { Provenance::TypeI(q.faces) };
    let ns = NormalSurface { coords, provenance };
    ns.check_matching(tri)?;
    Ok(ns)
}

/// The surface subpolyhedron `Q` itself, made normal.
pub fn type_i_surface(tri: &Triangulation, spine: &SpecialSpine, q: &SubPolyhedron) -> Result<NormalSurface, NormalError> {
    if q.is_empty {
        return Err(NormalError::EmptySubpolyhedron);
    }
    if !q.is_surface {
        return Err(NormalError::NotASurface(q.faces));
    }
    assemble(tri, spine, q, false)
}

/// The boundary of a regular neighborhood of the simple subpolyhedron `Q`.
pub fn type_ii_surface(tri: &Triangulation, spine: &SpecialSpine, q: &SubPolyhedron) -> Result<NormalSurface, NormalError> {
    if q.is_empty {
        return Err(NormalError::EmptySubpolyhedron);
    }
    if crate::spine::subpolyhedron(spine, q.faces).is_err() {
        return Err(NormalError::NotSimple(q.faces));
    }
    assemble(tri, spine, q, true)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Classification {
    Sphere,
    #[serde(rename = "rp2")]
    ProjectivePlane,
    Torus,
    Klein,
    Other(i64),
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Classification::Sphere => f.write_str("sphere"),
            Classification::ProjectivePlane => f.write_str("rp2"),
            Classification::Torus => f.write_str("torus"),
            Classification::Klein => f.write_str("klein"),
            Classification::Other(chi) => write!(f, "other({chi})"),
        }
    }
}

impl Classification {
    /// Closed connected surface with the given `χ` and orientability.
    pub fn of(chi: i64, orientable: bool) -> Classification {
        match (chi, orientable) {
            (2, true) => Classification::Sphere,
            (1, false) => Classification::ProjectivePlane,
            (0, true) => Classification::Torus,
            (0, false) => Classification::Klein,
            _ => Classification::Other(chi),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceReport {
    pub chi: i64,
    pub orientable: bool,
    pub connected: bool,
    pub components: usize,
    pub classification: Classification,
    pub trivial: bool,
    pub max_edge_weight: u64,
}

/// One connected piece of a reconstructed surface.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    pub coords: Vec<TetCoords>,
    pub chi: i64,
    pub orientable: bool,
}

/// A disc: `(tet, kind, index)` with `kind < 4` a triangle at that vertex and
/// `kind = 4 + k` a quad of type `k`.
type Disc = (usize, usize, u64);

/// Boundary edges of a disc's polygon, in cyclic order.
fn boundary_cycle(kind: usize) -> Vec<(u8, u8)> {
    if kind < 4 {
        let v = kind as u8;
        (0..4u8).filter(|&w| w != v).map(|w| (v, w)).collect()
    } else {
        let (a, b) = EDGE_VERTICES[kind - 4];
        let (c, d) = EDGE_VERTICES[5 - (kind - 4)];
        vec![(a, c), (a, d), (b, d), (b, c)]
    }
}

fn same_edge(x: (u8, u8), y: (u8, u8)) -> bool {
    x == y || x == (y.1, y.0)
}

/// Whether the disc's boundary runs from edge `{v,x}` to edge `{v,y}`.
fn arc_ascends(kind: usize, v: u8, x: u8, y: u8) -> bool {
    let cycle = boundary_cycle(kind);
    let n = cycle.len();
    (0..n).any(|i| same_edge(cycle[i], (v, x)) && same_edge(cycle[(i + 1) % n], (v, y)))
}

struct DiscComplex {
    discs: Vec<Disc>,
    index: BTreeMap<Disc, usize>,
}

impl DiscComplex {
    fn new(ns: &NormalSurface) -> Self {
        let mut discs = Vec::new();
        for (t, c) in ns.coords.iter().enumerate() {
            for (kind, &count) in c.iter().enumerate() {
                for i in 0..count {
                    discs.push((t, kind, i));
                }
            }
        }
        let index = discs.iter().enumerate().map(|(i, &d)| (d, i)).collect();
        DiscComplex { discs, index }
    }

    /// The disc carrying the arc at corner `v` of face `f` of `tet`, at
    /// `depth` counted from the corner: triangles first, then quads. Quads of
    /// one type are indexed from the side holding the lower-numbered pair.
    fn arc_disc(&self, ns: &NormalSurface, tet: usize, f: u8, v: u8, depth: u64) -> usize {
        let c = &ns.coords[tet];
        let kind = if depth < c[v as usize] {
            (v as usize, depth)
        } else {
            let k = quad_type(v, f);
            let j = depth - c[v as usize];
            let low_side = EDGE_VERTICES[k];
            let near_low = [low_side.0, low_side.1].contains(&v);
            (4 + k, if near_low { j } else { c[4 + k] - 1 - j })
        };
        self.index[&(tet, kind.0, kind.1)]
    }
}

/// Splits the surface into connected components and computes `χ` and
/// orientability of each.
pub fn components(tri: &Triangulation, ns: &NormalSurface) -> Result<Vec<Component>, NormalError> {
    ns.check_matching(tri)?;
    let sk = tri.skeleton();
    let dc = DiscComplex::new(ns);
    let mut dsu = ParityDsu::new(dc.discs.len());

    for s in tri.slots() {
        let g = tri.gluing(s);
        if (g.target.tet, g.target.face) < (s.tet, s.face) {
            continue;
        }
        for v in (0..4u8).filter(|&v| v != s.face) {
            let others: Vec<u8> = (0..4u8).filter(|&x| x != v && x != s.face).collect();
            let (x, y) = (others[0], others[1]);
            let (v2, x2, y2) = (g.perm.apply(v), g.perm.apply(x), g.perm.apply(y));
            for depth in 0..ns.arcs(s.tet, s.face, v) {
                let a = dc.arc_disc(ns, s.tet, s.face, v, depth);
                let b = dc.arc_disc(ns, g.target.tet, g.target.face, v2, depth);
                let dir_a = arc_ascends(dc.discs[a].1, v, x, y);
                let dir_b = arc_ascends(dc.discs[b].1, v2, x2, y2);
                // same induced direction on the shared arc: flip one side
                dsu.union(a, b, dir_a == dir_b);
            }
        }
    }

    let degrees: Vec<i128> = sk.edges.iter().map(|c| c.degree() as i128).collect();
    let l = degrees.iter().fold(1i128, |acc, &d| lcm(acc, d));
    let (labels, count) = dsu.labels();
    let mut comps: Vec<Component> = (0..count)
        .map(|_| Component { coords: vec![[0; 7]; tri.size()], chi: 0, orientable: true })
        .collect();
    // χ scaled by 2l: each disc contributes a face, half of each of its
    // sides, and 1/degree of each corner point.
    let mut scaled = vec![0i128; count];
    for (i, &(t, kind, _)) in dc.discs.iter().enumerate() {
        let c = labels[i];
        comps[c].coords[t][kind] += 1;
        let cycle = boundary_cycle(kind);
        let corner_sum: i128 = cycle
            .iter()
            .map(|&(a, b)| l / degrees[sk.edge_of(t, edge_index(a, b))])
            .sum();
        scaled[c] += 2 * l - cycle.len() as i128 * l + 2 * corner_sum;
        if !dsu.is_consistent(i) {
            comps[c].orientable = false;
        }
    }
    for (comp, s) in comps.iter_mut().zip(scaled) {
        if s % (2 * l) != 0 {
            return Err(NormalError::MatchingViolation("non-integral Euler characteristic".into()));
        }
        comp.chi = (s / (2 * l)) as i64;
    }
    Ok(comps)
}

fn lcm(a: i128, b: i128) -> i128 {
    fn gcd(a: i128, b: i128) -> i128 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    a / gcd(a, b) * b
}

pub fn reconstruct(tri: &Triangulation, ns: &NormalSurface) -> Result<SurfaceReport, NormalError> {
    let comps = components(tri, ns)?;
    let chi = comps.iter().map(|c| c.chi).sum();
    let orientable = comps.iter().all(|c| c.orientable);
    let classification = match comps.as_slice() {
        [one] => Classification::of(one.chi, one.orientable),
        _ => Classification::Other(chi),
    };
    Ok(SurfaceReport {
        chi,
        orientable,
        connected: comps.len() == 1,
        components: comps.len(),
        classification,
        trivial: ns.is_trivial(),
        max_edge_weight: ns.max_edge_weight(tri)?,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusEntry {
    pub surface: NormalSurface,
    pub report: SurfaceReport,
}

/// Connected type I and type II surfaces of every nonempty simple
/// subpolyhedron, deduplicated by coordinates and sorted by coordinates.
/// A coordinate vector seen with several provenances keeps the least one.
pub fn census(tri: &Triangulation, spine: &SpecialSpine) -> Result<Vec<CensusEntry>, NormalError> {
    let subs = enumerate_simple_subpolyhedra(spine)?;
    census_of(tri, spine, &subs)
}

pub fn census_of(
    tri: &Triangulation,
    spine: &SpecialSpine,
    subs: &[SubPolyhedron],
) -> Result<Vec<CensusEntry>, NormalError> {
    let pieces: Vec<Vec<NormalSurface>> = subs
        .par_iter()
        .filter(|q| !q.is_empty)
        .map(|q| {
            let mut made = Vec::new();
            if q.is_surface {
                made.push(type_i_surface(tri, spine, q)?);
            }
            made.push(type_ii_surface(tri, spine, q)?);
            let mut out = Vec::new();
            for ns in made {
                for comp in components(tri, &ns)? {
                    out.push(NormalSurface { coords: comp.coords, provenance: ns.provenance });
                }
            }
            Ok(out)
        })
        .collect::<Result<_, NormalError>>()?;

    let mut unique: BTreeMap<Vec<TetCoords>, Provenance> = BTreeMap::new();
    for ns in pieces.into_iter().flatten() {
        unique
            .entry(ns.coords)
            .and_modify(|p| *p = (*p).min(ns.provenance))
            .or_insert(ns.provenance);
    }
    unique
        .into_par_iter()
        .map(|(coords, provenance)| {
            let surface = NormalSurface { coords, provenance };
            let report = reconstruct(tri, &surface)?;
            Ok(CensusEntry { surface, report })
        })
        .collect()
}

/// Counts of connected census surfaces by kind.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusCounts {
    pub tori: usize,
    pub klein_bottles: usize,
    pub projective_planes: usize,
    pub nontrivial_spheres: usize,
    pub trivial: usize,
    pub other: usize,
}

pub fn census_counts(entries: &[CensusEntry]) -> CensusCounts {
    let mut c = CensusCounts::default();
    for e in entries {
        let r = &e.report;
        if r.trivial {
            c.trivial += 1;
            continue;
        }
        match r.classification {
            Classification::Torus => c.tori += 1,
            Classification::Klein => c.klein_bottles += 1,
            Classification::ProjectivePlane => c.projective_planes += 1,
            Classification::Sphere => c.nontrivial_spheres += 1,
            Classification::Other(_) => c.other += 1,
        }
    }
    c
}
