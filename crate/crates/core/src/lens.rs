//! Continued fractions, the r/l word of a lens space, and the layered
//! triangulation `T(p,q)` with `S(p,q) - 3` tetrahedra.
//!
//! The construction keeps a solid torus whose boundary is two triangles
//! sharing three edges with meridian weights `(a, b, a+b)`. A single
//! tetrahedron with two faces folded together starts the chain with weights
//! `{1, 2, 3}`; each further letter layers a tetrahedron over the edge of
//! weight `b` (letter `r`) or `a` (letter `l`); the last letter folds the two
//! boundary triangles onto each other along that same edge.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::triangulation::{Gluing, Perm, Slot, Triangulation, TriangulationKind, H1};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LensError {
    #[error("invalid lens parameters ({p}, {q}): {reason}")]
    InvalidParams { p: u64, q: u64, reason: &'static str },
    #[error("construction self-check failed for ({p}, {q}): {what}")]
    ConstructionInvariantViolated { p: u64, q: u64, what: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Letter {
    /// `r(a, b) = (a, a + b)`
    R,
    /// `l(a, b) = (a + b, b)`
    L,
}

impl Letter {
    pub fn apply(self, (a, b): (u64, u64)) -> (u64, u64) {
        match self {
            Letter::R => (a, a + b),
            Letter::L => (a + b, b),
        }
    }
}

/// A word over `{r, l}`, written left to right and applied right to left.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Composition order: the rightmost letter acts first.
    pub fn apply(&self, start: (u64, u64)) -> (u64, u64) {
        self.0.iter().rev().fold(start, |acc, l| l.apply(acc))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.0 {
            f.write_str(match l {
                Letter::R => "r",
                Letter::L => "l",
            })?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LensParams {
    pub p: u64,
    pub q: u64,
    /// Regular continued fraction of `p/q`, last quotient at least 2 unless
    /// `q = 1`.
    pub cf: Vec<u64>,
    /// Sum of the partial quotients.
    pub s: u64,
    /// Carries `(1, 1)` to `(q, p - q)`.
    pub word: Word,
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn continued_fraction(mut p: u64, mut q: u64) -> Vec<u64> {
    let mut cf = Vec::new();
    while q != 0 {
        cf.push(p / q);
        (p, q) = (q, p % q);
    }
    cf
}

/// The unique r/l word carrying `(1, 1)` to `(a, b)`, recovered by undoing
/// the last-applied letter until `(1, 1)` is reached.
pub fn word_for(mut a: u64, mut b: u64) -> Option<Word> {
    if a == 0 || b == 0 || gcd(a, b) != 1 {
        return None;
    }
    let mut letters = Vec::new();
    while (a, b) != (1, 1) {
        if a < b {
            letters.push(Letter::R);
            b -= a;
        } else {
            letters.push(Letter::L);
            a -= b;
        }
    }
    Some(Word(letters))
}

pub fn lens_params(p: u64, q: u64) -> Result<LensParams, LensError> {
    let invalid = |reason| LensError::InvalidParams { p, q, reason };
    if p < 4 {
        return Err(invalid("p must be at least 4"));
    }
    if q == 0 || q >= p {
        return Err(invalid("q must satisfy 0 < q < p"));
    }
    if gcd(p, q) != 1 {
        return Err(invalid("p and q must be coprime"));
    }
    let cf = continued_fraction(p, q);
    let s = cf.iter().sum();
    let word = word_for(q, p - q).expect("coprime positive pair");
    Ok(LensParams { p, q, cf, s, word })
}

/// Expected number of normal tori in `T(p,q)`: `S - 3` if `q = 1`, else `S - 4`.
pub fn tau_expected(p: u64, q: u64) -> Result<u64, LensError> {
    let lp = lens_params(p, q)?;
    Ok(if q == 1 { lp.s - 3 } else { lp.s - 4 })
}

/// Expected number of normal Klein bottles: 1 iff `p = 4n`, `q = 2n ± 1`.
pub fn kappa_expected(p: u64, q: u64) -> Result<u64, LensError> {
    lens_params(p, q)?;
    let hit = p % 4 == 0 && {
        let n = p / 4;
        q == 2 * n - 1 || q == 2 * n + 1
    };
    Ok(u64::from(hit))
}

/// A boundary triangle of the layered solid torus: a free face slot and the
/// boundary edge carried by each of its sides.
#[derive(Debug, Clone, Copy)]
struct BoundaryTriangle {
    slot: Slot,
    sides: [(u8, u8, usize); 3],
}

impl BoundaryTriangle {
    fn side(&self, x: u8, y: u8) -> usize {
        self.sides
            .iter()
            .find(|&&(a, b, _)| (a, b) == (x, y) || (a, b) == (y, x))
            .map(|s| s.2)
            .expect("side of boundary triangle")
    }

    fn vertices(&self) -> [u8; 3] {
        let mut v = [0u8; 3];
        let mut k = 0;
        for i in 0..4u8 {
            if i != self.slot.face {
                v[k] = i;
                k += 1;
            }
        }
        v
    }

    /// `(start, end, third)` with the side `start-end` carrying `edge`.
    fn around(&self, edge: usize) -> (u8, u8, u8) {
        let &(u, w, _) = self.sides.iter().find(|s| s.2 == edge).expect("edge on triangle");
        let third = self.vertices().into_iter().find(|&v| v != u && v != w).unwrap();
        (u, w, third)
    }
}

struct LayeredSolidTorus {
    rows: Vec<[Option<Gluing>; 4]>,
    upper: BoundaryTriangle,
    lower: BoundaryTriangle,
    weights: Vec<u64>,
}

impl LayeredSolidTorus {
    /// One tetrahedron with face 3 folded onto face 0 by `0→1, 1→2, 2→3`.
    /// Boundary edges: `{01,12,23}` weight 1, `{02,13}` weight 2, `{03}` weight 3.
    fn new() -> Self {
        let mut rows = vec![[None; 4]];
        let perm = Perm([1, 2, 3, 0]);
        rows[0][3] = Some(Gluing { target: Slot::new(0, 0), perm });
        rows[0][0] = Some(Gluing { target: Slot::new(0, 3), perm: perm.inverse() });
        let (w1, w2, w3) = (0, 1, 2);
        LayeredSolidTorus {
            rows,
            upper: BoundaryTriangle { slot: Slot::new(0, 2), sides: [(0, 1, w1), (1, 3, w2), (0, 3, w3)] },
            lower: BoundaryTriangle { slot: Slot::new(0, 1), sides: [(0, 2, w2), (2, 3, w1), (0, 3, w3)] },
            weights: vec![1, 2, 3],
        }
    }

    fn glue(&mut self, from: Slot, perm: Perm, to: Slot) {
        self.rows[from.tet][from.face as usize] = Some(Gluing { target: to, perm });
        self.rows[to.tet][to.face as usize] = Some(Gluing { target: from, perm: perm.inverse() });
    }

    /// Matching orientations of `edge` on the two boundary triangles:
    /// `(s1, e1, x1)` and `(s2, e2, x2)`. On a torus the side `s1-x1` and the
    /// side `s2-x2` carry different edges.
    fn align(&self, edge: usize) -> ((u8, u8, u8), (u8, u8, u8)) {
        let (s1, e1, x1) = self.upper.around(edge);
        let start_side = self.upper.side(s1, x1);
        let (u2, w2, x2) = self.lower.around(edge);
        let second = if self.lower.side(u2, x2) != start_side { (u2, w2, x2) } else { (w2, u2, x2) };
        ((s1, e1, x1), second)
    }

    /// Layers a new tetrahedron over `edge`; returns the new edge id.
    fn layer(&mut self, edge: usize) -> usize {
        let ((s1, e1, x1), (s2, e2, x2)) = self.align(edge);
        let m = self.rows.len();
        self.rows.push([None; 4]);
        let up = self.upper;
        let lo = self.lower;
        // new tet: edge 01 over `edge`, vertex 2 over the upper third, 3 over the lower third
        self.glue(Slot::new(m, 3), Perm([s1, e1, x1, up.slot.face]), up.slot);
        self.glue(Slot::new(m, 2), Perm([s2, e2, lo.slot.face, x2]), lo.slot);

        let others: Vec<usize> = up.sides.iter().map(|s| s.2).filter(|&e| e != edge).collect();
        let fresh = self.weights.len();
        self.weights.push(others.iter().map(|&e| self.weights[e]).sum());

        self.upper = BoundaryTriangle {
            slot: Slot::new(m, 0),
            sides: [(1, 2, up.side(e1, x1)), (1, 3, lo.side(e2, x2)), (2, 3, fresh)],
        };
        self.lower = BoundaryTriangle {
            slot: Slot::new(m, 1),
            sides: [(0, 2, up.side(s1, x1)), (0, 3, lo.side(s2, x2)), (2, 3, fresh)],
        };
        fresh
    }

    /// Folds the boundary triangles onto each other along `edge`.
    fn fold(&mut self, edge: usize) {
        let ((s1, e1, x1), (s2, e2, x2)) = self.align(edge);
        let (up, lo) = (self.upper.slot, self.lower.slot);
        let mut images = [0u8; 4];
        images[s1 as usize] = s2;
        images[e1 as usize] = e2;
        images[x1 as usize] = x2;
        images[up.face as usize] = lo.face;
        self.glue(up, Perm(images), lo);
    }
}

/// Builds `T(p,q)` and runs its self-checks: validity, `S - 3` tetrahedra,
/// one vertex, closed, `H_1 = Z/p`.
pub fn build_tpq(p: u64, q: u64) -> Result<Triangulation, LensError> {
    let lp = lens_params(p, q)?;
    let fail = |what: String| LensError::ConstructionInvariantViolated { p, q, what };
    let letters = &lp.word.0;
    let n = letters.len();

    let mut torus = LayeredSolidTorus::new();
    // (a, b, a+b) edge ids after the first (rightmost) letter
    let (mut a, mut b, mut c) = match letters[n - 1] {
        Letter::R => (0, 1, 2),
        Letter::L => (1, 0, 2),
    };
    for &letter in letters[1..n - 1].iter().rev() {
        match letter {
            Letter::R => {
                let fresh = torus.layer(b);
                (a, b, c) = (a, c, fresh);
            }
            Letter::L => {
                let fresh = torus.layer(a);
                (a, b, c) = (c, b, fresh);
            }
        }
    }
    let w = torus.weights.clone();
    if w[c] != w[a] + w[b] {
        return Err(fail(format!("boundary weights {} + {} != {}", w[a], w[b], w[c])));
    }
    let folded = match letters[0] {
        Letter::R => {
            torus.fold(b);
            w[a] + w[c]
        }
        Letter::L => {
            torus.fold(a);
            w[b] + w[c]
        }
    };
    if folded != p {
        return Err(fail(format!("fold produces order {folded}, expected {p}")));
    }

    let tri = Triangulation::from_gluings(torus.rows).map_err(|e| fail(e.to_string()))?;
    if tri.size() as u64 != lp.s - 3 {
        return Err(fail(format!("{} tetrahedra, expected {}", tri.size(), lp.s - 3)));
    }
    let (verts, ..) = tri.counts();
    if verts != 1 {
        return Err(fail(format!("{verts} vertices, expected 1")));
    }
    if tri.kind() != TriangulationKind::Closed {
        return Err(fail("vertex link is not a sphere".into()));
    }
    let h1 = tri.h1().map_err(|e| fail(e.to_string()))?;
    if h1 != (H1 { betti: 0, torsion: vec![p as i128] }) {
        return Err(fail(format!("H1 = {h1:?}, expected Z/{p}")));
    }
    Ok(tri)
}
