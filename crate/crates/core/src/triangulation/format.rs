//! Line-based text format.
//!
//! ```text
//! # comment
//! tets: N
//! g <tet> <face> <tet'> <face'> <p0p1p2p3>
//! ```
//!
//! One `g` line per oriented gluing; both directions must be present and
//! mutually inverse. The permutation lists the image of vertex `i` at
//! position `i`.

use std::fmt::Write as _;
use std::str::FromStr;

use thiserror::Error;

use super::{Gluing, GluingError, Perm, Slot, Triangulation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("line {line}: {source}")]
    Gluing {
        line: usize,
        #[source]
        source: GluingError,
    },
    #[error("face {0:?} is unglued")]
    UngluedFace(Slot),
}

impl ParseError {
    pub fn line(&self) -> Option<usize> {
        match self {
            ParseError::Syntax { line, .. } | ParseError::Gluing { line, .. } => Some(*line),
            ParseError::UngluedFace(_) => None,
        }
    }
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax { line, column, message: message.into() }
}

/// Whitespace-separated tokens with their 1-based starting columns.
fn tokens(s: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in s.char_indices() {
        match (c.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(st)) => {
                out.push((st + 1, &s[st..i]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(st) = start {
        out.push((st + 1, &s[st..]));
    }
    out
}

pub fn parse(text: &str) -> Result<Triangulation, ParseError> {
    let mut size: Option<usize> = None;
    let mut rows: Vec<[Option<(Gluing, usize)>; 4]> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        let toks = tokens(content);
        let Some(&(col, head)) = toks.first() else { continue };

        if head == "tets:" || head.starts_with("tets:") {
            if size.is_some() {
                return Err(syntax(line_no, col, "duplicate 'tets:' header"));
            }
            let rest: Vec<_> = if head == "tets:" {
                toks[1..].to_vec()
            } else {
                vec![(col + 5, &head[5..])]
            };
            let [(c, num)] = rest[..] else {
                return Err(syntax(line_no, col, "expected 'tets: N'"));
            };
            let n = usize::from_str(num).map_err(|_| syntax(line_no, c, "invalid tetrahedron count"))?;
            size = Some(n);
            rows = vec![[None; 4]; n];
            continue;
        }

        if head != "g" {
            return Err(syntax(line_no, col, format!("unexpected token '{head}'")));
        }
        let Some(n) = size else {
            return Err(syntax(line_no, col, "gluing before 'tets:' header"));
        };
        if toks.len() != 6 {
            return Err(syntax(line_no, col, "expected 'g <tet> <face> <tet'> <face'> <perm>'"));
        }
        let int = |k: usize, bound: usize, what: &str| -> Result<usize, ParseError> {
            let (c, s) = toks[k];
            match usize::from_str(s) {
                Ok(v) if v < bound => Ok(v),
                _ => Err(syntax(line_no, c, format!("invalid {what} '{s}'"))),
            }
        };
        let t = int(1, n, "tetrahedron")?;
        let f = int(2, 4, "face")?;
        let t2 = int(3, n, "tetrahedron")?;
        let f2 = int(4, 4, "face")?;
        let (pc, ps) = toks[5];
        let digits: Vec<u8> = ps.bytes().map(|b| b.wrapping_sub(b'0')).collect();
        let perm = match digits[..] {
            [a, b, c, d] => Perm::new([a, b, c, d]),
            _ => None,
        }
        .ok_or_else(|| syntax(line_no, pc, format!("invalid permutation '{ps}'")))?;
        if rows[t][f].is_some() {
            return Err(syntax(line_no, col, format!("face {t} {f} glued twice")));
        }
        rows[t][f] = Some((Gluing { target: Slot::new(t2, f2 as u8), perm }, line_no));
    }

    let Some(n) = size else {
        return Err(syntax(1, 1, "missing 'tets:' header"));
    };

    // Local validation so that errors carry the offending line.
    for t in 0..n {
        for f in 0..4 {
            let from = Slot::new(t, f as u8);
            let Some((g, line)) = rows[t][f] else {
                return Err(ParseError::UngluedFace(from));
            };
            let to = g.target;
            let err = |source| ParseError::Gluing { line, source };
            if to == from {
                return Err(err(GluingError::SelfGlued(from)));
            }
            if g.perm.apply(f as u8) != to.face {
                return Err(err(GluingError::FaceMismatch { from, to }));
            }
            match rows[to.tet][to.face as usize] {
                Some((back, _)) if back.target == from && back.perm == g.perm.inverse() => {}
                Some(_) => return Err(err(GluingError::NotInvolutive { from, to })),
                None => return Err(ParseError::UngluedFace(to)),
            }
        }
    }

    let gluings = rows
        .into_iter()
        .map(|row| row.map(|g| g.map(|(g, _)| g)))
        .collect();
    Triangulation::from_gluings(gluings).map_err(|source| ParseError::Gluing { line: 0, source })
}

pub fn serialize(tri: &Triangulation) -> String {
    let mut out = String::new();
    writeln!(out, "tets: {}", tri.size()).unwrap();
    for slot in tri.slots() {
        let g = tri.gluing(slot);
        writeln!(out, "g {} {} {} {} {}", slot.tet, slot.face, g.target.tet, g.target.face, g.perm).unwrap();
    }
    out
}

impl Triangulation {
    pub fn parse(text: &str) -> Result<Triangulation, ParseError> {
        parse(text)
    }

    pub fn to_text(&self) -> String {
        serialize(self)
    }
}

impl FromStr for Triangulation {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}
