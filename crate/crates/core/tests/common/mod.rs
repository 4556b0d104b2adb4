#![allow(dead_code)]

use normcensus_core::lens::{build_tpq, lens_params};
use normcensus_core::triangulation::pachner_14;
use normcensus_core::Triangulation;

/// Two-tetrahedron ideal triangulation of the figure-eight knot complement.
pub const FIGURE_EIGHT: &str = "\
# figure-eight knot complement
tets: 2
g 0 0 1 1 1302
g 0 1 1 0 2031
g 0 2 1 2 0321
g 0 3 1 3 2103
g 1 0 0 1 1302
g 1 1 0 0 2031
g 1 2 0 2 0321
g 1 3 0 3 2103
";

/// Two tetrahedra glued by the identity on every face: S^3 with 4 vertices.
pub const S3_DOUBLE: &str = "\
tets: 2
g 0 0 1 0 0123
g 0 1 1 1 0123
g 0 2 1 2 0123
g 0 3 1 3 0123
g 1 0 0 0 0123
g 1 1 0 1 0123
g 1 2 0 2 0123
g 1 3 0 3 0123
";

/// One tetrahedron whose single vertex has a projective-plane link.
pub const RP2_LINK: &str = "\
tets: 1
g 0 0 0 1 1023
g 0 1 0 0 1023
g 0 2 0 3 0231
g 0 3 0 2 0312
";

pub fn figure_eight() -> Triangulation {
    Triangulation::parse(FIGURE_EIGHT).unwrap()
}

pub fn s3_double() -> Triangulation {
    Triangulation::parse(S3_DOUBLE).unwrap()
}

pub fn rp2_link() -> Triangulation {
    Triangulation::parse(RP2_LINK).unwrap()
}

/// `T(5,2)` with its tetrahedron coned off: a closed 2-vertex triangulation.
pub fn two_vertex() -> Triangulation {
    pachner_14(&build_tpq(5, 2).unwrap(), 0).unwrap()
}

pub fn coprime_pairs(pmin: u64, pmax: u64) -> Vec<(u64, u64)> {
    (pmin..=pmax)
        .flat_map(|p| (1..p).map(move |q| (p, q)))
        .filter(|&(p, q)| lens_params(p, q).is_ok())
        .collect()
}

/// Lens triangulations with 4 <= p <= pmax.
pub fn lens_corpus(pmax: u64) -> Vec<((u64, u64), Triangulation)> {
    coprime_pairs(4, pmax)
        .into_iter()
        .map(|pq| (pq, build_tpq(pq.0, pq.1).unwrap()))
        .collect()
}
