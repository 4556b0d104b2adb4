//! Batch verification runs over lens triangulations and random Pachner
//! walks.

use rayon::prelude::*;
use serde::Serialize;

use normcensus_core::lens::{build_tpq, kappa_expected, lens_params, tau_expected};
use normcensus_core::normal::{census, census_counts};
use normcensus_core::spine::{dual_spine, t_manifold};
use normcensus_core::triangulation::walk_trace;
use normcensus_core::{GoldenInt, Triangulation};

use crate::output::Row;
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Fail,
}

impl Status {
    fn from_bool(ok: bool) -> Status {
        if ok {
            Status::Ok
        } else {
            Status::Fail
        }
    }
}

pub fn allowed_lens_t() -> [GoldenInt; 4] {
    [GoldenInt::ZERO, GoldenInt::ONE, GoldenInt::new(1, 1), GoldenInt::new(2, 1)]
}

#[derive(Debug, Clone, Serialize)]
pub struct LensRow {
    pub subject: String,
    pub p: u64,
    pub q: u64,
    pub tets: u64,
    pub tets_expected: u64,
    pub h1_order: Option<i128>,
    pub tori: u64,
    pub tau_expected: u64,
    pub klein: u64,
    pub kappa_expected: u64,
    pub rp2: u64,
    pub nontrivial_spheres: u64,
    pub t: String,
    pub t_allowed: bool,
    pub status: Status,
}

impl Row for LensRow {
    const COLUMNS: &'static [&'static str] = &[
        "subject",
        "tets",
        "tets_expected",
        "h1_order",
        "tori",
        "tau_expected",
        "klein",
        "kappa_expected",
        "rp2",
        "nontrivial_spheres",
        "t",
        "t_allowed",
        "status",
    ];
}

impl LensRow {
    pub fn is_ok(&self) -> bool {
        self.status == Status::Ok
    }
}

pub fn lens_row(p: u64, q: u64) -> Result<LensRow, CliError> {
    let lp = lens_params(p, q).map_err(|e| CliError::Usage(e.to_string()))?;
    let tri = build_tpq(p, q).map_err(|e| CliError::Verification(e.to_string()))?;
    let spine = dual_spine(&tri);
    let counts = census_counts(&census(&tri, &spine).map_err(CliError::from_normal)?);
    let t = t_manifold(&tri).map_err(CliError::from_spine)?;
    let h1_order = tri.h1().ok().and_then(|h| h.order());
    let mut row = LensRow {
        subject: format!("T_{p}_{q}"),
        p,
        q,
        tets: tri.size() as u64,
        tets_expected: lp.s - 3,
        h1_order,
        tori: counts.tori as u64,
        tau_expected: tau_expected(p, q).expect("valid params"),
        klein: counts.klein_bottles as u64,
        kappa_expected: kappa_expected(p, q).expect("valid params"),
        rp2: counts.projective_planes as u64,
        nontrivial_spheres: counts.nontrivial_spheres as u64,
        t: t.to_string(),
        t_allowed: allowed_lens_t().contains(&t),
        status: Status::Fail,
    };
    row.status = Status::from_bool(
        row.tets == row.tets_expected
            && row.h1_order == Some(p as i128)
            && row.tori == row.tau_expected
            && row.klein == row.kappa_expected
            && row.rp2 == 0
            && row.nontrivial_spheres == 0
            && row.t_allowed,
    );
    Ok(row)
}

/// One row per coprime `(p, q)` with `4 <= p <= pmax`, in `(p, q)` order.
pub fn verify_lens(pmax: u64) -> Result<Vec<LensRow>, CliError> {
    if pmax < 4 {
        return Err(CliError::Usage(format!("--pmax must be at least 4, got {pmax}")));
    }
    let pairs: Vec<(u64, u64)> = (4..=pmax)
        .flat_map(|p| (1..p).map(move |q| (p, q)))
        .filter(|&(p, q)| lens_params(p, q).is_ok())
        .collect();
    pairs.par_iter().map(|&(p, q)| lens_row(p, q)).collect()
}

/// Starting triangulations of the existence corpus.
pub const WALK_STARTS: [(u64, u64); 4] = [(4, 1), (5, 1), (5, 2), (7, 2)];

#[derive(Debug, Clone, Serialize)]
pub struct ExistenceRow {
    pub subject: String,
    pub start: String,
    pub seed: u64,
    pub step: usize,
    pub tets: usize,
    /// One tetrahedron and isomorphic to `T(5,2)`.
    pub exception: bool,
    pub nontrivial: usize,
    /// Least maximal edge weight over the non-trivial surfaces found.
    pub edge_weight_bound: Option<u64>,
    pub t: String,
    pub t_start: String,
    pub status: Status,
}

impl Row for ExistenceRow {
    const COLUMNS: &'static [&'static str] = &[
        "subject",
        "tets",
        "exception",
        "nontrivial",
        "edge_weight_bound",
        "t",
        "t_start",
        "status",
    ];
}

impl ExistenceRow {
    pub fn is_ok(&self) -> bool {
        self.status == Status::Ok
    }
}

fn existence_row(
    tri: &Triangulation,
    exceptional: &Triangulation,
    start: &str,
    seed: u64,
    step: usize,
    t_start: GoldenInt,
) -> Result<ExistenceRow, CliError> {
    let exception = tri.size() == 1 && tri.is_isomorphic(exceptional);
    let entries = census(tri, &dual_spine(tri)).map_err(CliError::from_normal)?;
    let nontrivial: Vec<_> = entries.iter().filter(|e| !e.report.trivial).collect();
    let bound = nontrivial.iter().map(|e| e.report.max_edge_weight).min();
    let t = t_manifold(tri).map_err(CliError::from_spine)?;
    let surface_ok = exception || bound.is_some_and(|b| b <= 2);
    Ok(ExistenceRow {
        subject: format!("{start}/seed{seed}/step{step}"),
        start: start.to_string(),
        seed,
        step,
        tets: tri.size(),
        exception,
        nontrivial: nontrivial.len(),
        edge_weight_bound: bound,
        t: t.to_string(),
        t_start: t_start.to_string(),
        status: Status::from_bool(surface_ok && t == t_start),
    })
}

/// Walk `k` from each start uses seed `base_seed + k`; every triangulation
/// along each walk, the start included, gets a row.
pub fn verify_existence(seeds: u64, steps: usize, base_seed: u64) -> Result<Vec<ExistenceRow>, CliError> {
    let exceptional = build_tpq(5, 2).expect("T(5,2) builds");
    let jobs: Vec<((u64, u64), u64)> = WALK_STARTS
        .iter()
        .flat_map(|&pq| (0..seeds).map(move |k| (pq, base_seed.wrapping_add(k))))
        .collect();
    let per_walk: Vec<Vec<ExistenceRow>> = jobs
        .par_iter()
        .map(|&((p, q), seed)| {
            let start = build_tpq(p, q).map_err(|e| CliError::Verification(e.to_string()))?;
            let name = format!("T_{p}_{q}");
            let t_start = t_manifold(&start).map_err(CliError::from_spine)?;
            walk_trace(&start, steps, seed)
                .iter()
                .enumerate()
                .map(|(step, tri)| existence_row(tri, &exceptional, &name, seed, step, t_start))
                .collect()
        })
        .collect::<Result<_, CliError>>()?;
    Ok(per_walk.into_iter().flatten().collect())
}
