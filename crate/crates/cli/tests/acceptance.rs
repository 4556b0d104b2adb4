//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Runs as a plain binary (`harness = false`). The process fails if any
//! criterion fails, except for the pinned tau mismatch on `T(p, p-1)` in
//! criterion 1: that row is printed as FAIL, and the run only aborts if the
//! failure set differs from the pinned one.

use std::process::Command;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde_json::Value;

use normcensus::verify::WALK_STARTS;
use normcensus_core::lens::{build_tpq, lens_params};
use normcensus_core::normal::{census, reconstruct, type_i_surface, type_ii_surface, Classification};
use normcensus_core::spine::{dual_spine, enumerate_simple_subpolyhedra, surface_space_nullity, t_manifold};
use normcensus_core::triangulation::{pachner_14, walk_trace};
use normcensus_core::{GoldenInt, Triangulation};

const LENS_PMAX: u64 = 20;
const LENS_TIME_LIMIT: Duration = Duration::from_secs(60);
const EXISTENCE_TIME_LIMIT: Duration = Duration::from_secs(300);
const INVARIANCE_SEEDS: u64 = 5;
const INVARIANCE_STEPS: usize = 20;
const RING_CASES: usize = 10_000;
const RING_SEED: u64 = 0x5eed;

const FIGURE_EIGHT: &str = "\
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

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_normcensus"))
}

fn lens_pairs(pmax: u64) -> Vec<(u64, u64)> {
    (4..=pmax)
        .flat_map(|p| (1..p).map(move |q| (p, q)))
        .filter(|&(p, q)| lens_params(p, q).is_ok())
        .collect()
}

fn corpus() -> Vec<(String, Triangulation)> {
    let mut out: Vec<(String, Triangulation)> =
        lens_pairs(LENS_PMAX).into_iter().map(|(p, q)| (format!("T_{p}_{q}"), build_tpq(p, q).unwrap())).collect();
    out.push(("figure_eight".into(), Triangulation::parse(FIGURE_EIGHT).unwrap()));
    out.push(("T_5_2+1-4".into(), pachner_14(&build_tpq(5, 2).unwrap(), 0).unwrap()));
    for &(p, q) in &WALK_STARTS {
        let start = build_tpq(p, q).unwrap();
        for seed in 0..5 {
            let last = walk_trace(&start, 10, seed).pop().unwrap();
            out.push((format!("T_{p}_{q}/seed{seed}"), last));
        }
    }
    out
}

fn field<'a>(row: &'a Value, key: &str) -> &'a Value {
    &row[key]
}

/// Rows failing only because the torus count exceeds `S - 4` by one at
/// `q = p - 1`; see the decisions ledger.
fn is_pinned_mirror_failure(row: &Value) -> bool {
    let p = field(row, "p").as_u64().unwrap();
    let q = field(row, "q").as_u64().unwrap();
    let n = |k: &str| field(row, k).as_u64();
    q + 1 == p
        && q > 1
        && n("tets") == n("tets_expected")
        && field(row, "h1_order").as_u64() == Some(p)
        && n("tori") == n("tau_expected").map(|t| t + 1)
        && n("klein") == n("kappa_expected")
        && n("rp2") == Some(0)
        && n("nontrivial_spheres") == Some(0)
        && field(row, "t_allowed").as_bool() == Some(true)
}

/// Returns the outcome and whether a failure matches the pinned shape.
fn criterion_1() -> (Outcome, bool) {
    let started = Instant::now();
    let run = binary()
        .args(["--format", "json", "verify", "lens", "--pmax", &LENS_PMAX.to_string()])
        .output()
        .expect("run normcensus");
    let elapsed = started.elapsed();
    let rows: Vec<Value> = serde_json::from_slice(&run.stdout).expect("json rows");
    let failing: Vec<&Value> = rows.iter().filter(|r| r["status"] != "ok").collect();
    let code = run.status.code().unwrap_or(-1);
    let pass = code == 0 && failing.is_empty() && elapsed <= LENS_TIME_LIMIT;
    let pinned = !pass
        && elapsed <= LENS_TIME_LIMIT
        && rows.len() == lens_pairs(LENS_PMAX).len()
        && failing.len() == LENS_PMAX as usize - 3
        && failing.iter().all(|r| is_pinned_mirror_failure(r));
    let names: Vec<&str> = failing.iter().map(|r| r["subject"].as_str().unwrap()).collect();
    let detail = format!(
        "verify lens --pmax {LENS_PMAX}: exit {code}, {}/{} rows ok, {:.1}s (limit {}s){}",
        rows.len() - failing.len(),
        rows.len(),
        elapsed.as_secs_f64(),
        LENS_TIME_LIMIT.as_secs(),
        if names.is_empty() { String::new() } else { format!("; failing {}", names.join(",")) }
    );
    (outcome(pass, detail), pinned)
}

fn criterion_2() -> Outcome {
    let tri = build_tpq(5, 2).unwrap();
    let spine = dual_spine(&tri);
    let subs = enumerate_simple_subpolyhedra(&spine).unwrap();
    let proper_nonempty = subs.iter().filter(|s| s.is_proper && !s.is_empty).count();
    let t = t_manifold(&tri).unwrap();
    let entries = census(&tri, &spine).unwrap();
    let only_link = entries.len() == 1
        && entries[0].report.trivial
        && entries[0].report.classification == Classification::Sphere;
    outcome(
        tri.size() == 1 && proper_nonempty == 0 && t == GoldenInt::ZERO && only_link,
        format!(
            "T_5_2: {} tet, {} proper nonempty simple subpolyhedra, t = {}, census {} entries (trivial sphere only: {})",
            tri.size(),
            proper_nonempty,
            t,
            entries.len(),
            only_link
        ),
    )
}

fn criterion_3() -> Outcome {
    let started = Instant::now();
    let run = binary()
        .args(["--format", "json", "verify", "existence", "--seeds", "5", "--steps", "10"])
        .output()
        .expect("run normcensus");
    let elapsed = started.elapsed();
    let rows: Vec<Value> = serde_json::from_slice(&run.stdout).unwrap_or_default();
    let bad = rows.iter().filter(|r| r["status"] != "ok").count();
    let exceptions = rows.iter().filter(|r| r["exception"] == true).count();
    let code = run.status.code().unwrap_or(-1);
    outcome(
        code == 0 && bad == 0 && !rows.is_empty() && elapsed <= EXISTENCE_TIME_LIMIT,
        format!(
            "verify existence --seeds 5 --steps 10: exit {code}, {} triangulations, {bad} counterexamples, {exceptions} T_5_2 exceptions, {:.1}s (limit {}s)",
            rows.len(),
            elapsed.as_secs_f64(),
            EXISTENCE_TIME_LIMIT.as_secs()
        ),
    )
}

fn criterion_4() -> Outcome {
    let allowed = [GoldenInt::ZERO, GoldenInt::ONE, GoldenInt::new(1, 1), GoldenInt::new(2, 1)];
    let pairs = lens_pairs(LENS_PMAX);
    let outside: Vec<String> = pairs
        .iter()
        .filter_map(|&(p, q)| {
            let t = t_manifold(&build_tpq(p, q).unwrap()).unwrap();
            (!allowed.contains(&t)).then(|| format!("T_{p}_{q}:{t}"))
        })
        .collect();
    let mut checked = 0;
    let mut drift = Vec::new();
    for &(p, q) in &WALK_STARTS {
        let start = build_tpq(p, q).unwrap();
        let t0 = t_manifold(&start).unwrap();
        for seed in 0..INVARIANCE_SEEDS {
            for (step, tri) in walk_trace(&start, INVARIANCE_STEPS, seed).iter().enumerate() {
                checked += 1;
                let t = t_manifold(tri).unwrap();
                if t != t0 {
                    drift.push(format!("T_{p}_{q}/seed{seed}/step{step}:{t}!={t0}"));
                }
            }
        }
    }
    outcome(
        outside.is_empty() && drift.is_empty(),
        format!(
            "{} lens builds, {} outside {{0,1,1+e,2+e}}; {checked} walk triangulations ({INVARIANCE_SEEDS} seeds x {INVARIANCE_STEPS} moves), {} changed t{}",
            pairs.len(),
            outside.len(),
            drift.len(),
            outside.iter().chain(&drift).next().map(|s| format!("; first {s}")).unwrap_or_default()
        ),
    )
}

fn criterion_5(corpus: &[(String, Triangulation)]) -> Outcome {
    let mismatched: Vec<&str> = corpus
        .iter()
        .filter(|(_, tri)| {
            let spine = dual_spine(tri);
            let surfaces = enumerate_simple_subpolyhedra(&spine).unwrap().iter().filter(|s| s.is_surface).count();
            surfaces != 1usize << surface_space_nullity(&spine)
        })
        .map(|(name, _)| name.as_str())
        .collect();
    outcome(
        mismatched.is_empty(),
        format!("{} spines, {} with #surface subpolyhedra != 2^nullity {:?}", corpus.len(), mismatched.len(), mismatched),
    )
}

fn criterion_6(corpus: &[(String, Triangulation)]) -> Outcome {
    let (mut checked, mut bad) = (0usize, Vec::new());
    for (name, tri) in corpus {
        let spine = dual_spine(tri);
        for q in enumerate_simple_subpolyhedra(&spine).unwrap().iter().filter(|q| !q.is_empty) {
            checked += 1;
            let two = reconstruct(tri, &type_ii_surface(tri, &spine, q).unwrap()).unwrap();
            if two.chi != 2 * q.chi {
                bad.push(format!("{name}/II:{:#x}", q.faces));
            }
            if q.is_surface {
                checked += 1;
                let one = reconstruct(tri, &type_i_surface(tri, &spine, q).unwrap()).unwrap();
                if one.chi != q.chi {
                    bad.push(format!("{name}/I:{:#x}", q.faces));
                }
            }
        }
    }
    outcome(bad.is_empty(), format!("{checked} reconstructions, {} Euler mismatches {:?}", bad.len(), bad))
}

fn criterion_7(corpus: &[(String, Triangulation)]) -> Outcome {
    let (mut checked, mut bad) = (0usize, Vec::new());
    for (name, tri) in corpus {
        for entry in census(tri, &dual_spine(tri)).unwrap() {
            checked += 1;
            let bound = entry.surface.vertex_bound_after_cut();
            let n = tri.size();
            if bound > n || (bound == n) != entry.report.trivial {
                bad.push(format!("{name}/{}", entry.surface.provenance));
            }
        }
    }
    outcome(
        bad.is_empty(),
        format!("{checked} census surfaces, {} violating bound <= n with equality iff trivial {:?}", bad.len(), bad),
    )
}

/// Solves `q * y = x` as a 2x2 integer system in the basis `1, e`.
fn cramer_quotient(x: GoldenInt, y: GoldenInt) -> Option<GoldenInt> {
    // q*y has 1-coefficient qa*ya + qb*yb and e-coefficient qa*yb + qb*(ya+yb).
    let det = y.a * (y.a + y.b) - y.b * y.b;
    if det == 0 {
        return None;
    }
    let na = x.a * (y.a + y.b) - y.b * x.b;
    let nb = y.a * x.b - y.b * x.a;
    (na % det == 0 && nb % det == 0).then(|| GoldenInt::new(na / det, nb / det))
}

fn criterion_8() -> Outcome {
    let mut rng = StdRng::seed_from_u64(RING_SEED);
    let mut gen = |r: i128| GoldenInt::new(rng.gen_range(-r..=r), rng.gen_range(-r..=r));
    let mut failures = Vec::new();
    let e = GoldenInt::E;
    if e * e != e + GoldenInt::ONE {
        failures.push("e^2 != e+1".to_string());
    }
    for i in 0..RING_CASES {
        let (x, y, z) = (gen(1000), gen(1000), gen(1000));
        let axioms = x + y == y + x
            && x * y == y * x
            && (x + y) + z == x + (y + z)
            && (x * y) * z == x * (y * z)
            && x * (y + z) == x * y + x * z
            && x + GoldenInt::ZERO == x
            && x * GoldenInt::ONE == x
            && x + (-x) == GoldenInt::ZERO;
        let norm = (x * y).norm() == x.norm() * y.norm();
        let exact = y.is_zero() || (x * y).div_exact(y) == Ok(x);
        let sound = match (x.div_exact(y), cramer_quotient(x, y)) {
            (Ok(quot), Some(oracle)) => quot == oracle && quot * y == x,
            (Err(_), None) => true,
            _ => false,
        };
        if !(axioms && norm && exact && sound) {
            failures.push(format!("case {i}: x={x} y={y} z={z}"));
        }
    }
    let two_e = GoldenInt::new(2, 1);
    let non_unit = two_e.norm() == 5
        && !two_e.is_unit()
        && two_e.inverse().is_none()
        && GoldenInt::ONE.div_exact(two_e).is_err()
        && two_e.pow(-1).is_err();
    if !non_unit {
        failures.push("2+e behaves as a unit".to_string());
    }
    outcome(
        failures.is_empty(),
        format!(
            "{RING_CASES} random cases (seed {RING_SEED:#x}): axioms, norm multiplicativity, div_exact; 2+e non-invertible: {non_unit}; {} failures{}",
            failures.len(),
            failures.first().map(|f| format!("; first {f}")).unwrap_or_default()
        ),
    )
}

fn main() {
    let corpus = corpus();
    let (c1, c1_pinned) = criterion_1();
    let results = [
        ("1", "lens census reproduction", c1),
        ("2", "T_5_2 exception", criterion_2()),
        ("3", "existence along Pachner walks", criterion_3()),
        ("4", "t-invariant values and invariance", criterion_4()),
        ("5", "surface subpolyhedra vs GF(2) nullity", criterion_5(&corpus)),
        ("6", "Euler characteristics of type I/II", criterion_6(&corpus)),
        ("7", "vertex bound after cutting", criterion_7(&corpus)),
        ("8", "Z[e] ring suite", criterion_8()),
    ];
    let mut unexpected = 0;
    for (id, name, o) in &results {
        println!("criterion {id} {}: {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        let expected_red = *id == "1" && c1_pinned;
        if !o.pass && !expected_red {
            unexpected += 1;
        }
    }
    if !results[0].2.pass && c1_pinned {
        println!("note: criterion 1 fails only on the tau row of T(p,p-1), 4 <= p <= {LENS_PMAX} (known, recorded)");
    }
    let passed = results.iter().filter(|r| r.2.pass).count();
    println!("acceptance: {passed}/{} criteria pass, {unexpected} unexpected failures", results.len());
    if unexpected > 0 {
        std::process::exit(1);
    }
}
