//! Command implementations behind the `normcensus` binary.
//!
//! Exit codes: 0 success, 1 verification or I/O failure, 2 usage, parse or
//! validation error, 3 enumeration budget exceeded.

pub mod output;
pub mod verify;

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use thiserror::Error;

use normcensus_core::lens::{build_tpq, lens_params, LensError};
use normcensus_core::normal::{census, NormalError};
use normcensus_core::spine::{dual_spine, enumerate_simple_subpolyhedra, t_manifold, SpineError};
use normcensus_core::triangulation::{pachner_23, pachner_32};
use normcensus_core::Triangulation;

use output::{write_record, write_table, Format, Row};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Verification(String),
    #[error("{0}")]
    Budget(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Io(_) | CliError::Verification(_) => 1,
            CliError::Budget(_) => 3,
        }
    }

    pub fn from_spine(e: SpineError) -> CliError {
        match e {
            SpineError::EnumerationBudgetExceeded { .. } => CliError::Budget(e.to_string()),
            SpineError::InvariantDivisionFailed { .. } => CliError::Verification(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }

    pub fn from_normal(e: NormalError) -> CliError {
        match e {
            NormalError::Spine(s) => CliError::from_spine(s),
            other => CliError::Verification(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(name = "normcensus", version, about = "Spines, normal surfaces and lens-space triangulations")]
pub struct Cli {
    /// Report format
    #[arg(long, value_enum, global = true, default_value = "tsv")]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build the layered lens-space triangulation T(p,q)
    LensBuild {
        #[arg(short)]
        p: u64,
        #[arg(short)]
        q: u64,
        /// Output file; the triangulation goes to stdout when omitted
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Print the t-invariant and basic data of a triangulation
    Invariant { file: PathBuf },
    /// Census of type I and type II normal surfaces
    Surfaces(SurfacesArgs),
    /// List the simple subpolyhedra of the dual spine
    Subpolyhedra { file: PathBuf },
    #[command(subcommand)]
    Verify(VerifyCommand),
    /// Apply one 2-3 or 3-2 move and print the result
    Pachner {
        file: PathBuf,
        /// `23:<triangle>` or `32:<edge>`
        #[arg(long = "move")]
        mv: String,
    },
}

#[derive(Debug, Args)]
pub struct SurfacesArgs {
    pub file: PathBuf,
    #[arg(long, allow_negative_numbers = true)]
    pub chi_min: Option<i64>,
    #[arg(long)]
    pub connected_only: bool,
    #[arg(long)]
    pub nontrivial_only: bool,
}

#[derive(Debug, Subcommand)]
pub enum VerifyCommand {
    /// Tetrahedron, homology and surface counts for every T(p,q) up to pmax
    Lens {
        #[arg(long)]
        pmax: u64,
    },
    /// Non-trivial surfaces along random Pachner walks from small lens spaces
    Existence {
        #[arg(long, default_value_t = 5)]
        seeds: u64,
        #[arg(long, default_value_t = 10)]
        steps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

pub fn read_triangulation(path: &PathBuf) -> Result<Triangulation, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    Triangulation::parse(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

#[derive(Serialize)]
struct BuildSummary {
    p: u64,
    q: u64,
    s: u64,
    tets: usize,
    word: String,
}

impl Row for BuildSummary {
    const COLUMNS: &'static [&'static str] = &["p", "q", "s", "tets", "word"];
}

#[derive(Serialize)]
struct InvariantRecord {
    t: String,
    vertices: usize,
    chi: i64,
    kind: String,
    degree_one_face: bool,
}

impl Row for InvariantRecord {
    const COLUMNS: &'static [&'static str] = &["t", "vertices", "chi", "kind", "degree_one_face"];
}

#[derive(Serialize)]
struct SurfaceRow {
    coords: String,
    chi: i64,
    orientable: bool,
    connected: bool,
    classification: String,
    trivial: bool,
    max_edge_weight: u64,
    provenance: String,
}

impl Row for SurfaceRow {
    const COLUMNS: &'static [&'static str] =
        &["coords", "chi", "orientable", "connected", "classification", "trivial", "max_edge_weight", "provenance"];
}

#[derive(Serialize)]
struct SubpolyhedronRow {
    mask: String,
    v_q: usize,
    chi: i64,
    is_surface: bool,
}

impl Row for SubpolyhedronRow {
    const COLUMNS: &'static [&'static str] = &["mask", "v_q", "chi", "is_surface"];
}

/// Per-tetrahedron 7-tuples joined by `;`, entries by `,`.
pub fn format_coords(coords: &[[u64; 7]]) -> String {
    coords
        .iter()
        .map(|c| c.iter().map(u64::to_string).collect::<Vec<_>>().join(","))
        .collect::<Vec<_>>()
        .join(";")
}

fn lens_error(e: LensError) -> CliError {
    match e {
        LensError::InvalidParams { .. } => CliError::Usage(e.to_string()),
        LensError::ConstructionInvariantViolated { .. } => CliError::Verification(e.to_string()),
    }
}

pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let format = cli.format;
    match &cli.command {
        Command::LensBuild { p, q, out: path } => {
            let lp = lens_params(*p, *q).map_err(lens_error)?;
            let tri = build_tpq(*p, *q).map_err(lens_error)?;
            let summary = BuildSummary { p: *p, q: *q, s: lp.s, tets: tri.size(), word: lp.word.to_string() };
            match path {
                Some(path) => {
                    fs::write(path, tri.to_text()).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
                    write_table(out, format, &[summary])?;
                }
                None => {
                    writeln!(out, "# T({p},{q}) S={} tets={} word={}", lp.s, tri.size(), summary.word)?;
                    write!(out, "{}", tri.to_text())?;
                }
            }
        }
        Command::Invariant { file } => {
            let tri = read_triangulation(file)?;
            let spine = dual_spine(&tri);
            let t = t_manifold(&tri).map_err(CliError::from_spine)?;
            let record = InvariantRecord {
                t: t.to_string(),
                vertices: tri.vertex_classes().len(),
                chi: tri.euler_characteristic(),
                kind: tri.kind().to_string(),
                degree_one_face: spine.has_degree_one_face(),
            };
            write_record(out, format, &record)?;
        }
        Command::Surfaces(args) => {
            let tri = read_triangulation(&args.file)?;
            let entries = census(&tri, &dual_spine(&tri)).map_err(CliError::from_normal)?;
            let rows: Vec<SurfaceRow> = entries
                .iter()
                .filter(|e| args.chi_min.is_none_or(|m| e.report.chi >= m))
                .filter(|e| !args.connected_only || e.report.connected)
                .filter(|e| !args.nontrivial_only || !e.report.trivial)
                .map(|e| SurfaceRow {
                    coords: format_coords(&e.surface.coords),
                    chi: e.report.chi,
                    orientable: e.report.orientable,
                    connected: e.report.connected,
                    classification: e.report.classification.to_string(),
                    trivial: e.report.trivial,
                    max_edge_weight: e.report.max_edge_weight,
                    provenance: e.surface.provenance.to_string(),
                })
                .collect();
            write_table(out, format, &rows)?;
        }
        Command::Subpolyhedra { file } => {
            let tri = read_triangulation(file)?;
            let spine = dual_spine(&tri);
            if spine.has_degree_one_face() {
                writeln!(err, "warning: a spine face is dual to a degree-1 edge")?;
            }
            let subs = enumerate_simple_subpolyhedra(&spine).map_err(CliError::from_spine)?;
            let rows: Vec<SubpolyhedronRow> = subs
                .iter()
                .map(|s| SubpolyhedronRow { mask: format!("{:#x}", s.faces), v_q: s.v_q, chi: s.chi, is_surface: s.is_surface })
                .collect();
            write_table(out, format, &rows)?;
        }
        Command::Verify(VerifyCommand::Lens { pmax }) => {
            let rows = verify::verify_lens(*pmax)?;
            write_table(out, format, &rows)?;
            if let Some(bad) = rows.iter().find(|r| !r.is_ok()) {
                let failing = rows.iter().filter(|r| !r.is_ok()).count();
                return Err(CliError::Verification(format!(
                    "{failing} of {} rows failed; first: {} tets={} h1={:?} tori={} (expected {}) klein={} (expected {}) rp2={} spheres={} t={}",
                    rows.len(),
                    bad.subject,
                    bad.tets,
                    bad.h1_order,
                    bad.tori,
                    bad.tau_expected,
                    bad.klein,
                    bad.kappa_expected,
                    bad.rp2,
                    bad.nontrivial_spheres,
                    bad.t
                )));
            }
        }
        Command::Verify(VerifyCommand::Existence { seeds, steps, seed }) => {
            let rows = verify::verify_existence(*seeds, *steps, *seed)?;
            write_table(out, format, &rows)?;
            if let Some(bad) = rows.iter().find(|r| !r.is_ok()) {
                return Err(CliError::Verification(format!(
                    "counterexample at {}: nontrivial={} bound={:?} t={} (start {})",
                    bad.subject, bad.nontrivial, bad.edge_weight_bound, bad.t, bad.t_start
                )));
            }
        }
        Command::Pachner { file, mv } => {
            let tri = read_triangulation(file)?;
            let (kind, index) = mv
                .split_once(':')
                .and_then(|(k, i)| Some((k, i.parse::<usize>().ok()?)))
                .ok_or_else(|| CliError::Usage(format!("bad move '{mv}', expected 23:<triangle> or 32:<edge>")))?;
            let result = match kind {
                "23" => pachner_23(&tri, index),
                "32" => pachner_32(&tri, index),
                _ => return Err(CliError::Usage(format!("unknown move '{kind}'"))),
            };
            let moved = result.map_err(|e| CliError::Usage(e.to_string()))?;
            write!(out, "{}", moved.to_text())?;
        }
    }
    Ok(())
}
