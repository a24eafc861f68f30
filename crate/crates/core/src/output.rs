//! Tables, field dumps and run manifests.

use std::fmt::Write as _;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::cases::BenchmarkCase;
use crate::error::Result;
use crate::interface::{CutMesh, Side, BISECTION_WIDTH, SMALL_CUT_FRACTION, SNAP_RELATIVE};
use crate::mesh::StructuredMesh;
use crate::norms::{ConvergenceReport, ErrorReport, Norm};
use crate::solver::SYMMETRY_TOL;
use crate::study::{LevelDiagnostics, LevelFailure, RunConfig};

pub const CSV_COLUMNS: [&str; 14] = [
    "n",
    "inv_h",
    "dofs",
    "l2",
    "l2_eoc",
    "h1",
    "h1_eoc",
    "linf",
    "linf_eoc",
    "edge_jump",
    "edge_flux",
    "triple",
    "iters",
    "ms",
];

#[derive(Debug, Serialize, Deserialize)]
struct CsvRow {
    n: u32,
    inv_h: f64,
    dofs: usize,
    l2: f64,
    l2_eoc: Option<f64>,
    h1: f64,
    h1_eoc: Option<f64>,
    linf: f64,
    linf_eoc: Option<f64>,
    edge_jump: f64,
    edge_flux: f64,
    triple: f64,
    iters: usize,
    ms: f64,
}

/// CSV with the fixed column schema; undefined orders are empty cells.
pub fn write_csv(report: &ConvergenceReport, w: impl Write) -> Result<()> {
    let mut out = csv::WriterBuilder::new().has_headers(false).from_writer(w);
    out.write_record(CSV_COLUMNS)?;
    for (k, r) in report.rows.iter().enumerate() {
        out.serialize(CsvRow {
            n: r.n,
            inv_h: r.inv_h,
            dofs: r.dofs,
            l2: r.l2,
            l2_eoc: report.eoc(k, Norm::L2),
            h1: r.h1,
            h1_eoc: report.eoc(k, Norm::H1),
            linf: r.linf,
            linf_eoc: report.eoc(k, Norm::Linf),
            edge_jump: r.edge_jump,
            edge_flux: r.edge_flux,
            triple: r.triple,
            iters: r.iters,
            ms: r.ms,
        })?;
    }
    out.flush()?;
    Ok(())
}

/// Reads a table written by [`write_csv`]; orders are recomputed, not read.
pub fn read_csv(r: impl Read) -> Result<ConvergenceReport> {
    let mut rdr = csv::Reader::from_reader(r);
    let mut rows = Vec::new();
    for rec in rdr.deserialize() {
        let row: CsvRow = rec?;
        rows.push(ErrorReport {
            n: row.n,
            inv_h: row.inv_h,
            dofs: row.dofs,
            l2: row.l2,
            h1: row.h1,
            linf: row.linf,
            edge_jump: row.edge_jump,
            edge_flux: row.edge_flux,
            triple: row.triple,
            iters: row.iters,
            ms: row.ms,
        });
    }
    Ok(ConvergenceReport::new(rows))
}

fn order(v: Option<f64>) -> String {
    v.map_or_else(String::new, |x| format!("{x:.3}"))
}

fn table_rows(out: &mut String, label: &str, report: &ConvergenceReport) {
    for (k, r) in report.rows.iter().enumerate() {
        let name = if k == 0 { label } else { "" };
        let _ = writeln!(
            out,
            "| {name} | {} | {:.3e} | {} | {:.3e} | {} | {:.3e} | {} |",
            r.inv_h,
            r.l2,
            order(report.eoc(k, Norm::L2)),
            r.h1,
            order(report.eoc(k, Norm::H1)),
            r.linf,
            order(report.eoc(k, Norm::Linf)),
        );
    }
}

const MD_HEADER: &str = "|  | 1/h | L2 error | order | broken H1 error | order | Linf error | order |\n\
                         |---|---:|---:|---:|---:|---:|---:|---:|\n";

/// Error/order column pairs for one scheme.
pub fn markdown_table(report: &ConvergenceReport, label: &str) -> String {
    let mut out = String::from(MD_HEADER);
    table_rows(&mut out, label, report);
    out
}

/// Both schemes stacked in one table, plain scheme first.
pub fn compare_table(ifem: &ConvergenceReport, modified: &ConvergenceReport) -> String {
    let mut out = String::from(MD_HEADER);
    table_rows(&mut out, "IFEM", ifem);
    table_rows(&mut out, "modified", modified);
    out
}

/// Vertex values `x, y, u_h, u_exact, side`.
pub fn write_fields(
    w: impl Write,
    mesh: &StructuredMesh,
    cut_mesh: &CutMesh,
    solution: &[f64],
    case: &BenchmarkCase,
) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["x", "y", "u_h", "u_exact", "side"])?;
    for ((p, uh), side) in mesh.vertices.iter().zip(solution).zip(&cut_mesh.vertex_sides) {
        let exact = case.u.eval(p, *side);
        let s = match side {
            Side::Plus => "+",
            Side::Minus => "-",
        };
        out.write_record([
            p.x.to_string(),
            p.y.to_string(),
            uh.to_string(),
            exact.to_string(),
            s.to_string(),
        ])?;
    }
    out.flush()?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub snap_relative: f64,
    pub small_cut_fraction: f64,
    pub bisection_width: f64,
    pub symmetry: f64,
    pub solver: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Environment {
    pub version: String,
    pub os: String,
    pub arch: String,
}

impl Environment {
    pub fn current() -> Self {
        Self {
            version: env!("CARGO_PKG_VERSION").to_string(),
            os: std::env::consts::OS.to_string(),
            arch: std::env::consts::ARCH.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub config: RunConfig,
    pub tolerances: Tolerances,
    /// How coefficients are sampled for the basis on interface elements.
    pub coefficient_sampling: String,
    /// Point set used for the maximum norm.
    pub linf_sampling: String,
    pub levels: Vec<LevelDiagnostics>,
    pub failures: Vec<LevelFailure>,
    pub environment: Environment,
}

impl Manifest {
    pub fn new(config: &RunConfig, levels: &[LevelDiagnostics], failures: &[LevelFailure]) -> Self {
        Self {
            config: config.clone(),
            tolerances: Tolerances {
                snap_relative: SNAP_RELATIVE,
                small_cut_fraction: SMALL_CUT_FRACTION,
                bisection_width: BISECTION_WIDTH,
                symmetry: SYMMETRY_TOL,
                solver: config.tol,
            },
            coefficient_sampling: "piece centroid".into(),
            linf_sampling: "volume quadrature points and mesh vertices".into(),
            levels: levels.to_vec(),
            failures: failures.to_vec(),
            environment: Environment::current(),
        }
    }
}

pub fn write_manifest(manifest: &Manifest, w: impl Write) -> Result<()> {
    serde_json::to_writer_pretty(w, manifest)?;
    Ok(())
}
