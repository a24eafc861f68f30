//! Refinement studies: one level end to end, or a sweep over levels.

use std::path::PathBuf;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::assembly::{apply_dirichlet, assemble, boundary_values, Scheme, SchemeParams};
use crate::basis::{build_bases, LocalBasis};
use crate::cases::{builtin_case_with, BenchmarkCase};
use crate::error::{Error, Result};
use crate::interface::CutMesh;
use crate::mesh::StructuredMesh;
use crate::norms::{edge_errors, triple_norm, volume_errors, ConvergenceReport, ErrorReport, ExactSolution};
use crate::solver::{solve, Method, SolveReport, SolverOptions};

pub const MIN_LEVEL: u32 = 3;
pub const MAX_LEVEL: u32 = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum TableFormat {
    #[default]
    Csv,
    Md,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputPaths {
    pub out: Option<PathBuf>,
    pub format: TableFormat,
    pub fields: Option<PathBuf>,
    pub manifest: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub case: String,
    pub scheme: Scheme,
    pub epsilon: i32,
    pub sigma0: f64,
    pub n_min: u32,
    pub n_max: u32,
    pub tol: f64,
    pub max_iter: Option<usize>,
    pub method: Method,
    pub volume_degree: usize,
    pub edge_points: usize,
    /// Triangle rule degree for error norms.
    pub error_degree: usize,
    /// Points per sub-segment for edge error norms.
    pub error_edge_points: usize,
    pub beta_minus: Option<f64>,
    pub beta_plus: Option<f64>,
    pub output: OutputPaths,
}

impl Default for RunConfig {
    fn default() -> Self {
        let s = SchemeParams::default();
        Self {
            case: "cubic".into(),
            scheme: s.scheme,
            epsilon: s.epsilon,
            sigma0: s.sigma0,
            n_min: 4,
            n_max: 9,
            tol: 1e-10,
            max_iter: None,
            method: Method::Auto,
            volume_degree: s.volume_degree,
            edge_points: s.edge_points,
            error_degree: 6,
            error_edge_points: 3,
            beta_minus: None,
            beta_plus: None,
            output: OutputPaths::default(),
        }
    }
}

impl RunConfig {
    pub fn scheme_params(&self) -> SchemeParams {
        SchemeParams {
            scheme: self.scheme,
            epsilon: self.epsilon,
            sigma0: self.sigma0,
            volume_degree: self.volume_degree,
            edge_points: self.edge_points,
        }
    }

    pub fn solver_options(&self) -> SolverOptions {
        SolverOptions {
            method: self.method,
            tol: self.tol,
            max_iter: self.max_iter,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.scheme_params().validate()?;
        if self.n_min < MIN_LEVEL || self.n_max > MAX_LEVEL || self.n_min > self.n_max {
            return Err(Error::InvalidConfig(format!(
                "level range {}..={} must lie within {MIN_LEVEL}..={MAX_LEVEL}",
                self.n_min, self.n_max
            )));
        }
        if !(self.tol > 0.0 && self.tol < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "solver tolerance {} outside (0, 1)",
                self.tol
            )));
        }
        if ![1, 2, 4, 6].contains(&self.error_degree) {
            return Err(Error::UnsupportedDegree(self.error_degree));
        }
        if !(1..=3).contains(&self.error_edge_points) {
            return Err(Error::UnsupportedPointCount(self.error_edge_points));
        }
        self.case()?;
        Ok(())
    }

    pub fn case(&self) -> Result<BenchmarkCase> {
        builtin_case_with(&self.case, self.beta_minus, self.beta_plus)
    }

    pub fn levels(&self) -> std::ops::RangeInclusive<u32> {
        self.n_min..=self.n_max
    }
}

/// Geometry, bases and discrete solution of one level.
#[derive(Debug, Clone)]
pub struct LevelSolution {
    pub n: u32,
    pub mesh: StructuredMesh,
    pub cut_mesh: CutMesh,
    pub bases: Vec<LocalBasis>,
    pub solve: SolveReport,
}

/// Per-level facts that do not belong in the error table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelDiagnostics {
    pub n: u32,
    pub interface_elements: usize,
    pub small_cuts: usize,
    pub snapped_vertices: usize,
    pub cusp_elements: usize,
    pub stabilized_edges: usize,
    pub solver: Method,
    pub residual: f64,
    /// `(sum_T sum_e ||u - u_h||^2_{0,e})^(1/2)`
    pub edge_trace: f64,
    /// `(sum_T sum_e ||d(u - u_h)/dn||^2_{0,e})^(1/2)`
    pub edge_normal: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelFailure {
    pub n: u32,
    pub kind: String,
    pub message: String,
}

#[derive(Debug, Clone)]
pub struct LevelResult {
    pub report: ErrorReport,
    pub diagnostics: LevelDiagnostics,
    pub solution: LevelSolution,
}

pub fn solve_level(
    case: &BenchmarkCase,
    n: u32,
    params: &SchemeParams,
    solver: &SolverOptions,
) -> Result<LevelSolution> {
    let mesh = StructuredMesh::uniform(case.domain, n)?;
    let cut_mesh = CutMesh::build(&mesh, &case.interface)?;
    let bases = build_bases(&mesh, &cut_mesh, &case.beta)?;
    let mut system = assemble(&mesh, &cut_mesh, &bases, &case.beta, &case.f, params)?;
    apply_dirichlet(&mut system, &boundary_values(&mesh, &cut_mesh, &case.u));
    let solve = solve(&system.matrix, &system.rhs, solver, system.is_symmetric())?;
    Ok(LevelSolution {
        n,
        mesh,
        cut_mesh,
        bases,
        solve,
    })
}

pub fn run_level(case: &BenchmarkCase, n: u32, config: &RunConfig) -> Result<LevelResult> {
    let start = Instant::now();
    let params = config.scheme_params();
    let solution = solve_level(case, n, &params, &config.solver_options())?;
    let exact = ExactSolution {
        interface: &case.interface,
        u: &case.u,
        grad: &case.grad_u,
        beta: &case.beta,
    };
    let LevelSolution {
        mesh, cut_mesh, bases, ..
    } = &solution;
    let coeffs = &solution.solve.solution;
    let volume = volume_errors(mesh, cut_mesh, bases, coeffs, exact, config.error_degree)?;
    let edges = edge_errors(mesh, cut_mesh, bases, coeffs, exact, config.error_edge_points)?;
    let ms = start.elapsed().as_secs_f64() * 1e3;

    let report = ErrorReport {
        n,
        inv_h: 1.0 / mesh.h(),
        dofs: mesh.num_vertices(),
        l2: volume.l2_sq.sqrt(),
        h1: (volume.l2_sq + volume.semi_sq).sqrt(),
        linf: volume.linf,
        edge_jump: edges.jump_sq.sqrt(),
        edge_flux: edges.flux_sq.sqrt(),
        triple: triple_norm(&volume, &edges),
        iters: solution.solve.iterations,
        ms,
    };
    let diagnostics = LevelDiagnostics {
        n,
        interface_elements: cut_mesh.cuts.len(),
        small_cuts: cut_mesh.small_cuts.len(),
        snapped_vertices: cut_mesh.snapped_vertices,
        cusp_elements: case.cusp_elements(mesh, cut_mesh),
        stabilized_edges: if params.scheme == Scheme::Modified {
            cut_mesh.stabilized_edges(mesh).count()
        } else {
            0
        },
        solver: solution.solve.method,
        residual: solution.solve.residual,
        edge_trace: edges.trace_sq.sqrt(),
        edge_normal: edges.normal_sq.sqrt(),
    };
    Ok(LevelResult {
        report,
        diagnostics,
        solution,
    })
}

#[derive(Debug, Clone)]
pub struct ConvergenceOutcome {
    pub report: ConvergenceReport,
    pub diagnostics: Vec<LevelDiagnostics>,
    pub failures: Vec<LevelFailure>,
    /// Finest successfully solved level.
    pub finest: Option<LevelSolution>,
}

/// Runs every level of the configured range; failed levels are recorded and skipped.
pub fn run_convergence(config: &RunConfig) -> Result<ConvergenceOutcome> {
    config.validate()?;
    let case = config.case()?;
    let levels: Vec<u32> = config.levels().collect();
    let results: Vec<(u32, Result<LevelResult>)> =
        levels.par_iter().map(|&n| (n, run_level(&case, n, config))).collect();

    let mut rows = Vec::new();
    let mut diagnostics = Vec::new();
    let mut failures = Vec::new();
    let mut finest = None;
    for (n, r) in results {
        match r {
            Ok(level) => {
                rows.push(level.report);
                diagnostics.push(level.diagnostics);
                finest = Some(level.solution);
            }
            Err(e) => failures.push(LevelFailure {
                n,
                kind: format!("{:?}", e.kind()).to_lowercase(),
                message: e.to_string(),
            }),
        }
    }
    Ok(ConvergenceOutcome {
        report: ConvergenceReport::new(rows),
        diagnostics,
        failures,
        finest,
    })
}
