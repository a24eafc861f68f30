//! Error norms of a discrete solution against a piecewise exact solution.
//!
//! The exact solution is evaluated on the side given by the level set; the
//! discrete solution on the chord side of its element.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::assembly::{edge_point_side, edge_rule};
use crate::basis::LocalBasis;
use crate::error::Result;
use crate::fields::{Piecewise, VectorFn};
use crate::interface::{CutMesh, LevelSetInterface};
use crate::mesh::StructuredMesh;
use crate::quadrature::{cut_rule, triangle_rule, QuadratureRule};
use crate::{Point, Vector};

/// Exact solution and coefficient, both per side.
#[derive(Clone, Copy)]
pub struct ExactSolution<'a> {
    pub interface: &'a LevelSetInterface,
    pub u: &'a Piecewise,
    pub grad: &'a Piecewise<VectorFn>,
    pub beta: &'a Piecewise,
}

impl ExactSolution<'_> {
    fn at(&self, p: &Point) -> (f64, Vector) {
        let side = self.interface.side_of(p);
        (self.u.eval(p, side), self.grad.eval(p, side))
    }
}

/// Squared volume integrals and the pointwise maximum.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct VolumeErrors {
    pub l2_sq: f64,
    pub semi_sq: f64,
    /// `int beta e^2`
    pub weighted_l2_sq: f64,
    /// `int beta |grad e|^2`
    pub weighted_semi_sq: f64,
    pub linf: f64,
}

impl VolumeErrors {
    fn merge(self, o: Self) -> Self {
        Self {
            l2_sq: self.l2_sq + o.l2_sq,
            semi_sq: self.semi_sq + o.semi_sq,
            weighted_l2_sq: self.weighted_l2_sq + o.weighted_l2_sq,
            weighted_semi_sq: self.weighted_semi_sq + o.weighted_semi_sq,
            linf: self.linf.max(o.linf),
        }
    }
}

fn element_rules(mesh: &StructuredMesh, basis: &LocalBasis, degree: usize) -> Result<Vec<QuadratureRule>> {
    match basis.cut() {
        None => Ok(vec![triangle_rule(&mesh.triangle_points(basis.element()), degree)?]),
        Some(cut) => {
            let (p, m) = cut_rule(cut, degree)?;
            Ok(vec![p, m])
        }
    }
}

/// All volume error contributions in one pass; vertices enter the maximum only.
pub fn volume_errors(
    mesh: &StructuredMesh,
    cut_mesh: &CutMesh,
    bases: &[LocalBasis],
    coeffs: &[f64],
    exact: ExactSolution<'_>,
    degree: usize,
) -> Result<VolumeErrors> {
    let volume = bases
        .par_iter()
        .map(|basis| -> Result<VolumeErrors> {
            let local = mesh.triangles[basis.element()].map(|v| coeffs[v]);
            let mut acc = VolumeErrors::default();
            for rule in element_rules(mesh, basis, degree)? {
                for (p, w) in rule.iter() {
                    let side = basis.side_at(p);
                    let (uh, gh) = basis.combine(&local, p, side);
                    let (u, g) = exact.at(p);
                    let (e, ge) = (u - uh, (g - gh).norm_squared());
                    let b = exact.beta.eval(p, side);
                    acc.l2_sq += w * e * e;
                    acc.semi_sq += w * ge;
                    acc.weighted_l2_sq += w * b * e * e;
                    acc.weighted_semi_sq += w * b * ge;
                    acc.linf = acc.linf.max(e.abs());
                }
            }
            Ok(acc)
        })
        .try_reduce(VolumeErrors::default, |a, b| Ok(a.merge(b)))?;
    let vertex_max = mesh
        .vertices
        .iter()
        .zip(&cut_mesh.vertex_sides)
        .zip(coeffs)
        .map(|((p, s), c)| (exact.u.eval(p, *s) - c).abs())
        .fold(0.0, f64::max);
    Ok(VolumeErrors {
        linf: volume.linf.max(vertex_max),
        ..volume
    })
}

pub fn l2_error(
    mesh: &StructuredMesh,
    cut_mesh: &CutMesh,
    bases: &[LocalBasis],
    coeffs: &[f64],
    exact: ExactSolution<'_>,
    degree: usize,
) -> Result<f64> {
    Ok(volume_errors(mesh, cut_mesh, bases, coeffs, exact, degree)?
        .l2_sq
        .sqrt())
}

/// Broken `H^1` norm `(||e||_0^2 + sum_T |e|_{1,T}^2)^(1/2)`.
pub fn h1_broken_error(
    mesh: &StructuredMesh,
    cut_mesh: &CutMesh,
    bases: &[LocalBasis],
    coeffs: &[f64],
    exact: ExactSolution<'_>,
    degree: usize,
) -> Result<f64> {
    let v = volume_errors(mesh, cut_mesh, bases, coeffs, exact, degree)?;
    Ok((v.l2_sq + v.semi_sq).sqrt())
}

pub fn linf_error(
    mesh: &StructuredMesh,
    cut_mesh: &CutMesh,
    bases: &[LocalBasis],
    coeffs: &[f64],
    exact: ExactSolution<'_>,
    degree: usize,
) -> Result<f64> {
    Ok(volume_errors(mesh, cut_mesh, bases, coeffs, exact, degree)?.linf)
}

/// Squared edge sums.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct EdgeErrors {
    /// `sum_T sum_{e in dT} ||e|_T||^2_{0,e}`
    pub trace_sq: f64,
    /// `sum_T sum_{e in dT} ||grad e|_T . n||^2_{0,e}`
    pub normal_sq: f64,
    /// `sum_{interior e} h_e^{-1} ||[sqrt(beta) e]||^2_{0,e}`
    pub jump_sq: f64,
    /// `sum_{interior e} h_e ||{sqrt(beta) grad e . n}||^2_{0,e}`
    pub flux_sq: f64,
}

impl EdgeErrors {
    fn merge(self, o: Self) -> Self {
        Self {
            trace_sq: self.trace_sq + o.trace_sq,
            normal_sq: self.normal_sq + o.normal_sq,
            jump_sq: self.jump_sq + o.jump_sq,
            flux_sq: self.flux_sq + o.flux_sq,
        }
    }
}

/// Edge traces of the error over every edge of the mesh.
pub fn edge_errors(
    mesh: &StructuredMesh,
    cut_mesh: &CutMesh,
    bases: &[LocalBasis],
    coeffs: &[f64],
    exact: ExactSolution<'_>,
    npoints: usize,
) -> Result<EdgeErrors> {
    (0..mesh.edges.len())
        .into_par_iter()
        .map(|e| -> Result<EdgeErrors> {
            let edge = &mesh.edges[e];
            let rule = edge_rule(mesh, cut_mesh, e, npoints)?;
            let n = edge.normal;
            let mut acc = EdgeErrors::default();
            for ((t, p), w) in rule.params.iter().zip(&rule.points).zip(&rule.weights) {
                let chord_side = edge_point_side(mesh, cut_mesh, e, *t);
                let (u, g) = exact.at(p);
                let mut vals = [0.0; 2];
                let mut fluxes = [0.0; 2];
                for (k, &el) in edge.adjacent().iter().enumerate() {
                    let side = cut_mesh.element_side(el, chord_side);
                    let local = mesh.triangles[el].map(|v| coeffs[v]);
                    let (uh, gh) = bases[el].combine(&local, p, side);
                    let err = u - uh;
                    let dn = (g - gh).dot(&n);
                    acc.trace_sq += w * err * err;
                    acc.normal_sq += w * dn * dn;
                    let sb = exact.beta.eval(p, side).sqrt();
                    vals[k] = sb * err;
                    fluxes[k] = sb * dn;
                }
                if edge.is_interior() {
                    let jump = vals[0] - vals[1];
                    let avg = 0.5 * (fluxes[0] + fluxes[1]);
                    acc.jump_sq += w * jump * jump / edge.length;
                    acc.flux_sq += w * edge.length * avg * avg;
                }
            }
            Ok(acc)
        })
        .try_reduce(EdgeErrors::default, |a, b| Ok(a.merge(b)))
}

/// Mesh-dependent norm assembled from its four parts.
pub fn triple_norm(volume: &VolumeErrors, edges: &EdgeErrors) -> f64 {
    (volume.weighted_l2_sq + volume.weighted_semi_sq + edges.flux_sq + edges.jump_sq).sqrt()
}

/// `log2(coarse / fine)`; undefined unless both errors are positive.
pub fn compute_eoc(coarse: f64, fine: f64) -> Option<f64> {
    (coarse > 0.0 && fine > 0.0 && coarse.is_finite() && fine.is_finite()).then(|| (coarse / fine).log2())
}

/// One refinement level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorReport {
    pub n: u32,
    pub inv_h: f64,
    pub dofs: usize,
    pub l2: f64,
    pub h1: f64,
    pub linf: f64,
    pub edge_jump: f64,
    pub edge_flux: f64,
    pub triple: f64,
    pub iters: usize,
    pub ms: f64,
}

/// Which error column an EOC refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Norm {
    L2,
    H1,
    Linf,
    EdgeJump,
    EdgeFlux,
    Triple,
}

impl ErrorReport {
    pub fn get(&self, norm: Norm) -> f64 {
        match norm {
            Norm::L2 => self.l2,
            Norm::H1 => self.h1,
            Norm::Linf => self.linf,
            Norm::EdgeJump => self.edge_jump,
            Norm::EdgeFlux => self.edge_flux,
            Norm::Triple => self.triple,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    /// Sorted by level.
    pub rows: Vec<ErrorReport>,
}

impl ConvergenceReport {
    pub fn new(mut rows: Vec<ErrorReport>) -> Self {
        rows.sort_by_key(|r| r.n);
        Self { rows }
    }

    /// EOC of row `k` against row `k - 1`, if those are consecutive levels.
    pub fn eoc(&self, k: usize, norm: Norm) -> Option<f64> {
        let fine = self.rows.get(k)?;
        let coarse = self.rows.get(k.checked_sub(1)?)?;
        if coarse.n + 1 != fine.n {
            return None;
        }
        compute_eoc(coarse.get(norm), fine.get(norm))
    }

    pub fn eocs(&self, norm: Norm) -> Vec<Option<f64>> {
        (0..self.rows.len()).map(|k| self.eoc(k, norm)).collect()
    }

    pub fn row(&self, n: u32) -> Option<&ErrorReport> {
        self.rows.iter().find(|r| r.n == n)
    }

    /// EOC between levels `n - 1` and `n`.
    pub fn eoc_at(&self, n: u32, norm: Norm) -> Option<f64> {
        let k = self.rows.iter().position(|r| r.n == n)?;
        self.eoc(k, norm)
    }
}
