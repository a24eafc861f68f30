//! Global system assembly for the plain and the edge-stabilized schemes.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::basis::LocalBasis;
use crate::error::{Error, Result};
use crate::fields::Piecewise;
use crate::interface::{CutMesh, Side};
use crate::mesh::{centroid, StructuredMesh};
use crate::quadrature::{cut_rule, segment_rule, split_segment_rule, triangle_rule, LineRule, QuadratureRule};
use crate::sparse::{CsrMatrix, PatternBuilder};
use crate::Point;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    /// Volume form only.
    Ifem,
    /// Volume form plus edge consistency and penalty terms.
    Modified,
}

impl std::str::FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ifem" => Ok(Scheme::Ifem),
            "modified" => Ok(Scheme::Modified),
            other => Err(Error::InvalidConfig(format!("unknown scheme `{other}`"))),
        }
    }
}

impl std::fmt::Display for Scheme {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Scheme::Ifem => "ifem",
            Scheme::Modified => "modified",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SchemeParams {
    pub scheme: Scheme,
    /// -1 symmetric, 0 incomplete, +1 nonsymmetric interior penalty.
    pub epsilon: i32,
    pub sigma0: f64,
    pub volume_degree: usize,
    pub edge_points: usize,
}

impl Default for SchemeParams {
    fn default() -> Self {
        Self {
            scheme: Scheme::Modified,
            epsilon: -1,
            sigma0: 10.0,
            volume_degree: 4,
            edge_points: 2,
        }
    }
}

impl SchemeParams {
    pub fn ifem() -> Self {
        Self {
            scheme: Scheme::Ifem,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if ![-1, 0, 1].contains(&self.epsilon) {
            return Err(Error::InvalidConfig(format!(
                "epsilon must be -1, 0 or 1, got {}",
                self.epsilon
            )));
        }
        if !(self.sigma0 >= 0.0 && self.sigma0.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "sigma0 must be finite and >= 0, got {}",
                self.sigma0
            )));
        }
        if ![1, 2, 4, 6].contains(&self.volume_degree) {
            return Err(Error::UnsupportedDegree(self.volume_degree));
        }
        if !(1..=3).contains(&self.edge_points) {
            return Err(Error::UnsupportedPointCount(self.edge_points));
        }
        Ok(())
    }

    /// Whether the assembled matrix is symmetric by construction.
    pub fn is_symmetric(&self) -> bool {
        self.scheme == Scheme::Ifem || self.epsilon == -1
    }
}

#[derive(Debug, Clone)]
pub struct GlobalSystem {
    pub matrix: CsrMatrix,
    pub rhs: Vec<f64>,
    /// `(vertex, value)` pairs applied by [`apply_dirichlet`].
    pub dirichlet: Vec<(usize, f64)>,
    pub params: SchemeParams,
}

impl GlobalSystem {
    pub fn dofs(&self) -> usize {
        self.rhs.len()
    }

    pub fn is_symmetric(&self) -> bool {
        self.params.is_symmetric()
    }
}

/// Quadrature for one element: a single rule, or one per side on interface elements.
fn element_rules(pts: &[Point; 3], basis: &LocalBasis, degree: usize) -> Result<Vec<(Side, QuadratureRule)>> {
    match basis {
        LocalBasis::Standard(s) => Ok(vec![(s.side, triangle_rule(pts, degree)?)]),
        LocalBasis::Immersed(b) => {
            let (plus, minus) = cut_rule(&b.cut, degree)?;
            Ok(vec![(Side::Plus, plus), (Side::Minus, minus)])
        }
    }
}

/// `int_T beta grad phi_j . grad phi_i`, gradients constant per piece.
pub fn element_stiffness(
    pts: &[Point; 3],
    basis: &LocalBasis,
    beta: &Piecewise,
    degree: usize,
) -> Result<[[f64; 3]; 3]> {
    let mut k = [[0.0; 3]; 3];
    for (side, rule) in element_rules(pts, basis, degree)? {
        let weight = match beta.get(side).as_constant() {
            Some(c) => c * rule.total_weight(),
            None => rule.integrate(|p| beta.eval(p, side)),
        };
        let g: [_; 3] = std::array::from_fn(|i| basis.eval_grad(i, side));
        for i in 0..3 {
            for j in 0..3 {
                k[i][j] += weight * g[i].dot(&g[j]);
            }
        }
    }
    Ok(k)
}

/// `int_T f phi_i` per local node.
pub fn element_load(pts: &[Point; 3], basis: &LocalBasis, f: &Piecewise, degree: usize) -> Result<[f64; 3]> {
    let mut out = [0.0; 3];
    for (side, rule) in element_rules(pts, basis, degree)? {
        for (p, w) in rule.iter() {
            let fv = f.eval(p, side);
            for (i, o) in out.iter_mut().enumerate() {
                *o += w * fv * basis.eval(i, p, side);
            }
        }
    }
    Ok(out)
}

/// Sparsity of the volume form plus the couplings of stabilized edges.
pub fn sparsity(mesh: &StructuredMesh, cut_mesh: &CutMesh, params: &SchemeParams) -> CsrMatrix {
    let mut p = PatternBuilder::new(mesh.num_vertices());
    for tri in &mesh.triangles {
        p.insert_clique(tri);
    }
    if params.scheme == Scheme::Modified {
        for e in cut_mesh.stabilized_edges(mesh) {
            p.insert_clique(&edge_dofs(mesh, e));
        }
    }
    p.build()
}

pub fn assemble_volume(
    mesh: &StructuredMesh,
    bases: &[LocalBasis],
    beta: &Piecewise,
    degree: usize,
    matrix: &mut CsrMatrix,
) -> Result<()> {
    let locals: Vec<[[f64; 3]; 3]> = bases
        .par_iter()
        .map(|b| element_stiffness(&mesh.triangle_points(b.element()), b, beta, degree))
        .collect::<Result<_>>()?;
    for (tri, k) in mesh.triangles.iter().zip(&locals) {
        for i in 0..3 {
            for j in 0..3 {
                matrix.add(tri[i], tri[j], k[i][j]);
            }
        }
    }
    Ok(())
}

pub fn assemble_load(mesh: &StructuredMesh, bases: &[LocalBasis], f: &Piecewise, degree: usize) -> Result<Vec<f64>> {
    let locals: Vec<[f64; 3]> = bases
        .par_iter()
        .map(|b| element_load(&mesh.triangle_points(b.element()), b, f, degree))
        .collect::<Result<_>>()?;
    let mut rhs = vec![0.0; mesh.num_vertices()];
    for (tri, l) in mesh.triangles.iter().zip(&locals) {
        for i in 0..3 {
            rhs[tri[i]] += l[i];
        }
    }
    Ok(rhs)
}

/// Vertices of both triangles next to an interior edge: the first triangle's
/// three, then the far vertex of the second.
pub fn edge_dofs(mesh: &StructuredMesh, e: usize) -> [usize; 4] {
    let edge = &mesh.edges[e];
    let t1 = mesh.triangles[edge.first()];
    let t2 = mesh.triangles[edge.second().expect("interior edge")];
    let far = *t2.iter().find(|v| !t1.contains(v)).expect("triangles share an edge");
    [t1[0], t1[1], t1[2], far]
}

/// Edge quadrature, split at the interface crossing when the edge has one.
pub fn edge_rule(mesh: &StructuredMesh, cut_mesh: &CutMesh, e: usize, npoints: usize) -> Result<LineRule> {
    let [p0, p1] = mesh.edge_points(e);
    match cut_mesh.crossings[e] {
        Some(c) => split_segment_rule(&p0, &p1, c.t, npoints),
        None => segment_rule(&p0, &p1, npoints),
    }
}

/// Side of a point at parameter `t` along edge `e`: the side of the endpoint on
/// the same side of the crossing.
#[inline]
pub fn edge_point_side(mesh: &StructuredMesh, cut_mesh: &CutMesh, e: usize, t: f64) -> Side {
    let [v0, v1] = mesh.edges[e].vertices;
    match cut_mesh.crossings[e] {
        Some(c) if t >= c.t => cut_mesh.vertex_sides[v1],
        _ => cut_mesh.vertex_sides[v0],
    }
}

/// Coefficient scale of an element: the constant side value, or the larger of the two sampled values.
fn element_beta(mesh: &StructuredMesh, basis: &LocalBasis, beta: &Piecewise) -> f64 {
    match basis {
        LocalBasis::Immersed(b) => b.beta_plus.max(b.beta_minus),
        LocalBasis::Standard(s) => beta.eval(&centroid(&mesh.triangle_points(s.element)), s.side),
    }
}

/// Consistency and penalty blocks of one interior edge, indexed like [`edge_dofs`].
///
/// Row `i` is the test function, column `j` the trial function.
#[allow(clippy::too_many_arguments)]
pub fn edge_matrices(
    mesh: &StructuredMesh,
    cut_mesh: &CutMesh,
    bases: &[LocalBasis],
    beta: &Piecewise,
    e: usize,
    epsilon: f64,
    sigma0: f64,
    npoints: usize,
) -> Result<([usize; 4], [[f64; 4]; 4], [[f64; 4]; 4])> {
    let edge = &mesh.edges[e];
    let dofs = edge_dofs(mesh, e);
    let elems = [edge.first(), edge.second().expect("interior edge")];
    // local position of each dof in each element, if present
    let local: [[Option<usize>; 4]; 2] =
        std::array::from_fn(|k| std::array::from_fn(|d| mesh.local_index(elems[k], dofs[d])));
    let n = edge.normal;
    let sigma = sigma0 * element_beta(mesh, &bases[elems[0]], beta).max(element_beta(mesh, &bases[elems[1]], beta));
    let penalty = sigma / edge.length;

    let rule = edge_rule(mesh, cut_mesh, e, npoints)?;
    let mut c = [[0.0; 4]; 4];
    let mut pen = [[0.0; 4]; 4];
    for ((t, p), w) in rule.params.iter().zip(&rule.points).zip(&rule.weights) {
        let chord_side = edge_point_side(mesh, cut_mesh, e, *t);
        let mut jump = [0.0; 4];
        let mut avg = [0.0; 4];
        for k in 0..2 {
            let side = cut_mesh.element_side(elems[k], chord_side);
            let basis = &bases[elems[k]];
            let b = beta.eval(p, side);
            let sign = if k == 0 { 1.0 } else { -1.0 };
            for d in 0..4 {
                if let Some(i) = local[k][d] {
                    jump[d] += sign * basis.eval(i, p, side);
                    avg[d] += 0.5 * b * basis.eval_grad(i, side).dot(&n);
                }
            }
        }
        for i in 0..4 {
            for j in 0..4 {
                c[i][j] += w * (-avg[j] * jump[i] + epsilon * avg[i] * jump[j]);
                pen[i][j] += w * penalty * jump[i] * jump[j];
            }
        }
    }
    Ok((dofs, c, pen))
}

type EdgeBlock = ([usize; 4], [[f64; 4]; 4], [[f64; 4]; 4]);

fn edge_blocks(
    mesh: &StructuredMesh,
    cut_mesh: &CutMesh,
    bases: &[LocalBasis],
    beta: &Piecewise,
    epsilon: f64,
    sigma0: f64,
    npoints: usize,
) -> Result<Vec<EdgeBlock>> {
    let edges: Vec<usize> = cut_mesh.stabilized_edges(mesh).collect();
    edges
        .par_iter()
        .map(|&e| edge_matrices(mesh, cut_mesh, bases, beta, e, epsilon, sigma0, npoints))
        .collect()
}

fn scatter(matrix: &mut CsrMatrix, dofs: &[usize; 4], block: &[[f64; 4]; 4]) {
    for i in 0..4 {
        for j in 0..4 {
            matrix.add(dofs[i], dofs[j], block[i][j]);
        }
    }
}

/// `-int {beta grad u . n}[v] + epsilon int {beta grad v . n}[u]` over stabilized edges.
pub fn assemble_edge_consistency(
    mesh: &StructuredMesh,
    cut_mesh: &CutMesh,
    bases: &[LocalBasis],
    beta: &Piecewise,
    epsilon: f64,
    npoints: usize,
    matrix: &mut CsrMatrix,
) -> Result<()> {
    for (dofs, c, _) in edge_blocks(mesh, cut_mesh, bases, beta, epsilon, 0.0, npoints)? {
        scatter(matrix, &dofs, &c);
    }
    Ok(())
}

/// `int sigma_e / h_e [u][v]` over stabilized edges.
pub fn assemble_penalty(
    mesh: &StructuredMesh,
    cut_mesh: &CutMesh,
    bases: &[LocalBasis],
    beta: &Piecewise,
    sigma0: f64,
    npoints: usize,
    matrix: &mut CsrMatrix,
) -> Result<()> {
    for (dofs, _, p) in edge_blocks(mesh, cut_mesh, bases, beta, 0.0, sigma0, npoints)? {
        scatter(matrix, &dofs, &p);
    }
    Ok(())
}

/// Matrix and load vector of the chosen scheme, before boundary conditions.
pub fn assemble(
    mesh: &StructuredMesh,
    cut_mesh: &CutMesh,
    bases: &[LocalBasis],
    beta: &Piecewise,
    f: &Piecewise,
    params: &SchemeParams,
) -> Result<GlobalSystem> {
    params.validate()?;
    let mut matrix = sparsity(mesh, cut_mesh, params);
    assemble_volume(mesh, bases, beta, params.volume_degree, &mut matrix)?;
    if params.scheme == Scheme::Modified {
        let blocks = edge_blocks(
            mesh,
            cut_mesh,
            bases,
            beta,
            params.epsilon as f64,
            params.sigma0,
            params.edge_points,
        )?;
        for (dofs, c, p) in &blocks {
            scatter(&mut matrix, dofs, c);
            scatter(&mut matrix, dofs, p);
        }
    }
    let rhs = assemble_load(mesh, bases, f, params.volume_degree)?;
    Ok(GlobalSystem {
        matrix,
        rhs,
        dirichlet: Vec::new(),
        params: *params,
    })
}

/// Boundary values of a piecewise field, each vertex on its own side.
pub fn boundary_values(mesh: &StructuredMesh, cut_mesh: &CutMesh, g: &Piecewise) -> Vec<(usize, f64)> {
    mesh.boundary_vertices()
        .map(|v| (v, g.eval(&mesh.vertices[v], cut_mesh.vertex_sides[v])))
        .collect()
}

/// Symmetric elimination: known columns move to the right-hand side and
/// constrained rows become identity rows.
pub fn apply_dirichlet(system: &mut GlobalSystem, values: &[(usize, f64)]) {
    let n = system.dofs();
    let mut known: Vec<Option<f64>> = vec![None; n];
    for &(v, g) in values {
        known[v] = Some(g);
    }
    for i in 0..n {
        let (cols, vals) = system.matrix.row_mut(i);
        match known[i] {
            Some(g) => {
                for (c, a) in cols.iter().zip(vals.iter_mut()) {
                    *a = if *c == i { 1.0 } else { 0.0 };
                }
                system.rhs[i] = g;
            }
            None => {
                let mut shift = 0.0;
                for (c, a) in cols.iter().zip(vals.iter_mut()) {
                    if let Some(g) = known[*c] {
                        shift += *a * g;
                        *a = 0.0;
                    }
                }
                system.rhs[i] -= shift;
            }
        }
    }
    system.dirichlet.extend_from_slice(values);
}
