//! Uniform right-triangle meshes on axis-aligned rectangles.
//!
//! A level-`n` mesh has `2^n x 2^n` squares, each split along its
//! bottom-left to top-right diagonal. Vertices are numbered row-major
//! (`j * (2^n + 1) + i`), triangles square by square, and edges by their
//! sorted endpoint pair, so rebuilding a mesh reproduces every index and
//! every edge normal bit for bit.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::{Point, Vector};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub xmin: f64,
    pub xmax: f64,
    pub ymin: f64,
    pub ymax: f64,
}

impl Rect {
    pub fn new(xmin: f64, xmax: f64, ymin: f64, ymax: f64) -> Result<Self> {
        let width = xmax - xmin;
        let height = ymax - ymin;
        if !(width > 0.0 && height > 0.0 && width.is_finite() && height.is_finite()) {
            return Err(Error::DegenerateDomain { width, height });
        }
        Ok(Self { xmin, xmax, ymin, ymax })
    }

    /// `[a, b] x [a, b]`.
    pub fn square(a: f64, b: f64) -> Result<Self> {
        Self::new(a, b, a, b)
    }

    pub fn width(&self) -> f64 {
        self.xmax - self.xmin
    }

    pub fn height(&self) -> f64 {
        self.ymax - self.ymin
    }

    pub fn area(&self) -> f64 {
        self.width() * self.height()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EdgeKind {
    Interior,
    Boundary,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    /// Endpoint vertex indices, sorted ascending.
    pub vertices: [usize; 2],
    /// Adjacent triangles; the first one is the lower triangle index.
    pub triangles: [usize; 2],
    /// Number of adjacent triangles (1 or 2).
    adjacent: u8,
    /// Unit normal pointing out of `triangles[0]`.
    pub normal: Vector,
    pub length: f64,
    pub kind: EdgeKind,
}

impl Edge {
    pub fn first(&self) -> usize {
        self.triangles[0]
    }

    pub fn second(&self) -> Option<usize> {
        (self.adjacent == 2).then_some(self.triangles[1])
    }

    pub fn adjacent(&self) -> &[usize] {
        &self.triangles[..self.adjacent as usize]
    }

    pub fn is_interior(&self) -> bool {
        self.kind == EdgeKind::Interior
    }
}

#[derive(Debug, Clone)]
pub struct StructuredMesh {
    pub domain: Rect,
    pub level: u32,
    pub vertices: Vec<Point>,
    /// Counterclockwise vertex triples.
    pub triangles: Vec<[usize; 3]>,
    pub edges: Vec<Edge>,
    /// `triangle_edges[t][k]` is the edge opposite local vertex `k`.
    pub triangle_edges: Vec<[usize; 3]>,
    pub vertex_boundary: Vec<bool>,
}

impl StructuredMesh {
    /// Builds the level-`n` mesh: `2^n` intervals per axis.
    pub fn uniform(domain: Rect, n: u32) -> Result<Self> {
        let domain = Rect::new(domain.xmin, domain.xmax, domain.ymin, domain.ymax)?;
        if n > 14 {
            return Err(Error::InvalidConfig(format!("refinement level {n} too large")));
        }
        let cells = 1usize << n;
        let stride = cells + 1;
        let hx = domain.width() / cells as f64;
        let hy = domain.height() / cells as f64;

        let mut vertices = Vec::with_capacity(stride * stride);
        let mut vertex_boundary = Vec::with_capacity(stride * stride);
        for j in 0..stride {
            for i in 0..stride {
                // Exact endpoints on the last row/column.
                let x = if i == cells {
                    domain.xmax
                } else {
                    domain.xmin + i as f64 * hx
                };
                let y = if j == cells {
                    domain.ymax
                } else {
                    domain.ymin + j as f64 * hy
                };
                vertices.push(Point::new(x, y));
                vertex_boundary.push(i == 0 || j == 0 || i == cells || j == cells);
            }
        }

        let mut triangles = Vec::with_capacity(2 * cells * cells);
        for j in 0..cells {
            for i in 0..cells {
                let v00 = j * stride + i;
                let v10 = v00 + 1;
                let v01 = v00 + stride;
                let v11 = v01 + 1;
                triangles.push([v00, v10, v11]);
                triangles.push([v00, v11, v01]);
            }
        }

        // (sorted endpoints, triangle, local vertex opposite the edge)
        let mut half_edges: Vec<(usize, usize, usize, usize)> = Vec::with_capacity(3 * triangles.len());
        for (t, tri) in triangles.iter().enumerate() {
            for k in 0..3 {
                let a = tri[(k + 1) % 3];
                let b = tri[(k + 2) % 3];
                half_edges.push((a.min(b), a.max(b), t, k));
            }
        }
        half_edges.sort_unstable();

        let mut edges = Vec::with_capacity(half_edges.len() / 2 + stride);
        let mut triangle_edges = vec![[usize::MAX; 3]; triangles.len()];
        let mut idx = 0;
        while idx < half_edges.len() {
            let (a, b, t0, k0) = half_edges[idx];
            let shared = idx + 1 < half_edges.len() && half_edges[idx + 1].0 == a && half_edges[idx + 1].1 == b;
            let e = edges.len();
            triangle_edges[t0][k0] = e;

            // outward normal of t0: the edge runs p -> q counterclockwise
            let tri = triangles[t0];
            let p = vertices[tri[(k0 + 1) % 3]];
            let q = vertices[tri[(k0 + 2) % 3]];
            let d = q - p;
            let length = d.norm();
            let normal = Vector::new(d.y, -d.x) / length;

            let (second, adjacent, kind) = if shared {
                let (_, _, t1, k1) = half_edges[idx + 1];
                triangle_edges[t1][k1] = e;
                (t1, 2, EdgeKind::Interior)
            } else {
                (t0, 1, EdgeKind::Boundary)
            };
            edges.push(Edge {
                vertices: [a, b],
                triangles: [t0, second],
                adjacent,
                normal,
                length,
                kind,
            });
            idx += if shared { 2 } else { 1 };
        }

        Ok(Self {
            domain,
            level: n,
            vertices,
            triangles,
            edges,
            triangle_edges,
            vertex_boundary,
        })
    }

    /// Number of intervals per axis.
    pub fn cells_per_axis(&self) -> usize {
        1 << self.level
    }

    pub fn hx(&self) -> f64 {
        self.domain.width() / self.cells_per_axis() as f64
    }

    pub fn hy(&self) -> f64 {
        self.domain.height() / self.cells_per_axis() as f64
    }

    /// Mesh size `max(hx, hy)`.
    pub fn h(&self) -> f64 {
        self.hx().max(self.hy())
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn triangle_points(&self, t: usize) -> [Point; 3] {
        let [a, b, c] = self.triangles[t];
        [self.vertices[a], self.vertices[b], self.vertices[c]]
    }

    pub fn triangle_area(&self, t: usize) -> f64 {
        signed_area(&self.triangle_points(t))
    }

    pub fn edge_points(&self, e: usize) -> [Point; 2] {
        let [a, b] = self.edges[e].vertices;
        [self.vertices[a], self.vertices[b]]
    }

    /// Local index of global vertex `v` in triangle `t`.
    pub fn local_index(&self, t: usize, v: usize) -> Option<usize> {
        self.triangles[t].iter().position(|&w| w == v)
    }

    /// Splits the edge set into interior and boundary edges.
    pub fn edge_partition(&self) -> (Vec<usize>, Vec<usize>) {
        (0..self.edges.len()).partition(|&e| self.edges[e].is_interior())
    }

    pub fn boundary_vertices(&self) -> impl Iterator<Item = usize> + '_ {
        self.vertex_boundary
            .iter()
            .enumerate()
            .filter_map(|(v, &b)| b.then_some(v))
    }
}

/// Free-function form of [`StructuredMesh::uniform`].
pub fn build_uniform_mesh(domain: Rect, n: u32) -> Result<StructuredMesh> {
    StructuredMesh::uniform(domain, n)
}

/// Free-function form of [`StructuredMesh::edge_partition`].
pub fn edge_partition(mesh: &StructuredMesh) -> (Vec<usize>, Vec<usize>) {
    mesh.edge_partition()
}

/// Signed area of a triangle, positive when counterclockwise.
pub fn signed_area(p: &[Point; 3]) -> f64 {
    0.5 * ((p[1] - p[0]).perp(&(p[2] - p[0])))
}

/// Shoelace area of a simple polygon, positive when counterclockwise.
///
/// Coordinates are taken relative to the first vertex so small polygons far
/// from the origin keep their relative precision.
pub fn polygon_area(poly: &[Point]) -> f64 {
    let Some(&o) = poly.first() else { return 0.0 };
    let mut s = 0.0;
    for w in poly[1..].windows(2) {
        s += (w[0] - o).perp(&(w[1] - o));
    }
    0.5 * s
}

pub fn centroid(poly: &[Point]) -> Point {
    // area-weighted centroid via a fan from the first vertex
    let mut acc = Vector::zeros();
    let mut area = 0.0;
    for i in 1..poly.len().saturating_sub(1) {
        let tri = [poly[0], poly[i], poly[i + 1]];
        let a = signed_area(&tri);
        acc += a * (tri[0].coords + tri[1].coords + tri[2].coords) / 3.0;
        area += a;
    }
    if area == 0.0 {
        let mean = poly.iter().fold(Vector::zeros(), |s, p| s + p.coords) / poly.len() as f64;
        return Point::from(mean);
    }
    Point::from(acc / area)
}
