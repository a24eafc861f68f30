//! Level-set interfaces and the cut structure they induce on a mesh.
//!
//! Element classification is purely vertex based: after snapping near-zero
//! level-set values to the plus side, an element is an interface element iff
//! its vertices do not all lie on the same side. On every interface element the
//! curve is replaced by the chord `DE` joining its two edge crossings, which
//! splits the triangle into a sub-triangle around the lone vertex and a
//! quadrilateral.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fields::{ScalarFn, VectorFn};
use crate::mesh::{centroid, polygon_area, StructuredMesh};
use crate::{Point, Vector};

/// Relative snap tolerance applied to `1 + characteristic |L|`.
pub const SNAP_RELATIVE: f64 = 1e-12;
/// Cuts whose smaller piece covers less than this fraction of the element are dropped.
pub const SMALL_CUT_FRACTION: f64 = 1e-10;
/// Bisection stops once the bracketing interval is this short (edge parameter units).
pub const BISECTION_WIDTH: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    Plus,
    Minus,
}

impl Side {
    pub fn opposite(self) -> Side {
        match self {
            Side::Plus => Side::Minus,
            Side::Minus => Side::Plus,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Plus => "+",
            Side::Minus => "-",
        })
    }
}

/// Which sign of the level function marks the minus subdomain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MinusRegion {
    /// `L < 0` is the minus subdomain.
    Negative,
    /// `L > 0` is the minus subdomain.
    Positive,
}

#[derive(Clone)]
pub struct LevelSetInterface {
    value: ScalarFn,
    gradient: VectorFn,
    minus: MinusRegion,
    snap_tol: f64,
}

impl fmt::Debug for LevelSetInterface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LevelSetInterface")
            .field("minus", &self.minus)
            .field("snap_tol", &self.snap_tol)
            .finish_non_exhaustive()
    }
}

impl LevelSetInterface {
    pub fn new(
        value: impl Fn(&Point) -> f64 + Send + Sync + 'static,
        gradient: impl Fn(&Point) -> Vector + Send + Sync + 'static,
        minus: MinusRegion,
    ) -> Self {
        Self {
            value: Arc::new(value),
            gradient: Arc::new(gradient),
            minus,
            snap_tol: SNAP_RELATIVE * 2.0,
        }
    }

    /// Straight line `normal . (x - point) = 0` with the minus side where it is negative.
    pub fn line(point: Point, normal: Vector) -> Self {
        Self::new(
            move |p| normal.dot(&(p - point)),
            move |_| normal,
            MinusRegion::Negative,
        )
    }

    /// Rescales the snap tolerance to `1e-12 * (1 + scale)`.
    pub fn with_characteristic_scale(mut self, scale: f64) -> Self {
        self.snap_tol = SNAP_RELATIVE * (1.0 + scale.abs());
        self
    }

    pub fn flipped(&self) -> Self {
        let mut out = self.clone();
        out.minus = match self.minus {
            MinusRegion::Negative => MinusRegion::Positive,
            MinusRegion::Positive => MinusRegion::Negative,
        };
        out
    }

    pub fn minus_region(&self) -> MinusRegion {
        self.minus
    }

    pub fn snap_tolerance(&self) -> f64 {
        self.snap_tol
    }

    #[inline]
    pub fn value(&self, p: &Point) -> f64 {
        (self.value)(p)
    }

    pub fn gradient(&self, p: &Point) -> Vector {
        (self.gradient)(p)
    }

    /// Level value with the sign flipped so that it is positive on the plus side.
    #[inline]
    fn oriented(&self, p: &Point) -> f64 {
        match self.minus {
            MinusRegion::Negative => self.value(p),
            MinusRegion::Positive => -self.value(p),
        }
    }

    pub fn is_snapped(&self, p: &Point) -> bool {
        self.value(p).abs() <= self.snap_tol
    }

    /// Subdomain containing `p`; points within the snap tolerance report plus.
    #[inline]
    pub fn side_of(&self, p: &Point) -> Side {
        let l = self.value(p);
        if l.abs() <= self.snap_tol {
            return Side::Plus;
        }
        let plus = match self.minus {
            MinusRegion::Negative => l > 0.0,
            MinusRegion::Positive => l < 0.0,
        };
        if plus {
            Side::Plus
        } else {
            Side::Minus
        }
    }

    /// Parameter `t` of the crossing on the segment `p0 + t (p1 - p0)`.
    ///
    /// Endpoint sides are the snapped ones; the interior of the segment is
    /// bisected on the raw level-set sign.
    pub fn edge_intersection(&self, p0: &Point, p1: &Point) -> Result<f64> {
        let s0 = self.side_of(p0);
        let s1 = self.side_of(p1);
        if s0 == s1 {
            return Err(Error::NotACutEdge);
        }
        let d = p1 - p0;
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        while hi - lo > BISECTION_WIDTH {
            let mid = 0.5 * (lo + hi);
            let v = self.oriented(&(p0 + mid * d));
            let mid_side = if v > 0.0 { Side::Plus } else { Side::Minus };
            if mid_side == s0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }
}

/// Free-function form of [`LevelSetInterface::side_of`].
pub fn side_of(interface: &LevelSetInterface, p: &Point) -> Side {
    interface.side_of(p)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ElementLabel {
    NonInterface(Side),
    Interface,
}

/// Labels every triangle from the snapped sides of its vertices.
pub fn classify_elements(mesh: &StructuredMesh, interface: &LevelSetInterface) -> Vec<ElementLabel> {
    let sides: Vec<Side> = mesh.vertices.iter().map(|p| interface.side_of(p)).collect();
    mesh.triangles
        .iter()
        .map(|tri| label_from_sides(tri.map(|v| sides[v])))
        .collect()
}

fn label_from_sides(s: [Side; 3]) -> ElementLabel {
    if s[0] == s[1] && s[1] == s[2] {
        ElementLabel::NonInterface(s[0])
    } else {
        ElementLabel::Interface
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutPoint {
    pub edge: usize,
    /// Parameter along the edge from its first (lower-index) vertex.
    pub t: f64,
    pub point: Point,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CutElementGeometry {
    pub triangle: usize,
    /// Local index of the vertex alone on its side.
    pub lone: usize,
    pub lone_side: Side,
    /// Crossing on the edge from the lone vertex to the next vertex (counterclockwise).
    pub d: CutPoint,
    /// Crossing on the edge from the lone vertex to the previous vertex.
    pub e: CutPoint,
    /// Unit normal of the chord `DE`, pointing into the plus piece.
    pub chord_normal: Vector,
    /// Counterclockwise polygons.
    pub sub_plus: Vec<Point>,
    pub sub_minus: Vec<Point>,
    pub area_plus: f64,
    pub area_minus: f64,
}

impl CutElementGeometry {
    pub fn piece(&self, side: Side) -> &[Point] {
        match side {
            Side::Plus => &self.sub_plus,
            Side::Minus => &self.sub_minus,
        }
    }

    pub fn area(&self, side: Side) -> f64 {
        match side {
            Side::Plus => self.area_plus,
            Side::Minus => self.area_minus,
        }
    }

    pub fn chord_tangent(&self) -> Vector {
        (self.e.point - self.d.point).normalize()
    }

    /// Side of `p` with respect to the chord line.
    #[inline]
    pub fn side_of_point(&self, p: &Point) -> Side {
        if (p - self.d.point).dot(&self.chord_normal) >= 0.0 {
            Side::Plus
        } else {
            Side::Minus
        }
    }

    pub fn piece_centroid(&self, side: Side) -> Point {
        centroid(self.piece(side))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeCrossing {
    pub t: f64,
    pub point: Point,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ElementClass {
    /// Standard P1 element living entirely on one side.
    Regular(Side),
    /// Index into [`CutMesh::cuts`].
    Interface(usize),
}

/// Interface-dependent data for one mesh: vertex sides, edge crossings, element classes.
#[derive(Debug, Clone)]
pub struct CutMesh {
    pub vertex_sides: Vec<Side>,
    pub crossings: Vec<Option<EdgeCrossing>>,
    pub classes: Vec<ElementClass>,
    pub cuts: Vec<CutElementGeometry>,
    /// Vertices whose level value fell within the snap tolerance.
    pub snapped_vertices: usize,
    /// Elements with a sign change that were demoted by the small-cut guard.
    pub small_cuts: Vec<usize>,
}

impl CutMesh {
    pub fn build(mesh: &StructuredMesh, interface: &LevelSetInterface) -> Result<Self> {
        let vertex_sides: Vec<Side> = mesh.vertices.iter().map(|p| interface.side_of(p)).collect();
        let snapped_vertices = mesh.vertices.iter().filter(|p| interface.is_snapped(p)).count();

        let mut crossings = vec![None; mesh.edges.len()];
        for (e, edge) in mesh.edges.iter().enumerate() {
            let [a, b] = edge.vertices;
            if vertex_sides[a] != vertex_sides[b] {
                let (p0, p1) = (mesh.vertices[a], mesh.vertices[b]);
                let t = interface.edge_intersection(&p0, &p1)?;
                crossings[e] = Some(EdgeCrossing {
                    t,
                    point: p0 + t * (p1 - p0),
                });
            }
        }

        let mut classes = Vec::with_capacity(mesh.triangles.len());
        let mut cuts = Vec::new();
        let mut small_cuts = Vec::new();
        for (t, tri) in mesh.triangles.iter().enumerate() {
            match label_from_sides(tri.map(|v| vertex_sides[v])) {
                ElementLabel::NonInterface(side) => classes.push(ElementClass::Regular(side)),
                ElementLabel::Interface => {
                    let cut = cut_from_crossings(mesh, t, &vertex_sides, &crossings)?;
                    let total = cut.area_plus + cut.area_minus;
                    if cut.area_plus.min(cut.area_minus) < SMALL_CUT_FRACTION * total {
                        let majority = if cut.area_plus >= cut.area_minus {
                            Side::Plus
                        } else {
                            Side::Minus
                        };
                        classes.push(ElementClass::Regular(majority));
                        small_cuts.push(t);
                    } else {
                        classes.push(ElementClass::Interface(cuts.len()));
                        cuts.push(cut);
                    }
                }
            }
        }

        Ok(Self {
            vertex_sides,
            crossings,
            classes,
            cuts,
            snapped_vertices,
            small_cuts,
        })
    }

    pub fn cut(&self, t: usize) -> Option<&CutElementGeometry> {
        match self.classes[t] {
            ElementClass::Interface(c) => Some(&self.cuts[c]),
            ElementClass::Regular(_) => None,
        }
    }

    pub fn is_interface(&self, t: usize) -> bool {
        matches!(self.classes[t], ElementClass::Interface(_))
    }

    pub fn interface_elements(&self) -> impl Iterator<Item = usize> + '_ {
        self.cuts.iter().map(|c| c.triangle)
    }

    /// Side used for element `t` at a point of the chord-side `side`.
    ///
    /// Regular elements always answer with their own side.
    #[inline]
    pub fn element_side(&self, t: usize, side: Side) -> Side {
        match self.classes[t] {
            ElementClass::Regular(s) => s,
            ElementClass::Interface(_) => side,
        }
    }

    /// Interior edges with at least one adjacent interface element.
    pub fn stabilized_edges<'a>(&'a self, mesh: &'a StructuredMesh) -> impl Iterator<Item = usize> + 'a {
        mesh.edges.iter().enumerate().filter_map(move |(e, edge)| {
            (edge.is_interior() && edge.adjacent().iter().any(|&t| self.is_interface(t))).then_some(e)
        })
    }
}

/// Cut geometry of one interface element, computing the crossings on the fly.
pub fn cut_geometry(
    mesh: &StructuredMesh,
    interface: &LevelSetInterface,
    element: usize,
) -> Result<CutElementGeometry> {
    let tri = mesh.triangles[element];
    let sides: Vec<Side> = mesh.vertices.iter().map(|_| Side::Plus).collect::<Vec<_>>();
    let mut sides = sides;
    for &v in &tri {
        sides[v] = interface.side_of(&mesh.vertices[v]);
    }
    let mut crossings = vec![None; mesh.edges.len()];
    for &e in &mesh.triangle_edges[element] {
        let [a, b] = mesh.edges[e].vertices;
        if sides[a] != sides[b] {
            let (p0, p1) = (mesh.vertices[a], mesh.vertices[b]);
            let t = interface.edge_intersection(&p0, &p1)?;
            crossings[e] = Some(EdgeCrossing {
                t,
                point: p0 + t * (p1 - p0),
            });
        }
    }
    cut_from_crossings(mesh, element, &sides, &crossings)
}

fn cut_from_crossings(
    mesh: &StructuredMesh,
    t: usize,
    vertex_sides: &[Side],
    crossings: &[Option<EdgeCrossing>],
) -> Result<CutElementGeometry> {
    let tri = mesh.triangles[t];
    let edges = mesh.triangle_edges[t];
    let cut_edges = edges.iter().filter(|&&e| crossings[e].is_some()).count();
    let s = tri.map(|v| vertex_sides[v]);
    let lone = (0..3).find(|&k| s[k] != s[(k + 1) % 3] && s[k] != s[(k + 2) % 3]);
    let lone = match (lone, cut_edges) {
        (Some(k), 2) => k,
        _ => return Err(Error::UnsupportedCutTopology { element: t, cut_edges }),
    };
    let a = (lone + 1) % 3;
    let b = (lone + 2) % 3;
    let pts = mesh.triangle_points(t);

    let cut_point = |e: usize| -> CutPoint {
        let c = crossings[e].expect("cut edge without crossing");
        CutPoint {
            edge: e,
            t: c.t,
            point: c.point,
        }
    };
    // edge lone-a is opposite b, edge lone-b is opposite a
    let d = cut_point(edges[b]);
    let e = cut_point(edges[a]);

    let lone_poly = vec![pts[lone], d.point, e.point];
    let quad = vec![d.point, pts[a], pts[b], e.point];
    let lone_side = s[lone];

    let tangent = e.point - d.point;
    let mut normal = Vector::new(tangent.y, -tangent.x).normalize();
    let away_from_lone = Point::from((pts[a].coords + pts[b].coords) / 2.0) - pts[lone];
    // normal must point into the plus piece
    let points_away = normal.dot(&away_from_lone) > 0.0;
    if points_away == (lone_side == Side::Plus) {
        normal = -normal;
    }

    let (sub_plus, sub_minus) = match lone_side {
        Side::Plus => (lone_poly, quad),
        Side::Minus => (quad, lone_poly),
    };
    let area_plus = polygon_area(&sub_plus);
    let area_minus = polygon_area(&sub_minus);
    Ok(CutElementGeometry {
        triangle: t,
        lone,
        lone_side,
        d,
        e,
        chord_normal: normal,
        sub_plus,
        sub_minus,
        area_plus,
        area_minus,
    })
}

/// Cut geometry for an arbitrary triangle (not tied to a mesh) with the
/// crossings given as parameters along the two edges leaving `lone`.
///
/// Used by property tests and by the basis module's own tests.
pub fn cut_from_parameters(pts: [Point; 3], lone: usize, lone_side: Side, t_d: f64, t_e: f64) -> CutElementGeometry {
    let a = (lone + 1) % 3;
    let b = (lone + 2) % 3;
    let dp = pts[lone] + t_d * (pts[a] - pts[lone]);
    let ep = pts[lone] + t_e * (pts[b] - pts[lone]);
    let d = CutPoint {
        edge: usize::MAX,
        t: t_d,
        point: dp,
    };
    let e = CutPoint {
        edge: usize::MAX,
        t: t_e,
        point: ep,
    };
    let tangent = ep - dp;
    let mut normal = Vector::new(tangent.y, -tangent.x).normalize();
    let away = Point::from((pts[a].coords + pts[b].coords) / 2.0) - pts[lone];
    if (normal.dot(&away) > 0.0) == (lone_side == Side::Plus) {
        normal = -normal;
    }
    let lone_poly = vec![pts[lone], dp, ep];
    let quad = vec![dp, pts[a], pts[b], ep];
    let (sub_plus, sub_minus) = match lone_side {
        Side::Plus => (lone_poly, quad),
        Side::Minus => (quad, lone_poly),
    };
    CutElementGeometry {
        triangle: usize::MAX,
        lone,
        lone_side,
        d,
        e,
        chord_normal: normal,
        area_plus: polygon_area(&sub_plus),
        area_minus: polygon_area(&sub_minus),
        sub_plus,
        sub_minus,
    }
}
