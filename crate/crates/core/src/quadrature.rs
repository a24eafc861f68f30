//! Quadrature on triangles, cut-element pieces and edge segments.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::interface::CutElementGeometry;
use crate::mesh::signed_area;
use crate::Point;

/// Points and weights; weights sum to the measure of the region.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct QuadratureRule {
    pub points: Vec<Point>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Point, f64)> + '_ {
        self.points.iter().zip(self.weights.iter().copied())
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn integrate(&self, f: impl Fn(&Point) -> f64) -> f64 {
        self.iter().map(|(p, w)| w * f(p)).sum()
    }

    fn extend(&mut self, other: QuadratureRule) {
        self.points.extend(other.points);
        self.weights.extend(other.weights);
    }
}

/// Barycentric points with weights normalised to one.
type Reference = Vec<([f64; 3], f64)>;

fn orbit3(a: f64, w: f64, out: &mut Reference) {
    let c = 1.0 - 2.0 * a;
    out.push(([a, a, c], w));
    out.push(([a, c, a], w));
    out.push(([c, a, a], w));
}

fn orbit6(a: f64, b: f64, w: f64, out: &mut Reference) {
    let c = 1.0 - a - b;
    for p in [[a, b, c], [a, c, b], [b, a, c], [b, c, a], [c, a, b], [c, b, a]] {
        out.push((p, w));
    }
}

fn normalized(mut rule: Reference) -> Reference {
    let total: f64 = rule.iter().map(|(_, w)| w).sum();
    for (_, w) in &mut rule {
        *w /= total;
    }
    rule
}

fn reference_rule(degree: usize) -> Result<&'static Reference> {
    static D1: OnceLock<Reference> = OnceLock::new();
    static D2: OnceLock<Reference> = OnceLock::new();
    static D4: OnceLock<Reference> = OnceLock::new();
    static D6: OnceLock<Reference> = OnceLock::new();
    match degree {
        1 => Ok(D1.get_or_init(|| vec![([1.0 / 3.0; 3], 1.0)])),
        2 => Ok(D2.get_or_init(|| {
            let mut r = Vec::new();
            orbit3(1.0 / 6.0, 1.0 / 3.0, &mut r);
            r
        })),
        4 => Ok(D4.get_or_init(|| {
            let mut r = Vec::new();
            orbit3(0.445_948_490_915_964_886_32, 0.223_381_589_678_011_465_70, &mut r);
            orbit3(0.091_576_213_509_770_743_460, 0.109_951_743_655_321_867_64, &mut r);
            normalized(r)
        })),
        6 => Ok(D6.get_or_init(|| {
            let mut r = Vec::new();
            orbit3(0.249_286_745_170_910_421_29, 0.116_786_275_726_379_366_03, &mut r);
            orbit3(0.063_089_014_491_502_228_340, 0.050_844_906_370_206_816_921, &mut r);
            orbit6(
                0.053_145_049_844_816_947_353,
                0.310_352_451_033_784_405_42,
                0.082_851_075_618_373_575_194,
                &mut r,
            );
            normalized(r)
        })),
        d => Err(Error::UnsupportedDegree(d)),
    }
}

/// Symmetric rule on a triangle exact for polynomials of total degree `degree` (1, 2, 4 or 6).
pub fn triangle_rule(tri: &[Point; 3], degree: usize) -> Result<QuadratureRule> {
    let reference = reference_rule(degree)?;
    let area = signed_area(tri).abs();
    let mut rule = QuadratureRule {
        points: Vec::with_capacity(reference.len()),
        weights: Vec::with_capacity(reference.len()),
    };
    for (l, w) in reference {
        let p = tri[0].coords * l[0] + tri[1].coords * l[1] + tri[2].coords * l[2];
        rule.points.push(Point::from(p));
        rule.weights.push(w * area);
    }
    Ok(rule)
}

/// Fan triangulation from the first vertex of a convex polygon.
pub fn polygon_rule(poly: &[Point], degree: usize) -> Result<QuadratureRule> {
    reference_rule(degree)?;
    let mut rule = QuadratureRule::default();
    for k in 1..poly.len().saturating_sub(1) {
        rule.extend(triangle_rule(&[poly[0], poly[k], poly[k + 1]], degree)?);
    }
    Ok(rule)
}

/// Rules on the plus and minus pieces of a cut element.
///
/// The quadrilateral piece starts at `D`, so its fan splits along the diagonal
/// from `D` to the far vertex.
pub fn cut_rule(cut: &CutElementGeometry, degree: usize) -> Result<(QuadratureRule, QuadratureRule)> {
    Ok((
        polygon_rule(&cut.sub_plus, degree)?,
        polygon_rule(&cut.sub_minus, degree)?,
    ))
}

/// Rule on a segment: parameters along `p0 -> p1`, points, and weights summing to the length.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LineRule {
    pub params: Vec<f64>,
    pub points: Vec<Point>,
    pub weights: Vec<f64>,
}

impl LineRule {
    pub fn len(&self) -> usize {
        self.params.len()
    }

    pub fn is_empty(&self) -> bool {
        self.params.is_empty()
    }

    pub fn integrate(&self, f: impl Fn(&Point) -> f64) -> f64 {
        self.points.iter().zip(&self.weights).map(|(p, w)| w * f(p)).sum()
    }
}

/// Gauss-Legendre nodes and weights on [0, 1].
fn gauss_unit(npoints: usize) -> Result<&'static [(f64, f64)]> {
    static G1: [(f64, f64); 1] = [(0.5, 1.0)];
    static G2: OnceLock<[(f64, f64); 2]> = OnceLock::new();
    static G3: OnceLock<[(f64, f64); 3]> = OnceLock::new();
    match npoints {
        1 => Ok(&G1),
        2 => Ok(G2.get_or_init(|| {
            let d = 0.5 / 3f64.sqrt();
            [(0.5 - d, 0.5), (0.5 + d, 0.5)]
        })),
        3 => Ok(G3.get_or_init(|| {
            let d = 0.5 * 0.6f64.sqrt();
            [(0.5 - d, 5.0 / 18.0), (0.5, 4.0 / 9.0), (0.5 + d, 5.0 / 18.0)]
        })),
        n => Err(Error::UnsupportedPointCount(n)),
    }
}

fn push_interval(rule: &mut LineRule, p0: &Point, p1: &Point, t0: f64, t1: f64, nodes: &[(f64, f64)]) {
    let len = (p1 - p0).norm();
    for &(s, w) in nodes {
        let t = t0 + s * (t1 - t0);
        rule.params.push(t);
        rule.points.push(p0 + t * (p1 - p0));
        rule.weights.push(w * (t1 - t0) * len);
    }
}

pub fn segment_rule(p0: &Point, p1: &Point, npoints: usize) -> Result<LineRule> {
    let nodes = gauss_unit(npoints)?;
    let mut rule = LineRule::default();
    push_interval(&mut rule, p0, p1, 0.0, 1.0, nodes);
    Ok(rule)
}

/// Gauss-Legendre on `[0, t*]` and `[t*, 1]` separately.
pub fn split_segment_rule(p0: &Point, p1: &Point, breakpoint: f64, npoints: usize) -> Result<LineRule> {
    if !(breakpoint > 0.0 && breakpoint < 1.0) {
        return Err(Error::InvalidBreakpoint(breakpoint));
    }
    let nodes = gauss_unit(npoints)?;
    let mut rule = LineRule::default();
    push_interval(&mut rule, p0, p1, 0.0, breakpoint, nodes);
    push_interval(&mut rule, p0, p1, breakpoint, 1.0, nodes);
    Ok(rule)
}
