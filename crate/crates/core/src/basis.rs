//! Local P1 bases: barycentric functions on regular elements and the
//! flux-constrained two-piece functions on interface elements.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fields::Piecewise;
use crate::interface::{CutElementGeometry, CutMesh, ElementClass, Side};
use crate::mesh::{signed_area, StructuredMesh};
use crate::{Point, Vector};

/// `a + b (x - x0) + c (y - y0)` relative to the basis origin.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Affine {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl Affine {
    #[inline]
    pub fn eval(&self, origin: &Point, p: &Point) -> f64 {
        self.a + self.b * (p.x - origin.x) + self.c * (p.y - origin.y)
    }

    #[inline]
    pub fn grad(&self) -> Vector {
        Vector::new(self.b, self.c)
    }

    /// Coefficients of `a + b x + c y` in global coordinates.
    pub fn global(&self, origin: &Point) -> Affine {
        Affine {
            a: self.a - self.b * origin.x - self.c * origin.y,
            b: self.b,
            c: self.c,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StandardBasis {
    pub element: usize,
    pub side: Side,
    pub origin: Point,
    pub shape: [Affine; 3],
}

#[derive(Debug, Clone, PartialEq)]
pub struct ImmersedBasis {
    pub element: usize,
    pub origin: Point,
    pub plus: [Affine; 3],
    pub minus: [Affine; 3],
    pub beta_plus: f64,
    pub beta_minus: f64,
    pub cut: CutElementGeometry,
}

impl ImmersedBasis {
    pub fn piece(&self, side: Side) -> &[Affine; 3] {
        match side {
            Side::Plus => &self.plus,
            Side::Minus => &self.minus,
        }
    }

    pub fn beta(&self, side: Side) -> f64 {
        match side {
            Side::Plus => self.beta_plus,
            Side::Minus => self.beta_minus,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum LocalBasis {
    Standard(StandardBasis),
    Immersed(Box<ImmersedBasis>),
}

impl LocalBasis {
    pub fn element(&self) -> usize {
        match self {
            LocalBasis::Standard(s) => s.element,
            LocalBasis::Immersed(s) => s.element,
        }
    }

    pub fn is_immersed(&self) -> bool {
        matches!(self, LocalBasis::Immersed(_))
    }

    pub fn cut(&self) -> Option<&CutElementGeometry> {
        match self {
            LocalBasis::Standard(_) => None,
            LocalBasis::Immersed(b) => Some(&b.cut),
        }
    }

    /// Side of `p` as seen by this element: the chord side on interface elements.
    #[inline]
    pub fn side_at(&self, p: &Point) -> Side {
        match self {
            LocalBasis::Standard(s) => s.side,
            LocalBasis::Immersed(b) => b.cut.side_of_point(p),
        }
    }

    /// Linear piece of shape function `i` on `side`; standard bases ignore the side.
    #[inline]
    pub fn piece(&self, i: usize, side: Side) -> (&Point, &Affine) {
        match self {
            LocalBasis::Standard(s) => (&s.origin, &s.shape[i]),
            LocalBasis::Immersed(b) => (&b.origin, &b.piece(side)[i]),
        }
    }

    #[inline]
    pub fn eval(&self, i: usize, p: &Point, side: Side) -> f64 {
        let (o, f) = self.piece(i, side);
        f.eval(o, p)
    }

    #[inline]
    pub fn eval_grad(&self, i: usize, side: Side) -> Vector {
        self.piece(i, side).1.grad()
    }

    /// Value and gradient of `sum_i coeffs[i] phi_i` at `p` on `side`.
    pub fn combine(&self, coeffs: &[f64; 3], p: &Point, side: Side) -> (f64, Vector) {
        let mut v = 0.0;
        let mut g = Vector::zeros();
        for (i, c) in coeffs.iter().enumerate() {
            let (o, f) = self.piece(i, side);
            v += c * f.eval(o, p);
            g += *c * f.grad();
        }
        (v, g)
    }
}

/// Barycentric coordinate functions of a counterclockwise triangle.
pub fn standard_p1(pts: &[Point; 3], element: usize, side: Side) -> Result<StandardBasis> {
    let area2 = 2.0 * signed_area(pts);
    if area2.abs() <= f64::MIN_POSITIVE || !area2.is_finite() {
        return Err(Error::DegenerateTriangle { area: area2 / 2.0 });
    }
    let mut shape = [Affine::default(); 3];
    for i in 0..3 {
        let j = (i + 1) % 3;
        let k = (i + 2) % 3;
        shape[i] = Affine {
            a: if i == 0 { 1.0 } else { 0.0 },
            b: (pts[j].y - pts[k].y) / area2,
            c: (pts[k].x - pts[j].x) / area2,
        };
    }
    Ok(StandardBasis {
        element,
        side,
        origin: pts[0],
        shape,
    })
}

/// Dense Gaussian elimination with partial pivoting, several right-hand sides.
///
/// Returns `None` when a pivot falls below `tiny` times the largest entry.
fn solve_dense<const N: usize, const M: usize>(mut a: [[f64; N]; N], mut b: [[f64; M]; N]) -> Option<[[f64; M]; N]> {
    let scale = a.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
    let tiny = 1e-14 * scale;
    for col in 0..N {
        let piv = (col..N).max_by(|&r, &s| a[r][col].abs().total_cmp(&a[s][col].abs()))?;
        if a[piv][col].abs() <= tiny {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..N {
            let f = a[r][col] / a[col][col];
            if f == 0.0 {
                continue;
            }
            for c in col..N {
                a[r][c] -= f * a[col][c];
            }
            for c in 0..M {
                b[r][c] -= f * b[col][c];
            }
        }
    }
    for col in (0..N).rev() {
        for c in 0..M {
            let mut s = b[col][c];
            for k in col + 1..N {
                s -= a[col][k] * b[k][c];
            }
            b[col][c] = s / a[col][col];
        }
    }
    Some(b)
}

/// Vertex sides implied by a cut: the lone vertex on its side, the others opposite.
pub fn vertex_sides(cut: &CutElementGeometry) -> [Side; 3] {
    let mut s = [cut.lone_side.opposite(); 3];
    s[cut.lone] = cut.lone_side;
    s
}

/// Two-piece basis constrained by nodal values, continuity at `D` and `E`,
/// and the flux condition across the chord.
pub fn immersed_p1(
    pts: &[Point; 3],
    cut: &CutElementGeometry,
    beta_plus: f64,
    beta_minus: f64,
    element: usize,
) -> Result<ImmersedBasis> {
    let origin = pts[0];
    let s = (0..3)
        .map(|k| (pts[(k + 1) % 3] - pts[k]).norm())
        .fold(0.0f64, f64::max);
    let local = |p: &Point| ((p.x - origin.x) / s, (p.y - origin.y) / s);
    let sides = vertex_sides(cut);

    // unknowns: a+, b+, c+, a-, b-, c- (gradients in scaled coordinates)
    let mut m = [[0.0; 6]; 6];
    for (j, p) in pts.iter().enumerate() {
        let (x, y) = local(p);
        let off = if sides[j] == Side::Plus { 0 } else { 3 };
        m[j][off] = 1.0;
        m[j][off + 1] = x;
        m[j][off + 2] = y;
    }
    for (row, q) in [(3, &cut.d.point), (4, &cut.e.point)] {
        let (x, y) = local(q);
        m[row] = [1.0, x, y, -1.0, -x, -y];
    }
    let n = cut.chord_normal;
    let bmax = beta_plus.max(beta_minus);
    let (bp, bm) = (beta_plus / bmax, beta_minus / bmax);
    m[5] = [0.0, bp * n.x, bp * n.y, 0.0, -bm * n.x, -bm * n.y];

    let mut rhs = [[0.0; 3]; 6];
    for (i, row) in rhs.iter_mut().take(3).enumerate() {
        row[i] = 1.0;
    }
    let sol = solve_dense(m, rhs).ok_or_else(|| Error::SingularBasis {
        element,
        geometry: format!("vertices {pts:?}, beta+ {beta_plus}, beta- {beta_minus}, cut {cut:?}"),
    })?;

    let mut plus = [Affine::default(); 3];
    let mut minus = [Affine::default(); 3];
    for i in 0..3 {
        plus[i] = Affine {
            a: sol[0][i],
            b: sol[1][i] / s,
            c: sol[2][i] / s,
        };
        minus[i] = Affine {
            a: sol[3][i],
            b: sol[4][i] / s,
            c: sol[5][i] / s,
        };
    }
    Ok(ImmersedBasis {
        element,
        origin,
        plus,
        minus,
        beta_plus,
        beta_minus,
        cut: cut.clone(),
    })
}

/// Local bases for every element.
///
/// Interface elements sample each side's coefficient at the centroid of that
/// side's piece.
pub fn build_bases(mesh: &StructuredMesh, cut_mesh: &CutMesh, beta: &Piecewise) -> Result<Vec<LocalBasis>> {
    (0..mesh.triangles.len())
        .into_par_iter()
        .map(|t| {
            let pts = mesh.triangle_points(t);
            match cut_mesh.classes[t] {
                ElementClass::Regular(side) => Ok(LocalBasis::Standard(standard_p1(&pts, t, side)?)),
                ElementClass::Interface(c) => {
                    let cut = &cut_mesh.cuts[c];
                    let bp = beta.eval(&cut.piece_centroid(Side::Plus), Side::Plus);
                    let bm = beta.eval(&cut.piece_centroid(Side::Minus), Side::Minus);
                    Ok(LocalBasis::Immersed(Box::new(immersed_p1(&pts, cut, bp, bm, t)?)))
                }
            }
        })
        .collect()
}

/// Nodal interpolant: the coefficient vector holds the values at the vertices,
/// each evaluated on the vertex's own side.
pub fn interpolate(mesh: &StructuredMesh, cut_mesh: &CutMesh, u: &Piecewise) -> Vec<f64> {
    mesh.vertices
        .iter()
        .zip(&cut_mesh.vertex_sides)
        .map(|(p, s)| u.eval(p, *s))
        .collect()
}

/// Value and gradient of a global coefficient vector inside element `t`.
pub fn eval_function(
    mesh: &StructuredMesh,
    bases: &[LocalBasis],
    coeffs: &[f64],
    t: usize,
    p: &Point,
) -> (f64, Vector) {
    let tri = mesh.triangles[t];
    let local = tri.map(|v| coeffs[v]);
    let basis = &bases[t];
    basis.combine(&local, p, basis.side_at(p))
}
