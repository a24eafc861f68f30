//! Manufactured benchmark problems with `u = L / beta`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fields::{Field, Piecewise, VectorFn};
use crate::interface::{CutMesh, LevelSetInterface, MinusRegion, Side};
use crate::mesh::{Rect, StructuredMesh};
use crate::{Point, Vector};

pub const BUILTIN_CASES: [&str; 3] = ["cubic", "corner", "ellipse"];

#[derive(Clone)]
pub struct BenchmarkCase {
    pub name: String,
    pub domain: Rect,
    pub interface: LevelSetInterface,
    pub beta: Piecewise,
    pub u: Piecewise,
    pub grad_u: Piecewise<VectorFn>,
    pub f: Piecewise,
    /// Non-smooth point of the interface, if any.
    pub singular_point: Option<Point>,
}

impl fmt::Debug for BenchmarkCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BenchmarkCase")
            .field("name", &self.name)
            .field("domain", &self.domain)
            .field("interface", &self.interface)
            .field("beta", &self.beta)
            .finish_non_exhaustive()
    }
}

fn square() -> Rect {
    Rect::square(-1.0, 1.0).expect("nondegenerate")
}

fn vector_fn(f: impl Fn(&Point) -> Vector + Send + Sync + 'static) -> VectorFn {
    Arc::new(f)
}

/// `u = L / beta` with constant coefficients on both sides.
fn constant_coefficient_case(
    name: &str,
    interface: LevelSetInterface,
    level: impl Fn(&Point) -> f64 + Send + Sync + Clone + 'static,
    level_grad: impl Fn(&Point) -> Vector + Send + Sync + Clone + 'static,
    minus_laplacian: impl Fn(&Point) -> f64 + Send + Sync + Clone + 'static,
    beta_minus: f64,
    beta_plus: f64,
) -> BenchmarkCase {
    let side_u = |b: f64| {
        let l = level.clone();
        Field::function(move |p| l(p) / b)
    };
    let side_grad = |b: f64| {
        let g = level_grad.clone();
        vector_fn(move |p| g(p) / b)
    };
    let src = Field::function(minus_laplacian);
    BenchmarkCase {
        name: name.to_string(),
        domain: square(),
        interface,
        beta: Piecewise::constant(beta_minus, beta_plus),
        u: Piecewise::new(side_u(beta_minus), side_u(beta_plus)),
        grad_u: Piecewise::new(side_grad(beta_minus), side_grad(beta_plus)),
        f: Piecewise::new(src.clone(), src),
        singular_point: None,
    }
}

fn cubic_level(p: &Point) -> f64 {
    p.y - 3.0 * p.x * (p.x - 0.3) * (p.x - 0.8) - 0.34
}

fn cubic_grad(p: &Point) -> Vector {
    Vector::new(-(9.0 * p.x * p.x - 6.6 * p.x + 0.72), 1.0)
}

/// `y = 3x(x-0.3)(x-0.8) + 0.34`, minus side below the curve.
pub fn cubic(beta_minus: f64, beta_plus: f64) -> BenchmarkCase {
    let interface = LevelSetInterface::new(cubic_level, cubic_grad, MinusRegion::Negative);
    constant_coefficient_case(
        "cubic",
        interface,
        cubic_level,
        cubic_grad,
        |p| 18.0 * p.x - 6.6,
        beta_minus,
        beta_plus,
    )
}

fn corner_poly(p: &Point) -> f64 {
    -p.y * p.y + (p.x - 0.6).powi(2) * (p.x + 0.4)
}

fn corner_poly_grad(p: &Point) -> Vector {
    Vector::new(2.0 * (p.x - 0.6) * (p.x + 0.4) + (p.x - 0.6).powi(2), -2.0 * p.y)
}

/// Teardrop with a 90 degree corner at (0.6, 0); the minus side is inside the loop.
///
/// The polynomial also vanishes on two branches for `x > 0.6`. The level
/// function flips the cubic term there so that only the loop is an interface;
/// the exact solution keeps the polynomial, which is smooth across those branches.
pub fn corner(beta_minus: f64, beta_plus: f64) -> BenchmarkCase {
    let level = |p: &Point| -p.y * p.y + (0.6 - p.x).signum() * (p.x - 0.6).powi(2) * (p.x + 0.4);
    let grad = |p: &Point| {
        let g = corner_poly_grad(p);
        if p.x > 0.6 {
            Vector::new(-g.x, g.y)
        } else {
            g
        }
    };
    let interface = LevelSetInterface::new(level, grad, MinusRegion::Positive);
    let mut case = constant_coefficient_case(
        "corner",
        interface,
        corner_poly,
        corner_poly_grad,
        |p| 3.6 - 6.0 * p.x,
        beta_minus,
        beta_plus,
    );
    case.singular_point = Some(Point::new(0.6, 0.0));
    case
}

const A2: f64 = 0.81;
const B2: f64 = 0.25;

fn ellipse_level(p: &Point) -> f64 {
    p.x * p.x / A2 + p.y * p.y / B2 - 1.0
}

fn ellipse_grad(p: &Point) -> Vector {
    Vector::new(2.0 * p.x / A2, 2.0 * p.y / B2)
}

/// Ellipse with semi-axes 0.9 and 0.5, `beta- = (x^2 + y^2 - 1)^2` inside, `beta+ = 1`.
pub fn ellipse() -> BenchmarkCase {
    let q = |p: &Point| p.x * p.x + p.y * p.y - 1.0;
    let lap = 2.0 / A2 + 2.0 / B2;
    BenchmarkCase {
        name: "ellipse".to_string(),
        domain: square(),
        interface: LevelSetInterface::new(ellipse_level, ellipse_grad, MinusRegion::Negative),
        beta: Piecewise::new(Field::function(move |p| q(p).powi(2)), Field::Constant(1.0)),
        u: Piecewise::new(
            Field::function(move |p| ellipse_level(p) / q(p).powi(2)),
            Field::function(ellipse_level),
        ),
        grad_u: Piecewise::new(
            vector_fn(move |p| {
                let qv = q(p);
                ellipse_grad(p) / (qv * qv) - 4.0 * ellipse_level(p) * p.coords / (qv * qv * qv)
            }),
            vector_fn(ellipse_grad),
        ),
        f: Piecewise::new(
            Field::function(move |p| {
                let (l, qv) = (ellipse_level(p), q(p));
                -lap + 8.0 * (l + 1.0) / qv - 8.0 * l / (qv * qv)
            }),
            Field::Constant(-lap),
        ),
        singular_point: None,
    }
}

/// Vertical line `x = x0` with the minus side to the left; `u = (x - x0) / beta`.
pub fn straight_line(x0: f64, beta_minus: f64, beta_plus: f64) -> BenchmarkCase {
    let level = move |p: &Point| p.x - x0;
    let grad = |_: &Point| Vector::new(1.0, 0.0);
    let interface = LevelSetInterface::new(level, grad, MinusRegion::Negative);
    constant_coefficient_case("line", interface, level, grad, |_| 0.0, beta_minus, beta_plus)
}

/// Built-in case by name with its default coefficients.
pub fn builtin_case(name: &str) -> Result<BenchmarkCase> {
    match name {
        "cubic" => Ok(cubic(1.0, 10.0)),
        "corner" => Ok(corner(1.0, 10.0)),
        "ellipse" => Ok(ellipse()),
        other => Err(Error::UnknownCase(other.to_string())),
    }
}

/// Built-in case with optional constant coefficient overrides.
pub fn builtin_case_with(name: &str, beta_minus: Option<f64>, beta_plus: Option<f64>) -> Result<BenchmarkCase> {
    if beta_minus.is_none() && beta_plus.is_none() {
        return builtin_case(name);
    }
    let (dm, dp) = (1.0, 10.0);
    for b in [beta_minus, beta_plus].into_iter().flatten() {
        if !(b > 0.0 && b.is_finite()) {
            return Err(Error::InvalidConfig(format!("coefficients must be positive, got {b}")));
        }
    }
    let bm = beta_minus.unwrap_or(dm);
    let bp = beta_plus.unwrap_or(dp);
    match name {
        "cubic" => Ok(cubic(bm, bp)),
        "corner" => Ok(corner(bm, bp)),
        "ellipse" => Err(Error::InvalidConfig(
            "the ellipse case has fixed variable coefficients".into(),
        )),
        other => Err(Error::UnknownCase(other.to_string())),
    }
}

impl BenchmarkCase {
    pub fn exact(&self, p: &Point) -> f64 {
        self.u.eval(p, self.interface.side_of(p))
    }

    /// Elements whose closed triangle contains the singular point but which
    /// were classified as regular.
    pub fn cusp_elements(&self, mesh: &StructuredMesh, cut_mesh: &CutMesh) -> usize {
        let Some(s) = self.singular_point else {
            return 0;
        };
        (0..mesh.triangles.len())
            .filter(|&t| !cut_mesh.is_interface(t) && contains(&mesh.triangle_points(t), &s))
            .count()
    }

    /// Largest relative mismatch between `f` and a central difference of `-div(beta grad u)`.
    pub fn manufactured_residual(&self, p: &Point, side: Side, step: f64) -> f64 {
        let flux = |q: &Point| self.beta.eval(q, side) * (self.grad_u.eval(q, side));
        let ex = Vector::new(step, 0.0);
        let ey = Vector::new(0.0, step);
        let div = (flux(&(p + ex)).x - flux(&(p - ex)).x) / (2.0 * step)
            + (flux(&(p + ey)).y - flux(&(p - ey)).y) / (2.0 * step);
        let f = self.f.eval(p, side);
        (-div - f).abs() / f.abs().max(1.0)
    }
}

fn contains(tri: &[Point; 3], p: &Point) -> bool {
    let cross = |a: &Point, b: &Point| (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
    let tol = 1e-14;
    (0..3).all(|k| cross(&tri[k], &tri[(k + 1) % 3]) >= -tol)
}
