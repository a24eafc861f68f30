//! Scalar and vector fields defined separately on the two subdomains.

use std::fmt;
use std::sync::Arc;

use crate::interface::Side;
use crate::{Point, Vector};

pub type ScalarFn = Arc<dyn Fn(&Point) -> f64 + Send + Sync>;
pub type VectorFn = Arc<dyn Fn(&Point) -> Vector + Send + Sync>;

#[derive(Clone)]
pub enum Field {
    Constant(f64),
    Function(ScalarFn),
}

impl Field {
    pub fn function(f: impl Fn(&Point) -> f64 + Send + Sync + 'static) -> Self {
        Field::Function(Arc::new(f))
    }

    #[inline]
    pub fn eval(&self, p: &Point) -> f64 {
        match self {
            Field::Constant(c) => *c,
            Field::Function(f) => f(p),
        }
    }

    pub fn as_constant(&self) -> Option<f64> {
        match self {
            Field::Constant(c) => Some(*c),
            Field::Function(_) => None,
        }
    }
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Constant(c) => write!(f, "Constant({c})"),
            Field::Function(_) => write!(f, "Function(..)"),
        }
    }
}

impl From<f64> for Field {
    fn from(c: f64) -> Self {
        Field::Constant(c)
    }
}

/// A pair of fields, one per subdomain.
#[derive(Clone, Debug)]
pub struct Piecewise<T = Field> {
    pub plus: T,
    pub minus: T,
}

impl<T> Piecewise<T> {
    pub fn new(minus: T, plus: T) -> Self {
        Self { plus, minus }
    }

    pub fn get(&self, side: Side) -> &T {
        match side {
            Side::Plus => &self.plus,
            Side::Minus => &self.minus,
        }
    }
}

impl Piecewise<Field> {
    pub fn constant(minus: f64, plus: f64) -> Self {
        Self::new(Field::Constant(minus), Field::Constant(plus))
    }

    #[inline]
    pub fn eval(&self, p: &Point, side: Side) -> f64 {
        self.get(side).eval(p)
    }

    pub fn is_constant(&self) -> bool {
        self.plus.as_constant().is_some() && self.minus.as_constant().is_some()
    }
}

impl Piecewise<VectorFn> {
    #[inline]
    pub fn eval(&self, p: &Point, side: Side) -> Vector {
        (self.get(side))(p)
    }
}
