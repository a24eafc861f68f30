//! Modified P1 immersed finite elements for planar elliptic interface problems.
//!
//! The crate solves `-div(beta grad u) = f` on a rectangle split by an interface
//! curve across which `beta` jumps, using an unfitted uniform triangulation.
//! Elements cut by the interface carry piecewise-linear basis functions that
//! satisfy the continuity and flux-jump conditions along the chord of the cut.
//! The modified scheme adds DG-style consistency and penalty line integrals on
//! the edges of interface elements while keeping one unknown per mesh vertex.
//!
//! Pipeline for one refinement level:
//!
//! 1. [`mesh::StructuredMesh::uniform`] builds the triangulation.
//! 2. [`interface::CutMesh::build`] classifies elements and extracts cut geometry.
//! 3. [`basis::build_bases`] constructs the local bases.
//! 4. [`assembly::assemble`] + [`assembly::apply_dirichlet`] produce the linear system.
//! 5. [`solver::solve`] solves it, [`norms`] measures the error.
//!
//! [`study::run_convergence`] drives the whole pipeline over a range of levels.

pub mod assembly;
pub mod basis;
pub mod cases;
pub mod error;
pub mod fields;
pub mod interface;
pub mod mesh;
pub mod norms;
pub mod output;
pub mod quadrature;
pub mod solver;
pub mod sparse;
pub mod study;

pub use assembly::{GlobalSystem, Scheme, SchemeParams};
pub use basis::LocalBasis;
pub use cases::BenchmarkCase;
pub use error::{Error, ErrorKind, Result};
pub use fields::{Field, Piecewise};
pub use interface::{CutElementGeometry, CutMesh, LevelSetInterface, MinusRegion, Side};
pub use mesh::{Edge, Rect, StructuredMesh};
pub use norms::{ConvergenceReport, ErrorReport};
pub use solver::{Method, SolveReport, SolverOptions};
pub use sparse::CsrMatrix;
pub use study::RunConfig;

pub type Point = nalgebra::Point2<f64>;
pub type Vector = nalgebra::Vector2<f64>;
