use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Coarse failure category, used by the CLI to pick an exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Geometry,
    Solver,
    Input,
    Io,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("degenerate domain: width {width}, height {height}")]
    DegenerateDomain { width: f64, height: f64 },

    #[error("degenerate triangle with signed area {area:e}")]
    DegenerateTriangle { area: f64 },

    #[error("not a cut edge: level set does not change sign between the endpoints")]
    NotACutEdge,

    #[error("unsupported cut topology in element {element}: {cut_edges} cut edges")]
    UnsupportedCutTopology { element: usize, cut_edges: usize },

    #[error("singular immersed basis system in element {element}: {geometry}")]
    SingularBasis { element: usize, geometry: String },

    #[error("unsupported quadrature degree {0}")]
    UnsupportedDegree(usize),

    #[error("unsupported number of segment quadrature points {0}")]
    UnsupportedPointCount(usize),

    #[error("segment breakpoint {0} outside (0, 1)")]
    InvalidBreakpoint(f64),

    #[error("unknown benchmark case `{0}`")]
    UnknownCase(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("{method} did not converge after {iterations} iterations (relative residual {residual:e})")]
    NonConvergence {
        method: &'static str,
        iterations: usize,
        residual: f64,
        history: Vec<f64>,
    },

    #[error("{method} broke down at iteration {iteration}")]
    Breakdown {
        method: &'static str,
        iteration: usize,
        history: Vec<f64>,
    },

    #[error("conjugate gradient refused: matrix is not symmetric (asymmetry {asymmetry:e})")]
    NotSymmetric { asymmetry: f64 },

    #[error("direct solver: {0}")]
    Direct(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::DegenerateDomain { .. }
            | Error::DegenerateTriangle { .. }
            | Error::NotACutEdge
            | Error::UnsupportedCutTopology { .. }
            | Error::SingularBasis { .. } => ErrorKind::Geometry,
            Error::NonConvergence { .. } | Error::Breakdown { .. } | Error::NotSymmetric { .. } | Error::Direct(_) => {
                ErrorKind::Solver
            }
            Error::Io(_) | Error::Csv(_) | Error::Json(_) => ErrorKind::Io,
            _ => ErrorKind::Input,
        }
    }
}
