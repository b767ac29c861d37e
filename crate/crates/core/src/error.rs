use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Invalid input value or precondition.
    Argument(String),
    /// Points or vectors of different dimensions were combined.
    DimensionMismatch { expected: usize, found: usize },
    /// A point was required to lie in a domain and does not.
    OutsideDomain(String),
    /// An integrator or iterative solver failed.
    Numerical(String),
    /// `λ` is not below the first discrete Dirichlet eigenvalue of a grid.
    Spectral { lambda: f64, lambda1_bound: f64 },
    /// A property that the theory guarantees was violated by a computed object.
    InvariantViolation(String),
    /// The request would exceed the node budget.
    Resource { nodes: usize, limit: usize },
}

impl Error {
    pub(crate) fn arg(msg: impl Into<String>) -> Self {
        Error::Argument(msg.into())
    }

    pub(crate) fn numerical(msg: impl Into<String>) -> Self {
        Error::Numerical(msg.into())
    }

    pub(crate) fn invariant(msg: impl Into<String>) -> Self {
        Error::InvariantViolation(msg.into())
    }

    /// True for errors caused by bad input rather than by a computation.
    pub fn is_argument(&self) -> bool {
        matches!(
            self,
            Error::Argument(_) | Error::DimensionMismatch { .. } | Error::OutsideDomain(_)
        )
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Argument(m) => write!(f, "invalid argument: {m}"),
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::OutsideDomain(m) => write!(f, "point outside domain: {m}"),
            Error::Numerical(m) => write!(f, "numerical failure: {m}"),
            Error::Spectral {
                lambda,
                lambda1_bound,
            } => write!(
                f,
                "lambda = {lambda} is not below the discrete first eigenvalue (about {lambda1_bound})"
            ),
            Error::InvariantViolation(m) => write!(f, "invariant violated: {m}"),
            Error::Resource { nodes, limit } => {
                write!(f, "grid would need {nodes} nodes, limit is {limit}")
            }
        }
    }
}

impl core::error::Error for Error {}
