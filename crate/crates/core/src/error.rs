use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Newton iteration for quadrature nodes did not converge.
    NoConvergence { rule: &'static str, degree: usize },
    /// Degree outside the supported range.
    UnsupportedDegree { degree: usize },
    /// Shishkin meshes need an even cell count N >= 4.
    InvalidCellCount { n: usize },
    /// ε violates ε <= β / (2σ ln N); the transition point would reach 1/2.
    InadmissibleEps { eps: f64, limit: f64, lambda: f64 },
    /// Requested mixed derivative exceeds the available order.
    DerivativeOrder { requested: usize, max: usize },
    /// A function that must vanish at x = 0 and x = 1 does not.
    NonzeroBoundary { left: f64, right: f64 },
    /// Two finite element objects live on different spaces or meshes.
    SpaceMismatch,
    /// Zero pivot during banded LU.
    SingularPivot { row: usize },
    /// Linear solve finished but `|A x - b|_inf / |b|_inf` is too large.
    ResidualTooLarge { relative: f64 },
    /// The reference functional-to-coefficient system is singular.
    SingularReferenceSystem { degree: usize },
    /// Convergence rates need strictly positive errors.
    NonPositiveError { index: usize, value: f64 },
    /// Generic precondition failure.
    InvalidArgument(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NoConvergence { rule, degree } => {
                write!(f, "{rule} nodes did not converge for degree {degree}")
            }
            Error::UnsupportedDegree { degree } => write!(f, "unsupported degree {degree}"),
            Error::InvalidCellCount { n } => {
                write!(f, "cell count N = {n} must be even and at least 4")
            }
            Error::InadmissibleEps { eps, limit, lambda } => write!(
                f,
                "eps = {eps:e} exceeds the admissible bound {limit:e} (transition point {lambda} >= 1/2)"
            ),
            Error::DerivativeOrder { requested, max } => {
                write!(f, "derivative order {requested} exceeds maximum {max}")
            }
            Error::NonzeroBoundary { left, right } => write!(
                f,
                "function does not vanish on the boundary: v(0) = {left:e}, v(1) = {right:e}"
            ),
            Error::SpaceMismatch => f.write_str("finite element spaces do not match"),
            Error::SingularPivot { row } => write!(f, "zero pivot in banded LU at row {row}"),
            Error::ResidualTooLarge { relative } => {
                write!(f, "relative residual {relative:e} after linear solve")
            }
            Error::SingularReferenceSystem { degree } => {
                write!(f, "singular reference interpolation system for degree {degree}")
            }
            Error::NonPositiveError { index, value } => {
                write!(f, "error value #{index} = {value:e} is not positive")
            }
            Error::InvalidArgument(msg) => f.write_str(msg),
        }
    }
}

impl core::error::Error for Error {}
