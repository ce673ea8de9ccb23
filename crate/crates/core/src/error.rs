use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Errors raised by generation and analysis.
///
/// Variants are split between invalid input (the caller passed something
/// that violates a precondition) and infeasible input (the parameters are
/// well-formed but no graph with the requested properties can be built).
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A parameter is out of its allowed domain.
    InvalidParameter(&'static str),
    /// A probability row does not describe a distribution.
    InvalidDistribution { row: usize },
    /// A stub list has odd length and cannot be perfectly matched.
    OddStubCount(usize),
    /// Requested average degree is above what any minimum degree reaches.
    InfeasibleAverage { target: f64, max: u32 },
    /// Degree sequence cannot be made even while staying in range.
    InfeasibleParity,
    /// Community sizes cannot be adjusted to the requested total.
    InfeasibleSizes { target: usize },
    /// Fewer nodes satisfy the outlier degree bound than requested.
    InfeasibleOutliers { eligible: usize, requested: usize },
    /// Some non-outlier has no admissible community left.
    InfeasibleAssignment { node: usize },
    /// Background rewiring did not reach a simple graph within its cap.
    RewiringExhausted { remaining: usize },
    /// Graph has no edges where at least one is needed.
    EmptyGraph,
    /// Labels do not form a valid partition of the node set.
    InvalidPartition,
    /// AUC needs at least one member of each class.
    DegenerateClasses { outliers: usize, regular: usize },
    /// Iterative method did not reach its tolerance.
    NoConvergence { iterations: usize },
}

impl Error {
    /// True for errors caused by parameters that are valid but unrealizable.
    pub fn is_infeasible(&self) -> bool {
        matches!(
            self,
            Error::InfeasibleAverage { .. }
                | Error::InfeasibleParity
                | Error::InfeasibleSizes { .. }
                | Error::InfeasibleOutliers { .. }
                | Error::InfeasibleAssignment { .. }
                | Error::RewiringExhausted { .. }
        )
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
            Error::InvalidDistribution { row } => {
                write!(f, "row {row} is not a probability distribution")
            }
            Error::OddStubCount(n) => write!(f, "cannot match an odd number of stubs ({n})"),
            Error::InfeasibleAverage { target, max } => write!(
                f,
                "average degree {target} is unreachable with maximum degree {max}"
            ),
            Error::InfeasibleParity => write!(
                f,
                "degree sum is odd and min degree equals max degree; \
                 change n or widen the degree range"
            ),
            Error::InfeasibleSizes { target } => write!(
                f,
                "community sizes cannot sum to {target} within [min, max]; \
                 widen the community size range"
            ),
            Error::InfeasibleOutliers {
                eligible,
                requested,
            } => write!(
                f,
                "only {eligible} nodes satisfy the outlier degree bound but {requested} \
                 outliers were requested; raise xi or lower the outlier count"
            ),
            Error::InfeasibleAssignment { node } => write!(
                f,
                "node {node} fits in no remaining community; \
                 raise the maximum community size or lower the maximum degree"
            ),
            Error::RewiringExhausted { remaining } => write!(
                f,
                "background rewiring left {remaining} self-loops or multi-edges"
            ),
            Error::EmptyGraph => write!(f, "graph has no edges"),
            Error::InvalidPartition => write!(f, "labels do not form a partition"),
            Error::DegenerateClasses { outliers, regular } => write!(
                f,
                "AUC needs both classes (outliers: {outliers}, regular: {regular})"
            ),
            Error::NoConvergence { iterations } => {
                write!(f, "no convergence after {iterations} iterations")
            }
        }
    }
}

impl core::error::Error for Error {}
