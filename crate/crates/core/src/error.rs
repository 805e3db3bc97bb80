use thiserror::Error;

/// A pair of vertex pairs at the same distance whose intersection counts differ.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct RegularityWitness {
    pub h: usize,
    pub i: usize,
    pub j: usize,
    /// First pair `(x, y)` at distance `h` and its count `|Γ_i(x) ∩ Γ_j(y)|`.
    pub first: (usize, usize, usize),
    /// Second pair `(x', y')` at distance `h` with a different count.
    pub second: (usize, usize, usize),
}

impl std::fmt::Display for RegularityWitness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let (x, y, c) = self.first;
        let (x2, y2, c2) = self.second;
        write!(
            f,
            "h={} i={} j={}: |G_{}({})∩G_{}({})|={} but |G_{}({})∩G_{}({})|={}",
            self.h, self.i, self.j, self.i, x, self.j, y, c, self.i, x2, self.j, y2, c2
        )
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown graph family `{0}` (expected hypercube, hamming, johnson or cycle)")]
    UnknownFamily(String),

    #[error("invalid parameters for {family}: {reason}")]
    InvalidParameters { family: String, reason: String },

    #[error("cannot read {path}: {reason}")]
    Io { path: String, reason: String },

    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error("line {line}: self-loop at vertex {vertex}")]
    SelfLoop { line: usize, vertex: usize },

    #[error("line {line}: duplicate edge {u} {v}")]
    DuplicateEdge { line: usize, u: usize, v: usize },

    #[error("graph is disconnected (vertex {unreachable} unreachable from 0)")]
    Disconnected { unreachable: usize },

    #[error("graph has {n} vertices, above the dense cap of {cap}")]
    TooLarge { n: usize, cap: usize },

    #[error("graph is not distance-regular; witness {0}")]
    NotDistanceRegular(RegularityWitness),

    #[error("base vertex {vertex} out of range for {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("multiplicity for eigenvalue {theta} is {value}, not an integer")]
    NonIntegerMultiplicity { theta: f64, value: f64 },

    #[error("repeated eigenvalue {theta} (gap {gap:e})")]
    RepeatedEigenvalue { theta: f64, gap: f64 },

    #[error("eigenvalue iteration failed to converge")]
    NoConvergence,

    #[error("{what}: residual {residual:e} exceeds tolerance {tol:e}")]
    Residual { what: String, residual: f64, tol: f64 },

    #[error("u_{i}(theta_{j}) = {value} is within {distance:e} of ±1; too close to classify")]
    AmbiguousPair { i: usize, j: usize, value: f64, distance: f64 },

    #[error("containment violated: generator {index} ({label}) has residual {residual:e}")]
    NotContained { index: usize, label: String, residual: f64 },

    #[error("intersection dimension {angles} from principal angles disagrees with {formula} from the rank formula")]
    InconsistentIntersection { angles: usize, formula: usize },

    #[error("{what}: expected dimension {expected}, found {found}")]
    DimensionMismatch { what: String, expected: usize, found: usize },

    #[error("primitivity decided combinatorially ({primitive}) disagrees with P = {p}")]
    PrimitivityMismatch { primitive: bool, p: usize },

    #[error("matrix side mismatch: {0} vs {1}")]
    SideMismatch(usize, usize),
}

impl Error {
    /// Errors caused by bad input rather than a failed numeric check.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::UnknownFamily(_)
                | Error::Io { .. }
                | Error::InvalidParameters { .. }
                | Error::Parse { .. }
                | Error::SelfLoop { .. }
                | Error::DuplicateEdge { .. }
                | Error::Disconnected { .. }
                | Error::TooLarge { .. }
                | Error::NotDistanceRegular(_)
                | Error::VertexOutOfRange { .. }
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
