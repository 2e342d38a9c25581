use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DigraphError {
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate arc {0} -> {1}")]
    DuplicateArc(usize, usize),
    #[error("endpoint {vertex} out of range for a digraph on {n} vertices")]
    EndpointOutOfRange { vertex: usize, n: usize },
    #[error("vertices must be distinct, got {0} twice")]
    SameVertex(usize),
}

/// Errors from reading the edge-list text format. Line numbers are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("empty input: expected header line \"n m\"")]
    MissingHeader,
    #[error("line {line}: malformed line {content:?}")]
    Malformed { line: usize, content: String },
    #[error("line {line}: self-loop at vertex {vertex}")]
    SelfLoop { line: usize, vertex: usize },
    #[error("line {line}: duplicate arc {u} -> {v}")]
    DuplicateArc { line: usize, u: usize, v: usize },
    #[error("line {line}: endpoint {vertex} is not below n = {n}")]
    EndpointOutOfRange {
        line: usize,
        vertex: usize,
        n: usize,
    },
    #[error("header declares {expected} arcs but {found} were listed")]
    ArcCountMismatch { expected: usize, found: usize },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AlphaError {
    #[error("alpha = {0} lies outside [0, 1]")]
    OutOfRange(f64),
    #[error("alpha = 1 is not allowed here (requires alpha in [0, 1))")]
    AlphaOne,
    #[error("cannot parse alpha from {0:?}")]
    Unparsable(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectralError {
    #[error(transparent)]
    Alpha(#[from] AlphaError),
    #[error("spectrum is empty")]
    EmptySpectrum,
    #[error("matrix has no rows")]
    EmptyMatrix,
    #[error(
        "QR iteration did not converge: block of order {order} stuck at row {row} after \
         {iterations} iterations (matrix order {n}, Frobenius norm {frobenius:.6e})"
    )]
    NoConvergence {
        n: usize,
        order: usize,
        row: usize,
        iterations: usize,
        frobenius: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BoundError {
    #[error(transparent)]
    Alpha(#[from] AlphaError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error("bound needs at least {min} vertices, got n = {n}")]
    TooFewVertices { n: usize, min: usize },
    #[error("radicand {0:.3e} is negative beyond rounding slack")]
    NegativeRadicand(f64),
    #[error("digraph is not symmetric; undirected reductions need every arc in a digon")]
    NotSymmetric,
    #[error("classical Koolen-Moulton bound needs 2m'/n' >= 1, got {0}")]
    AverageDegreeBelowOne(f64),
    #[error("unknown bound id {0:?}")]
    UnknownBound(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeneratorError {
    #[error(transparent)]
    Digraph(#[from] DigraphError),
    #[error("k = {k} exceeds n = {n}")]
    SubsetTooLarge { k: usize, n: usize },
    #[error("parameter out of range: {0}")]
    InvalidParameter(String),
    #[error("inter-digon arc {u} -> {v} must go from a lower to a higher digon index")]
    BadInterArc { u: usize, v: usize },
    #[error("requested {requested} extra arcs but only {available} ordered pairs are free")]
    TooManyExtraArcs { requested: usize, available: usize },
    #[error("no regular tournament exists on an even number of vertices ({0})")]
    EvenTournament(usize),
    #[error("gave up building a {k}-regular digraph on {n} vertices after {restarts} restarts")]
    RetryBudgetExhausted { n: usize, k: usize, restarts: usize },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExperimentError {
    #[error("sample {index}: generator failed: {source}")]
    Generator {
        index: usize,
        #[source]
        source: GeneratorError,
    },
    #[error("sample {index}: eigensolver failed: {source}")]
    Spectral {
        index: usize,
        #[source]
        source: SpectralError,
    },
    #[error("sample {index}: bound evaluation failed: {source}")]
    Bound {
        index: usize,
        #[source]
        source: BoundError,
    },
    #[error("invalid experiment configuration: {0}")]
    InvalidConfig(String),
    #[error("no baseline registered under {0:?}")]
    UnknownBaseline(String),
    #[error("table is missing cell {0}")]
    MissingCell(String),
    #[error("failed to build worker pool: {0}")]
    ThreadPool(String),
}
