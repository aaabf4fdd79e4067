use thiserror::Error;

use crate::complex::Simplex;

/// Errors raised while building complexes, walks, and search operators.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("facet list is empty")]
    EmptyFacetList,
    #[error("facet {0} has no vertices")]
    EmptyFacet(usize),
    #[error("ordering {0:?} repeats a vertex")]
    RepeatedVertex(Vec<usize>),
    #[error("malformed graph: {0}")]
    MalformedGraph(String),
    #[error("skeleton dimension {requested} out of range 0..={dim}")]
    SkeletonOutOfRange { requested: usize, dim: usize },
    #[error("sphere triangulation needs n >= 2, got {0}")]
    SphereDimension(usize),
    #[error("operation needs dimension >= {required}, got {actual}")]
    DimensionTooLow { required: usize, actual: usize },
    #[error("complex is not pure (facet dimensions {0:?})")]
    NotPure(Vec<usize>),
    #[error("complex is not strongly connected")]
    NotStronglyConnected,
    #[error("complex is not orientable")]
    NotOrientable,
    #[error("complex has {0} boundary faces; a boundaryless complex is required")]
    HasBoundary(usize),
    #[error("block {block}: coin of size {coin} does not match block size {expected}")]
    BlockSizeMismatch { block: usize, coin: usize, expected: usize },
    #[error("expected {expected} coins, got {actual}")]
    CoinCountMismatch { expected: usize, actual: usize },
    #[error("local matrix of block {block} is not unitary (deviation {deviation:e})")]
    NotUnitary { block: usize, deviation: f64 },
    #[error("index sets of the blocks do not partition 0..{0}")]
    NotAPartition(usize),
    #[error("dimension mismatch: operator acts on {expected}, state has {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("grover operator needs size >= 1")]
    ZeroSizeGrover,
    #[error("simplex {0} is not a face of the complex")]
    NotInComplex(Simplex),
    #[error("face {face} has {cofaces} cofaces; a marked face needs exactly two")]
    MarkedCofaceCount { face: Simplex, cofaces: usize },
    #[error("facets {0} and {1} do not share a primary face")]
    NotAdjacent(usize, usize),
    #[error("facet index {index} out of range (complex has {count} facets)")]
    FacetIndex { index: usize, count: usize },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not symmetric (asymmetry {0:e})")]
    NotSymmetric(f64),
    #[error("jacobi iteration did not converge after {0} sweeps")]
    NoConvergence(usize),
    #[error("angle {0} is a multiple of pi")]
    DegenerateAngle(f64),
    #[error("lifted vector vanishes identically")]
    ZeroLift,
    #[error("graph is not regular")]
    NotRegular,
    #[error("dense spectrum requested for {0} arcs; limit is {1}")]
    TooLarge(usize, usize),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("invalid complex file: {0}")]
    Format(String),
    #[error("no local maximum of the finding probability within t_max = {0}")]
    NoLocalMaximum(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
