use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TsplibError {
    #[error("missing required field `{0}`")]
    MissingField(&'static str),
    #[error("unsupported edge weight type `{0}` (supported: EUC_2D, CEIL_2D, ATT)")]
    UnsupportedEdgeWeightType(String),
    #[error("unsupported problem type `{0}`")]
    UnsupportedProblemType(String),
    #[error("malformed coordinate on line {line}: {reason}")]
    MalformedCoord { line: usize, reason: String },
    #[error("malformed header on line {line}: {reason}")]
    MalformedHeader { line: usize, reason: String },
    #[error("DIMENSION is {declared} but {found} coordinates were read")]
    DimensionMismatch { declared: usize, found: usize },
    #[error("dimension must be at least 2, got {0}")]
    InvalidDimension(usize),
    #[error("city index {index} out of range for dimension {dimension}")]
    IndexOutOfRange { index: usize, dimension: usize },
    #[error("malformed tour file: {0}")]
    MalformedTour(String),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TourError {
    #[error("tour has {found} entries, expected {expected} (closed tour of n cities)")]
    WrongLength { expected: usize, found: usize },
    #[error("tour is not closed: first city {first}, last city {last}")]
    NotClosed { first: usize, last: usize },
    #[error("tour is not a permutation: city {city} {problem}")]
    NotAPermutation { city: usize, problem: &'static str },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("distance between {i} and {j} does not fit the distance type: {value}")]
    Overflow { i: usize, j: usize, value: i64 },
    #[error("distance matrix is not symmetric at ({i}, {j})")]
    NotSymmetric { i: usize, j: usize },
    #[error("distance matrix has a non-zero diagonal at {0}")]
    NonZeroDiagonal(usize),
    #[error("nearest-neighbour list length {nn} invalid for {n} cities (need 1 <= nn < n)")]
    InvalidLength { nn: usize, n: usize },
    #[error("instance needs at least 2 cities, got {0}")]
    TooSmall(usize),
    #[error("greedy tour has zero length; every city sits on the same point")]
    Degenerate,
    #[error(transparent)]
    Tsplib(#[from] TsplibError),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SelectionError {
    #[error("every city has already been visited")]
    AllVisited,
    #[error("current city {0} is out of range")]
    CityOutOfRange(usize),
    #[error("tile size must be at least 1")]
    ZeroTileSize,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DepositError {
    #[error("ant {ant}: stored tour length {stored} differs from recomputed length {actual}")]
    InconsistentLength { ant: usize, stored: u64, actual: u64 },
    #[error("ant {ant}: {source}")]
    InvalidTour { ant: usize, source: TourError },
    #[error("ant {0} has a zero-length tour")]
    ZeroLength(usize),
    #[error("pheromone matrix has {tau} cities but the tour buffer has {tours}")]
    DimensionMismatch { tau: usize, tours: usize },
    #[error("tour rows of length {row_len} are not padded to a multiple of tile size {tile_size}")]
    PaddingMismatch { row_len: usize, tile_size: usize },
    #[error("tile size must be at least 1")]
    ZeroTileSize,
    #[error("no tours to deposit")]
    NoTours,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("rho must be in (0,1], got {0}")]
    Rho(f64),
    #[error("alpha must be finite and >= 0, got {0}")]
    Alpha(f64),
    #[error("beta must be finite and >= 0, got {0}")]
    Beta(f64),
    #[error("number of ants must be at least 1")]
    Ants,
    #[error("iterations must be at least 1")]
    Iterations,
    #[error("workers must be at least 1")]
    Workers,
    #[error("tile size (theta) must be at least 1")]
    TileSize,
    #[error("nn must satisfy 1 <= nn < n ({n} cities), got {nn}")]
    NeighbourListLength { nn: usize, n: usize },
    #[error("could not build worker pool: {0}")]
    Pool(String),
}

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Tsplib(#[from] TsplibError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Selection(#[from] SelectionError),
    #[error(transparent)]
    Construct(#[from] crate::construction::ConstructError),
    #[error(transparent)]
    Tour(#[from] TourError),
    #[error(transparent)]
    Deposit(#[from] DepositError),
}
