use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid lattice size: {0}")]
    InvalidSize(String),

    #[error("self-loop on site {0}")]
    SelfLoop(usize),

    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),

    #[error("site index {index} out of range for {n_sites} sites")]
    SiteOutOfRange { index: usize, n_sites: usize },

    #[error("coordinate count {got} does not match {n_sites} sites")]
    CoordCount { got: usize, n_sites: usize },

    #[error("failed to parse {what}: {source}")]
    Parse {
        what: &'static str,
        #[source]
        source: serde_json::Error,
    },

    #[error("hopping count {got} does not match {expected} edges")]
    LengthMismatch { expected: usize, got: usize },

    #[error("non-finite hopping at edge {0}")]
    NonFinite(usize),

    #[error("filling {n} out of range 0..={n_sites}")]
    FillingOutOfRange { n: usize, n_sites: usize },

    #[error("sites must differ, got i = j = {0}")]
    SameSite(usize),

    #[error("eigensolver residual {residual:e} exceeds tolerance")]
    EigenNonConvergence { residual: f64 },

    #[error("many-body basis too large: {sites} sites, {particles} particles")]
    OracleTooLarge { sites: usize, particles: usize },

    #[error("dimerization parameter {0} outside [0, 1]")]
    AlphaOutOfRange(f64),

    #[error("invalid finite-difference step {0}")]
    InvalidStep(f64),

    #[error("root not bracketed on [{lo}, {hi}]")]
    BracketFailure { lo: f64, hi: f64 },

    #[error("invalid GA configuration: {0}")]
    InvalidConfig(String),

    #[error("non-finite fitness {fitness} for individual {index} in generation {generation}")]
    NonFiniteFitness {
        generation: usize,
        index: usize,
        fitness: f64,
    },

    #[error("motif {kind} has no disjoint cover on lattice {lattice}")]
    MotifInfeasible { kind: String, lattice: String },

    #[error("lattice {0} has no site coordinates")]
    MissingCoords(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },

    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
