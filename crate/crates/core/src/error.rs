use thiserror::Error;

/// Errors raised by the solver pipeline.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("collocation order N = {order} is too small (need N >= {min})")]
    OrderTooSmall { order: usize, min: usize },

    #[error("Newton search for root {index} of P'_{order} did not converge in bracket [{lo}, {hi}]")]
    RootNotConverged { order: usize, index: usize, lo: f64, hi: f64 },

    #[error("invalid confinement radius r_c = {0} (must be positive and finite)")]
    InvalidRadius(f64),

    #[error("mapping is not monotone on [-1, 1]: {0}")]
    NonMonotoneMapping(String),

    #[error("invalid angular momentum l = {0}")]
    InvalidAngularMomentum(i64),

    #[error("symmetric eigensolver failed for l = {l}, N = {order}: {reason}")]
    EigenSolver { l: usize, order: usize, reason: String },

    #[error("requested {requested} eigenpairs but channel l = {l} has only {available}")]
    TooFewEigenpairs { l: usize, requested: usize, available: usize },

    #[error("density has wrong normalization tag: expected {expected}, found {found}")]
    WrongNormalization { expected: &'static str, found: &'static str },

    #[error("density normalization defect {defect:e} exceeds {tolerance:e}")]
    NormalizationDefect { defect: f64, tolerance: f64 },

    #[error("negative density {value:e} at node {node}")]
    NegativeDensity { node: usize, value: f64 },

    #[error("spin density vanishes at interior node {node} (r = {r}); exchange hole undefined")]
    VanishingDensity { node: usize, r: f64 },

    #[error("unsupported configuration: {0}")]
    UnsupportedConfiguration(String),

    #[error("invalid configuration: {0}")]
    InvalidConfiguration(String),

    #[error("missing orbital {0} for the configuration")]
    MissingShell(String),

    #[error("fields live on different grids")]
    GridMismatch,

    #[error("SCF did not converge after {iterations} iterations (last residual {last:e}, mixing {mixing}){hint}")]
    NoConvergence { iterations: usize, last: f64, mixing: f64, history: Vec<f64>, hint: String },

    #[error("momentum grid too short: Parseval defect {defect:e} at p_max = {p_max}")]
    MomentumNorm { defect: f64, p_max: f64 },

    #[error("electron count must be positive, got {0}")]
    InvalidElectronCount(f64),

    #[error("scans do not share a common r_c set")]
    NonOverlappingScans,

    #[error("malformed constants file at line {line}: {msg}")]
    Constants { line: usize, msg: String },

    #[error("missing correlation constant `{0}`")]
    MissingConstant(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
