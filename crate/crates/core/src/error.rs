use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("loop edge ({0}, {0}) is not allowed")]
    Loop(usize),

    #[error("vertex {vertex} is out of range (graph has {len} vertices)")]
    VertexOutOfRange { vertex: usize, len: usize },

    #[error("vertex {to} is unreachable from {from}")]
    Unreachable { from: usize, to: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("moment explosion: E[exp(t|W|)] is infinite for t = {t} (exponential rate {rate})")]
    MomentExplosion { t: f64, rate: f64 },

    #[error("target kappa {target} is unreachable; supremum of attainable kappa is {supremum}")]
    TargetUnreachable { target: f64, supremum: f64 },

    #[error("{what} requires {required} items, cap is {cap}")]
    CapExceeded {
        what: &'static str,
        required: u128,
        cap: u128,
    },

    #[error("no spin assigned to vertex {0}")]
    MissingAssignment(usize),

    #[error("B is not {lambda}-separated: rho({x}, {y}) = {distance}")]
    NotSeparated {
        lambda: f64,
        x: usize,
        y: usize,
        distance: usize,
    },

    #[error("z = {0} lies on the inner boundary or outside the volume")]
    NotInterior(usize),

    #[error("volume has empty interior")]
    EmptyInterior,

    #[error("phi must be positive on the sequence (phi(t_{index}) = {value})")]
    NonPositivePhi { index: usize, value: f64 },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
