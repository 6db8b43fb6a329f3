use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("grid mismatch: {left} vs {right} subintervals")]
    GridMismatch { left: usize, right: usize },

    #[error("grid needs at least 2 subintervals, got {0}")]
    GridTooCoarse(usize),

    #[error("non-finite sample at node {0}")]
    NonFiniteSample(usize),

    #[error("exponent p = {0} outside (1, 2]")]
    InvalidExponent(f64),

    #[error("no root of the Xu equation on (0, 1] for p = {0}")]
    NoRoot(f64),

    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),

    #[error("block index n({0}) overflows 64-bit integers")]
    BlockOverflow(u32),

    #[error(
        "block statistics up to n({index}) = {terms} exceed the summation budget of {budget} terms"
    )]
    BlockTooLarge { index: u32, terms: u64, budget: u64 },

    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),

    #[error("kernel must be {expected}x{expected}, got {rows}x{cols}")]
    KernelShape {
        expected: usize,
        rows: usize,
        cols: usize,
    },

    #[error("point violates the box constraint by {violation:e} at node {node}")]
    Infeasible { node: usize, violation: f64 },

    #[error("iterate norm {norm:e} exceeded the divergence guard {guard:e} at n = {n}")]
    Diverged { n: usize, norm: f64, guard: f64 },

    #[error("non-finite iterate at n = {0}")]
    NonFiniteIterate(usize),

    #[error("nothing to plot: all {dropped} residuals were non-positive")]
    EmptyPlot { dropped: usize },

    #[error("unknown {kind} `{name}`")]
    Unknown { kind: &'static str, name: String },

    #[error("{0}")]
    Incompatible(String),

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

    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
