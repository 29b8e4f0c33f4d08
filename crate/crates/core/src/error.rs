use thiserror::Error;

/// Errors produced anywhere in the derive/simulate/recover pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("resonant term {monomial} at node {node}: denominator {re:+.3e}{im:+.3e}i is within eps_res = {eps}")]
    ResonantTerm {
        monomial: String,
        node: usize,
        re: f64,
        im: f64,
        eps: f64,
    },

    #[error("degree of the zero polynomial is undefined")]
    UndefinedDegree,

    #[error("node {node} has no stable limit cycle (Re gamma = {re_gamma}, Re beta = {re_beta})")]
    NoLimitCycle {
        node: usize,
        re_gamma: f64,
        re_beta: f64,
    },

    #[error("subpopulation {node} is subcritical: mu = {mu} <= sigma = {sigma}")]
    Subcritical { node: usize, mu: f64, sigma: f64 },

    #[error("state diverged at t = {t}")]
    Divergence { t: f64 },

    #[error("step size underflow at t = {t} (h = {h:e})")]
    StepUnderflow { t: f64, h: f64 },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("channel {channel}: found {found} peaks, need at least {needed}")]
    InsufficientCycles {
        channel: usize,
        found: usize,
        needed: usize,
    },

    #[error("channel {channel}: amplitude {amplitude:e} at sample {sample} is too small to define a phase")]
    DegenerateAmplitude {
        channel: usize,
        sample: usize,
        amplitude: f64,
    },

    #[error("rank deficiency: {0}")]
    Rank(String),

    #[error("no convergence after {iterations} iterations (duality gap {gap:e})")]
    Convergence { iterations: usize, gap: f64 },

    #[error("index {index} out of range for {len} nodes")]
    Index { index: usize, len: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
