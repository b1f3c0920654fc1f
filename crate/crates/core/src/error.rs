use thiserror::Error;

/// Errors produced by model validation, branch solvers, and samplers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid material model (mu1 = {mu1}, mu2 = {mu2}): {reason}")]
    InvalidModel {
        mu1: f64,
        mu2: f64,
        reason: &'static str,
    },

    #[error("invalid stretch triple ({l1}, {l2}, {l3}): {reason}")]
    InvalidStretch {
        l1: f64,
        l2: f64,
        l3: f64,
        reason: &'static str,
    },

    #[error("domain error in {op}: {reason}")]
    Domain { op: &'static str, reason: String },

    #[error("infeasible moments (mean = {mean}, variance = {variance}): {reason}")]
    InfeasibleMoments {
        mean: f64,
        variance: f64,
        reason: &'static str,
    },

    #[error("operation requires regime {expected}, model classifies as {actual}")]
    WrongRegime {
        expected: &'static str,
        actual: String,
    },

    #[error("inconsistent input: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, Error>;
