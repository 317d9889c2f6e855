use thiserror::Error;

use crate::coupling::DeformationReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("no bound SPP mode at ω = {omega:e} rad/s (ε_m = {eps})")]
    NoBoundMode { omega: f64, eps: f64 },

    #[error("mode matching impossible at ω = {omega:e} rad/s: sin²θ would be {sin2:.6}")]
    Unmatchable { omega: f64, sin2: f64 },

    #[error("no root of ε_m(ω) = {target} in the search bracket")]
    RootNotFound { target: f64 },

    #[error("singular boundary-value system: {0}")]
    Singular(String),

    #[error("no thickness in [{lo:e}, {hi:e}] m satisfies the penetration bound")]
    Infeasible { lo: f64, hi: f64 },

    /// Part of the wavepacket band cannot be mode matched. The metrics for the
    /// matchable sub-band are still reported.
    #[error("band exits the matchable range; matchable sub-band [{lo:e}, {hi:e}] rad/s")]
    PartialBand {
        lo: f64,
        hi: f64,
        report: Box<DeformationReport>,
    },

    #[error("problem size exceeds oracle limits: {0}")]
    Scale(String),

    /// An internal consistency check failed. Indicates a bug.
    #[error("internal error: {0}")]
    Internal(String),

    /// `line` is 1-based; 0 when the problem is not tied to one line.
    #[error("{}", config_message(*line, msg))]
    Config { line: usize, msg: String },
}

fn config_message(line: usize, msg: &str) -> String {
    if line == 0 {
        format!("config: {msg}")
    } else {
        format!("config line {line}: {msg}")
    }
}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
