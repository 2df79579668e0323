use thiserror::Error;

/// Errors raised by the analytic evaluators, samplers and verification drivers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("{function}: series did not converge within {terms} terms")]
    NonConvergence { function: &'static str, terms: usize },

    #[error("{function}: argument {x} outside the supported range |x| <= {limit}")]
    Range {
        function: &'static str,
        x: f64,
        limit: f64,
    },

    #[error("gamma function pole at argument {arg}")]
    Pole { arg: f64 },

    #[error("{function}: argument {x} outside the domain")]
    Domain { function: &'static str, x: f64 },

    #[error("{function}: estimated rounding error {bound:e} exceeds the precision budget")]
    PrecisionLoss { function: &'static str, bound: f64 },

    #[error("generalized Wright series diverges: sum(beta) - sum(alpha) + 1 = {value} <= 0")]
    DivergentSeries { value: f64 },

    #[error("u = {u} is within {threshold} of the singular set lambda1*u^2 = lambda2")]
    Singular { u: f64, threshold: f64 },

    #[error("invalid lattice rule: {0}")]
    InvalidLattice(String),

    #[error("quadrature did not stabilise: relative change {rel_change:e} under node doubling")]
    Quadrature { rel_change: f64 },

    #[error("pmf windows differ: [{0}, {1}] vs [{2}, {3}]")]
    WindowMismatch(i64, i64, i64, i64),

    #[error("sample set is empty")]
    EmptySample,

    #[error("pmf table mass {total} is not within 1e-9 of one")]
    Normalization { total: f64 },

    #[error("serialization: {0}")]
    Serialization(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
