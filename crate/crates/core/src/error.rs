use thiserror::Error;

use crate::rational::Rational;

/// Failure kinds shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("configuration error: {0}")]
    Configuration(String),

    #[error("not negative definite: {0}")]
    Definiteness(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("not in positive cone: {0}")]
    Domain(String),

    #[error("model inconsistency: {0}")]
    ModelInconsistency(String),

    #[error("singular reflection: {0}")]
    Singularity(String),

    #[error("search failed: {0}")]
    SearchFailure(String),

    #[error("bound 2A/h violated: t = {t} but t must lie in (0, {bound})")]
    BoundViolation { t: Rational, bound: Rational },

    #[error("object `{0}` is not alive")]
    Liveness(String),

    #[error("wrong move: {0}")]
    WrongMove(String),

    #[error("configuration is not connected: {0}")]
    Connectivity(String),

    #[error("negative intersection: {0}")]
    Positivity(String),

    #[error("parameter out of range: {0}")]
    Range(String),

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("property violation: {0}")]
    PropertyViolation(String),

    #[error("model build failed: {0}")]
    Build(String),
}

pub type Result<T> = std::result::Result<T, Error>;
