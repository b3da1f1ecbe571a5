use thiserror::Error;

use crate::algebra::Rational;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("singular matrix (degenerate curve configuration)")]
    SingularMatrix,

    #[error("breakpoints must be strictly increasing with one piece per interval")]
    InvalidBreakpoints,

    #[error("interval {interval} leaves the domain {domain}")]
    DomainViolation { interval: String, domain: String },

    #[error("unknown curve {0:?}")]
    UnknownCurve(String),

    #[error("unknown point {point:?} on curve {curve:?}")]
    UnknownPoint { curve: String, point: String },

    #[error("point {point:?} lies on {host:?}, not on {curve:?}")]
    PointCurveMismatch { point: String, host: String, curve: String },

    #[error("invalid surface: {}", .0.join("; "))]
    InvalidSurface(Vec<String>),

    #[error("A - {t}*{curve} is not pseudoeffective in the tracked cone")]
    NotPseudoeffective { curve: String, t: Rational },

    #[error("Zariski decomposition of A - {t}*{curve} did not converge: tracked curves exhausted")]
    NonConvergence { curve: String, t: Rational },

    #[error("A - t*{0} stays pseudoeffective for all t >= 0 in the tracked cone")]
    UnboundedThreshold(String),

    #[error("negative part support shrank along the family of {0}")]
    NonMonotoneSupport(String),

    #[error("curve {0:?} enters its own negative part; the flag restriction is undefined")]
    CurveInNegativePart(String),

    #[error("negative log discrepancy {value} at {point:?} on {curve:?} (pair is not plt)")]
    NegativeLogDiscrepancy {
        curve: String,
        point: String,
        value: Rational,
    },

    #[error("n = {0} is outside the family range n >= 2")]
    FamilyIndex(i64),

    #[error("invalid weighted hypersurface: {0}")]
    InvalidHypersurface(String),
}
