//! Error type shared across the toolkit.

use std::fmt;

/// Errors produced by construction and algebra operations.
///
/// Norm evaluation does not use this type: infinite norms are an expected
/// outcome there and are signalled by [`crate::sysnorms::Divergence`].
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Operation requires a nonzero polynomial.
    ZeroPolynomial,
    /// Root extraction of a degree-0 polynomial.
    ConstantPolynomial,
    /// A transfer function denominator is the zero polynomial.
    ZeroDenominator,
    /// An interconnection produced an identically zero denominator.
    DegenerateLoop,
    /// The operation requires a proper (or strictly proper) system.
    Improper,
    /// Fractional order outside the supported range.
    FractionalOrderRange(f64),
    /// Controller realization collapsed to a degenerate rational function.
    DegenerateRealization,
    /// Membership bounds violate `f_min <= f_max`.
    MembershipBounds { f_min: f64, f_max: f64 },
    /// Best-compromise selection over an empty front.
    EmptyFront,
    /// Invalid configuration value.
    InvalidConfig(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::ZeroPolynomial => write!(f, "operation undefined for the zero polynomial"),
            Error::ConstantPolynomial => {
                write!(f, "root extraction requires a polynomial of degree >= 1")
            }
            Error::ZeroDenominator => write!(f, "denominator is the zero polynomial"),
            Error::DegenerateLoop => {
                write!(f, "interconnection yields an identically zero denominator")
            }
            Error::Improper => write!(f, "system is not proper"),
            Error::FractionalOrderRange(a) => {
                write!(f, "fractional order {a} outside the supported range")
            }
            Error::DegenerateRealization => {
                write!(f, "controller realization is degenerate")
            }
            Error::MembershipBounds { f_min, f_max } => {
                write!(f, "membership bounds require f_min <= f_max, got {f_min} > {f_max}")
            }
            Error::EmptyFront => write!(f, "empty Pareto front"),
            Error::InvalidConfig(msg) => write!(f, "invalid configuration: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
