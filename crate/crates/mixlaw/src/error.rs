//! Crate-wide error type.
//!
//! Every fallible operation in this crate returns one of these variants so
//! callers (notably the CLI) can branch on the failure kind and report a
//! stable, typed name rather than matching on message text.

use num_complex::Complex64;

/// Which infinite-exponent limit a measured value sits at when no finite
/// exponent can reproduce it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LimitHint {
    /// Measured value at or above the largest contributing phase value; the
    /// mean only reaches it in the p -> +inf limit.
    PlusInfinity,
    /// Measured value at or below the smallest contributing phase value; the
    /// mean only reaches it in the p -> -inf limit.
    MinusInfinity,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("composition is empty")]
    EmptyComposition,

    #[error("fraction {0} is negative")]
    NegativeFraction(f64),

    #[error("fractions sum to {sum}, more than 1e-9 away from 1")]
    UnnormalizedComposition { sum: f64 },

    #[error("fraction list is not finite or sums to zero, cannot normalize")]
    UnnormalizableComposition,

    #[error("{left} fractions paired with {right} values")]
    LengthMismatch { left: usize, right: usize },

    #[error("phase value {0} is negative")]
    NegativeValue(f64),

    #[error("phase value {0} must be strictly positive here")]
    NonPositiveValue(f64),

    #[error("value {0} is not finite")]
    NonFiniteValue(f64),

    #[error("exponent {0} is not a nonzero finite real")]
    InvalidExponent(f64),

    #[error("complex exponent {0} outside the supported band 0 < |p| <= 4")]
    ExponentOutOfRange(f64),

    #[error("complex value {0} lies outside the right half-plane")]
    BranchDomainError(Complex64),

    #[error("zero complex phase value with non-positive exponent")]
    ZeroWithNonpositiveP,

    #[error("generator is invalid: {0}")]
    InvalidGenerator(String),

    #[error("value {value} outside generator domain [{lo}, {hi}]")]
    DomainError { value: f64, lo: f64, hi: f64 },

    #[error("generator could not be inverted at {at}")]
    NonInvertible { at: f64 },

    #[error("known values must leave exactly one hole, found {got}")]
    HoleCount { got: usize },

    #[error("no nonnegative phase value solves the mixture")]
    Infeasible,

    #[error("phase fraction at index {0} is zero, its value is unconstrained")]
    ZeroFraction(usize),

    #[error("target {target} outside the attainable range [{lo}, {hi}]")]
    OutOfRange { target: f64, lo: f64, hi: f64 },

    #[error("the two phase values are equal, every fraction reproduces the target")]
    DegenerateEqualPhases,

    #[error("inverted saturation {0} exceeds 1 beyond tolerance")]
    SaturationOutOfRange(f64),

    #[error("parameter {name} = {value} is out of range")]
    InvalidParameter { name: &'static str, value: f64 },

    #[error("all contributing phase values are equal, every exponent fits")]
    Degenerate,

    #[error("no finite exponent reaches the measured value ({hint:?} limit)")]
    Unsolvable { hint: LimitHint },

    #[error("solve bracket [{lo}, {hi}] is invalid")]
    BadBracket { lo: f64, hi: f64 },

    #[error("exponent kind is not supported by this operation")]
    UnsupportedExponent,

    #[error("dataset holds no samples")]
    EmptyDataset,

    #[error("every sample in the dataset is degenerate")]
    AllDegenerate,

    #[error("grid needs at least {need} distinct points, got {got}")]
    DegenerateGrid { need: usize, got: usize },
}

impl Error {
    /// Stable machine-readable name of the variant, for diagnostics.
    pub fn name(&self) -> &'static str {
        match self {
            Error::EmptyComposition => "EmptyComposition",
            Error::NegativeFraction(_) => "NegativeFraction",
            Error::UnnormalizedComposition { .. } => "UnnormalizedComposition",
            Error::UnnormalizableComposition => "UnnormalizableComposition",
            Error::LengthMismatch { .. } => "LengthMismatch",
            Error::NegativeValue(_) => "NegativeValue",
            Error::NonPositiveValue(_) => "NonPositiveValue",
            Error::NonFiniteValue(_) => "NonFiniteValue",
            Error::InvalidExponent(_) => "InvalidExponent",
            Error::ExponentOutOfRange(_) => "ExponentOutOfRange",
            Error::BranchDomainError(_) => "BranchDomainError",
            Error::ZeroWithNonpositiveP => "ZeroWithNonpositiveP",
            Error::InvalidGenerator(_) => "InvalidGenerator",
            Error::DomainError { .. } => "DomainError",
            Error::NonInvertible { .. } => "NonInvertible",
            Error::HoleCount { .. } => "HoleCount",
            Error::Infeasible => "Infeasible",
            Error::ZeroFraction(_) => "ZeroFraction",
            Error::OutOfRange { .. } => "OutOfRange",
            Error::DegenerateEqualPhases => "DegenerateEqualPhases",
            Error::SaturationOutOfRange(_) => "SaturationOutOfRange",
            Error::InvalidParameter { .. } => "InvalidParameter",
            Error::Degenerate => "Degenerate",
            Error::Unsolvable { .. } => "Unsolvable",
            Error::BadBracket { .. } => "BadBracket",
            Error::UnsupportedExponent => "UnsupportedExponent",
            Error::EmptyDataset => "EmptyDataset",
            Error::AllDegenerate => "AllDegenerate",
            Error::DegenerateGrid { .. } => "DegenerateGrid",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
