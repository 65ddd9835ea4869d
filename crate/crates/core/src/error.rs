//! Error types for model construction, conjugation and conformal mapping.

use thiserror::Error;

use crate::extreal::ExtReal;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("invalid interval: lo = {lo}, hi = {hi}")]
    BadInterval { lo: ExtReal, hi: ExtReal },

    #[error("piece count {pieces} does not match breakpoint count {breakpoints} + 1")]
    PieceCountMismatch { breakpoints: usize, pieces: usize },

    #[error("breakpoints are not strictly increasing near {0}")]
    BreakpointsNotIncreasing(f64),

    #[error("breakpoint {0} lies outside the open domain interval")]
    BreakpointOutsideDomain(f64),

    #[error("piece {index} is undefined somewhere on its subinterval")]
    PieceUndefined { index: usize },

    #[error("boundary function takes the value +inf on piece {index}; the domain would be empty there")]
    PosInfBoundary { index: usize },

    #[error("model domain is empty or disconnected: {0}")]
    DegenerateDomain(String),

    #[error("elliptic rate must have negative real part, got {0}")]
    BadEllipticRate(num_complex::Complex64),

    #[error("rotation number must be nonzero for an elliptic group")]
    ZeroRotationNumber,

    #[error("radial boundary must take values in (0, 1]: {0}")]
    BadRadialBound(String),
}

#[derive(Debug, Error)]
pub enum ConjugationError {
    #[error("shear base map must be a strictly increasing homeomorphism: {0}")]
    NotIncreasing(String),

    #[error("shear base map must send the source base interval onto the target base interval")]
    IntervalMismatch,

    #[error("vertical displacement must be continuous and finite on the base interval")]
    BadDisplacement,

    #[error(
        "pushforward leaves the closed-form family: cannot express piece {index} after composition"
    )]
    PushforwardNotClosed { index: usize },

    #[error("model error during conjugation: {0}")]
    Model(#[from] ModelError),
}

#[derive(Debug, Error)]
pub enum ConformalError {
    #[error("conformal mapping is not supported for this model: {0}")]
    UnsupportedModel(String),

    #[error("boundary discretization produced too few wall samples ({0})")]
    TooFewSamples(usize),

    #[error("map construction failed to converge: {0}")]
    NoConvergence(String),

    #[error("point lies outside the disc: |z| = {0}")]
    OutsideDisc(f64),

    #[error("inversion failed to locate a preimage for {0}")]
    InversionFailed(num_complex::Complex64),

    #[error("model error during conformal mapping: {0}")]
    Model(#[from] ModelError),
}
