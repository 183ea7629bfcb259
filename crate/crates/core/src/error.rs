use num_complex::Complex64;

use crate::algebra::Label;

/// Errors shared by the symbolic and numeric layers.
#[derive(thiserror::Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not unimodular (|det - 1| = {deviation:.3e})")]
    NonUnimodular { deviation: f64 },

    #[error("component {component} out of range for {species}")]
    InvalidComponent { species: &'static str, component: u8 },

    #[error("wave function has {got} components, expected {expected}")]
    ComponentCountMismatch { expected: usize, got: usize },

    #[error("permutation is not a bijection on 0..{n}")]
    NotAPermutation { n: usize },

    #[error("two-point pair is classified zero; no contraction symbol exists")]
    ZeroClassPair,

    #[error("coincident label {0} on both sides of a two-point symbol; the distribution product at equal arguments is undefined")]
    CoincidentLabels(Label),

    #[error("chronological product over a single Bose species only; found {0}")]
    NotABoseWord(&'static str),

    #[error("bilocal factor must be one conjugate spinor then one spinor at distinct labels")]
    MalformedBilocal,

    #[error("time-order groups must be disjoint")]
    OverlappingGroups,

    #[error("label {0} not covered by the time-order assumption")]
    LabelNotOrdered(Label),

    #[error("order too coarse: labels {0} and {1} share a group but a contraction between them must be resolved")]
    OrderTooCoarse(Label, Label),

    #[error("Gaussian width must be positive (got {0}); a zero width is the forbidden point-localized limit")]
    NonPositiveWidth(f64),

    #[error("quadrature did not converge: error estimate {estimate:.3e} exceeds tolerance {tolerance:.3e}")]
    QuadratureNotConverged { estimate: f64, tolerance: f64 },

    #[error("test function straddles the time origin (|center|/width = {sigmas:.2} sigma < {required:.1}); use the contour route")]
    StraddlesTimeOrigin { sigmas: f64, required: f64 },

    #[error("series order {requested} exceeds cap {cap}; term count grows like (16 K)^n with the contraction pattern count K")]
    OrderCapExceeded { requested: usize, cap: usize },

    #[error("switching function must be real for the unitarity bracket (amplitude {0})")]
    NonRealSwitching(Complex64),

    #[error("effective supports overlap in time (gap {gap:.3}); the factorization statement does not apply")]
    SupportsOverlap { gap: f64 },

    #[error("state weight count does not match declared factor count")]
    StateMismatch,

    #[error("{0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
