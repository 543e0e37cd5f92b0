//! Error type shared across the crate.

use alloc::string::String;
use core::fmt;

/// Errors raised by the geometry, dynamics, and index computations.
#[derive(Debug, Clone, PartialEq)]
pub enum SolError {
    /// `e^{±z}` would leave the f64 range.
    ExponentOverflow,
    /// An operation requiring a unit-speed state received `H != 1/2`.
    NormalizeFirst { energy: f64 },
    /// Adaptive step size underflowed.
    StiffTrajectory,
    /// A hyperbolic-leaf geodesic formula was evaluated past its chart.
    LeftChart,
    /// Integer matrix is not in `GL(2,Z)`.
    NotInGl2Z { det: i64 },
    /// Monodromy matrix is not hyperbolic.
    NotHyperbolic,
    /// Geodesic censuses are defined on suspensions only.
    CensusRequiresSuspension,
    /// Requested invariant is recorded as not computed (sapphires).
    NotComputed(&'static str),
    /// Symplectic path ends on a degenerate matrix (eigenvalue 1).
    DegenerateEndpoint,
    /// Symplectic path samples are too coarse for crossing detection.
    RefineSampling,
    /// Bott perturbation never stabilized under halving.
    DeltaTooLarge,
    /// Closed-geodesic length sits exactly on a rotation period.
    DegenerateLength,
    /// The class list handed to the scale chooser is empty.
    EmptyClasses,
    /// Exact integer arithmetic overflowed its fixed width.
    IntegerOverflow,
    /// Malformed or inconsistent input.
    InvalidInput(String),
    /// A numerical procedure failed to reach its tolerance.
    Numerical(String),
}

impl fmt::Display for SolError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolError::ExponentOverflow => write!(f, "exponent overflow"),
            SolError::NormalizeFirst { energy } => {
                write!(f, "normalize first (state has H = {energy}, expected 1/2)")
            }
            SolError::StiffTrajectory => write!(f, "stiff trajectory (step-size underflow)"),
            SolError::LeftChart => write!(f, "left the chart"),
            SolError::NotInGl2Z { det } => write!(f, "not in GL2(Z) (det = {det})"),
            SolError::NotHyperbolic => write!(f, "monodromy not hyperbolic"),
            SolError::CensusRequiresSuspension => write!(f, "census requires a suspension"),
            SolError::NotComputed(what) => write!(f, "not computed: {what}"),
            SolError::DegenerateEndpoint => write!(f, "degenerate: use bott_perturbed_index"),
            SolError::RefineSampling => write!(f, "refine sampling"),
            SolError::DeltaTooLarge => write!(f, "delta too large"),
            SolError::DegenerateLength => write!(f, "degenerate length"),
            SolError::EmptyClasses => write!(f, "empty class list"),
            SolError::IntegerOverflow => write!(f, "integer overflow in exact arithmetic"),
            SolError::InvalidInput(msg) => write!(f, "invalid input: {msg}"),
            SolError::Numerical(msg) => write!(f, "numerical failure: {msg}"),
        }
    }
}

impl core::error::Error for SolError {}

pub type Result<T> = core::result::Result<T, SolError>;

impl SolError {
    /// Whether the error reflects bad input rather than a numerical failure.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            SolError::NotInGl2Z { .. }
                | SolError::NotHyperbolic
                | SolError::CensusRequiresSuspension
                | SolError::NotComputed(_)
                | SolError::EmptyClasses
                | SolError::InvalidInput(_)
                | SolError::NormalizeFirst { .. }
        )
    }
}
