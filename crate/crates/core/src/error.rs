use thiserror::Error;

/// Errors reported by the numerical routines.
///
/// Scalar payloads are widened to `f64` so the type does not depend on the
/// working precision.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("particle system needs at least one particle")]
    EmptySystem,
    #[error("invalid mass {mass} for particle {index}")]
    InvalidMass { index: usize, mass: f64 },
    #[error("zero mass for particle {index} under nonrelativistic dispersion")]
    MasslessNonrelativistic { index: usize },
    #[error("particle {index} is massless; no finite front time or mass matrix exists")]
    Massless { index: usize },
    #[error("velocity {velocity} of particle {index} is not below the speed of light")]
    Superluminal { index: usize, velocity: f64 },
    #[error("momentum {re:e}{im:+e}i of particle {index} is not outgoing")]
    IncomingMomentum { index: usize, re: f64, im: f64 },
    #[error("invalid radial point: {0}")]
    InvalidRadialPoint(&'static str),
    #[error("invalid energy: {0}")]
    InvalidEnergy(String),
    #[error("energy {energy} is not above the threshold {threshold}")]
    BelowThreshold { energy: f64, threshold: f64 },
    #[error("{what} did not converge after {iterations} iterations (residual {residual:e})")]
    NonConvergence {
        what: &'static str,
        iterations: usize,
        residual: f64,
    },
    #[error("quadrature under-resolved: spacing {spacing} exceeds limit {limit}")]
    UnderResolved { spacing: f64, limit: f64 },
    #[error("finite-difference step too large: {0}")]
    StepTooLarge(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("pole search converged to a non-decaying root k = {re:e}{im:+e}i")]
    WrongBranch { re: f64, im: f64 },
    #[error("Green's function evaluated at a pole (Wronskian {wronskian:e})")]
    AtPole { wronskian: f64 },
    #[error("contour of radius {radius} encloses another pole at distance {distance}")]
    ContourEnclosesPole { radius: f64, distance: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// Whether this error signals numerical non-convergence rather than bad input.
    pub fn is_convergence_failure(&self) -> bool {
        matches!(self, Error::NonConvergence { .. } | Error::WrongBranch { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
