//! Wavefront geometry, stationary-phase asymptotics and pseudo-norms of
//! multi-particle Gamow (resonance decay) states.
//!
//! All numerics are generic over the real scalar ([`Real`]: `f32` or `f64`);
//! the `*F64` aliases below fix the common double-precision instantiation.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod delta_shell;
pub mod error;
pub mod kinematics;
pub mod pseudo_norm;
pub mod quadrature;
pub mod scalar;
pub mod stationary_phase;
pub mod tau_front;
pub mod validation;

pub use error::{Error, Result};
pub use kinematics::{Dispersion, MassMatrix, MomentumMultiplet, ParticleSystem};
pub use scalar::Real;
pub use tau_front::{ComplexEnergy, FrontSolution, RadialPoint};

pub use num_complex::Complex;

pub type Complex64 = num_complex::Complex<f64>;
pub type ParticleSystemF64 = ParticleSystem<f64>;
pub type MomentumMultipletF64 = MomentumMultiplet<f64>;
pub type RadialPointF64 = RadialPoint<f64>;
pub type ComplexEnergyF64 = ComplexEnergy<f64>;
pub type FrontSolutionF64 = FrontSolution<f64>;
pub type ShellResonanceF64 = delta_shell::ShellResonance<f64>;
pub type NormScanF64 = pseudo_norm::NormScan<f64>;
pub type WavefrontFactorF64 = stationary_phase::WavefrontFactor<f64>;

