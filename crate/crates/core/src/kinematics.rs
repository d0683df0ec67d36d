//! Free-particle dispersion, momentum/velocity maps and the mass matrix.
//!
//! Both supported dispersions are sums of single-particle terms, so every
//! map acts particle by particle and the mass matrix is diagonal. Momenta
//! are radial magnitudes and may be complex; complex values are continued
//! through principal square roots.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{is_real, real, Real};

/// Free-particle energy function.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dispersion {
    /// `E = p² / 2m`.
    Nonrelativistic,
    /// `E = √(m² + p²)` with `c = 1`.
    Relativistic,
}

/// Masses of the outgoing particles together with their dispersion.
#[derive(Debug, Clone, PartialEq)]
pub struct ParticleSystem<T> {
    masses: Vec<T>,
    dispersion: Dispersion,
}

impl<T: Real> ParticleSystem<T> {
    /// Builds a system of massive particles.
    pub fn new(masses: Vec<T>, dispersion: Dispersion) -> Result<Self> {
        Self::build(masses, dispersion, false)
    }

    pub fn nonrelativistic(masses: Vec<T>) -> Result<Self> {
        Self::new(masses, Dispersion::Nonrelativistic)
    }

    pub fn relativistic(masses: Vec<T>) -> Result<Self> {
        Self::new(masses, Dispersion::Relativistic)
    }

    /// Relativistic system in which zero masses are admitted.
    pub fn relativistic_allowing_massless(masses: Vec<T>) -> Result<Self> {
        Self::build(masses, Dispersion::Relativistic, true)
    }

    fn build(masses: Vec<T>, dispersion: Dispersion, allow_massless: bool) -> Result<Self> {
        if masses.is_empty() {
            return Err(Error::EmptySystem);
        }
        for (index, &m) in masses.iter().enumerate() {
            if !m.is_finite() || m < T::zero() {
                return Err(Error::InvalidMass {
                    index,
                    mass: m.as_f64(),
                });
            }
            if m == T::zero() {
                match dispersion {
                    Dispersion::Nonrelativistic => {
                        return Err(Error::MasslessNonrelativistic { index })
                    }
                    Dispersion::Relativistic if !allow_massless => {
                        return Err(Error::InvalidMass { index, mass: 0.0 })
                    }
                    Dispersion::Relativistic => {}
                }
            }
        }
        Ok(Self { masses, dispersion })
    }

    pub fn masses(&self) -> &[T] {
        &self.masses
    }

    pub fn dispersion(&self) -> Dispersion {
        self.dispersion
    }

    pub fn len(&self) -> usize {
        self.masses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masses.is_empty()
    }

    pub fn is_relativistic(&self) -> bool {
        self.dispersion == Dispersion::Relativistic
    }

    /// Lowest energy the system can carry: total rest mass, or zero.
    pub fn threshold(&self) -> T {
        match self.dispersion {
            Dispersion::Nonrelativistic => T::zero(),
            Dispersion::Relativistic => self.masses.iter().fold(T::zero(), |a, &m| a + m),
        }
    }

    pub(crate) fn check_len(&self, got: usize) -> Result<()> {
        if got != self.len() {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                got,
            });
        }
        Ok(())
    }

    pub(crate) fn first_massless(&self) -> Option<usize> {
        self.masses.iter().position(|&m| m == T::zero())
    }

    /// `E_F(p)`.
    pub fn energy(&self, p: &MomentumMultiplet<T>) -> Result<Complex<T>> {
        self.check_len(p.len())?;
        Ok(self
            .masses
            .iter()
            .zip(p.as_slice())
            .fold(real(T::zero()), |acc, (&m, &pn)| {
                acc + energy_of_momentum(self.dispersion, m, pn)
            }))
    }

    /// `vₙ = ∂E_F/∂pₙ`.
    pub fn velocities(&self, p: &MomentumMultiplet<T>) -> Result<Vec<Complex<T>>> {
        self.check_len(p.len())?;
        Ok(self
            .masses
            .iter()
            .zip(p.as_slice())
            .map(|(&m, &pn)| velocity_of_momentum(self.dispersion, m, pn))
            .collect())
    }

    /// Inverse of [`velocities`](Self::velocities).
    pub fn momenta(&self, v: &[Complex<T>]) -> Result<MomentumMultiplet<T>> {
        self.check_len(v.len())?;
        let p = self
            .masses
            .iter()
            .zip(v)
            .enumerate()
            .map(|(index, (&m, &vn))| momentum_of_velocity(self.dispersion, m, vn, index))
            .collect::<Result<Vec<_>>>()?;
        Ok(MomentumMultiplet(p))
    }

    /// `E_F` written as a function of the velocities.
    pub fn energy_of_velocities(&self, v: &[Complex<T>]) -> Result<Complex<T>> {
        self.check_len(v.len())?;
        let mut total = real(T::zero());
        for (&m, &vn) in self.masses.iter().zip(v) {
            total = total + energy_of_velocity(self.dispersion, m, vn);
        }
        Ok(total)
    }

    /// `∂E_F/∂vₙ` with `E_F` written as a function of the velocities.
    pub fn energy_velocity_gradient(&self, v: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
        self.check_len(v.len())?;
        Ok(self
            .masses
            .iter()
            .zip(v)
            .map(|(&m, &vn)| energy_velocity_derivative(self.dispersion, m, vn))
            .collect())
    }

    /// Diagonal mass matrix `M` and its inverse `∂²E_F/∂pₙ∂pₘ`.
    pub fn mass_matrix(&self, p: &MomentumMultiplet<T>) -> Result<MassMatrix<T>> {
        self.check_len(p.len())?;
        if self.is_relativistic() {
            if let Some(index) = self.first_massless() {
                return Err(Error::Massless { index });
            }
        }
        let inverse: Vec<Complex<T>> = self
            .masses
            .iter()
            .zip(p.as_slice())
            .map(|(&m, &pn)| inverse_mass(self.dispersion, m, pn))
            .collect();
        let diagonal = inverse.iter().map(|&x| x.inv()).collect();
        Ok(MassMatrix { diagonal, inverse })
    }
}

/// Radial momenta of the outgoing particles.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentumMultiplet<T>(Vec<Complex<T>>);

impl<T: Real> MomentumMultiplet<T> {
    /// Outgoing momenta: every real part must be non-negative.
    pub fn new(p: Vec<Complex<T>>) -> Result<Self> {
        for (index, z) in p.iter().enumerate() {
            if !(z.re >= T::zero()) || !z.im.is_finite() || !z.re.is_finite() {
                return Err(Error::IncomingMomentum {
                    index,
                    re: z.re.as_f64(),
                    im: z.im.as_f64(),
                });
            }
        }
        Ok(Self(p))
    }

    pub fn from_real(p: &[T]) -> Result<Self> {
        Self::new(p.iter().map(|&x| real(x)).collect())
    }

    pub fn as_slice(&self) -> &[Complex<T>] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_inner(self) -> Vec<Complex<T>> {
        self.0
    }
}

/// Diagonal mass matrix and its inverse.
#[derive(Debug, Clone, PartialEq)]
pub struct MassMatrix<T> {
    /// `Mₙₙ`.
    pub diagonal: Vec<Complex<T>>,
    /// `(M⁻¹)ₙₙ = ∂vₙ/∂pₙ`.
    pub inverse: Vec<Complex<T>>,
}

pub fn energy_of_momentum<T: Real>(d: Dispersion, m: T, p: Complex<T>) -> Complex<T> {
    match d {
        Dispersion::Nonrelativistic => p * p / (m + m),
        Dispersion::Relativistic => (p * p + m * m).sqrt(),
    }
}

pub fn velocity_of_momentum<T: Real>(d: Dispersion, m: T, p: Complex<T>) -> Complex<T> {
    match d {
        Dispersion::Nonrelativistic => p / m,
        Dispersion::Relativistic => p / (p * p + m * m).sqrt(),
    }
}

fn momentum_of_velocity<T: Real>(d: Dispersion, m: T, v: Complex<T>, index: usize) -> Result<Complex<T>> {
    match d {
        Dispersion::Nonrelativistic => Ok(v * m),
        Dispersion::Relativistic => {
            if m == T::zero() {
                return Err(Error::Massless { index });
            }
            let radicand = real(T::one()) - v * v;
            if (is_real(v) && v.re.abs() >= T::one()) || radicand.norm() == T::zero() {
                return Err(Error::Superluminal {
                    index,
                    velocity: v.norm().as_f64(),
                });
            }
            Ok(v * m / radicand.sqrt())
        }
    }
}

/// Lorentz factor `1/√(1 − v²)`, principal branch.
pub fn lorentz_gamma<T: Real>(v: Complex<T>) -> Complex<T> {
    (real(T::one()) - v * v).sqrt().inv()
}

fn energy_of_velocity<T: Real>(d: Dispersion, m: T, v: Complex<T>) -> Complex<T> {
    match d {
        Dispersion::Nonrelativistic => v * v * (m / T::lit(2.0)),
        Dispersion::Relativistic => lorentz_gamma(v) * m,
    }
}

fn energy_velocity_derivative<T: Real>(d: Dispersion, m: T, v: Complex<T>) -> Complex<T> {
    match d {
        Dispersion::Nonrelativistic => v * m,
        Dispersion::Relativistic => {
            let g = lorentz_gamma(v);
            v * g * g * g * m
        }
    }
}

fn inverse_mass<T: Real>(d: Dispersion, m: T, p: Complex<T>) -> Complex<T> {
    match d {
        Dispersion::Nonrelativistic => real(m.recip()),
        Dispersion::Relativistic => {
            let e = (p * p + m * m).sqrt();
            real(m * m) / (e * e * e)
        }
    }
}

/// Free-function form of [`ParticleSystem::energy`].
pub fn dispersion_energy<T: Real>(system: &ParticleSystem<T>, p: &MomentumMultiplet<T>) -> Result<Complex<T>> {
    system.energy(p)
}

pub fn velocity_of_momenta<T: Real>(system: &ParticleSystem<T>, p: &MomentumMultiplet<T>) -> Result<Vec<Complex<T>>> {
    system.velocities(p)
}

pub fn momentum_of_velocities<T: Real>(system: &ParticleSystem<T>, v: &[Complex<T>]) -> Result<MomentumMultiplet<T>> {
    system.momenta(v)
}

pub fn mass_matrix<T: Real>(system: &ParticleSystem<T>, p: &MomentumMultiplet<T>) -> Result<MassMatrix<T>> {
    system.mass_matrix(p)
}
