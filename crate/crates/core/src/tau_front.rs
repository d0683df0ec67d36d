//! Wavefront time τ, its gradient, and constant-τ fronts.
//!
//! τ solves `E_F(v = r/τ) = E`: the common travel time that makes particles
//! moving at constant speeds `rₙ/τ` carry total energy `E`. The leading edge
//! of the decay products is a level set of τ.

use num_complex::Complex;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::kinematics::{lorentz_gamma, Dispersion, MomentumMultiplet, ParticleSystem};
use crate::scalar::{finite, is_real, real, Real};

const MAX_ITERATIONS: usize = 200;

/// Multiplet of radial coordinates in the positive orthant.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialPoint<T>(Vec<T>);

impl<T: Real> RadialPoint<T> {
    pub fn new(r: Vec<T>) -> Result<Self> {
        if r.is_empty() {
            return Err(Error::InvalidRadialPoint("empty"));
        }
        if r.iter().any(|x| !x.is_finite() || *x < T::zero()) {
            return Err(Error::InvalidRadialPoint("coordinates must be finite and non-negative"));
        }
        if r.iter().all(|x| *x == T::zero()) {
            return Err(Error::InvalidRadialPoint("all coordinates are zero"));
        }
        Ok(Self(r))
    }

    pub fn as_slice(&self) -> &[T] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max_coordinate(&self) -> T {
        self.0.iter().fold(T::zero(), |a, &b| a.max(b))
    }

    /// `λ·r` for `λ > 0`.
    pub fn scaled(&self, lambda: T) -> Result<Self> {
        Self::new(self.0.iter().map(|&x| x * lambda).collect())
    }

    pub fn into_inner(self) -> Vec<T> {
        self.0
    }
}

/// Resonance energy `E_D = E₀ − iΓ/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexEnergy<T> {
    e0: T,
    gamma: T,
}

impl<T: Real> ComplexEnergy<T> {
    pub fn new(e0: T, gamma: T) -> Result<Self> {
        if !e0.is_finite() || !gamma.is_finite() {
            return Err(Error::InvalidEnergy("non-finite energy".into()));
        }
        if gamma < T::zero() {
            return Err(Error::InvalidEnergy(format!("negative width {gamma}")));
        }
        Ok(Self { e0, gamma })
    }

    pub fn real(e: T) -> Result<Self> {
        Self::new(e, T::zero())
    }

    /// From `E₀ + i·Im`, requiring `Im ≤ 0`.
    pub fn from_complex(z: Complex<T>) -> Result<Self> {
        Self::new(z.re, -(z.im + z.im))
    }

    pub fn e0(&self) -> T {
        self.e0
    }

    pub fn gamma(&self) -> T {
        self.gamma
    }

    pub fn value(&self) -> Complex<T> {
        Complex::new(self.e0, -self.gamma / T::lit(2.0))
    }

    pub fn is_real(&self) -> bool {
        self.gamma == T::zero()
    }
}

/// Everything known about the stationary point at one radial point.
#[derive(Debug, Clone, PartialEq)]
pub struct FrontSolution<T> {
    pub tau: Complex<T>,
    pub velocities: Vec<Complex<T>>,
    /// Stationary-phase momenta `p_s`.
    pub momenta: MomentumMultiplet<T>,
    /// `S = p_s·r`.
    pub action: Complex<T>,
    pub grad_tau: Vec<Complex<T>>,
    /// `T = √(Σ (∂τ/∂rₙ)²)`, principal branch.
    pub t_norm: Complex<T>,
    /// Lorentz factors; `None` under nonrelativistic dispersion.
    pub rho: Option<Vec<Complex<T>>>,
}

fn check_solvable<T: Real>(r: &RadialPoint<T>, system: &ParticleSystem<T>, e: &ComplexEnergy<T>) -> Result<()> {
    system.check_len(r.len())?;
    if system.is_relativistic() {
        if let Some(index) = system.first_massless() {
            return Err(Error::Massless { index });
        }
    }
    let threshold = system.threshold();
    if !(e.e0() > threshold) {
        return match system.dispersion() {
            Dispersion::Nonrelativistic => Err(Error::InvalidEnergy(format!(
                "real part {} must be positive",
                e.e0()
            ))),
            Dispersion::Relativistic => Err(Error::BelowThreshold {
                energy: e.e0().as_f64(),
                threshold: threshold.as_f64(),
            }),
        };
    }
    Ok(())
}

/// `|E_F(r/τ) − E|`.
pub fn energy_residual<T: Real>(
    r: &RadialPoint<T>,
    system: &ParticleSystem<T>,
    e: &ComplexEnergy<T>,
    tau: Complex<T>,
) -> Result<T> {
    let v: Vec<Complex<T>> = r.as_slice().iter().map(|&x| real(x) / tau).collect();
    Ok((system.energy_of_velocities(&v)? - e.value()).norm())
}

/// Closed form `τ = √(Σ ½mₙrₙ² / E)` for nonrelativistic dispersion.
pub fn tau_nonrel_closed<T: Real>(
    r: &RadialPoint<T>,
    system: &ParticleSystem<T>,
    e: &ComplexEnergy<T>,
) -> Result<Complex<T>> {
    if system.is_relativistic() {
        return Err(Error::Unsupported(
            "closed-form τ requires nonrelativistic dispersion".into(),
        ));
    }
    check_solvable(r, system, e)?;
    let half_moment = system
        .masses()
        .iter()
        .zip(r.as_slice())
        .fold(T::zero(), |acc, (&m, &x)| acc + m * x * x)
        / T::lit(2.0);
    Ok((real(half_moment) / e.value()).sqrt())
}

/// Energy carried at travel time `tau`, and its τ-derivative.
fn energy_and_slope<T: Real>(r: &[T], system: &ParticleSystem<T>, tau: T) -> (T, T) {
    let mut energy = T::zero();
    let mut slope = T::zero();
    for (&m, &x) in system.masses().iter().zip(r) {
        let v = x / tau;
        let (e, de_dv) = match system.dispersion() {
            Dispersion::Nonrelativistic => (m * v * v / T::lit(2.0), m * v),
            Dispersion::Relativistic => {
                if v >= T::one() {
                    return (T::infinity(), T::neg_infinity());
                }
                let g = (T::one() - v * v).sqrt().recip();
                (m * g, m * v * g * g * g)
            }
        };
        energy = energy + e;
        slope = slope - de_dv * x / (tau * tau);
    }
    (energy, slope)
}

/// Safeguarded Newton on the real axis. `E_F(r/τ)` decreases monotonically
/// from `+∞` at the lower bound (0, or `max rₙ` for relativistic
/// dispersion) to the threshold as `τ → ∞`.
fn solve_real<T: Real>(r: &RadialPoint<T>, system: &ParticleSystem<T>, e: T) -> Result<T> {
    let rs = r.as_slice();
    let stop = T::epsilon() * T::lit(4.0) * e.abs();
    let mut lo = match system.dispersion() {
        Dispersion::Nonrelativistic => T::zero(),
        Dispersion::Relativistic => r.max_coordinate(),
    };
    let mut hi = r.max_coordinate().max(T::min_positive_value());
    let mut expansions = 0;
    loop {
        let (f, _) = energy_and_slope(rs, system, hi);
        if f - e < T::zero() {
            break;
        }
        lo = hi;
        hi = hi + hi;
        expansions += 1;
        if expansions > 2000 || !hi.is_finite() {
            return Err(Error::NonConvergence {
                what: "τ bracket expansion",
                iterations: expansions,
                residual: f64::NAN,
            });
        }
    }

    let mut x = hi;
    let mut best = (T::infinity(), x);
    for _ in 0..MAX_ITERATIONS {
        let (energy, slope) = energy_and_slope(rs, system, x);
        let f = energy - e;
        if f.abs() < best.0 {
            best = (f.abs(), x);
        }
        if f.abs() <= stop {
            return Ok(x);
        }
        if f > T::zero() {
            lo = x;
        } else {
            hi = x;
        }
        let newton = x - f / slope;
        x = if newton.is_finite() && newton > lo && newton < hi {
            newton
        } else {
            lo + (hi - lo) / T::lit(2.0)
        };
        if hi - lo <= T::epsilon() * hi {
            break;
        }
    }
    let (residual, x) = best;
    if residual <= T::residual_tolerance() * e.abs() {
        Ok(x)
    } else {
        Err(Error::NonConvergence {
            what: "τ (real Newton/bisection)",
            iterations: MAX_ITERATIONS,
            residual: (residual / e.abs()).as_f64(),
        })
    }
}

/// Energy and τ-derivative along complex τ.
fn energy_and_slope_complex<T: Real>(
    r: &[T],
    system: &ParticleSystem<T>,
    tau: Complex<T>,
) -> (Complex<T>, Complex<T>) {
    let mut energy = real(T::zero());
    let mut slope = real(T::zero());
    for (&m, &x) in system.masses().iter().zip(r) {
        let v = real(x) / tau;
        let (e, de_dv) = match system.dispersion() {
            Dispersion::Nonrelativistic => (v * v * (m / T::lit(2.0)), v * m),
            Dispersion::Relativistic => {
                let g = lorentz_gamma(v);
                (g * m, v * g * g * g * m)
            }
        };
        energy = energy + e;
        slope = slope - de_dv * x / (tau * tau);
    }
    (energy, slope)
}

fn solve_complex<T: Real>(r: &RadialPoint<T>, system: &ParticleSystem<T>, e: Complex<T>, seed: T) -> Result<Complex<T>> {
    let rs = r.as_slice();
    let scale = e.norm();
    let stop = T::epsilon() * T::lit(4.0) * scale;
    let mut tau = real(seed);
    let mut best = (T::infinity(), tau);
    for _ in 0..MAX_ITERATIONS {
        let (energy, slope) = energy_and_slope_complex(rs, system, tau);
        let f = energy - e;
        if !finite(f) {
            break;
        }
        if f.norm() < best.0 {
            best = (f.norm(), tau);
        }
        if f.norm() <= stop {
            break;
        }
        let step = f / slope;
        tau = tau - step;
        if step.norm() <= T::epsilon() * tau.norm() {
            let (energy, _) = energy_and_slope_complex(rs, system, tau);
            let f = (energy - e).norm();
            if f < best.0 {
                best = (f, tau);
            }
            break;
        }
    }
    let (residual, tau) = best;
    if residual <= T::residual_tolerance() * scale && tau.re > T::zero() {
        Ok(tau)
    } else {
        Err(Error::NonConvergence {
            what: "τ (complex Newton)",
            iterations: MAX_ITERATIONS,
            residual: (residual / scale).as_f64(),
        })
    }
}

/// Generic solver for `E_F(r/τ) = E`, both dispersions, real or complex `E`.
/// Complex energies are reached by complex Newton seeded from the real-part
/// solution.
pub fn tau_implicit<T: Real>(
    r: &RadialPoint<T>,
    system: &ParticleSystem<T>,
    e: &ComplexEnergy<T>,
) -> Result<Complex<T>> {
    check_solvable(r, system, e)?;
    let seed = solve_real(r, system, e.e0())?;
    if e.is_real() {
        Ok(real(seed))
    } else {
        solve_complex(r, system, e.value(), seed)
    }
}

fn gradient_at<T: Real>(
    r: &RadialPoint<T>,
    system: &ParticleSystem<T>,
    tau: Complex<T>,
) -> Result<(Vec<Complex<T>>, Complex<T>)> {
    let v: Vec<Complex<T>> = r.as_slice().iter().map(|&x| real(x) / tau).collect();
    let de_dv = system.energy_velocity_gradient(&v)?;
    let denom = de_dv
        .iter()
        .zip(&v)
        .fold(real(T::zero()), |acc, (&d, &vn)| acc + d * vn);
    let grad: Vec<Complex<T>> = de_dv.iter().map(|&d| d / denom).collect();
    let t_norm = grad.iter().fold(real(T::zero()), |acc, &g| acc + g * g).sqrt();
    Ok((grad, t_norm))
}

/// `∂τ/∂rₙ` by implicit differentiation of `E_F(r/τ) = E`, and
/// `T = √(Σ (∂τ/∂rₙ)²)`.
pub fn grad_tau<T: Real>(
    r: &RadialPoint<T>,
    system: &ParticleSystem<T>,
    e: &ComplexEnergy<T>,
) -> Result<(Vec<Complex<T>>, Complex<T>)> {
    let tau = tau_implicit(r, system, e)?;
    gradient_at(r, system, tau)
}

/// Solves for τ and collects velocities, stationary momenta, action, ∇τ and T.
pub fn solve_front<T: Real>(
    r: &RadialPoint<T>,
    system: &ParticleSystem<T>,
    e: &ComplexEnergy<T>,
) -> Result<FrontSolution<T>> {
    let tau = tau_implicit(r, system, e)?;
    let velocities: Vec<Complex<T>> = r.as_slice().iter().map(|&x| real(x) / tau).collect();
    let momenta = system.momenta(&velocities)?;
    let action = momenta
        .as_slice()
        .iter()
        .zip(r.as_slice())
        .fold(real(T::zero()), |acc, (&p, &x)| acc + p * x);
    let (grad_tau, t_norm) = gradient_at(r, system, tau)?;
    let rho = system
        .is_relativistic()
        .then(|| velocities.iter().map(|&v| lorentz_gamma(v)).collect());
    Ok(FrontSolution {
        tau,
        velocities,
        momenta,
        action,
        grad_tau,
        t_norm,
        rho,
    })
}

/// `ρₙ = 1/√(1 − (rₙ/τ)²)`.
pub fn lorentz_factors<T: Real>(
    r: &[T],
    tau: Complex<T>,
    system: &ParticleSystem<T>,
) -> Result<Vec<Complex<T>>> {
    if !system.is_relativistic() {
        return Err(Error::Unsupported(
            "Lorentz factors need relativistic dispersion".into(),
        ));
    }
    system.check_len(r.len())?;
    r.iter()
        .enumerate()
        .map(|(index, &x)| {
            if is_real(tau) && x >= tau.re {
                return Err(Error::Superluminal {
                    index,
                    velocity: (x / tau.re).as_f64(),
                });
            }
            Ok(lorentz_gamma(real(x) / tau))
        })
        .collect()
}

/// Unit direction in the positive orthant from hyperspherical angles
/// `θ ∈ [0, π/2]^{N−1}`.
pub fn orthant_direction<T: Real>(angles: &[T]) -> Vec<T> {
    let n = angles.len() + 1;
    let mut omega = Vec::with_capacity(n);
    let mut sin_prod = T::one();
    for &theta in angles {
        omega.push(sin_prod * theta.cos());
        sin_prod = sin_prod * theta.sin();
    }
    omega.push(sin_prod);
    omega
}

/// `∂ωₙ/∂θⱼ`, row `n`, column `j`.
pub fn orthant_direction_jacobian<T: Real>(angles: &[T]) -> Vec<Vec<T>> {
    let n = angles.len() + 1;
    let mut jac = vec![vec![T::zero(); angles.len()]; n];
    for (row, jac_row) in jac.iter_mut().enumerate() {
        for (j, entry) in jac_row.iter_mut().enumerate() {
            if j > row {
                continue;
            }
            let mut value = T::one();
            for (i, &theta) in angles.iter().enumerate().take(row.min(angles.len()) + 1) {
                let factor = if i < row {
                    if i == j {
                        theta.cos()
                    } else {
                        theta.sin()
                    }
                } else if i == j {
                    -theta.sin()
                } else {
                    theta.cos()
                };
                value = value * factor;
            }
            *entry = value;
        }
    }
    jac
}

/// Angle tuples of the deterministic direction grid: `count` equally spaced
/// values (endpoints included) per angle, so `count^{N−1}` directions.
pub fn direction_grid<T: Real>(n: usize, count: usize) -> Vec<Vec<T>> {
    let dims = n.saturating_sub(1);
    if dims == 0 {
        return vec![Vec::new()];
    }
    let half_pi = T::FRAC_PI_2();
    let values: Vec<T> = if count <= 1 {
        vec![half_pi / T::lit(2.0)]
    } else {
        (0..count)
            .map(|j| half_pi * T::from_count(j) / T::from_count(count - 1))
            .collect()
    };
    let mut grid = vec![Vec::new()];
    for _ in 0..dims {
        grid = grid
            .into_iter()
            .flat_map(|prefix: Vec<T>| {
                values.iter().map(move |&v| {
                    let mut next = prefix.clone();
                    next.push(v);
                    next
                })
            })
            .collect();
    }
    grid
}

/// Points of the front `τ(r) = tau_r` for real `E`, one per direction of
/// [`direction_grid`], in grid order.
pub fn front_surface_sample<T: Real>(
    system: &ParticleSystem<T>,
    e: T,
    tau_r: T,
    count: usize,
) -> Result<Vec<RadialPoint<T>>> {
    if !(tau_r > T::zero()) || !tau_r.is_finite() {
        return Err(Error::InvalidArgument(format!("front time must be positive, got {tau_r}")));
    }
    ComplexEnergy::real(e)?;
    if system.is_relativistic() {
        if let Some(index) = system.first_massless() {
            return Err(Error::Massless { index });
        }
    }
    if !(e > system.threshold()) {
        return Err(Error::BelowThreshold {
            energy: e.as_f64(),
            threshold: system.threshold().as_f64(),
        });
    }
    direction_grid::<T>(system.len(), count)
        .par_iter()
        .map(|angles| {
            let omega = orthant_direction(angles);
            let r = match system.dispersion() {
                Dispersion::Nonrelativistic => system
                    .masses()
                    .iter()
                    .zip(&omega)
                    .map(|(&m, &w)| tau_r * (T::lit(2.0) * e / m).sqrt() * w)
                    .collect(),
                Dispersion::Relativistic => relativistic_front_point(system, e, tau_r, &omega)?,
            };
            RadialPoint::new(r)
        })
        .collect()
}

/// Bisection on the radial scale `s` of `r = s·ω` for the relativistic front.
fn relativistic_front_point<T: Real>(system: &ParticleSystem<T>, e: T, tau_r: T, omega: &[T]) -> Result<Vec<T>> {
    let w_max = omega.iter().fold(T::zero(), |a, &b| a.max(b));
    let excess = |s: T| -> T {
        let mut total = -e;
        for (&m, &w) in system.masses().iter().zip(omega) {
            let v = s * w / tau_r;
            if v >= T::one() {
                return T::infinity();
            }
            total = total + m / (T::one() - v * v).sqrt();
        }
        total
    };
    let mut lo = T::zero();
    let mut hi = tau_r / w_max;
    for _ in 0..MAX_ITERATIONS {
        let mid = lo + (hi - lo) / T::lit(2.0);
        if mid <= lo || mid >= hi {
            break;
        }
        if excess(mid) < T::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let s = if excess(hi).abs() < excess(lo).abs() { hi } else { lo };
    Ok(omega.iter().map(|&w| s * w).collect())
}

/// Relative energy residual `|E_F(r/tau_r) − E| / |E|` of a front point.
pub fn front_residual<T: Real>(system: &ParticleSystem<T>, e: T, tau_r: T, r: &RadialPoint<T>) -> Result<T> {
    let energy = ComplexEnergy::real(e)?;
    Ok(energy_residual(r, system, &energy, real(tau_r))? / e.abs())
}
