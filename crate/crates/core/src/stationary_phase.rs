//! Stationary-phase momenta, the action `S = p_s·r`, and the leading-edge
//! time factor of a narrow resonance.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::kinematics::{MomentumMultiplet, ParticleSystem};
use crate::quadrature::{par_composite, GaussLegendre, DEFAULT_ORDER};
use crate::scalar::{real, Real};
use crate::tau_front::{grad_tau, solve_front, tau_implicit, ComplexEnergy, RadialPoint};

/// Stationary momenta `p_s` (velocities `r/τ`) and the action `S = Σ p_s,ₙ rₙ`.
pub fn stationary_momenta<T: Real>(
    r: &RadialPoint<T>,
    system: &ParticleSystem<T>,
    e: &ComplexEnergy<T>,
) -> Result<(MomentumMultiplet<T>, Complex<T>)> {
    let front = solve_front(r, system, e)?;
    Ok((front.momenta, front.action))
}

fn action<T: Real>(r: &RadialPoint<T>, system: &ParticleSystem<T>, e: T) -> Result<T> {
    let (_, s) = stationary_momenta(r, system, &ComplexEnergy::real(e)?)?;
    Ok(s.re)
}

fn central_difference<T: Real>(r: &RadialPoint<T>, system: &ParticleSystem<T>, e: T, h: T) -> Result<T> {
    let de = e * h;
    let lower = e - de;
    if !(lower > system.threshold()) {
        return Err(Error::StepTooLarge(format!(
            "E(1 - h) = {lower} falls below threshold {}",
            system.threshold()
        )));
    }
    Ok((action(r, system, e + de)? - action(r, system, lower)?) / (de + de))
}

/// Central-difference `∂S/∂E` at real `E` with relative step `h`, returned
/// alongside τ. The derivative should equal τ.
///
/// The estimate is repeated at `h/2`; if the two disagree by more than
/// `1e-3` the step is reported as too large.
pub fn action_energy_derivative<T: Real>(
    r: &RadialPoint<T>,
    system: &ParticleSystem<T>,
    e: T,
    h: T,
) -> Result<(T, T)> {
    if !(h > T::zero() && h < T::lit(0.5)) {
        return Err(Error::StepTooLarge(format!("relative step {h} outside (0, 0.5)")));
    }
    let energy = ComplexEnergy::real(e)?;
    let tau = tau_implicit(r, system, &energy)?.re;
    let coarse = central_difference(r, system, e, h)?;
    let fine = central_difference(r, system, e, h / T::lit(2.0))?;
    if (coarse - fine).abs() > T::lit(1e-3) * fine.abs() {
        return Err(Error::StepTooLarge(format!(
            "estimates at h and h/2 disagree: {coarse} vs {fine}"
        )));
    }
    Ok((coarse, tau))
}

/// Reconstructs `rₘ` through the mass matrix:
/// `(Σₖ rₖ ∂E_F/∂vₖ) · Σₙ (∂τ/∂rₙ) (M⁻¹)ₙₘ`.
pub fn radial_reconstruction<T: Real>(
    r: &RadialPoint<T>,
    system: &ParticleSystem<T>,
    e: &ComplexEnergy<T>,
) -> Result<Vec<Complex<T>>> {
    let front = solve_front(r, system, e)?;
    let de_dv = system.energy_velocity_gradient(&front.velocities)?;
    let (grad, _) = grad_tau(r, system, e)?;
    let mass = system.mass_matrix(&front.momenta)?;
    let prefactor = r
        .as_slice()
        .iter()
        .zip(&de_dv)
        .fold(real(T::zero()), |acc, (&x, &d)| acc + d * x);
    // M⁻¹ is diagonal, so the inner sum over n keeps only n = m.
    Ok(grad
        .iter()
        .zip(&mass.inverse)
        .map(|(&g, &minv)| prefactor * g * minv)
        .collect())
}

/// `⟨∇_p E_F | M | ∇_p E_F⟩ = Σₙ Mₙₙ vₙ²` at the stationary point.
pub fn velocity_metric<T: Real>(
    r: &RadialPoint<T>,
    system: &ParticleSystem<T>,
    e: &ComplexEnergy<T>,
) -> Result<Complex<T>> {
    let front = solve_front(r, system, e)?;
    let mass = system.mass_matrix(&front.momenta)?;
    Ok(front
        .velocities
        .iter()
        .zip(&mass.diagonal)
        .fold(real(T::zero()), |acc, (&v, &m)| acc + m * v * v))
}

/// The causal leading-edge factor at one time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WavefrontFactor<T> {
    pub t: T,
    pub tau0: T,
    pub energy: ComplexEnergy<T>,
    pub value: Complex<T>,
}

impl<T: Real> WavefrontFactor<T> {
    pub fn evaluate(t: T, tau0: T, energy: ComplexEnergy<T>) -> Self {
        Self {
            t,
            tau0,
            energy,
            value: wavefront_factor(t, tau0, &energy),
        }
    }
}

/// `exp(−i(E₀ − iΓ/2)(t − τ₀))·θ(t − τ₀)`, with time-independent phases dropped.
pub fn wavefront_factor<T: Real>(t: T, tau0: T, energy: &ComplexEnergy<T>) -> Complex<T> {
    let delay = t - tau0;
    if delay < T::zero() {
        return real(T::zero());
    }
    (Complex::new(T::zero(), -T::one()) * energy.value() * delay).exp()
}

/// Widest panel for the oracle quadrature at this delay: `π/(8·max(1,|t−τ₀|))`,
/// further capped at `Γ/2` so the near-real pole is resolved.
fn oracle_panel_width<T: Real>(delay: T, gamma: T) -> T {
    let oscillation = T::PI() / (T::lit(8.0) * delay.abs().max(T::one()));
    oscillation.min(gamma / T::lit(2.0))
}

/// Node count satisfying the panel-width rule of the oracle over `[−cutoff, cutoff]`.
pub fn oracle_node_budget<T: Real>(t: T, tau0: T, energy: &ComplexEnergy<T>, cutoff: T) -> usize {
    let width = oracle_panel_width(t - tau0, energy.gamma());
    let panels = (T::lit(2.0) * cutoff / width).ceil().to_usize().unwrap_or(1).max(1);
    panels * DEFAULT_ORDER
}

/// Direct quadrature of the energy-space integrand
/// `e^{−iδE(t−τ₀)} / (δE + iΓ/2)` over `[−cutoff, cutoff]`, multiplied by
/// `e^{−iE₀(t−τ₀)}` and normalized by `−2πi`. Converges to
/// [`wavefront_factor`] as the cutoff grows.
///
/// `nodes` is the total node budget, split into order-16 Gauss–Legendre
/// panels; a budget whose mean spacing exceeds `π/(4|t−τ₀|)` is rejected.
pub fn wavefront_factor_oracle<T: Real>(
    t: T,
    tau0: T,
    energy: &ComplexEnergy<T>,
    cutoff: T,
    nodes: usize,
) -> Result<Complex<T>> {
    let gamma = energy.gamma();
    if !(gamma > T::zero()) {
        return Err(Error::InvalidArgument("oracle needs a positive width".into()));
    }
    if !(cutoff > gamma) {
        return Err(Error::InvalidArgument(format!(
            "cutoff {cutoff} must exceed the width {gamma}"
        )));
    }
    if nodes < DEFAULT_ORDER {
        return Err(Error::InvalidArgument(format!("node budget {nodes} below one panel")));
    }
    let delay = t - tau0;
    let spacing = T::lit(2.0) * cutoff / T::from_count(nodes);
    if spacing * delay.abs() > T::FRAC_PI_4() {
        return Err(Error::UnderResolved {
            spacing: spacing.as_f64(),
            limit: (T::FRAC_PI_4() / delay.abs()).as_f64(),
        });
    }
    let panels = nodes / DEFAULT_ORDER;
    let rule = GaussLegendre::new(DEFAULT_ORDER);
    let step = T::lit(2.0) * cutoff / T::from_count(panels);
    let edges: Vec<T> = (0..=panels)
        .map(|j| {
            if j == panels {
                cutoff
            } else {
                -cutoff + step * T::from_count(j)
            }
        })
        .collect();
    let half_width = Complex::new(T::zero(), gamma / T::lit(2.0));
    let integral = par_composite(&rule, &edges, |x| {
        Complex::new(T::zero(), -x * delay).exp() / (real(x) + half_width)
    });
    let carrier = Complex::new(T::zero(), -energy.e0() * delay).exp();
    let norm = Complex::new(T::zero(), -T::TAU());
    Ok(carrier * integral / norm)
}
