//! Multi-particle pseudo-norm of an s-wave-reduced Gamow state:
//!
//! ```text
//! 𝒩(τ_R) = ∫_{τ<τ_R} u² dμ  +  i ∮_{τ=τ_R} u² / w  dμ_S,
//! w = 2T·⟨∇_p E_F | M | ∇_p E_F⟩,
//! ```
//!
//! with `dμ = Πₙ 4πrₙ² d^N r` on the positive orthant of radial space. The
//! volume term is evaluated by coarea, `∫ dτ ∮_{τ} (·) dS/|∇τ|`, over
//! constant-τ shells; for nonrelativistic dispersion every shell is an
//! orthant sector of the ellipsoid `Σ ½mₙrₙ² = E₀τ²`.
//!
//! The shells are labelled by τ at the real energy `E₀ = Re E_D`. For
//! nonrelativistic dispersion τ at `E_D` differs from it by a constant
//! phase, so the shell family is the same.

use std::sync::Arc;

use num_complex::Complex;
use crate::error::{Error, Result};
use crate::kinematics::ParticleSystem;
use crate::quadrature::{composite, pairwise_sum, panel_edges, par_composite, GaussLegendre, DEFAULT_ORDER};
use crate::scalar::{real, Real};
use crate::stationary_phase::velocity_metric;
use crate::tau_front::{orthant_direction, orthant_direction_jacobian, solve_front, tau_nonrel_closed, ComplexEnergy, RadialPoint};

/// Provenance of a reduced state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StateKind {
    SeparableProduct,
    PartitionIntegral,
    Custom,
}

/// Region excluded around the origin of radial space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InnerCutoff<T> {
    None,
    /// Exclude `τ < τ_in`.
    Tau(T),
}

/// An s-wave-reduced state `u(r)` with all angular factors absorbed.
///
/// States never include the `Πₙ 4πrₙ²` measure; the integrators apply it.
pub trait ReducedState<T: Real>: Sync {
    fn eval(&self, r: &[T]) -> Complex<T>;

    fn dimension(&self) -> usize;

    fn kind(&self) -> StateKind;

    fn inner_cutoff(&self) -> InnerCutoff<T> {
        InnerCutoff::None
    }

    /// Shell labels τ at which the state has a kink; panels are split there.
    fn tau_breakpoints(&self, _system: &ParticleSystem<T>, _e0: T) -> Vec<T> {
        Vec::new()
    }
}

/// Product of outgoing s-waves `Πₙ e^{ikₙrₙ}/rₙ`.
#[derive(Debug, Clone, PartialEq)]
pub struct OutgoingWaves<T> {
    pub wavenumbers: Vec<Complex<T>>,
    pub inner_tau: Option<T>,
}

impl<T: Real> OutgoingWaves<T> {
    /// Single outgoing wave `e^{ikr}/r`, integrated only for `τ ≥ inner_tau`.
    pub fn single(k: Complex<T>, inner_tau: T) -> Self {
        Self {
            wavenumbers: vec![k],
            inner_tau: Some(inner_tau),
        }
    }
}

impl<T: Real> ReducedState<T> for OutgoingWaves<T> {
    fn eval(&self, r: &[T]) -> Complex<T> {
        let i = Complex::new(T::zero(), T::one());
        self.wavenumbers
            .iter()
            .zip(r)
            .fold(real(T::one()), |acc, (&k, &x)| acc * (i * k * x).exp() / x)
    }

    fn dimension(&self) -> usize {
        self.wavenumbers.len()
    }

    fn kind(&self) -> StateKind {
        StateKind::SeparableProduct
    }

    fn inner_cutoff(&self) -> InnerCutoff<T> {
        self.inner_tau.map_or(InnerCutoff::None, InnerCutoff::Tau)
    }
}

/// Gamow state of the delta-shell oracle viewed as an `N = 1` reduced state.
#[derive(Debug, Clone, PartialEq)]
pub struct ShellState<T>(pub crate::delta_shell::ShellResonance<T>);

impl<T: Real> ReducedState<T> for ShellState<T> {
    fn eval(&self, r: &[T]) -> Complex<T> {
        crate::delta_shell::gamow_u_unchecked(&self.0, r[0])
    }

    fn dimension(&self) -> usize {
        1
    }

    fn kind(&self) -> StateKind {
        StateKind::Custom
    }

    fn tau_breakpoints(&self, system: &ParticleSystem<T>, e0: T) -> Vec<T> {
        vec![self.0.a * (system.masses()[0] / (e0 + e0)).sqrt()]
    }
}

/// A state given by a closure.
pub struct FnState<T, F> {
    dimension: usize,
    f: F,
    cutoff: InnerCutoff<T>,
}

impl<T: Real, F: Fn(&[T]) -> Complex<T> + Sync> FnState<T, F> {
    pub fn new(dimension: usize, f: F) -> Self {
        Self {
            dimension,
            f,
            cutoff: InnerCutoff::None,
        }
    }

    pub fn with_cutoff(mut self, cutoff: InnerCutoff<T>) -> Self {
        self.cutoff = cutoff;
        self
    }
}

impl<T: Real, F: Fn(&[T]) -> Complex<T> + Sync> ReducedState<T> for FnState<T, F> {
    fn eval(&self, r: &[T]) -> Complex<T> {
        (self.f)(r)
    }

    fn dimension(&self) -> usize {
        self.dimension
    }

    fn kind(&self) -> StateKind {
        StateKind::Custom
    }

    fn inner_cutoff(&self) -> InnerCutoff<T> {
        self.cutoff
    }
}

/// Energy-split weight `g(E₁)` of a partition-integral state.
#[derive(Clone)]
pub enum Profile<T> {
    /// `sin²(πE₁/E)`: vanishes smoothly at both ends of the split.
    SineSquared,
    /// Normalized Gaussian; approaches a single fixed split as the width shrinks.
    Gaussian { center: T, width: T },
    Custom(Arc<dyn Fn(T) -> T + Send + Sync>),
}

impl<T: Real> std::fmt::Debug for Profile<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Profile::SineSquared => write!(f, "SineSquared"),
            Profile::Gaussian { center, width } => write!(f, "Gaussian {{ center: {center}, width: {width} }}"),
            Profile::Custom(_) => write!(f, "Custom"),
        }
    }
}

/// Synthetic two-particle outgoing state built from the energy split
/// `E₁ + E₂ = E_D`:
///
/// ```text
/// u(r₁, r₂) = ∫₀^{E₀} g(E₁) · e^{ik₁r₁}/(k₁r₁) · e^{ik₂r₂}/(k₂r₂) dE₁,
/// k₁ = √(2m₁E₁),  k₂ = √(2m₂(E_D − E₁)).
/// ```
///
/// Each term solves the free equation at total energy `E_D`, and the
/// integral has stationary-phase asymptotics `∝ e^{i p_s·r}`.
#[derive(Debug, Clone)]
pub struct PartitionState<T: Real> {
    masses: [T; 2],
    energy: ComplexEnergy<T>,
    profile: Profile<T>,
    inner_tau: Option<T>,
    rule: GaussLegendre<T>,
}

impl<T: Real> PartitionState<T> {
    pub fn new(system: &ParticleSystem<T>, energy: ComplexEnergy<T>, profile: Profile<T>) -> Result<Self> {
        if system.len() != 2 {
            return Err(Error::Unsupported(format!(
                "partition states need exactly two particles, got {}",
                system.len()
            )));
        }
        if system.is_relativistic() {
            return Err(Error::Unsupported("partition states need nonrelativistic dispersion".into()));
        }
        if !(energy.e0() > T::zero()) {
            return Err(Error::InvalidEnergy(format!("real part {} must be positive", energy.e0())));
        }
        if let Profile::Gaussian { center, width } = profile {
            if !(width > T::zero() && center > T::zero() && center < energy.e0()) {
                return Err(Error::InvalidArgument(
                    "Gaussian profile must sit strictly inside (0, E) with positive width".into(),
                ));
            }
        }
        let m = system.masses();
        Ok(Self {
            masses: [m[0], m[1]],
            energy,
            profile,
            inner_tau: None,
            rule: GaussLegendre::new(DEFAULT_ORDER),
        })
    }

    /// Excludes `τ < inner_tau` from volume integrals.
    pub fn with_inner_tau(mut self, inner_tau: T) -> Self {
        self.inner_tau = Some(inner_tau);
        self
    }

    fn split_term(&self, e1: T, r1: T, r2: T) -> Complex<T> {
        let i = Complex::new(T::zero(), T::one());
        let two = T::lit(2.0);
        let k1 = (two * self.masses[0] * e1).sqrt();
        let k2 = ((self.energy.value() - e1) * (two * self.masses[1])).sqrt();
        (i * (k2 * r2 + k1 * r1)).exp() / (k2 * (k1 * r1 * r2))
    }

    fn integrate(&self, r1: T, r2: T) -> Complex<T> {
        let two = T::lit(2.0);
        let e = self.energy.e0();
        let k1_max = (two * self.masses[0] * e).sqrt();
        let k2_max = (self.energy.value() * (two * self.masses[1])).sqrt().norm();
        let phase_span = k1_max * r1 + k2_max * r2;
        let panels = (phase_span / T::PI()).ceil().to_usize().unwrap_or(1).max(4);
        match &self.profile {
            Profile::Gaussian { center, width } => {
                let lo = (*center - *width * T::lit(8.0)).max(T::zero());
                let hi = (*center + *width * T::lit(8.0)).min(e);
                let resolved = ((hi - lo) / (*width / two)).ceil().to_usize().unwrap_or(1);
                let norm = (*width * T::TAU().sqrt()).recip();
                composite(&self.rule, lo, hi, panels.max(resolved), |e1| {
                    let z = (e1 - *center) / *width;
                    self.split_term(e1, r1, r2) * (norm * (-z * z / two).exp())
                })
            }
            profile => {
                // E₁ = E sin²θ absorbs the 1/k₁ and (at Γ = 0) 1/k₂ endpoint
                // singularities into the Jacobian 2E sinθ cosθ.
                let i = Complex::new(T::zero(), T::one());
                let gap = self.energy.value() - e;
                let k1_unit = (two * self.masses[0] * e).sqrt();
                composite(&self.rule, T::zero(), T::FRAC_PI_2(), panels, |theta| {
                    let (s, c) = theta.sin_cos();
                    let e1 = e * s * s;
                    let g = match profile {
                        Profile::SineSquared => {
                            let x = (T::PI() * s * s).sin();
                            x * x
                        }
                        Profile::Custom(f) => f(e1),
                        Profile::Gaussian { .. } => unreachable!(),
                    };
                    let k1 = k1_unit * s;
                    let k2 = ((gap + e * c * c) * (two * self.masses[1])).sqrt();
                    (i * (k2 * r2 + k1 * r1)).exp() * (g * two * e * c / (k1_unit * r1 * r2)) / k2
                })
            }
        }
    }
}

impl<T: Real> ReducedState<T> for PartitionState<T> {
    fn eval(&self, r: &[T]) -> Complex<T> {
        self.integrate(r[0], r[1])
    }

    fn dimension(&self) -> usize {
        2
    }

    fn kind(&self) -> StateKind {
        StateKind::PartitionIntegral
    }

    fn inner_cutoff(&self) -> InnerCutoff<T> {
        self.inner_tau.map_or(InnerCutoff::None, InnerCutoff::Tau)
    }
}

/// Evaluates the partition-integral state at one radial point.
pub fn partition_state_eval<T: Real>(
    r: &RadialPoint<T>,
    system: &ParticleSystem<T>,
    e_d: &ComplexEnergy<T>,
    profile: Profile<T>,
) -> Result<Complex<T>> {
    let state = PartitionState::new(system, *e_d, profile)?;
    if r.as_slice().iter().any(|&x| x <= T::zero()) {
        return Err(Error::InvalidRadialPoint("partition states need rₙ > 0"));
    }
    let value = state.eval(r.as_slice());
    if !(value.re.is_finite() && value.im.is_finite()) {
        return Err(Error::NonConvergence {
            what: "partition-state quadrature",
            iterations: 0,
            residual: f64::NAN,
        });
    }
    Ok(value)
}

/// Surface weight `w = 2T·⟨∇_p E_F | M | ∇_p E_F⟩` from the generic front
/// solution (any dispersion).
pub fn surface_weight<T: Real>(
    r: &RadialPoint<T>,
    system: &ParticleSystem<T>,
    e: &ComplexEnergy<T>,
) -> Result<Complex<T>> {
    let front = solve_front(r, system, e)?;
    let metric = velocity_metric(r, system, e)?;
    Ok(front.t_norm * metric * T::lit(2.0))
}

/// Nonrelativistic closed form `w = (2/τ)·√(Σₙ (mₙrₙ)²)`.
pub fn weight_nonrel_closed<T: Real>(
    r: &RadialPoint<T>,
    system: &ParticleSystem<T>,
    e: &ComplexEnergy<T>,
) -> Result<Complex<T>> {
    let tau = tau_nonrel_closed(r, system, e)?;
    Ok(real(T::lit(2.0) * mass_weighted_radius(system.masses(), r.as_slice())) / tau)
}

fn mass_weighted_radius<T: Real>(masses: &[T], r: &[T]) -> T {
    masses
        .iter()
        .zip(r)
        .fold(T::zero(), |acc, (&m, &x)| acc + m * x * m * x)
        .sqrt()
}

/// Measure applied by the integrators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Measure {
    /// `Πₙ 4πrₙ² d^N r`, the s-wave reduction of `d^{3N}x`.
    #[default]
    Reduced,
    /// Plain `d^N r`; for testing the quadrature itself.
    Plain,
}

/// Quadrature controls for shell integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Resolution<T> {
    /// Largest τ-panel width (order-16 Gauss–Legendre per panel).
    pub tau_step: T,
    /// Gauss–Legendre panels per hyperspherical angle on `[0, π/2]`.
    pub angle_panels: usize,
    pub measure: Measure,
}

impl<T: Real> Resolution<T> {
    pub fn new(tau_step: T, angle_panels: usize) -> Self {
        Self {
            tau_step,
            angle_panels,
            measure: Measure::Reduced,
        }
    }

    /// τ-step of a quarter wavelength of `e^{2iS}` divided by `oversample`.
    pub fn for_energy(e: &ComplexEnergy<T>, oversample: T, angle_panels: usize) -> Self {
        Self::new(quarter_wavelength(e) / oversample, angle_panels)
    }

    pub fn with_measure(mut self, measure: Measure) -> Self {
        self.measure = measure;
        self
    }

    /// Halved τ-step and doubled angular panels.
    pub fn refined(self) -> Self {
        Self {
            tau_step: self.tau_step / T::lit(2.0),
            angle_panels: self.angle_panels * 2,
            measure: self.measure,
        }
    }
}

/// Quarter wavelength in τ of `e^{2iS}`: nonrelativistic `S = 2τ√(E₀E_D)`.
pub fn quarter_wavelength<T: Real>(e: &ComplexEnergy<T>) -> T {
    let rate = (e.value() * e.e0()).sqrt().re;
    T::PI() / (T::lit(8.0) * rate)
}

/// Angular quadrature on the unit-τ shell `rₙ = cₙωₙ(θ)`, `cₙ = √(2E₀/mₙ)`.
struct ShellNodes<T> {
    points: Vec<Vec<T>>,
    /// Surface element times quadrature weight.
    surface: Vec<T>,
    /// Same, divided by `|∇τ|` for coarea.
    volume: Vec<T>,
}

impl<T: Real> ShellNodes<T> {
    fn new(system: &ParticleSystem<T>, e0: T, angle_panels: usize) -> Self {
        let n = system.len();
        let two_e0 = e0 + e0;
        let scale: Vec<T> = system.masses().iter().map(|&m| (two_e0 / m).sqrt()).collect();
        // |∇τ| at τ = 1 is |m∘r| / (2E₀).
        let inv_grad = |p: &[T]| two_e0 / mass_weighted_radius(system.masses(), p);
        if n == 1 {
            let p = vec![scale[0]];
            let g = inv_grad(&p);
            return Self {
                points: vec![p],
                surface: vec![T::one()],
                volume: vec![g],
            };
        }
        let rule = GaussLegendre::<T>::new(DEFAULT_ORDER);
        let edges = panel_edges(&[T::zero(), T::FRAC_PI_2()], T::FRAC_PI_2() / T::from_count(angle_panels.max(1)));
        let axis: Vec<(T, T)> = edges.windows(2).flat_map(|w| rule.mapped(w[0], w[1]).collect::<Vec<_>>()).collect();
        let dims = n - 1;
        let total = axis.len().pow(dims as u32);
        let mut nodes = Self {
            points: Vec::with_capacity(total),
            surface: Vec::with_capacity(total),
            volume: Vec::with_capacity(total),
        };
        let mut idx = vec![0usize; dims];
        for _ in 0..total {
            let angles: Vec<T> = idx.iter().map(|&j| axis[j].0).collect();
            let weight = idx.iter().fold(T::one(), |acc, &j| acc * axis[j].1);
            let omega = orthant_direction(&angles);
            let jac = orthant_direction_jacobian(&angles);
            let gram: Vec<Vec<T>> = (0..dims)
                .map(|a| {
                    (0..dims)
                        .map(|b| (0..n).fold(T::zero(), |acc, row| acc + scale[row] * jac[row][a] * scale[row] * jac[row][b]))
                        .collect()
                })
                .collect();
            let ds = determinant(gram).max(T::zero()).sqrt() * weight;
            let p: Vec<T> = omega.iter().zip(&scale).map(|(&w, &c)| w * c).collect();
            nodes.volume.push(ds * inv_grad(&p));
            nodes.surface.push(ds);
            nodes.points.push(p);
            for slot in idx.iter_mut().rev() {
                *slot += 1;
                if *slot < axis.len() {
                    break;
                }
                *slot = 0;
            }
        }
        nodes
    }
}

fn determinant<T: Real>(mut a: Vec<Vec<T>>) -> T {
    let n = a.len();
    let mut det = T::one();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&x, &y| a[x][col].abs().partial_cmp(&a[y][col].abs()).unwrap_or(std::cmp::Ordering::Equal))
            .unwrap_or(col);
        if a[pivot][col] == T::zero() {
            return T::zero();
        }
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        det = det * a[col][col];
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            let pivot_row = a[col].clone();
            for (x, &v) in a[row].iter_mut().zip(&pivot_row).skip(col) {
                *x = *x - f * v;
            }
        }
    }
    det
}

/// Shared setup for the shell integrators.
struct Shells<'a, T: Real, S: ?Sized> {
    state: &'a S,
    system: &'a ParticleSystem<T>,
    energy: ComplexEnergy<T>,
    resolution: Resolution<T>,
    nodes: ShellNodes<T>,
    rule: GaussLegendre<T>,
}

impl<'a, T: Real, S: ReducedState<T> + ?Sized> Shells<'a, T, S> {
    fn new(
        state: &'a S,
        system: &'a ParticleSystem<T>,
        energy: &ComplexEnergy<T>,
        resolution: Resolution<T>,
    ) -> Result<Self> {
        if system.is_relativistic() {
            return Err(Error::Unsupported(
                "pseudo-norm integrals are nonrelativistic only: the relativistic surface weight normalization is an open question".into(),
            ));
        }
        system.check_len(state.dimension())?;
        if !(energy.e0() > T::zero()) {
            return Err(Error::InvalidEnergy(format!("real part {} must be positive", energy.e0())));
        }
        let limit = quarter_wavelength(energy);
        if !(resolution.tau_step > T::zero()) || resolution.tau_step > limit * T::lit(1.0 + 1e-9) {
            return Err(Error::UnderResolved {
                spacing: resolution.tau_step.as_f64(),
                limit: limit.as_f64(),
            });
        }
        if resolution.angle_panels == 0 {
            return Err(Error::InvalidArgument("angle_panels must be at least 1".into()));
        }
        Ok(Self {
            state,
            system,
            energy: *energy,
            resolution,
            nodes: ShellNodes::new(system, energy.e0(), resolution.angle_panels),
            rule: GaussLegendre::new(DEFAULT_ORDER),
        })
    }

    fn inner_tau(&self) -> T {
        match self.state.inner_cutoff() {
            InnerCutoff::None => T::zero(),
            InnerCutoff::Tau(t) => t,
        }
    }

    fn density(&self, r: &[T]) -> Complex<T> {
        let u = self.state.eval(r);
        let mu = match self.resolution.measure {
            Measure::Reduced => r.iter().fold(T::one(), |acc, &x| acc * T::lit(4.0) * T::PI() * x * x),
            Measure::Plain => T::one(),
        };
        u * u * mu
    }

    /// `∮_{τ} F dS/|∇τ|` (or `∮ F/w dS` when `weighted`).
    fn shell(&self, tau: T, weighted: bool) -> Complex<T> {
        let scale = tau.powi(self.system.len() as i32 - 1);
        let two = T::lit(2.0);
        let terms: Vec<Complex<T>> = (0..self.nodes.points.len())
            .map(|j| {
                let r: Vec<T> = self.nodes.points[j].iter().map(|&c| c * tau).collect();
                let f = self.density(&r);
                if weighted {
                    // w = 2|m∘r|/τ_D with τ_D = τ√(E₀/E_D).
                    let tau_d = (self.energy.value().inv() * self.energy.e0()).sqrt() * tau;
                    let w = real(two * mass_weighted_radius(self.system.masses(), &r)) / tau_d;
                    f * self.nodes.surface[j] / w
                } else {
                    f * self.nodes.volume[j]
                }
            })
            .collect();
        pairwise_sum(&terms) * scale
    }

    fn breaks(&self, lo: T, hi: T) -> Vec<T> {
        let mut breaks = vec![lo];
        let mut extra: Vec<T> = self
            .state
            .tau_breakpoints(self.system, self.energy.e0())
            .into_iter()
            .filter(|&b| b > lo && b < hi)
            .collect();
        extra.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
        breaks.extend(extra);
        breaks.push(hi);
        breaks
    }

    fn volume_between(&self, lo: T, hi: T) -> Complex<T> {
        if hi <= lo {
            return real(T::zero());
        }
        let edges = panel_edges(&self.breaks(lo, hi), self.resolution.tau_step);
        par_composite(&self.rule, &edges, |tau| self.shell(tau, false))
    }

    fn check_outer(&self, tau_r: T) -> Result<()> {
        if !(tau_r > self.inner_tau()) || !tau_r.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "τ_R = {tau_r} must exceed the inner cutoff {}",
                self.inner_tau()
            )));
        }
        Ok(())
    }
}

/// `∫_{τ<τ_R} u² dμ` over the positive orthant by coarea.
pub fn volume_integral<T: Real, S: ReducedState<T> + ?Sized>(
    state: &S,
    system: &ParticleSystem<T>,
    e: &ComplexEnergy<T>,
    tau_r: T,
    resolution: Resolution<T>,
) -> Result<Complex<T>> {
    let shells = Shells::new(state, system, e, resolution)?;
    shells.check_outer(tau_r)?;
    Ok(shells.volume_between(shells.inner_tau(), tau_r))
}

/// `∮_{τ=τ_R} u²/w dμ_S` with `dS` the Euclidean measure of the level set.
pub fn surface_integral<T: Real, S: ReducedState<T> + ?Sized>(
    state: &S,
    system: &ParticleSystem<T>,
    e: &ComplexEnergy<T>,
    tau_r: T,
    resolution: Resolution<T>,
) -> Result<Complex<T>> {
    let shells = Shells::new(state, system, e, resolution)?;
    shells.check_outer(tau_r)?;
    Ok(shells.shell(tau_r, true))
}

/// `𝒩(τ_R) = volume + i·surface`.
pub fn pseudo_norm<T: Real, S: ReducedState<T> + ?Sized>(
    state: &S,
    system: &ParticleSystem<T>,
    e_d: &ComplexEnergy<T>,
    tau_r: T,
    resolution: Resolution<T>,
) -> Result<Complex<T>> {
    let shells = Shells::new(state, system, e_d, resolution)?;
    shells.check_outer(tau_r)?;
    let i = Complex::new(T::zero(), T::one());
    Ok(shells.volume_between(shells.inner_tau(), tau_r) + i * shells.shell(tau_r, true))
}

/// Volume, surface and pseudo-norm along an increasing τ_R grid.
#[derive(Debug, Clone, PartialEq)]
pub struct NormScan<T> {
    pub tau_grid: Vec<T>,
    pub volume_terms: Vec<Complex<T>>,
    pub surface_terms: Vec<Complex<T>>,
    pub norms: Vec<Complex<T>>,
    /// Inner cutoff τ used for the volume, if any.
    pub inner_tau: Option<T>,
    /// `|∫_{τ_in/2}^{τ_in} u² dμ| / |𝒩|` at the last grid point.
    pub cutoff_sensitivity: Option<T>,
}

impl<T: Real> NormScan<T> {
    /// `|𝒩ᵢ₊₁ − 𝒩ᵢ| / |𝒩ᵢ|` along the grid.
    pub fn relative_steps(&self) -> Vec<T> {
        self.norms.windows(2).map(|w| (w[1] - w[0]).norm() / w[0].norm()).collect()
    }

    /// Largest pairwise distance over the modulus of the mean.
    pub fn relative_variation(values: &[Complex<T>]) -> T {
        let mean = values.iter().fold(real(T::zero()), |acc, &v| acc + v) / T::from_count(values.len());
        let spread = values
            .iter()
            .flat_map(|a| values.iter().map(move |b| (*a - *b).norm()))
            .fold(T::zero(), T::max);
        spread / mean.norm()
    }
}

/// Pseudo-norm at every τ_R of an increasing grid; the volume is
/// accumulated shell by shell.
pub fn norm_convergence_scan<T: Real, S: ReducedState<T> + ?Sized>(
    state: &S,
    system: &ParticleSystem<T>,
    e_d: &ComplexEnergy<T>,
    tau_grid: &[T],
    resolution: Resolution<T>,
) -> Result<NormScan<T>> {
    if tau_grid.is_empty() {
        return Err(Error::InvalidArgument("empty τ_R grid".into()));
    }
    if tau_grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidArgument("τ_R grid must be strictly increasing".into()));
    }
    let shells = Shells::new(state, system, e_d, resolution)?;
    shells.check_outer(tau_grid[0])?;
    let inner = shells.inner_tau();
    let i = Complex::new(T::zero(), T::one());

    let mut volume_terms = Vec::with_capacity(tau_grid.len());
    let mut acc = real(T::zero());
    let mut lo = inner;
    for &tau in tau_grid {
        acc = acc + shells.volume_between(lo, tau);
        volume_terms.push(acc);
        lo = tau;
    }
    let surface_terms: Vec<Complex<T>> = tau_grid.iter().map(|&t| shells.shell(t, true)).collect();
    let norms: Vec<Complex<T>> = volume_terms.iter().zip(&surface_terms).map(|(&v, &s)| v + i * s).collect();

    let (inner_tau, cutoff_sensitivity) = match state.inner_cutoff() {
        InnerCutoff::Tau(t) => {
            let sliver = shells.volume_between(t / T::lit(2.0), t);
            let last = norms[norms.len() - 1];
            (Some(t), Some(sliver.norm() / last.norm()))
        }
        InnerCutoff::None => (None, None),
    };
    Ok(NormScan {
        tau_grid: tau_grid.to_vec(),
        volume_terms,
        surface_terms,
        norms,
        inner_tau,
        cutoff_sensitivity,
    })
}
