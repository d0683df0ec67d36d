//! Exactly solvable single-particle resonance: an s-wave particle of mass
//! `m` scattering off the shell potential `V(r) = (g/2m)·δ(r − a)`.
//!
//! Inside the shell the regular solution is `sin(kr)`, outside the outgoing
//! one is `e^{ikr}`; a resonance is a complex `k` at which the two match:
//!
//! ```text
//! f(k) = e^{2ika} − 1 + 2ik/g = 0,   Im k < 0.
//! ```
//!
//! Every other quantity (Gamow state, pseudo-norm, Green's function,
//! residue) is elementary, which makes this model the reference that the
//! multi-particle machinery is checked against at `N = 1`.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::quadrature::{panel_edges, par_composite, GaussLegendre, DEFAULT_ORDER};
use crate::scalar::{finite, real, Real};
use crate::tau_front::ComplexEnergy;

const NEWTON_ITERATIONS: usize = 100;
const CONTOUR_NODES: usize = 64;

/// A decaying resonance of the delta-shell model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShellResonance<T> {
    /// Shell strength `g = 2mλ` (inverse length).
    pub g: T,
    /// Shell radius.
    pub a: T,
    pub m: T,
    /// Pole wavenumber `k_D`, `Im k_D < 0`.
    pub k_pole: Complex<T>,
    pub branch: usize,
}

impl<T: Real> ShellResonance<T> {
    /// `E_D = k_D² / 2m`.
    pub fn energy(&self) -> Complex<T> {
        self.k_pole * self.k_pole / (self.m + self.m)
    }

    pub fn complex_energy(&self) -> Result<ComplexEnergy<T>> {
        ComplexEnergy::from_complex(self.energy())
    }

    pub fn e0(&self) -> T {
        self.energy().re
    }

    pub fn gamma(&self) -> T {
        -(self.energy().im + self.energy().im)
    }

    pub fn pole_residual(&self) -> T {
        pole_function(self.k_pole, self.g, self.a).norm()
    }

    /// Exterior amplitude `C` in `u = C e^{ikr}/r`, fixed by continuity at `a`.
    pub fn exterior_amplitude(&self) -> Complex<T> {
        let ka = self.k_pole * self.a;
        ka.sin() * (-i_unit::<T>() * ka).exp()
    }
}

fn i_unit<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::one())
}

/// `f(k) = e^{2ika} − 1 + 2ik/g`.
pub fn pole_function<T: Real>(k: Complex<T>, g: T, a: T) -> Complex<T> {
    let i = i_unit::<T>();
    (i * k * (a + a)).exp() - T::one() + i * k * (T::lit(2.0) / g)
}

fn pole_derivative<T: Real>(k: Complex<T>, g: T, a: T) -> Complex<T> {
    let i = i_unit::<T>();
    i * (a + a) * (i * k * (a + a)).exp() + i * (T::lit(2.0) / g)
}

/// Complex Newton on the pole condition from the impenetrable-shell seed
/// `k₀ = branch·π/a`.
pub fn find_pole<T: Real>(g: T, a: T, m: T, branch: usize) -> Result<ShellResonance<T>> {
    if !(g > T::zero()) || !g.is_finite() {
        return Err(Error::InvalidArgument(format!("shell strength must be positive, got {g}")));
    }
    if !(a > T::zero()) || !(m > T::zero()) {
        return Err(Error::InvalidArgument("shell radius and mass must be positive".into()));
    }
    if branch == 0 {
        return Err(Error::InvalidArgument("branches are numbered from 1".into()));
    }
    let mut k = real(T::from_count(branch) * T::PI() / a);
    for _ in 0..NEWTON_ITERATIONS {
        let step = pole_function(k, g, a) / pole_derivative(k, g, a);
        if !finite(step) {
            break;
        }
        k = k - step;
        if step.norm() <= T::epsilon() * k.norm() {
            break;
        }
    }
    let residual = pole_function(k, g, a).norm();
    if !(residual <= T::residual_tolerance()) {
        return Err(Error::NonConvergence {
            what: "delta-shell pole",
            iterations: NEWTON_ITERATIONS,
            residual: residual.as_f64(),
        });
    }
    if !(k.im < T::zero()) || !(k.re > T::zero()) {
        return Err(Error::WrongBranch {
            re: k.re.as_f64(),
            im: k.im.as_f64(),
        });
    }
    Ok(ShellResonance {
        g,
        a,
        m,
        k_pole: k,
        branch,
    })
}

/// Reduced Gamow state: `sin(kr)/r` inside the shell, `C e^{ikr}/r` outside.
pub fn gamow_u<T: Real>(res: &ShellResonance<T>, r: T) -> Result<Complex<T>> {
    if !(r > T::zero()) {
        return Err(Error::InvalidArgument(format!("radius must be positive, got {r}")));
    }
    Ok(gamow_u_unchecked(res, r))
}

pub(crate) fn gamow_u_unchecked<T: Real>(res: &ShellResonance<T>, r: T) -> Complex<T> {
    let k = res.k_pole;
    if r <= res.a {
        (k * r).sin() / r
    } else {
        res.exterior_amplitude() * (i_unit::<T>() * k * r).exp() / r
    }
}

/// Pseudo-norm `∫₀^R u² 4πr² dr + (i/2k)·4πR²u²(R)` from the elementary
/// antiderivatives. The two `R`-dependent pieces cancel identically.
pub fn pseudo_norm_1p<T: Real>(res: &ShellResonance<T>, big_r: T) -> Result<Complex<T>> {
    if !(big_r > res.a) {
        return Err(Error::InvalidArgument(format!(
            "outer radius {big_r} must exceed the shell radius {}",
            res.a
        )));
    }
    let (k, a) = (res.k_pole, res.a);
    let i = i_unit::<T>();
    let four_pi = T::lit(4.0) * T::PI();
    let c2 = res.exterior_amplitude() * res.exterior_amplitude();
    let interior = real(a / T::lit(2.0)) - (k * (a + a)).sin() / (k * T::lit(4.0));
    let exterior = c2 * ((i * k * (big_r + big_r)).exp() - (i * k * (a + a)).exp()) / (i * k * T::lit(2.0));
    let volume = (interior + exterior) * four_pi;
    Ok(volume + surface_term_1p(res, big_r))
}

fn surface_term_1p<T: Real>(res: &ShellResonance<T>, big_r: T) -> Complex<T> {
    let k = res.k_pole;
    let u = gamow_u_unchecked(res, big_r);
    let four_pi_r2 = T::lit(4.0) * T::PI() * big_r * big_r;
    i_unit::<T>() * u * u * four_pi_r2 / (k + k)
}

/// Same pseudo-norm with the volume integral done by Gauss–Legendre panels
/// no wider than a quarter wavelength of `e^{2ikr}`.
pub fn pseudo_norm_1p_quadrature<T: Real>(res: &ShellResonance<T>, big_r: T) -> Result<Complex<T>> {
    if !(big_r > res.a) {
        return Err(Error::InvalidArgument(format!(
            "outer radius {big_r} must exceed the shell radius {}",
            res.a
        )));
    }
    let rule = GaussLegendre::new(DEFAULT_ORDER);
    let width = T::PI() / (T::lit(8.0) * res.k_pole.norm());
    let edges = panel_edges(&[T::zero(), res.a, big_r], width);
    let four_pi = T::lit(4.0) * T::PI();
    let volume = par_composite(&rule, &edges, |r| {
        let u = gamow_u_unchecked(res, r);
        u * u * (four_pi * r * r)
    });
    Ok(volume + surface_term_1p(res, big_r))
}

fn regular_solution<T: Real>(k: Complex<T>, g: T, a: T, r: T) -> Complex<T> {
    let inner = (k * r).sin();
    if r <= a {
        inner
    } else {
        inner + (k * a).sin() * (k * (r - a)).sin() * g / k
    }
}

fn outgoing_solution<T: Real>(k: Complex<T>, g: T, a: T, r: T) -> Complex<T> {
    let i = i_unit::<T>();
    let outer = (i * k * r).exp();
    if r >= a {
        outer
    } else {
        outer - (i * k * a).exp() * (k * (r - a)).sin() * g / k
    }
}

/// Isotropic part of the outgoing Green's function of `(E − H)G = δ³`:
///
/// ```text
/// G(r, r′) = m φ_reg(r<) φ_out(r>) / (2π W r r′)
/// ```
///
/// with `k = √(2mE)` on the principal branch and `W` the Wronskian of the
/// regular and outgoing radial solutions.
pub fn green_function<T: Real>(g: T, a: T, m: T, e: Complex<T>, r: T, r_prime: T) -> Result<Complex<T>> {
    if !(r > T::zero() && r_prime > T::zero()) {
        return Err(Error::InvalidArgument("radii must be positive".into()));
    }
    if !(a > T::zero() && m > T::zero()) || !g.is_finite() {
        return Err(Error::InvalidArgument("invalid shell parameters".into()));
    }
    let k = (e * (m + m)).sqrt();
    let wronskian = if g == T::zero() {
        -k
    } else {
        -k - (k * a).sin() * (i_unit::<T>() * k * a).exp() * g
    };
    let scale = k.norm() + g.abs();
    if !(wronskian.norm() > T::epsilon() * T::lit(16.0) * scale) {
        return Err(Error::AtPole {
            wronskian: wronskian.norm().as_f64(),
        });
    }
    let (lesser, greater) = if r <= r_prime { (r, r_prime) } else { (r_prime, r) };
    let numerator = regular_solution(k, g, a, lesser) * outgoing_solution(k, g, a, greater) * m;
    Ok(numerator / (wronskian * (T::TAU() * r * r_prime)))
}

/// Distance from `E_D` to the nearest other singularity: the neighbouring
/// resonances and the branch point at `E = 0`.
fn nearest_singularity<T: Real>(res: &ShellResonance<T>) -> T {
    let e = res.energy();
    let mut distance = e.norm();
    for branch in [res.branch.wrapping_sub(1), res.branch + 1] {
        if branch == 0 || branch == usize::MAX {
            continue;
        }
        if let Ok(other) = find_pole(res.g, res.a, res.m, branch) {
            distance = distance.min((other.energy() - e).norm());
        }
    }
    distance
}

/// Default contour radius: `min(Γ/4, distance to nearest singularity / 4)`.
pub fn contour_radius<T: Real>(res: &ShellResonance<T>) -> T {
    (res.gamma() / T::lit(4.0)).min(nearest_singularity(res) / T::lit(4.0))
}

/// Residue of [`green_function`] at `E_D` from a 64-node trapezoid contour,
/// paired with the factorized form `u(r)u(r′)/𝒩`.
pub fn residue_check<T: Real>(res: &ShellResonance<T>, r: T, r_prime: T) -> Result<(Complex<T>, Complex<T>)> {
    residue_check_with_radius(res, r, r_prime, contour_radius(res))
}

pub fn residue_check_with_radius<T: Real>(
    res: &ShellResonance<T>,
    r: T,
    r_prime: T,
    radius: T,
) -> Result<(Complex<T>, Complex<T>)> {
    let ten_a = res.a * T::lit(10.0);
    if !(r > res.a && r < ten_a && r_prime > res.a && r_prime < ten_a) {
        return Err(Error::InvalidArgument(format!(
            "radii must lie in (a, 10a) = ({}, {ten_a})",
            res.a
        )));
    }
    if !(radius > T::zero()) {
        return Err(Error::InvalidArgument("contour radius must be positive".into()));
    }
    let distance = nearest_singularity(res);
    if radius >= distance {
        return Err(Error::ContourEnclosesPole {
            radius: radius.as_f64(),
            distance: distance.as_f64(),
        });
    }
    let centre = res.energy();
    let mut terms = Vec::with_capacity(CONTOUR_NODES);
    for j in 0..CONTOUR_NODES {
        let theta = T::TAU() * T::from_count(j) / T::from_count(CONTOUR_NODES);
        let offset = Complex::from_polar(radius, theta);
        let gf = green_function(res.g, res.a, res.m, centre + offset, r, r_prime)?;
        terms.push(gf * offset);
    }
    let residue = crate::quadrature::pairwise_sum(&terms) / T::from_count(CONTOUR_NODES);
    let norm = pseudo_norm_1p(res, ten_a)?;
    let factorized = gamow_u_unchecked(res, r) * gamow_u_unchecked(res, r_prime) / norm;
    Ok((residue, factorized))
}
