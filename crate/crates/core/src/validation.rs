//! Self-check suites over seeded random instances, for `gamow validate`.
//!
//! Every check reports its worst observed discrepancy against a fixed
//! tolerance. The instance stream is a ChaCha8 generator with a fixed seed,
//! so outcomes are reproducible.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::delta_shell::{find_pole, gamow_u, pseudo_norm_1p, residue_check};
use crate::error::Result;
use crate::kinematics::{Dispersion, ParticleSystem};
use crate::pseudo_norm::{
    norm_convergence_scan, pseudo_norm, quarter_wavelength, surface_weight, weight_nonrel_closed, NormScan,
    PartitionState, Profile, Resolution, ShellState,
};
use crate::scalar::rel_diff;
use crate::stationary_phase::{
    action_energy_derivative, oracle_node_budget, radial_reconstruction, wavefront_factor, wavefront_factor_oracle,
};
use crate::tau_front::{energy_residual, tau_implicit, tau_nonrel_closed, ComplexEnergy, RadialPoint};

const SEED: u64 = 0x0067_616d_6f77;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    /// Seconds: reduced instance counts, no wavefront oracle or N = 2 scan.
    Fast,
    All,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    /// Worst discrepancy observed, in the units of `tolerance`.
    pub worst: f64,
    pub tolerance: f64,
}

impl Check {
    fn bound(name: &'static str, worst: f64, tolerance: f64) -> Self {
        Self {
            name,
            passed: worst <= tolerance,
            worst,
            tolerance,
        }
    }

    fn from_result(name: &'static str, tolerance: f64, run: impl FnOnce() -> Result<f64>) -> Self {
        match run() {
            Ok(worst) => Self::bound(name, worst, tolerance),
            Err(_) => Self {
                name,
                passed: false,
                worst: f64::INFINITY,
                tolerance,
            },
        }
    }
}

struct Instance {
    system: ParticleSystem<f64>,
    r: RadialPoint<f64>,
    energy: ComplexEnergy<f64>,
}

fn instance(rng: &mut ChaCha8Rng, dispersion: Dispersion, complex: bool) -> Instance {
    let n = rng.gen_range(1..=4);
    let masses: Vec<f64> = (0..n).map(|_| rng.gen_range(0.2..5.0)).collect();
    let r: Vec<f64> = (0..n).map(|_| rng.gen_range(0.1..10.0)).collect();
    let base = match dispersion {
        Dispersion::Nonrelativistic => 1.0,
        Dispersion::Relativistic => masses.iter().sum(),
    };
    let e0 = base * rng.gen_range(1.1..5.0);
    let gamma = if complex { rng.gen_range(0.0..0.2) * e0 } else { 0.0 };
    Instance {
        system: ParticleSystem::new(masses, dispersion).expect("sampled masses are positive"),
        r: RadialPoint::new(r).expect("sampled radii are positive"),
        energy: ComplexEnergy::new(e0, gamma).expect("sampled width is non-negative"),
    }
}

const DISPERSIONS: [Dispersion; 2] = [Dispersion::Nonrelativistic, Dispersion::Relativistic];

fn over_instances(count: usize, complex: bool, mut f: impl FnMut(&Instance) -> Result<f64>) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut worst = 0.0f64;
    for d in DISPERSIONS {
        for _ in 0..count {
            worst = worst.max(f(&instance(&mut rng, d, complex))?);
        }
    }
    Ok(worst)
}

fn homogeneity(count: usize) -> Check {
    Check::from_result("tau homogeneity", 1e-10, || {
        over_instances(count, true, |x| {
            let tau = tau_implicit(&x.r, &x.system, &x.energy)?;
            let mut worst = 0.0f64;
            for lambda in [0.5, 2.0, 10.0] {
                let scaled = tau_implicit(&x.r.scaled(lambda)?, &x.system, &x.energy)?;
                worst = worst.max((scaled - tau * lambda).norm() / (lambda * tau.norm()));
            }
            Ok(worst)
        })
    })
}

fn solver_residual(count: usize) -> Check {
    Check::from_result("tau solver residual", 1e-12, || {
        over_instances(count, true, |x| {
            let tau = tau_implicit(&x.r, &x.system, &x.energy)?;
            Ok(energy_residual(&x.r, &x.system, &x.energy, tau)? / x.energy.value().norm())
        })
    })
}

fn closed_form(count: usize) -> Check {
    Check::from_result("closed-form tau agreement", 1e-10, || {
        over_instances(count, true, |x| {
            if x.system.is_relativistic() {
                return Ok(0.0);
            }
            let a = tau_implicit(&x.r, &x.system, &x.energy)?;
            let b = tau_nonrel_closed(&x.r, &x.system, &x.energy)?;
            Ok(rel_diff(a, b))
        })
    })
}

fn action_derivative(count: usize) -> Check {
    Check::from_result("action energy derivative", 1e-6, || {
        over_instances(count, false, |x| {
            let (d, tau) = action_energy_derivative(&x.r, &x.system, x.energy.e0(), 1e-5)?;
            Ok((d - tau).abs() / tau.abs())
        })
    })
}

fn reconstruction(count: usize) -> Check {
    Check::from_result("radial reconstruction", 1e-8, || {
        over_instances(count, true, |x| {
            let rec = radial_reconstruction(&x.r, &x.system, &x.energy)?;
            Ok(rec
                .iter()
                .zip(x.r.as_slice())
                .map(|(a, &b)| (a - b).norm() / b)
                .fold(0.0, f64::max))
        })
    })
}

fn weights(count: usize) -> Check {
    Check::from_result("surface weight closed form", 1e-10, || {
        over_instances(count, true, |x| {
            if x.system.is_relativistic() {
                return Ok(0.0);
            }
            let a = surface_weight(&x.r, &x.system, &x.energy)?;
            let b = weight_nonrel_closed(&x.r, &x.system, &x.energy)?;
            let mut worst = rel_diff(a, b);
            if x.system.len() == 1 {
                let k = (x.energy.value() * (2.0 * x.system.masses()[0])).sqrt();
                // 1e-12 against the 1e-10 budget of this check.
                worst = worst.max(rel_diff(a, k * 2.0) * 100.0);
            }
            Ok(worst)
        })
    })
}

fn wavefront_oracle() -> Check {
    Check::from_result("wavefront oracle", 2e-3, || {
        let e = ComplexEnergy::new(1.0, 0.2)?;
        let tau0 = 3.0;
        let span = 5.0 / e.gamma();
        let grid: Vec<f64> = (-10..=10).filter(|&j| j != 0).map(|j| tau0 + span * f64::from(j) / 10.0).collect();
        let sup = |cutoff: f64| -> Result<f64> {
            let mut worst = 0.0f64;
            for &t in &grid {
                let nodes = oracle_node_budget(t, tau0, &e, cutoff);
                let err = (wavefront_factor_oracle(t, tau0, &e, cutoff, nodes)? - wavefront_factor(t, tau0, &e)).norm();
                worst = worst.max(err);
            }
            Ok(worst)
        };
        let (a, b, c) = (sup(100.0 * e.gamma())?, sup(200.0 * e.gamma())?, sup(400.0 * e.gamma())?);
        let early_is_zero = grid.iter().filter(|&&t| t < tau0).all(|&t| wavefront_factor(t, tau0, &e).norm() == 0.0);
        Ok(if c < b && b < a && early_is_zero { c } else { f64::INFINITY })
    })
}

fn delta_shell_checks(out: &mut Vec<Check>) {
    let cases = [10.0, 20.0, 100.0].iter().flat_map(|&g| (1..=3).map(move |b| (g, b)));
    let mut pole = 0.0f64;
    let mut flat = 0.0f64;
    let mut residue = 0.0f64;
    let mut failed = false;
    for (g, branch) in cases {
        let outcome: Result<()> = (|| {
            let res = find_pole::<f64>(g, 1.0, 1.0, branch)?;
            pole = pole.max(if res.k_pole.im < 0.0 { res.pole_residual() } else { f64::INFINITY });
            let base = pseudo_norm_1p(&res, 5.0)?;
            for big_r in [6.0, 10.0, 20.0] {
                flat = flat.max(rel_diff(pseudo_norm_1p(&res, big_r)?, base));
            }
            let (measured, factorized) = residue_check(&res, 2.0, 3.5)?;
            residue = residue.max(rel_diff(measured, factorized));
            gamow_u(&res, 2.0)?;
            Ok(())
        })();
        failed |= outcome.is_err();
    }
    let penalty = if failed { f64::INFINITY } else { 0.0 };
    out.push(Check::bound("delta-shell pole residual", pole.max(penalty), 1e-12));
    out.push(Check::bound("delta-shell norm radius independence", flat.max(penalty), 1e-8));
    out.push(Check::bound("delta-shell residue", residue.max(penalty), 1e-6));
}

fn keystone() -> Check {
    Check::from_result("multi-particle norm at N=1", 1e-8, || {
        let mut worst = 0.0f64;
        for (g, branch) in [(10.0, 1), (20.0, 2), (100.0, 3)] {
            let res = find_pole::<f64>(g, 1.0, 1.0, branch)?;
            let e = res.complex_energy()?;
            let system = ParticleSystem::nonrelativistic(vec![res.m])?;
            let tau_r = 6.0 * (res.m / (2.0 * e.e0())).sqrt();
            let multi = pseudo_norm(&ShellState(res), &system, &e, tau_r, Resolution::for_energy(&e, 1.0, 1))?;
            worst = worst.max(rel_diff(multi, pseudo_norm_1p(&res, 6.0)?));
        }
        Ok(worst)
    })
}

fn partition_convergence(out: &mut Vec<Check>) {
    let outcome: Result<(f64, bool)> = (|| {
        let system = ParticleSystem::nonrelativistic(vec![1.0, 1.0])?;
        let e = ComplexEnergy::new(1.0, 0.1)?;
        let t0 = 8.0;
        let state = PartitionState::new(&system, e, Profile::SineSquared)?.with_inner_tau(1e-3 * t0);
        let res = Resolution::for_energy(&e, 1.0, 4);
        let q = quarter_wavelength(&e);
        let grid = |step: f64| -> Vec<f64> { (0..).map(|j| t0 + step * f64::from(j)).take_while(|&t| t <= 2.0 * t0).collect() };
        let dense = norm_convergence_scan(&state, &system, &e, &grid(q), res)?;
        let ratio = NormScan::relative_variation(&dense.volume_terms) / NormScan::relative_variation(&dense.norms);
        let periodic = norm_convergence_scan(&state, &system, &e, &grid(4.0 * q), res)?;
        let steps = periodic.relative_steps();
        Ok((ratio, steps.windows(2).all(|w| w[1] < w[0])))
    })();
    let (ratio, monotone) = outcome.unwrap_or((0.0, false));
    // Reported as 1/ratio so that smaller is better, like every other check.
    out.push(Check::bound("N=2 norm vs volume variation", 1.0 / ratio, 0.1));
    out.push(Check::bound(
        "N=2 scan steps shrink",
        if monotone { 0.0 } else { 1.0 },
        0.0,
    ));
}

/// Runs a suite and returns one outcome per check, in a fixed order.
pub fn run(suite: Suite) -> Vec<Check> {
    let count = match suite {
        Suite::Fast => 20,
        Suite::All => 100,
    };
    let mut out = vec![
        homogeneity(count),
        solver_residual(count),
        closed_form(count),
        action_derivative(count),
        reconstruction(count),
        weights(count),
    ];
    if suite == Suite::All {
        out.push(wavefront_oracle());
    }
    delta_shell_checks(&mut out);
    out.push(keystone());
    if suite == Suite::All {
        partition_convergence(&mut out);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fast_suite_passes() {
        let checks = run(Suite::Fast);
        assert!(checks.len() >= 9);
        for c in &checks {
            assert!(c.passed, "{c:?}");
        }
    }

    #[test]
    fn full_suite_passes() {
        let checks = run(Suite::All);
        assert_eq!(checks.len(), run(Suite::Fast).len() + 3);
        for c in &checks {
            assert!(c.passed, "{c:?}");
        }
    }

    #[test]
    fn instances_are_reproducible() {
        let mut a = ChaCha8Rng::seed_from_u64(SEED);
        let mut b = ChaCha8Rng::seed_from_u64(SEED);
        for d in DISPERSIONS {
            let (x, y) = (instance(&mut a, d, true), instance(&mut b, d, true));
            assert_eq!(x.r, y.r);
            assert_eq!(x.system.masses(), y.system.masses());
        }
    }
}
