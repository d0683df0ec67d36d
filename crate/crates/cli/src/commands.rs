use std::path::{Path, PathBuf};

use gamow_core::delta_shell::find_pole;
use gamow_core::pseudo_norm::{
    norm_convergence_scan, surface_weight, OutgoingWaves, PartitionState, ReducedState, Resolution, ShellState,
};
use gamow_core::tau_front::{front_residual, front_surface_sample, solve_front, tau_implicit};
use gamow_core::validation::{self, Suite};
use gamow_core::{Complex64, ComplexEnergy, RadialPoint};
use serde_json::json;

use crate::config::{RunConfig, StateConfig};
use crate::output::{write_front, write_norm, write_poles, FrontRow, PoleRow};
use crate::Failure;

const FRONT_TOLERANCE: f64 = 1e-10;

fn complex(z: Complex64) -> serde_json::Value {
    json!({ "re": z.re, "im": z.im })
}

pub fn front(config: &Path, out: Option<PathBuf>) -> Result<(), Failure> {
    let cfg = RunConfig::load(config)?;
    let out = cfg.output(out)?;
    let system = cfg.system()?;
    let energy = cfg.energy()?;
    if !energy.is_real() {
        return Err(Failure::config("front sampling needs a real energy (im = 0)"));
    }
    let tau_r = cfg.tau_r.ok_or_else(|| Failure::config("missing field `tau_R`"))?;
    let points = front_surface_sample(&system, energy.e0(), tau_r, cfg.count.unwrap_or(5))?;

    let mut rows = Vec::with_capacity(points.len());
    let mut worst = 0.0f64;
    for r in &points {
        let tau = tau_implicit(r, &system, &energy)?;
        let residual = front_residual(&system, energy.e0(), tau_r, r)?;
        worst = worst.max(residual);
        rows.push(FrontRow {
            r: r.as_slice().to_vec(),
            tau: tau.re,
            residual,
        });
    }
    write_front(&out, system.len(), &rows)?;
    if !(worst <= FRONT_TOLERANCE) {
        return Err(Failure::validation(format!(
            "front residual {worst:e} exceeds {FRONT_TOLERANCE:e}"
        )));
    }
    Ok(())
}

pub fn norm(config: &Path, out: Option<PathBuf>) -> Result<(), Failure> {
    let cfg = RunConfig::load(config)?;
    let out = cfg.output(out)?;
    let system = cfg.system()?;
    let grid = match (&cfg.tau_grid, cfg.tau_r) {
        (Some(g), None) => g.values()?,
        (None, Some(t)) => vec![t],
        (Some(_), Some(_)) => return Err(Failure::config("give either `tau_R` or `tau_grid`, not both")),
        (None, None) => return Err(Failure::config("missing `tau_grid`")),
    };
    let smallest = grid.iter().copied().fold(f64::INFINITY, f64::min);
    let state_cfg = cfg.state.as_ref().ok_or_else(|| Failure::config("missing field `state`"))?;
    let single = |what: &str| -> Result<f64, Failure> {
        match system.masses() {
            [m] => Ok(*m),
            _ => Err(Failure::config(format!("{what} states need exactly one mass"))),
        }
    };

    let (state, energy): (Box<dyn ReducedState<f64>>, ComplexEnergy<f64>) = match state_cfg {
        StateConfig::Partition { profile, inner_epsilon } => {
            let energy = cfg.energy()?;
            if !(*inner_epsilon > 0.0 && *inner_epsilon < 1.0) {
                return Err(Failure::config("inner_epsilon must lie in (0, 1)"));
            }
            let state = PartitionState::new(&system, energy, profile.to_profile())?.with_inner_tau(inner_epsilon * smallest);
            (Box::new(state), energy)
        }
        StateConfig::Shell { g, a, branch } => {
            if cfg.energy.is_some() {
                return Err(Failure::config("shell states take their energy from the pole; drop `energy`"));
            }
            let res = find_pole(*g, *a, single("shell")?, *branch)?;
            let energy = res.complex_energy()?;
            (Box::new(ShellState(res)), energy)
        }
        StateConfig::Outgoing { inner_radius } => {
            let m = single("outgoing")?;
            let energy = cfg.energy()?;
            if !(*inner_radius > 0.0) {
                return Err(Failure::config("inner_radius must be positive"));
            }
            let k = (energy.value() * (2.0 * m)).sqrt();
            let inner_tau = inner_radius * (m / (2.0 * energy.e0())).sqrt();
            (Box::new(OutgoingWaves::single(k, inner_tau)), energy)
        }
    };
    if !(cfg.resolution.tau_oversample >= 1.0) {
        return Err(Failure::config("resolution.tau_oversample must be at least 1"));
    }
    let resolution = Resolution::for_energy(&energy, cfg.resolution.tau_oversample, cfg.resolution.angle_panels);
    let scan = norm_convergence_scan(state.as_ref(), &system, &energy, &grid, resolution)?;
    write_norm(&out, &scan)?;
    println!(
        "{}",
        json!({
            "points": scan.tau_grid.len(),
            "inner_tau": scan.inner_tau,
            "cutoff_sensitivity": scan.cutoff_sensitivity,
        })
    );
    Ok(())
}

fn parse_branches(text: &str) -> Result<(usize, usize), Failure> {
    let bad = || Failure::config(format!("--branches expects B1:B2 with 1 <= B1 <= B2, got {text:?}"));
    let (lo, hi) = text.split_once(':').ok_or_else(bad)?;
    let lo: usize = lo.trim().parse().map_err(|_| bad())?;
    let hi: usize = hi.trim().parse().map_err(|_| bad())?;
    if lo == 0 || hi < lo {
        return Err(bad());
    }
    Ok((lo, hi))
}

pub fn poles(g: f64, a: f64, m: f64, branches: &str, out: &Path) -> Result<(), Failure> {
    let (lo, hi) = parse_branches(branches)?;
    let rows = (lo..=hi)
        .map(|branch| {
            let res = find_pole(g, a, m, branch)?;
            Ok(PoleRow {
                branch,
                k_re: res.k_pole.re,
                k_im: res.k_pole.im,
                e0: res.e0(),
                gamma: res.gamma(),
                residual: res.pole_residual(),
            })
        })
        .collect::<Result<Vec<_>, gamow_core::Error>>()?;
    write_poles(out, &rows)?;
    Ok(())
}

pub fn tau(config: &Path) -> Result<(), Failure> {
    let cfg = RunConfig::load(config)?;
    let system = cfg.system()?;
    let energy = cfg.energy()?;
    let r = RadialPoint::new(cfg.r.clone().ok_or_else(|| Failure::config("missing field `r`"))?)?;
    let front = solve_front(&r, &system, &energy)?;
    let weight = surface_weight(&r, &system, &energy)?;
    let record = json!({
        "tau": complex(front.tau),
        "p_s": front.momenta.as_slice().iter().map(|&p| complex(p)).collect::<Vec<_>>(),
        "S": complex(front.action),
        "T": complex(front.t_norm),
        "weight": complex(weight),
    });
    println!("{record}");
    Ok(())
}

pub fn validate(suite: Suite) -> Result<(), Failure> {
    let checks = validation::run(suite);
    for c in &checks {
        println!(
            "{} {} worst={:.2e} tolerance={:e}",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.worst,
            c.tolerance
        );
    }
    let failed: Vec<&str> = checks.iter().filter(|c| !c.passed).map(|c| c.name).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::validation(format!("failed checks: {}", failed.join("; "))))
    }
}
