use std::path::{Path, PathBuf};

use gamow_core::pseudo_norm::Profile;
use gamow_core::{ComplexEnergy, Dispersion, ParticleSystem};
use serde::Deserialize;

use crate::Failure;

#[derive(Debug, Clone, Copy, Deserialize, PartialEq, Eq, Default)]
#[serde(rename_all = "lowercase")]
pub enum DispersionName {
    #[default]
    Nonrelativistic,
    Relativistic,
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct EnergyConfig {
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

/// Either explicit values or `points` equally spaced values from `start` to `stop`.
#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum TauGrid {
    List(Vec<f64>),
    Range(TauRange),
}

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct TauRange {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

impl TauGrid {
    pub fn values(&self) -> Result<Vec<f64>, Failure> {
        match self {
            TauGrid::List(v) => Ok(v.clone()),
            TauGrid::Range(r) => {
                if r.points < 2 {
                    return Err(Failure::config("tau_grid.points must be at least 2"));
                }
                let step = (r.stop - r.start) / (r.points - 1) as f64;
                Ok((0..r.points)
                    .map(|j| if j + 1 == r.points { r.stop } else { r.start + step * j as f64 })
                    .collect())
            }
        }
    }
}

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ResolutionConfig {
    /// Panels per quarter wavelength of e^{2iS}.
    #[serde(default = "one")]
    pub tau_oversample: f64,
    #[serde(default = "four")]
    pub angle_panels: usize,
}

impl Default for ResolutionConfig {
    fn default() -> Self {
        Self {
            tau_oversample: 1.0,
            angle_panels: 4,
        }
    }
}

fn one() -> f64 {
    1.0
}

fn four() -> usize {
    4
}

fn default_epsilon() -> f64 {
    1e-3
}

#[derive(Debug, Clone, Deserialize, PartialEq, Default)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum ProfileConfig {
    #[default]
    SineSquared,
    Gaussian { center: f64, width: f64 },
}

impl ProfileConfig {
    pub fn to_profile(&self) -> Profile<f64> {
        match *self {
            ProfileConfig::SineSquared => Profile::SineSquared,
            ProfileConfig::Gaussian { center, width } => Profile::Gaussian { center, width },
        }
    }
}

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum StateConfig {
    /// Two-particle energy-split superposition.
    Partition {
        #[serde(default)]
        profile: ProfileConfig,
        /// Inner cutoff relative to the smallest τ_R of the grid.
        #[serde(default = "default_epsilon")]
        inner_epsilon: f64,
    },
    /// Delta-shell Gamow state; the energy is the pole energy.
    Shell { g: f64, a: f64, branch: usize },
    /// Single outgoing wave e^{ik_D r}/r outside `inner_radius`.
    Outgoing { inner_radius: f64 },
}

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub masses: Vec<f64>,
    #[serde(default)]
    pub dispersion: DispersionName,
    pub energy: Option<EnergyConfig>,
    #[serde(rename = "tau_R")]
    pub tau_r: Option<f64>,
    pub tau_grid: Option<TauGrid>,
    /// Directions per hyperspherical angle for `front`.
    pub count: Option<usize>,
    /// Radial point for `tau`.
    pub r: Option<Vec<f64>>,
    #[serde(default)]
    pub resolution: ResolutionConfig,
    pub state: Option<StateConfig>,
    pub output: Option<PathBuf>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, Failure> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::config(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| Failure::config(format!("{}: {e}", path.display())))
    }

    pub fn system(&self) -> Result<ParticleSystem<f64>, Failure> {
        let dispersion = match self.dispersion {
            DispersionName::Nonrelativistic => Dispersion::Nonrelativistic,
            DispersionName::Relativistic => Dispersion::Relativistic,
        };
        Ok(ParticleSystem::new(self.masses.clone(), dispersion)?)
    }

    pub fn energy(&self) -> Result<ComplexEnergy<f64>, Failure> {
        let e = self.energy.ok_or_else(|| Failure::config("missing field `energy`"))?;
        Ok(ComplexEnergy::from_complex(num_complex::Complex::new(e.re, e.im))?)
    }

    pub fn output(&self, flag: Option<PathBuf>) -> Result<PathBuf, Failure> {
        flag.or_else(|| self.output.clone())
            .ok_or_else(|| Failure::config("no output path: pass --out or set `output`"))
    }
}
