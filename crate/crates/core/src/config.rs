//! JSON experiment configuration and the built-in presets.
//!
//! Lengths are in meters, angles in radians, and permittivities are given
//! relative to the background (`eps_rel`). A minimal document:
//!
//! ```json
//! {
//!   "name": "demo",
//!   "medium": { "wavelength": 0.4 },
//!   "scene": {
//!     "roi": { "center": [0.0, 0.0], "side": 1.6 },
//!     "inhomogeneities": [ { "center": [0.3, -0.3], "radius": 0.03, "eps_rel": 5.0 } ]
//!   },
//!   "aperture": { "n": 36, "arc_start": 0.0, "arc_end": 6.283185307179586 },
//!   "grid": { "center": [0.0, 0.0], "side": 1.6, "n_per_side": 50 },
//!   "forward": { "engine": "asymptotic" },
//!   "noise": { "snr_db": 20.0, "seed": 1 },
//!   "indicators": ["dsm-multi", "dsm-mono", "mdsm-mono"]
//! }
//! ```

use std::collections::HashSet;
use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::imaging::IndicatorKind;
use crate::metrics::default_thresholds;
use crate::scene::{self, DirectionSet, Inhomogeneity, Medium, Roi, SamplingGrid, Scene, Vec2};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MediumConfig {
    pub wavelength: f64,
    #[serde(default = "default_mu0")]
    pub mu0: f64,
    #[serde(default = "default_eps0")]
    pub eps0: f64,
}

fn default_mu0() -> f64 {
    scene::MU0
}

fn default_eps0() -> f64 {
    scene::EPS0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InhomogeneityConfig {
    pub center: Vec2,
    pub radius: f64,
    pub eps_rel: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RoiConfig {
    pub center: Vec2,
    pub side: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneConfig {
    pub roi: RoiConfig,
    pub inhomogeneities: Vec<InhomogeneityConfig>,
}

/// Directions shared by transmitters and receivers. Multi-static data uses
/// this set for both; mono-static data pairs `d_n = -x_n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ApertureConfig {
    pub n: usize,
    #[serde(default)]
    pub arc_start: f64,
    #[serde(default = "full_turn")]
    pub arc_end: f64,
}

fn full_turn() -> f64 {
    2.0 * PI
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub center: Vec2,
    pub side: f64,
    pub n_per_side: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "engine", rename_all = "lowercase", deny_unknown_fields)]
pub enum ForwardConfig {
    Asymptotic,
    Mom { pixels_per_wavelength: usize },
}

pub const DEFAULT_MOM_PIXELS_PER_WAVELENGTH: usize = 10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseConfig {
    /// `None` disables noise.
    pub snr_db: Option<f64>,
    #[serde(default)]
    pub seed: u64,
}

/// Level at which superlevel-set components are reported as peaks.
pub const DEFAULT_PEAK_KAPPA: f64 = 0.5;

fn default_peak_kappa() -> f64 {
    DEFAULT_PEAK_KAPPA
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub name: String,
    pub medium: MediumConfig,
    pub scene: SceneConfig,
    pub aperture: ApertureConfig,
    pub grid: GridConfig,
    pub forward: ForwardConfig,
    pub noise: NoiseConfig,
    pub indicators: Vec<IndicatorKind>,
    #[serde(default = "default_thresholds")]
    pub thresholds: Vec<f64>,
    #[serde(default = "default_peak_kappa")]
    pub peak_kappa: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
}

/// Validated configuration with every derived object built.
#[derive(Debug, Clone)]
pub struct Experiment {
    pub config: ExperimentConfig,
    pub medium: Medium,
    pub scene: Scene,
    /// Aperture without mono-static pairing (multi-static transmit and receive).
    pub multistatic_dirs: DirectionSet,
    /// Aperture with mono-static pairing.
    pub monostatic_dirs: DirectionSet,
    pub grid: SamplingGrid,
}

fn config_err(e: Error) -> Error {
    match e {
        Error::Config(_) => e,
        other => Error::Config(other.to_string()),
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = crate::io::read_text(path)?;
        ExperimentConfig::from_json(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Checks the whole configuration and builds the derived objects.
    pub fn validate(&self) -> Result<Experiment> {
        let m = &self.medium;
        let medium = Medium::new(m.wavelength, m.mu0, m.eps0).map_err(config_err)?;
        let inhomogeneities = self
            .scene
            .inhomogeneities
            .iter()
            .map(|c| Inhomogeneity::with_relative_permittivity(c.center, c.radius, c.eps_rel, &medium))
            .collect::<Result<Vec<_>>>()
            .map_err(config_err)?;
        let roi = Roi {
            center: self.scene.roi.center,
            side: self.scene.roi.side,
        };
        let scene = Scene::new(medium, inhomogeneities, roi).map_err(config_err)?;
        let a = &self.aperture;
        let multistatic_dirs = DirectionSet::new(a.n, a.arc_start, a.arc_end, false).map_err(config_err)?;
        let monostatic_dirs = DirectionSet::new(a.n, a.arc_start, a.arc_end, true).map_err(config_err)?;
        let grid = SamplingGrid::square(self.grid.center, self.grid.side, self.grid.n_per_side)
            .map_err(config_err)?;

        if let ForwardConfig::Mom {
            pixels_per_wavelength,
        } = self.forward
        {
            if pixels_per_wavelength < crate::forward::mom::MIN_PIXELS_PER_WAVELENGTH {
                return Err(Error::Config(format!(
                    "MoM needs at least {} pixels per wavelength, got {pixels_per_wavelength}",
                    crate::forward::mom::MIN_PIXELS_PER_WAVELENGTH
                )));
            }
        }
        if let Some(snr) = self.noise.snr_db {
            if snr.is_nan() || snr == f64::NEG_INFINITY {
                return Err(Error::Config(format!("invalid SNR {snr}")));
            }
        }
        if self.indicators.is_empty() {
            return Err(Error::Config("no indicator requested".into()));
        }
        let mut seen = HashSet::new();
        for &k in &self.indicators {
            if k == IndicatorKind::DsmSingle {
                return Err(Error::Config(
                    "dsm-single is per-transmit; request dsm-multi in experiments".into(),
                ));
            }
            if !seen.insert(k) {
                return Err(Error::Config(format!("indicator {k} requested twice")));
            }
        }
        if self.thresholds.iter().any(|k| !(0.0..=1.0).contains(k))
            || self.thresholds.windows(2).any(|w| w[1] <= w[0])
        {
            return Err(Error::Config(
                "thresholds must be strictly ascending values in [0, 1]".into(),
            ));
        }
        if !(0.0..=1.0).contains(&self.peak_kappa) {
            return Err(Error::Config(format!(
                "peak_kappa {} outside [0, 1]",
                self.peak_kappa
            )));
        }
        Ok(Experiment {
            config: self.clone(),
            medium,
            scene,
            multistatic_dirs,
            monostatic_dirs,
            grid,
        })
    }

    pub fn needs(&self, mode: crate::forward::AcquisitionMode) -> bool {
        self.indicators.iter().any(|k| k.required_data() == Some(mode))
    }
}

/// Wavelength used by every preset (m).
pub const PRESET_WAVELENGTH: f64 = 0.4;

/// Preset names accepted by [`preset`].
pub const PRESETS: [&str; 3] = ["example1", "example2", "example3"];

fn small_disks(lambda: f64) -> Vec<InhomogeneityConfig> {
    [(0.75, -0.75), (-1.0, -0.5), (-0.75, 1.0)]
        .into_iter()
        .map(|(x, y)| InhomogeneityConfig {
            center: Vec2::new(x * lambda, y * lambda),
            radius: 0.075 * lambda,
            eps_rel: 5.0,
        })
        .collect()
}

fn base(name: &str, inhomogeneities: Vec<InhomogeneityConfig>) -> ExperimentConfig {
    let lambda = PRESET_WAVELENGTH;
    let side = 4.0 * lambda;
    ExperimentConfig {
        name: name.to_string(),
        medium: MediumConfig {
            wavelength: lambda,
            mu0: scene::MU0,
            eps0: scene::EPS0,
        },
        scene: SceneConfig {
            roi: RoiConfig {
                center: Vec2::ZERO,
                side,
            },
            inhomogeneities,
        },
        aperture: ApertureConfig {
            n: 36,
            arc_start: 0.0,
            arc_end: 2.0 * PI,
        },
        grid: GridConfig {
            center: Vec2::ZERO,
            side,
            n_per_side: 50,
        },
        forward: ForwardConfig::Asymptotic,
        noise: NoiseConfig {
            snr_db: Some(20.0),
            seed: 2019,
        },
        indicators: vec![
            IndicatorKind::DsmMulti,
            IndicatorKind::DsmMono,
            IndicatorKind::MdsmMono,
        ],
        thresholds: default_thresholds(),
        peak_kappa: DEFAULT_PEAK_KAPPA,
        output_dir: None,
    }
}

/// Built-in experiment configurations.
///
/// * `example1`: three small disks (`alpha = 0.075 λ`, `eps = 5 eps0`),
///   36 directions on the full circle, 20 dB noise.
/// * `example2`: one disk of radius `λ` at `(-0.75 λ, -0.75 λ)`, simulated
///   with the MoM solver.
/// * `example3`: the `example1` scene seen from 19 directions on the upper
///   half circle.
pub fn preset(name: &str) -> Result<ExperimentConfig> {
    let lambda = PRESET_WAVELENGTH;
    match name {
        "example1" => Ok(base(name, small_disks(lambda))),
        "example2" => {
            let mut c = base(
                name,
                vec![InhomogeneityConfig {
                    center: Vec2::new(-0.75 * lambda, -0.75 * lambda),
                    radius: lambda,
                    eps_rel: 5.0,
                }],
            );
            c.forward = ForwardConfig::Mom {
                pixels_per_wavelength: DEFAULT_MOM_PIXELS_PER_WAVELENGTH,
            };
            Ok(c)
        }
        "example3" => {
            let mut c = base(name, small_disks(lambda));
            c.aperture = ApertureConfig {
                n: 19,
                arc_start: 0.0,
                arc_end: PI,
            };
            Ok(c)
        }
        other => Err(Error::Config(format!(
            "unknown preset `{other}` (expected one of {})",
            PRESETS.join(", ")
        ))),
    }
}
