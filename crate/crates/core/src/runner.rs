//! Experiment pipeline: simulate far-field data, image it, evaluate the maps
//! and write every artifact to an output directory.
//!
//! Output layout for a run:
//!
//! ```text
//! farfield-multistatic.csv
//! farfield-monostatic.csv
//! <indicator>.csv           map values
//! <indicator>.pgm           8-bit grayscale rendering
//! <indicator>-jaccard.csv   Jaccard score per threshold
//! <indicator>-peaks.csv     superlevel-set peaks at peak_kappa
//! manifest.json             config echo, seed, hashes, timestamp
//! ```
//!
//! Every file except the manifest is a pure function of the configuration.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::{Experiment, ExperimentConfig, ForwardConfig};
use crate::error::{Error, Result};
use crate::forward::{self, add_awgn, AcquisitionMode, FarFieldData, MomSolver};
use crate::imaging::{self, IndicatorKind, IndicatorMap};
use crate::io;
use crate::metrics::{self, JaccardCurve, Peak};

pub const MULTISTATIC_FILE: &str = "farfield-multistatic.csv";
pub const MONOSTATIC_FILE: &str = "farfield-monostatic.csv";
pub const MANIFEST_FILE: &str = "manifest.json";

pub fn map_file(kind: IndicatorKind) -> String {
    format!("{kind}.csv")
}

pub fn image_file(kind: IndicatorKind) -> String {
    format!("{kind}.pgm")
}

pub fn curve_file(kind: IndicatorKind) -> String {
    format!("{kind}-jaccard.csv")
}

pub fn peaks_file(kind: IndicatorKind) -> String {
    format!("{kind}-peaks.csv")
}

/// Both acquisitions of one experiment, noise already applied.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SimulatedData {
    pub multistatic: Option<FarFieldData>,
    pub monostatic: Option<FarFieldData>,
}

impl SimulatedData {
    pub fn get(&self, mode: AcquisitionMode) -> Option<&FarFieldData> {
        match mode {
            AcquisitionMode::Multistatic => self.multistatic.as_ref(),
            AcquisitionMode::Monostatic => self.monostatic.as_ref(),
        }
    }
}

/// Scores of one map against the true support.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub curve: JaccardCurve,
    pub peaks: Vec<Peak>,
}

fn noisy(exp: &Experiment, data: FarFieldData, seed: u64) -> Result<FarFieldData> {
    match exp.config.noise.snr_db {
        Some(snr) => add_awgn(&data, snr, seed),
        None => Ok(data),
    }
}

/// Noise-free multi-static and mono-static far fields followed by noise.
/// The multi-static noise stream uses `seed`, the mono-static one `seed + 1`.
pub fn simulate(exp: &Experiment) -> Result<SimulatedData> {
    let go = || -> Result<SimulatedData> {
        let (multi, mono) = match exp.config.forward {
            ForwardConfig::Asymptotic => (
                forward::multistatic_matrix(&exp.scene, &exp.multistatic_dirs, &exp.multistatic_dirs)?,
                forward::monostatic_sweep(&exp.scene, &exp.monostatic_dirs)?,
            ),
            ForwardConfig::Mom {
                pixels_per_wavelength,
            } => {
                let solver = MomSolver::new(&exp.scene, pixels_per_wavelength)?;
                (
                    solver.multistatic_matrix(&exp.multistatic_dirs, &exp.multistatic_dirs)?,
                    solver.monostatic_sweep(&exp.monostatic_dirs)?,
                )
            }
        };
        let seed = exp.config.noise.seed;
        Ok(SimulatedData {
            multistatic: Some(noisy(exp, multi, seed)?),
            monostatic: Some(noisy(exp, mono, seed.wrapping_add(1))?),
        })
    };
    go().map_err(|e| e.in_stage("simulate"))
}

/// One indicator map. Structure maps ignore `data`.
pub fn image(exp: &Experiment, kind: IndicatorKind, data: &SimulatedData) -> Result<IndicatorMap> {
    let go = || -> Result<IndicatorMap> {
        let need = |mode: AcquisitionMode| {
            data.get(mode).ok_or_else(|| {
                Error::Usage(format!("{kind} needs {} data, none was provided", mode.as_str()))
            })
        };
        let (grid, medium) = (&exp.grid, &exp.medium);
        match kind {
            IndicatorKind::DsmSingle => {
                let d = need(AcquisitionMode::Multistatic)?;
                imaging::dsm_single(d.row(0), &exp.multistatic_dirs, grid, medium)
            }
            IndicatorKind::DsmMulti => imaging::dsm_multi(
                need(AcquisitionMode::Multistatic)?,
                &exp.multistatic_dirs,
                &exp.multistatic_dirs,
                grid,
                medium,
            ),
            IndicatorKind::DsmMono => imaging::dsm_mono(
                need(AcquisitionMode::Monostatic)?,
                &exp.monostatic_dirs,
                grid,
                medium,
            ),
            IndicatorKind::MdsmMono => imaging::mdsm_mono(
                need(AcquisitionMode::Monostatic)?,
                &exp.monostatic_dirs,
                grid,
                medium,
            ),
            IndicatorKind::Psi1 => imaging::psi1_map(&exp.scene, grid),
            IndicatorKind::Psi2 => imaging::psi2_map(&exp.scene, grid),
        }
    };
    go().map_err(|e| e.in_stage("image"))
}

pub fn evaluate(exp: &Experiment, map: &IndicatorMap) -> Result<Evaluation> {
    let go = || -> Result<Evaluation> {
        let exact = metrics::exact_support(&exp.scene, &exp.grid);
        Ok(Evaluation {
            curve: metrics::jaccard_curve(map, &exact, &exp.config.thresholds)?,
            peaks: metrics::peak_locations(map, exp.config.peak_kappa)?,
        })
    };
    go().map_err(|e| e.in_stage("evaluate"))
}

fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

/// Writes the far-field files; returns the paths written.
pub fn write_data(dir: &Path, data: &SimulatedData) -> Result<Vec<PathBuf>> {
    ensure_dir(dir)?;
    let mut out = Vec::new();
    for (name, d) in [
        (MULTISTATIC_FILE, &data.multistatic),
        (MONOSTATIC_FILE, &data.monostatic),
    ] {
        if let Some(d) = d {
            let path = dir.join(name);
            io::write_file(&path, io::farfield_to_csv(d))?;
            out.push(path);
        }
    }
    Ok(out)
}

/// Reads whichever far-field files exist in `dir`.
pub fn read_data(dir: &Path) -> Result<SimulatedData> {
    let load = |name: &str| -> Result<Option<FarFieldData>> {
        let path = dir.join(name);
        if !path.exists() {
            return Ok(None);
        }
        let text = io::read_text(&path)?;
        io::farfield_from_csv(&path, &text).map(Some)
    };
    let data = SimulatedData {
        multistatic: load(MULTISTATIC_FILE)?,
        monostatic: load(MONOSTATIC_FILE)?,
    };
    if let Some(d) = &data.multistatic {
        if d.mode() != AcquisitionMode::Multistatic {
            return Err(Error::parse(
                dir.join(MULTISTATIC_FILE),
                2,
                "expected multistatic data",
            ));
        }
    }
    if let Some(d) = &data.monostatic {
        if d.mode() != AcquisitionMode::Monostatic {
            return Err(Error::parse(
                dir.join(MONOSTATIC_FILE),
                2,
                "expected monostatic data",
            ));
        }
    }
    if data.multistatic.is_none() && data.monostatic.is_none() {
        return Err(Error::io(
            dir,
            std::io::Error::new(std::io::ErrorKind::NotFound, "no far-field files found"),
        ));
    }
    Ok(data)
}

/// Writes `<kind>.csv` and `<kind>.pgm`.
pub fn write_map(dir: &Path, map: &IndicatorMap) -> Result<Vec<PathBuf>> {
    ensure_dir(dir)?;
    let csv = dir.join(map_file(map.kind));
    io::write_file(&csv, io::map_to_csv(map))?;
    let pgm = dir.join(image_file(map.kind));
    io::write_file(&pgm, io::map_to_pgm(map))?;
    Ok(vec![csv, pgm])
}

pub fn read_map(path: &Path, exp: &Experiment, kind: IndicatorKind) -> Result<IndicatorMap> {
    let text = io::read_text(path)?;
    io::map_from_csv(path, &text, &exp.grid, kind)
}

/// Writes `<kind>-jaccard.csv` and `<kind>-peaks.csv`.
pub fn write_evaluation(dir: &Path, kind: IndicatorKind, eval: &Evaluation) -> Result<Vec<PathBuf>> {
    ensure_dir(dir)?;
    let curve = dir.join(curve_file(kind));
    io::write_file(&curve, io::curve_to_csv(&eval.curve))?;
    let peaks = dir.join(peaks_file(kind));
    io::write_file(&peaks, io::peaks_to_csv(&eval.peaks))?;
    Ok(vec![curve, peaks])
}

#[derive(Debug, Serialize)]
struct Manifest<'a> {
    name: &'a str,
    seed: u64,
    created_unix: u64,
    config: &'a ExperimentConfig,
    warnings: &'a [String],
    sha256: BTreeMap<String, String>,
}

/// What a full run produced.
#[derive(Debug, Clone)]
pub struct RunReport {
    pub output_dir: PathBuf,
    pub files: Vec<PathBuf>,
    pub warnings: Vec<String>,
    pub evaluations: Vec<(IndicatorKind, Evaluation)>,
}

/// Runs every stage and writes all artifacts plus `manifest.json` to `dir`.
pub fn run(exp: &Experiment, dir: &Path) -> Result<RunReport> {
    let warnings = exp.scene.admissibility_warnings();
    let data = simulate(exp)?;
    let mut files = write_data(dir, &data)?;
    let mut evaluations = Vec::new();
    for &kind in &exp.config.indicators {
        let map = image(exp, kind, &data)?;
        files.extend(write_map(dir, &map)?);
        let eval = evaluate(exp, &map)?;
        files.extend(write_evaluation(dir, kind, &eval)?);
        evaluations.push((kind, eval));
    }

    let mut sha256 = BTreeMap::new();
    for path in &files {
        let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
        let name = path
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_default();
        sha256.insert(name, hex::encode(Sha256::digest(&bytes)));
    }
    let created_unix = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let manifest = Manifest {
        name: &exp.config.name,
        seed: exp.config.noise.seed,
        created_unix,
        config: &exp.config,
        warnings: &warnings,
        sha256,
    };
    let path = dir.join(MANIFEST_FILE);
    let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    io::write_file(&path, text + "\n")?;
    files.push(path);

    Ok(RunReport {
        output_dir: dir.to_path_buf(),
        files,
        warnings,
        evaluations,
    })
}
