//! Direct sampling indicator maps.
//!
//! Every indicator correlates the measured far field with a test plane wave
//! at each sampling point `z`,
//!
//! ```text
//! raw(z) = |Σ_n u(x_n) e^{+i s k x_n·z}| / ||u||
//! ```
//!
//! where the sum is the plain discrete inner product against the test
//! function `e^{-i s k x_n·z}`. The classical indicator uses `s = 1`. For
//! mono-static data (`d_n = -x_n`) the far field of a point at `r` carries the
//! phase `e^{-2ik x_n·r}`, so the `s = 1` map peaks at `2r`; the modified
//! indicator uses `s = 2` and peaks at `r` again.
//!
//! Maps are always divided by their grid maximum, so they live in `[0, 1]`
//! and do not depend on any constant factor in the data.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forward::{AcquisitionMode, FarFieldData};
use crate::scene::{DirectionSet, Medium, SamplingGrid, Scene, Vec2};
use crate::specialfn::{bessel_j0, cis, Complex};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum IndicatorKind {
    #[serde(rename = "dsm-single")]
    DsmSingle,
    #[serde(rename = "dsm-multi")]
    DsmMulti,
    #[serde(rename = "dsm-mono")]
    DsmMono,
    #[serde(rename = "mdsm-mono")]
    MdsmMono,
    #[serde(rename = "psi1")]
    Psi1,
    #[serde(rename = "psi2")]
    Psi2,
}

impl IndicatorKind {
    pub const ALL: [IndicatorKind; 6] = [
        IndicatorKind::DsmSingle,
        IndicatorKind::DsmMulti,
        IndicatorKind::DsmMono,
        IndicatorKind::MdsmMono,
        IndicatorKind::Psi1,
        IndicatorKind::Psi2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            IndicatorKind::DsmSingle => "dsm-single",
            IndicatorKind::DsmMulti => "dsm-multi",
            IndicatorKind::DsmMono => "dsm-mono",
            IndicatorKind::MdsmMono => "mdsm-mono",
            IndicatorKind::Psi1 => "psi1",
            IndicatorKind::Psi2 => "psi2",
        }
    }

    /// Data an indicator is computed from; `None` for the analytic maps.
    pub fn required_data(self) -> Option<AcquisitionMode> {
        match self {
            IndicatorKind::DsmSingle | IndicatorKind::DsmMulti => Some(AcquisitionMode::Multistatic),
            IndicatorKind::DsmMono | IndicatorKind::MdsmMono => Some(AcquisitionMode::Monostatic),
            IndicatorKind::Psi1 | IndicatorKind::Psi2 => None,
        }
    }
}

impl std::fmt::Display for IndicatorKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for IndicatorKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        IndicatorKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Usage(format!("unknown indicator `{s}`")))
    }
}

/// Max-normalized indicator values on a sampling grid, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct IndicatorMap {
    pub grid: SamplingGrid,
    pub values: Vec<f64>,
    pub kind: IndicatorKind,
}

impl IndicatorMap {
    /// Normalizes non-negative raw values by their maximum.
    pub fn from_raw(grid: SamplingGrid, raw: Vec<f64>, kind: IndicatorKind) -> Result<Self> {
        if raw.len() != grid.len() {
            return Err(Error::Usage(format!(
                "map has {} values for a {}x{} grid",
                raw.len(),
                grid.nx,
                grid.ny
            )));
        }
        if raw.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::Numerical(format!("{kind}: raw indicator is not finite")));
        }
        let max = raw.iter().copied().fold(0.0, f64::max);
        if max == 0.0 {
            return Err(Error::Degenerate(format!(
                "{kind}: indicator vanishes on the grid"
            )));
        }
        let values = raw.into_iter().map(|v| v / max).collect();
        Ok(IndicatorMap { grid, values, kind })
    }

    /// Wraps already-normalized values, checking they lie in `[0, 1]`.
    pub fn from_normalized(grid: SamplingGrid, values: Vec<f64>, kind: IndicatorKind) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Usage(format!(
                "map has {} values for a {}x{} grid",
                values.len(),
                grid.nx,
                grid.ny
            )));
        }
        if values.iter().any(|v| !(0.0..=1.0).contains(v)) {
            return Err(Error::Domain("normalized map values must lie in [0, 1]".into()));
        }
        Ok(IndicatorMap { grid, values, kind })
    }

    /// Index of the maximum; the lowest linear index wins ties.
    pub fn argmax(&self) -> usize {
        let mut best = 0;
        for (i, &v) in self.values.iter().enumerate() {
            if v > self.values[best] {
                best = i;
            }
        }
        best
    }

    pub fn argmax_point(&self) -> Vec2 {
        self.grid.point_at(self.argmax())
    }

    pub fn value_at(&self, ix: usize, iy: usize) -> f64 {
        self.values[self.grid.index(ix, iy)]
    }
}

fn check_wavenumber(data: &FarFieldData, medium: &Medium) -> Result<()> {
    let (a, b) = (data.wavenumber(), medium.wavenumber);
    if (a - b).abs() > 1e-12 * b {
        return Err(Error::Usage(format!(
            "data wavenumber {a} does not match the medium ({b})"
        )));
    }
    Ok(())
}

/// `|Σ_n u_n e^{i s k x_n·z}| / ||u||` over the grid.
fn correlate(
    data: &[Complex],
    dirs: &[Vec2],
    grid: &SamplingGrid,
    k: f64,
    phase_scale: f64,
    what: IndicatorKind,
) -> Result<Vec<f64>> {
    let norm = data.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Err(Error::Degenerate(format!(
            "{what}: far-field data is identically zero"
        )));
    }
    let sk = phase_scale * k;
    // e^{i s k (x_n.x z_x + x_n.y z_y)} separates over grid columns and rows.
    let xs: Vec<f64> = (0..grid.nx).map(|ix| grid.point(ix, 0).x).collect();
    let ys: Vec<f64> = (0..grid.ny).map(|iy| grid.point(0, iy).y).collect();
    let col: Vec<Complex> = dirs
        .iter()
        .zip(data)
        .flat_map(|(xh, u)| xs.iter().map(move |&x| u * cis(sk * xh.x * x)))
        .collect();
    let row: Vec<Complex> = dirs
        .iter()
        .flat_map(|xh| ys.iter().map(move |&y| cis(sk * xh.y * y)))
        .collect();
    let mut raw = Vec::with_capacity(grid.len());
    for iy in 0..grid.ny {
        for ix in 0..grid.nx {
            let s: Complex = (0..dirs.len())
                .map(|n| col[n * grid.nx + ix] * row[n * grid.ny + iy])
                .sum();
            raw.push(s.norm() / norm);
        }
    }
    Ok(raw)
}

/// Classical indicator for one transmit direction from its receive vector.
pub fn dsm_single(
    data: &[Complex],
    rx: &DirectionSet,
    grid: &SamplingGrid,
    medium: &Medium,
) -> Result<IndicatorMap> {
    if data.len() != rx.len() {
        return Err(Error::Usage(format!(
            "receive vector has {} entries for {} directions",
            data.len(),
            rx.len()
        )));
    }
    let kind = IndicatorKind::DsmSingle;
    let raw = correlate(data, rx.directions(), grid, medium.wavenumber, 1.0, kind)?;
    IndicatorMap::from_raw(*grid, raw, kind)
}

/// Classical indicator for several transmits: pixelwise maximum of the
/// per-transmit maps.
pub fn dsm_multi(
    data: &FarFieldData,
    tx: &DirectionSet,
    rx: &DirectionSet,
    grid: &SamplingGrid,
    medium: &Medium,
) -> Result<IndicatorMap> {
    if data.mode() != AcquisitionMode::Multistatic {
        return Err(Error::Usage("dsm-multi needs multi-static data".into()));
    }
    if data.n_tx() != tx.len() || data.n_rx() != rx.len() {
        return Err(Error::Usage(format!(
            "data shape {}x{} does not match {} transmit and {} receive directions",
            data.n_tx(),
            data.n_rx(),
            tx.len(),
            rx.len()
        )));
    }
    check_wavenumber(data, medium)?;
    let mut combined = vec![0.0; grid.len()];
    for l in 0..data.n_tx() {
        let map = dsm_single(data.row(l), rx, grid, medium)?;
        for (c, v) in combined.iter_mut().zip(map.values) {
            *c = f64::max(*c, v);
        }
    }
    Ok(IndicatorMap {
        grid: *grid,
        values: combined,
        kind: IndicatorKind::DsmMulti,
    })
}

fn mono(
    data: &FarFieldData,
    dirs: &DirectionSet,
    grid: &SamplingGrid,
    medium: &Medium,
    phase_scale: f64,
    kind: IndicatorKind,
) -> Result<IndicatorMap> {
    if data.mode() != AcquisitionMode::Monostatic {
        return Err(Error::Usage(format!("{kind} needs mono-static data")));
    }
    if data.n_rx() != dirs.len() {
        return Err(Error::Usage(format!(
            "{} mono-static values for {} directions",
            data.n_rx(),
            dirs.len()
        )));
    }
    check_wavenumber(data, medium)?;
    let raw = correlate(
        data.values(),
        dirs.directions(),
        grid,
        medium.wavenumber,
        phase_scale,
        kind,
    )?;
    IndicatorMap::from_raw(*grid, raw, kind)
}

/// Classical indicator applied to mono-static data; peaks at `2r`.
pub fn dsm_mono(
    data: &FarFieldData,
    dirs: &DirectionSet,
    grid: &SamplingGrid,
    medium: &Medium,
) -> Result<IndicatorMap> {
    mono(data, dirs, grid, medium, 1.0, IndicatorKind::DsmMono)
}

/// Modified mono-static indicator with the doubled test phase; peaks at `r`.
pub fn mdsm_mono(
    data: &FarFieldData,
    dirs: &DirectionSet,
    grid: &SamplingGrid,
    medium: &Medium,
) -> Result<IndicatorMap> {
    mono(data, dirs, grid, medium, 2.0, IndicatorKind::MdsmMono)
}

fn psi_value(scene: &Scene, z: Vec2, double_frequency: bool) -> Result<f64> {
    let m = &scene.medium;
    let k = m.wavenumber;
    scene.inhomogeneities.iter().try_fold(0.0, |acc, inh| {
        let arg = if double_frequency {
            2.0 * k * inh.location.distance(z)
        } else {
            k * (2.0 * inh.location).distance(z)
        };
        let w = inh.radius * inh.radius * (inh.permittivity - m.eps0) * inh.reference_area;
        Ok(acc + w * bessel_j0(arg)?)
    })
}

/// `Σ α² (ε - ε0) |D| J0(k |2r - z|)`: limiting structure of the mono-static
/// classical indicator.
pub fn psi1_value(scene: &Scene, z: Vec2) -> Result<f64> {
    psi_value(scene, z, false)
}

/// `Σ α² (ε - ε0) |D| J0(2k |r - z|)`: limiting structure of the modified
/// indicator.
pub fn psi2_value(scene: &Scene, z: Vec2) -> Result<f64> {
    psi_value(scene, z, true)
}

pub fn psi1_map(scene: &Scene, grid: &SamplingGrid) -> Result<IndicatorMap> {
    let raw = grid
        .points()
        .map(|z| psi1_value(scene, z).map(f64::abs))
        .collect::<Result<Vec<_>>>()?;
    IndicatorMap::from_raw(*grid, raw, IndicatorKind::Psi1)
}

pub fn psi2_map(scene: &Scene, grid: &SamplingGrid) -> Result<IndicatorMap> {
    let raw = grid
        .points()
        .map(|z| psi2_value(scene, z).map(f64::abs))
        .collect::<Result<Vec<_>>>()?;
    IndicatorMap::from_raw(*grid, raw, IndicatorKind::Psi2)
}

/// Radius of the first zero of the main lobe `J0(s k |z - r|)`, i.e. the
/// resolution scale of an indicator with test phase factor `s`.
pub fn main_lobe_radius(medium: &Medium, phase_scale: f64) -> f64 {
    const J0_FIRST_ZERO: f64 = 2.404_825_557_695_773;
    J0_FIRST_ZERO / (phase_scale * medium.wavenumber)
}
