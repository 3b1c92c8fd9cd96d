//! Synthetic far-field data.
//!
//! Three sources are provided: the small-obstacle asymptotic formula
//! ([`asymptotic_farfield`] and the sweeps built on it), a method-of-moments
//! Lippmann–Schwinger solver ([`mom`]) for targets outside the small-obstacle
//! regime, and additive white Gaussian noise ([`noise`]).

pub mod linalg;
pub mod mom;
pub mod noise;

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::scene::{DirectionSet, Scene, Vec2};
use crate::specialfn::{cis, Complex};

pub use mom::{mom_farfield, MomSolver};
pub use noise::add_awgn;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AcquisitionMode {
    /// One value per direction, transmit `d_n = -x_n`.
    Monostatic,
    /// Full transmit × receive matrix.
    Multistatic,
}

impl AcquisitionMode {
    pub fn as_str(self) -> &'static str {
        match self {
            AcquisitionMode::Monostatic => "monostatic",
            AcquisitionMode::Multistatic => "multistatic",
        }
    }
}

impl std::str::FromStr for AcquisitionMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "monostatic" => Ok(AcquisitionMode::Monostatic),
            "multistatic" => Ok(AcquisitionMode::Multistatic),
            other => Err(Error::Usage(format!("unknown acquisition mode `{other}`"))),
        }
    }
}

/// Measured far-field values.
///
/// Mono-static data has `n_tx == n_rx == N` and `N` values, entry `n` being
/// `u(x_n, -x_n)`. Multi-static data is row-major `n_tx × n_rx`, entry
/// `(l, n)` being `u(x_n, d_l)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FarFieldData {
    mode: AcquisitionMode,
    n_tx: usize,
    n_rx: usize,
    wavenumber: f64,
    values: Vec<Complex>,
}

impl FarFieldData {
    pub fn monostatic(wavenumber: f64, values: Vec<Complex>) -> Result<Self> {
        let n = values.len();
        FarFieldData::new(AcquisitionMode::Monostatic, n, n, wavenumber, values)
    }

    pub fn multistatic(n_tx: usize, n_rx: usize, wavenumber: f64, values: Vec<Complex>) -> Result<Self> {
        FarFieldData::new(AcquisitionMode::Multistatic, n_tx, n_rx, wavenumber, values)
    }

    pub fn new(
        mode: AcquisitionMode,
        n_tx: usize,
        n_rx: usize,
        wavenumber: f64,
        values: Vec<Complex>,
    ) -> Result<Self> {
        let expected = match mode {
            AcquisitionMode::Monostatic => {
                if n_tx != n_rx {
                    return Err(Error::Usage(format!(
                        "mono-static data needs n_tx == n_rx, got {n_tx} and {n_rx}"
                    )));
                }
                n_rx
            }
            AcquisitionMode::Multistatic => n_tx * n_rx,
        };
        if values.len() != expected {
            return Err(Error::Usage(format!(
                "{} data of shape {n_tx}x{n_rx} needs {expected} values, got {}",
                mode.as_str(),
                values.len()
            )));
        }
        if let Some(i) = values
            .iter()
            .position(|v| !(v.re.is_finite() && v.im.is_finite()))
        {
            return Err(Error::Domain(format!("far-field entry {i} is not finite")));
        }
        if !(wavenumber.is_finite() && wavenumber > 0.0) {
            return Err(Error::Domain(format!(
                "wavenumber must be positive, got {wavenumber}"
            )));
        }
        Ok(FarFieldData {
            mode,
            n_tx,
            n_rx,
            wavenumber,
            values,
        })
    }

    pub fn mode(&self) -> AcquisitionMode {
        self.mode
    }

    pub fn n_tx(&self) -> usize {
        self.n_tx
    }

    pub fn n_rx(&self) -> usize {
        self.n_rx
    }

    pub fn wavenumber(&self) -> f64 {
        self.wavenumber
    }

    pub fn values(&self) -> &[Complex] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex> {
        self.values
    }

    /// Receive vector for transmit `l` (multi-static only).
    pub fn row(&self, l: usize) -> &[Complex] {
        debug_assert_eq!(self.mode, AcquisitionMode::Multistatic);
        &self.values[l * self.n_rx..(l + 1) * self.n_rx]
    }

    /// Same shape and metadata with new values.
    pub fn with_values(&self, values: Vec<Complex>) -> Result<Self> {
        FarFieldData::new(self.mode, self.n_tx, self.n_rx, self.wavenumber, values)
    }

    pub fn scaled(&self, c: Complex) -> Self {
        FarFieldData {
            values: self.values.iter().map(|v| v * c).collect(),
            ..self.clone()
        }
    }

    /// `(l, n)` index pair of each stored value.
    pub fn index_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.values.len()).map(move |i| match self.mode {
            AcquisitionMode::Monostatic => (i, i),
            AcquisitionMode::Multistatic => (i / self.n_rx, i % self.n_rx),
        })
    }
}

fn check_unit(v: Vec2, what: &str) -> Result<()> {
    if (v.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::Domain(format!(
            "{what} must be a unit vector, |v| = {}",
            v.norm()
        )));
    }
    Ok(())
}

/// Common factor `k²(1+i)/(4 sqrt(k pi))` of the small-obstacle far field.
pub fn asymptotic_prefactor(wavenumber: f64) -> Complex {
    let k = wavenumber;
    Complex::new(1.0, 1.0) * (k * k / (4.0 * (k * PI).sqrt()))
}

/// Per-scatterer weights `alpha² (eps - eps0)/sqrt(eps0 mu0) |D|`.
fn asymptotic_weights(scene: &Scene) -> Vec<(Vec2, f64)> {
    let m = &scene.medium;
    let speed_inv = (m.eps0 * m.mu0).sqrt();
    scene
        .inhomogeneities
        .iter()
        .map(|inh| {
            let w = inh.radius * inh.radius * (inh.permittivity - m.eps0) / speed_inv * inh.reference_area;
            (inh.location, w)
        })
        .collect()
}

fn asymptotic_sum(weights: &[(Vec2, f64)], k: f64, prefactor: Complex, d: Vec2, xh: Vec2) -> Complex {
    let delta = d - xh;
    let sum: Complex = weights.iter().map(|&(r, w)| cis(k * delta.dot(r)) * w).sum();
    prefactor * sum
}

/// Far field of the scene for transmit direction `d` and receive direction
/// `xh`, from the leading term of the small-obstacle expansion.
pub fn asymptotic_farfield(scene: &Scene, d: Vec2, xh: Vec2) -> Result<Complex> {
    check_unit(d, "transmit direction")?;
    check_unit(xh, "receive direction")?;
    let k = scene.medium.wavenumber;
    Ok(asymptotic_sum(
        &asymptotic_weights(scene),
        k,
        asymptotic_prefactor(k),
        d,
        xh,
    ))
}

/// Mono-static acquisition: one value per direction with `d_n = -x_n`.
pub fn monostatic_sweep(scene: &Scene, dirs: &DirectionSet) -> Result<FarFieldData> {
    if !dirs.is_monostatic() {
        return Err(Error::Usage(
            "mono-static sweep needs a direction set with mono-static pairing".into(),
        ));
    }
    let k = scene.medium.wavenumber;
    let pre = asymptotic_prefactor(k);
    let weights = asymptotic_weights(scene);
    let values = dirs
        .directions()
        .iter()
        .map(|&xh| asymptotic_sum(&weights, k, pre, -xh, xh))
        .collect();
    FarFieldData::monostatic(k, values)
}

/// Multi-static acquisition over every transmit/receive pair.
pub fn multistatic_matrix(scene: &Scene, tx: &DirectionSet, rx: &DirectionSet) -> Result<FarFieldData> {
    let k = scene.medium.wavenumber;
    let pre = asymptotic_prefactor(k);
    let weights = asymptotic_weights(scene);
    let mut values = Vec::with_capacity(tx.len() * rx.len());
    for &d in tx.directions() {
        for &xh in rx.directions() {
            values.push(asymptotic_sum(&weights, k, pre, d, xh));
        }
    }
    FarFieldData::multistatic(tx.len(), rx.len(), k, values)
}
