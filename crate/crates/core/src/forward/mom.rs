//! Method-of-moments solver for the 2D Lippmann–Schwinger equation
//!
//! ```text
//! u(x) = e^{i k d·x} + k² ∫ χ(y) G(x, y) u(y) dy,   G = (i/4) H0^(1)(k|x - y|)
//! ```
//!
//! with `χ = eps/eps0 - 1`. The targets are covered by square pixels on a
//! regular lattice; each pixel carries its filled fraction (estimated by
//! sub-sampling) and the mean contrast of the filled part. Collocation at the
//! pixel centers gives a dense system, factorized once and reused for every
//! incident direction. The singular self-interaction integrates `G` over the
//! disk of equal area:
//!
//! ```text
//! k² ∫_{|y| < a} G(0, y) dy = (i π k a / 2) H1^(1)(k a) - 1,   a = h / sqrt(pi)
//! ```
//!
//! The far field uses the large-argument form of `H0^(1)`:
//! `u∞(x̂) = e^{iπ/4} / sqrt(8 π k) · k² Σ χ u e^{-i k x̂·y} |pixel|`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::forward::linalg::LuFactorization;
use crate::forward::FarFieldData;
use crate::scene::{DirectionSet, Scene, Vec2};
use crate::specialfn::{cis, hankel0_outgoing, hankel1_outgoing_small, Complex};

/// Coarsest accepted mesh, in pixels per wavelength inside the densest target.
pub const MIN_PIXELS_PER_WAVELENGTH: usize = 10;

const SUBSAMPLES: usize = 16;

/// Total field on the pixels covering the targets.
#[derive(Debug, Clone)]
pub struct TotalFieldSolution {
    pub centers: Vec<Vec2>,
    pub field: Vec<Complex>,
    pub contrast: Vec<f64>,
    /// Filled fraction of each pixel, in `(0, 1]`.
    pub fill: Vec<f64>,
    pub pixel_area: f64,
}

#[derive(Debug, Clone)]
struct Pixel {
    ix: usize,
    iy: usize,
    center: Vec2,
    contrast: f64,
    fill: f64,
}

/// Discretized scattering operator for one scene, factorized once.
#[derive(Debug, Clone)]
pub struct MomSolver {
    wavenumber: f64,
    pixel: f64,
    pixels: Vec<Pixel>,
    lu: Option<LuFactorization>,
}

impl MomSolver {
    pub fn new(scene: &Scene, pixels_per_wavelength: usize) -> Result<Self> {
        if pixels_per_wavelength < MIN_PIXELS_PER_WAVELENGTH {
            return Err(Error::Usage(format!(
                "MoM mesh needs at least {MIN_PIXELS_PER_WAVELENGTH} pixels per wavelength, \
                 got {pixels_per_wavelength}"
            )));
        }
        let medium = &scene.medium;
        let k = medium.wavenumber;
        let max_rel = scene
            .inhomogeneities
            .iter()
            .map(|inh| inh.relative_permittivity(medium))
            .fold(1.0, f64::max);
        let pixel = medium.wavelength / (pixels_per_wavelength as f64 * max_rel.sqrt());
        let pixels = mesh(scene, pixel);

        let lu = if pixels.is_empty() {
            None
        } else {
            let n = pixels.len();
            let green = GreenTable::new(k, pixel, &pixels)?;
            let a_eq = pixel / PI.sqrt();
            let self_term = Complex::new(0.0, 0.5 * PI * k * a_eq) * hankel1_outgoing_small(k * a_eq)?
                - Complex::new(1.0, 0.0);
            let area = pixel * pixel;
            let mut a = vec![Complex::new(0.0, 0.0); n * n];
            for (i, pi) in pixels.iter().enumerate() {
                let row = &mut a[i * n..(i + 1) * n];
                for (j, pj) in pixels.iter().enumerate() {
                    let weight = pj.contrast * pj.fill;
                    row[j] = if i == j {
                        Complex::new(1.0, 0.0) - self_term * weight
                    } else {
                        -green.get(pi, pj) * (k * k * area * weight)
                    };
                }
            }
            Some(LuFactorization::new(n, a)?)
        };
        Ok(MomSolver {
            wavenumber: k,
            pixel,
            pixels,
            lu,
        })
    }

    pub fn unknowns(&self) -> usize {
        self.pixels.len()
    }

    pub fn pixel_size(&self) -> f64 {
        self.pixel
    }

    /// Total field inside the targets for incident direction `d`.
    pub fn total_field(&self, d: Vec2) -> Result<TotalFieldSolution> {
        let k = self.wavenumber;
        let incident: Vec<Complex> = self.pixels.iter().map(|p| cis(k * d.dot(p.center))).collect();
        let field = match &self.lu {
            Some(lu) => lu.solve(&incident)?,
            None => incident,
        };
        if field.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::Numerical("MoM solution is not finite".into()));
        }
        Ok(TotalFieldSolution {
            centers: self.pixels.iter().map(|p| p.center).collect(),
            field,
            contrast: self.pixels.iter().map(|p| p.contrast).collect(),
            fill: self.pixels.iter().map(|p| p.fill).collect(),
            pixel_area: self.pixel * self.pixel,
        })
    }

    fn far_from_solution(&self, sol: &TotalFieldSolution, xh: Vec2) -> Complex {
        let k = self.wavenumber;
        let constant = cis(PI / 4.0) / (8.0 * PI * k).sqrt() * (k * k * sol.pixel_area);
        let sum: Complex = sol
            .centers
            .iter()
            .zip(&sol.field)
            .zip(sol.contrast.iter().zip(&sol.fill))
            .map(|((&y, &u), (&chi, &f))| u * cis(-k * xh.dot(y)) * (chi * f))
            .sum();
        constant * sum
    }

    /// Far field on every receive direction of `rx` for one transmit `d`.
    pub fn farfield(&self, d: Vec2, rx: &DirectionSet) -> Result<Vec<Complex>> {
        let sol = self.total_field(d)?;
        Ok(rx
            .directions()
            .iter()
            .map(|&xh| self.far_from_solution(&sol, xh))
            .collect())
    }

    pub fn monostatic_sweep(&self, dirs: &DirectionSet) -> Result<FarFieldData> {
        if !dirs.is_monostatic() {
            return Err(Error::Usage(
                "mono-static sweep needs a direction set with mono-static pairing".into(),
            ));
        }
        let values = dirs
            .directions()
            .iter()
            .map(|&xh| {
                let sol = self.total_field(-xh)?;
                Ok(self.far_from_solution(&sol, xh))
            })
            .collect::<Result<Vec<_>>>()?;
        FarFieldData::monostatic(self.wavenumber, values)
    }

    pub fn multistatic_matrix(&self, tx: &DirectionSet, rx: &DirectionSet) -> Result<FarFieldData> {
        let mut values = Vec::with_capacity(tx.len() * rx.len());
        for &d in tx.directions() {
            values.extend(self.farfield(d, rx)?);
        }
        FarFieldData::multistatic(tx.len(), rx.len(), self.wavenumber, values)
    }
}

/// Far field of the scene for one transmit direction, computed by MoM.
pub fn mom_farfield(
    scene: &Scene,
    pixels_per_wavelength: usize,
    d: Vec2,
    rx: &DirectionSet,
) -> Result<Vec<Complex>> {
    MomSolver::new(scene, pixels_per_wavelength)?.farfield(d, rx)
}

fn mesh(scene: &Scene, pixel: f64) -> Vec<Pixel> {
    let inh = &scene.inhomogeneities;
    if inh.is_empty() {
        return Vec::new();
    }
    let lo = inh
        .iter()
        .fold(Vec2::new(f64::INFINITY, f64::INFINITY), |acc, t| {
            Vec2::new(
                acc.x.min(t.location.x - t.radius),
                acc.y.min(t.location.y - t.radius),
            )
        });
    let hi = inh
        .iter()
        .fold(Vec2::new(f64::NEG_INFINITY, f64::NEG_INFINITY), |acc, t| {
            Vec2::new(
                acc.x.max(t.location.x + t.radius),
                acc.y.max(t.location.y + t.radius),
            )
        });
    let nx = ((hi.x - lo.x) / pixel).ceil() as usize + 1;
    let ny = ((hi.y - lo.y) / pixel).ceil() as usize + 1;
    // Center the lattice on the bounding box.
    let origin = Vec2::new(
        0.5 * (lo.x + hi.x) - 0.5 * nx as f64 * pixel,
        0.5 * (lo.y + hi.y) - 0.5 * ny as f64 * pixel,
    );
    let medium = &scene.medium;
    let sub = pixel / SUBSAMPLES as f64;
    let mut pixels = Vec::new();
    for iy in 0..ny {
        for ix in 0..nx {
            let corner = Vec2::new(origin.x + ix as f64 * pixel, origin.y + iy as f64 * pixel);
            let mut inside = 0usize;
            let mut chi_sum = 0.0;
            for sy in 0..SUBSAMPLES {
                for sx in 0..SUBSAMPLES {
                    let p = Vec2::new(
                        corner.x + (sx as f64 + 0.5) * sub,
                        corner.y + (sy as f64 + 0.5) * sub,
                    );
                    if let Some(t) = inh.iter().find(|t| t.contains(p)) {
                        inside += 1;
                        chi_sum += t.relative_permittivity(medium) - 1.0;
                    }
                }
            }
            if inside > 0 {
                pixels.push(Pixel {
                    ix,
                    iy,
                    center: Vec2::new(corner.x + 0.5 * pixel, corner.y + 0.5 * pixel),
                    contrast: chi_sum / inside as f64,
                    fill: inside as f64 / (SUBSAMPLES * SUBSAMPLES) as f64,
                });
            }
        }
    }
    pixels
}

/// `G` on the pixel lattice depends only on the index offset.
struct GreenTable {
    width: usize,
    values: Vec<Complex>,
}

impl GreenTable {
    fn new(k: f64, pixel: f64, pixels: &[Pixel]) -> Result<Self> {
        let width = pixels.iter().map(|p| p.ix).max().unwrap_or(0) + 1;
        let height = pixels.iter().map(|p| p.iy).max().unwrap_or(0) + 1;
        let mut values = vec![Complex::new(0.0, 0.0); width * height];
        for dy in 0..height {
            for dx in 0..width {
                if dx == 0 && dy == 0 {
                    continue;
                }
                let r = pixel * ((dx * dx + dy * dy) as f64).sqrt();
                values[dy * width + dx] = Complex::new(0.0, 0.25) * hankel0_outgoing(k * r)?;
            }
        }
        Ok(GreenTable { width, values })
    }

    fn get(&self, a: &Pixel, b: &Pixel) -> Complex {
        let dx = a.ix.abs_diff(b.ix);
        let dy = a.iy.abs_diff(b.iy);
        self.values[dy * self.width + dx]
    }
}
