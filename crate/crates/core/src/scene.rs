//! Media, scatterers, acquisition apertures and sampling grids.
//!
//! Everything here is immutable after construction; the forward and imaging
//! modules only ever borrow these types.

use std::f64::consts::PI;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Permeability of the background medium (H/m).
pub const MU0: f64 = 1.256e-6;

/// Default background permittivity (F/m). Together with [`MU0`] this gives
/// `f ≈ 749.5 MHz` at a 0.4 m wavelength.
pub const EPS0: f64 = 8.856e-12;

/// A point or vector in the imaging plane, in meters.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Vec2 { x, y }
    }

    /// Unit vector at polar angle `theta`.
    pub fn from_angle(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Vec2 { x: c, y: s }
    }

    pub fn dot(self, other: Vec2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn distance(self, other: Vec2) -> f64 {
        (self - other).norm()
    }

    pub fn rotate(self, angle: f64) -> Vec2 {
        let (s, c) = angle.sin_cos();
        Vec2::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }
}

impl From<[f64; 2]> for Vec2 {
    fn from(v: [f64; 2]) -> Self {
        Vec2::new(v[0], v[1])
    }
}

impl From<Vec2> for [f64; 2] {
    fn from(v: Vec2) -> Self {
        [v.x, v.y]
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x - o.x, self.y - o.y)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

impl Mul<Vec2> for f64 {
    type Output = Vec2;
    fn mul(self, v: Vec2) -> Vec2 {
        Vec2::new(self * v.x, self * v.y)
    }
}

/// Homogeneous, non-magnetic background medium at a single frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Medium {
    pub mu0: f64,
    pub eps0: f64,
    pub frequency: f64,
    pub wavelength: f64,
    pub wavenumber: f64,
    pub angular_frequency: f64,
}

impl Medium {
    /// Builds the medium from its wavelength and constitutive constants;
    /// frequency, angular frequency and wavenumber are derived.
    pub fn new(wavelength: f64, mu0: f64, eps0: f64) -> Result<Self> {
        for (name, v) in [("wavelength", wavelength), ("mu0", mu0), ("eps0", eps0)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Domain(format!("{name} must be positive, got {v}")));
            }
        }
        let speed = 1.0 / (eps0 * mu0).sqrt();
        let frequency = speed / wavelength;
        Ok(Medium {
            mu0,
            eps0,
            frequency,
            wavelength,
            wavenumber: 2.0 * PI / wavelength,
            angular_frequency: 2.0 * PI * frequency,
        })
    }

    /// Medium with the default constants [`MU0`] and [`EPS0`].
    pub fn with_wavelength(wavelength: f64) -> Result<Self> {
        Medium::new(wavelength, MU0, EPS0)
    }

    /// Wave speed `1/sqrt(eps0 mu0)`.
    pub fn speed(&self) -> f64 {
        1.0 / (self.eps0 * self.mu0).sqrt()
    }
}

/// Area of the unit-disk reference domain.
pub const DISK_REFERENCE_AREA: f64 = PI;

/// A small disk `r + alpha * D` with `D` the unit disk.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Inhomogeneity {
    pub location: Vec2,
    pub radius: f64,
    /// Absolute permittivity (F/m).
    pub permittivity: f64,
    pub reference_area: f64,
}

impl Inhomogeneity {
    pub fn new(location: Vec2, radius: f64, permittivity: f64) -> Result<Self> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::Domain(format!("radius must be positive, got {radius}")));
        }
        if !(permittivity.is_finite() && permittivity > 0.0) {
            return Err(Error::Domain(format!(
                "permittivity must be positive, got {permittivity}"
            )));
        }
        if !(location.x.is_finite() && location.y.is_finite()) {
            return Err(Error::Domain("location must be finite".into()));
        }
        Ok(Inhomogeneity {
            location,
            radius,
            permittivity,
            reference_area: DISK_REFERENCE_AREA,
        })
    }

    /// Disk with permittivity given relative to the background.
    pub fn with_relative_permittivity(
        location: Vec2,
        radius: f64,
        eps_rel: f64,
        medium: &Medium,
    ) -> Result<Self> {
        Inhomogeneity::new(location, radius, eps_rel * medium.eps0)
    }

    pub fn relative_permittivity(&self, medium: &Medium) -> f64 {
        self.permittivity / medium.eps0
    }

    /// `alpha * sqrt(eps/eps0) / (lambda/2)`; the small-obstacle model wants
    /// this well below one.
    pub fn admissibility_ratio(&self, medium: &Medium) -> f64 {
        self.radius * self.relative_permittivity(medium).sqrt() / (0.5 * medium.wavelength)
    }

    pub fn contains(&self, p: Vec2) -> bool {
        p.distance(self.location) <= self.radius
    }
}

/// Axis-aligned square region of interest.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Roi {
    pub center: Vec2,
    pub side: f64,
}

impl Roi {
    pub fn contains(&self, p: Vec2) -> bool {
        let h = 0.5 * self.side;
        (p.x - self.center.x).abs() <= h && (p.y - self.center.y).abs() <= h
    }
}

/// Ratio above which a scatterer is reported as violating the small-obstacle
/// hypothesis. "Much smaller than" has no sharp value; half is used.
pub const ADMISSIBILITY_WARN_RATIO: f64 = 0.5;

#[derive(Debug, Clone, PartialEq)]
pub struct Scene {
    pub medium: Medium,
    pub inhomogeneities: Vec<Inhomogeneity>,
    pub roi: Roi,
    min_separation: Option<f64>,
}

impl Scene {
    pub fn new(medium: Medium, inhomogeneities: Vec<Inhomogeneity>, roi: Roi) -> Result<Self> {
        if !(roi.side.is_finite() && roi.side > 0.0) {
            return Err(Error::Domain(format!(
                "roi side must be positive, got {}",
                roi.side
            )));
        }
        for (m, inh) in inhomogeneities.iter().enumerate() {
            if !roi.contains(inh.location) {
                return Err(Error::Domain(format!(
                    "inhomogeneity {m} at ({}, {}) lies outside the region of interest",
                    inh.location.x, inh.location.y
                )));
            }
        }
        let mut min_separation: Option<f64> = None;
        for (i, a) in inhomogeneities.iter().enumerate() {
            for b in &inhomogeneities[i + 1..] {
                let d = a.location.distance(b.location);
                min_separation = Some(min_separation.map_or(d, |s| s.min(d)));
            }
        }
        if let Some(d0) = min_separation {
            if d0 <= 0.0 {
                return Err(Error::Domain(
                    "inhomogeneities must have distinct locations".into(),
                ));
            }
        }
        Ok(Scene {
            medium,
            inhomogeneities,
            roi,
            min_separation,
        })
    }

    /// Smallest pairwise distance between scatterer locations; `None` for
    /// fewer than two scatterers.
    pub fn min_separation(&self) -> Option<f64> {
        self.min_separation
    }

    pub fn len(&self) -> usize {
        self.inhomogeneities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inhomogeneities.is_empty()
    }

    /// Human-readable warnings for scatterers too large for the asymptotic
    /// model.
    pub fn admissibility_warnings(&self) -> Vec<String> {
        self.inhomogeneities
            .iter()
            .enumerate()
            .filter_map(|(m, inh)| {
                let ratio = inh.admissibility_ratio(&self.medium);
                (ratio > ADMISSIBILITY_WARN_RATIO).then(|| {
                    format!(
                        "inhomogeneity {m}: alpha*sqrt(eps_r)/(lambda/2) = {ratio:.3}, \
                         small-obstacle hypothesis does not hold"
                    )
                })
            })
            .collect()
    }

    /// Copy of the scene with every location rotated about the origin.
    pub fn rotated(&self, angle: f64) -> Result<Scene> {
        let inhomogeneities = self
            .inhomogeneities
            .iter()
            .map(|inh| Inhomogeneity {
                location: inh.location.rotate(angle),
                ..*inh
            })
            .collect();
        Scene::new(self.medium, inhomogeneities, self.roi)
    }
}

const FULL_CIRCLE_TOL: f64 = 1e-12;

/// Ordered set of unit directions on an arc of the unit circle.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectionSet {
    directions: Vec<Vec2>,
    angles: Vec<f64>,
    arc: (f64, f64),
    monostatic: bool,
}

impl DirectionSet {
    /// `n` directions on `[arc_start, arc_end]`. A full circle places the
    /// first direction at `arc_start` and drops the duplicate endpoint;
    /// shorter arcs include both endpoints.
    pub fn new(n: usize, arc_start: f64, arc_end: f64, monostatic: bool) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("direction count must be at least 1".into()));
        }
        if !(arc_start.is_finite() && arc_end.is_finite()) || arc_end <= arc_start {
            return Err(Error::Domain(format!(
                "arc end must exceed arc start, got [{arc_start}, {arc_end}]"
            )));
        }
        let span = arc_end - arc_start;
        if span > 2.0 * PI + FULL_CIRCLE_TOL {
            return Err(Error::Domain(format!(
                "arc spans more than a full circle ({span})"
            )));
        }
        let full = (span - 2.0 * PI).abs() <= FULL_CIRCLE_TOL;
        let angles: Vec<f64> = (0..n)
            .map(|i| {
                if full {
                    arc_start + 2.0 * PI * i as f64 / n as f64
                } else if n == 1 {
                    arc_start
                } else {
                    arc_start + span * i as f64 / (n - 1) as f64
                }
            })
            .collect();
        let directions = angles.iter().map(|&t| Vec2::from_angle(t)).collect();
        Ok(DirectionSet {
            directions,
            angles,
            arc: (arc_start, arc_end),
            monostatic,
        })
    }

    pub fn full_circle(n: usize, monostatic: bool) -> Result<Self> {
        DirectionSet::new(n, 0.0, 2.0 * PI, monostatic)
    }

    pub fn directions(&self) -> &[Vec2] {
        &self.directions
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    pub fn arc(&self) -> (f64, f64) {
        self.arc
    }

    pub fn is_monostatic(&self) -> bool {
        self.monostatic
    }

    pub fn len(&self) -> usize {
        self.directions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.directions.is_empty()
    }

    /// Transmit direction paired with receive direction `n` in the
    /// mono-static configuration.
    pub fn monostatic_transmit(&self, n: usize) -> Vec2 {
        -self.directions[n]
    }

    /// Same arc and count, rotated by `angle`.
    pub fn rotated(&self, angle: f64) -> Result<Self> {
        DirectionSet::new(
            self.len(),
            self.arc.0 + angle,
            self.arc.1 + angle,
            self.monostatic,
        )
    }
}

/// Uniform grid of sampling points at pixel centers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplingGrid {
    /// Lower-left corner of the bounding square.
    pub origin: Vec2,
    pub pixel: f64,
    pub nx: usize,
    pub ny: usize,
}

impl SamplingGrid {
    /// Square grid of `n_per_side²` pixels centered on `center`.
    pub fn square(center: Vec2, side: f64, n_per_side: usize) -> Result<Self> {
        if !(side.is_finite() && side > 0.0) {
            return Err(Error::Domain(format!("grid side must be positive, got {side}")));
        }
        if n_per_side == 0 {
            return Err(Error::Domain("grid needs at least one pixel per side".into()));
        }
        Ok(SamplingGrid {
            origin: Vec2::new(center.x - 0.5 * side, center.y - 0.5 * side),
            pixel: side / n_per_side as f64,
            nx: n_per_side,
            ny: n_per_side,
        })
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Row-major linear index.
    pub fn index(&self, ix: usize, iy: usize) -> usize {
        iy * self.nx + ix
    }

    pub fn coords(&self, index: usize) -> (usize, usize) {
        (index % self.nx, index / self.nx)
    }

    pub fn point(&self, ix: usize, iy: usize) -> Vec2 {
        Vec2::new(
            self.origin.x + (ix as f64 + 0.5) * self.pixel,
            self.origin.y + (iy as f64 + 0.5) * self.pixel,
        )
    }

    pub fn point_at(&self, index: usize) -> Vec2 {
        let (ix, iy) = self.coords(index);
        self.point(ix, iy)
    }

    /// All pixel centers in row-major order.
    pub fn points(&self) -> impl Iterator<Item = Vec2> + '_ {
        (0..self.len()).map(move |i| self.point_at(i))
    }

    /// Pixel whose center is nearest to `p`, clamped to the grid.
    pub fn nearest(&self, p: Vec2) -> (usize, usize) {
        let clamp = |v: f64, n: usize| -> usize {
            let i = ((v / self.pixel) - 0.5).round();
            if i < 0.0 {
                0
            } else {
                (i as usize).min(n - 1)
            }
        };
        (
            clamp(p.x - self.origin.x, self.nx),
            clamp(p.y - self.origin.y, self.ny),
        )
    }

    pub fn pixel_diagonal(&self) -> f64 {
        self.pixel * std::f64::consts::SQRT_2
    }

    /// Upper-right corner of the bounding square.
    pub fn extent(&self) -> Vec2 {
        Vec2::new(
            self.origin.x + self.nx as f64 * self.pixel,
            self.origin.y + self.ny as f64 * self.pixel,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn medium_reproduces_experiment_frequency() {
        let m = Medium::new(0.4, 1.256e-6, 8.856e-12).unwrap();
        assert!((m.frequency - 749.481e6).abs() / 749.481e6 < 1e-3);
        assert!((m.wavenumber - 15.707963267948966).abs() < 1e-12);
        let k_from_omega = m.angular_frequency * (m.eps0 * m.mu0).sqrt();
        assert!((k_from_omega - m.wavenumber).abs() / m.wavenumber < 1e-12);
    }

    #[test]
    fn medium_unit_normalization() {
        let m = Medium::new(2.0 * PI, 1.0, 1.0).unwrap();
        assert!((m.wavenumber - 1.0).abs() < 1e-15);
        assert!((m.angular_frequency - 1.0).abs() < 1e-15);
    }

    #[test]
    fn medium_rejects_non_positive() {
        assert!(matches!(Medium::new(0.0, 1.0, 1.0), Err(Error::Domain(_))));
        assert!(matches!(Medium::new(1.0, -1.0, 1.0), Err(Error::Domain(_))));
        assert!(matches!(Medium::new(1.0, 1.0, f64::NAN), Err(Error::Domain(_))));
    }

    #[test]
    fn full_circle_directions() {
        let d = DirectionSet::full_circle(36, true).unwrap();
        assert_eq!(d.directions()[0], Vec2::new(1.0, 0.0));
        let tenth = d.directions()[9];
        assert!((tenth.x - 0.0).abs() < 1e-15 && (tenth.y - 1.0).abs() < 1e-15);
        for v in d.directions() {
            assert!((v.norm() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn half_circle_includes_endpoints() {
        let d = DirectionSet::new(19, 0.0, PI, true).unwrap();
        for (i, &t) in d.angles().iter().enumerate() {
            assert!((t - i as f64 * PI / 18.0).abs() < 1e-14);
        }
        assert_eq!(*d.angles().last().unwrap(), PI);
    }

    #[test]
    fn single_direction_sits_at_arc_start() {
        let d = DirectionSet::new(1, 0.7, 2.0, false).unwrap();
        assert_eq!(d.angles(), &[0.7]);
    }

    #[test]
    fn direction_set_errors() {
        assert!(DirectionSet::new(0, 0.0, 1.0, false).is_err());
        assert!(DirectionSet::new(3, 1.0, 1.0, false).is_err());
        assert!(DirectionSet::new(3, 0.0, 7.0, false).is_err());
    }

    #[test]
    fn even_full_circle_is_antipodal() {
        let d = DirectionSet::full_circle(36, false).unwrap();
        let dirs = d.directions();
        for (n, v) in dirs.iter().enumerate() {
            let w = dirs[(n + 18) % 36];
            assert!((v.x + w.x).abs() < 1e-12 && (v.y + w.y).abs() < 1e-12);
        }
    }

    #[test]
    fn grid_pixel_centers() {
        let g = SamplingGrid::square(Vec2::ZERO, 1.6, 50).unwrap();
        assert!((g.pixel - 0.032).abs() < 1e-15);
        let p = g.point(0, 0);
        assert!((p.x + 0.784).abs() < 1e-12 && (p.y + 0.784).abs() < 1e-12);

        let g = SamplingGrid::square(Vec2::new(0.3, -0.2), 1.0, 1).unwrap();
        assert!(g.point(0, 0).distance(Vec2::new(0.3, -0.2)) < 1e-15);

        let g = SamplingGrid::square(Vec2::ZERO, 2.0, 2).unwrap();
        let pts: Vec<_> = g.points().collect();
        assert_eq!(
            pts,
            vec![
                Vec2::new(-0.5, -0.5),
                Vec2::new(0.5, -0.5),
                Vec2::new(-0.5, 0.5),
                Vec2::new(0.5, 0.5)
            ]
        );
    }

    #[test]
    fn grid_enumeration_is_a_bijection_inside_the_square() {
        let g = SamplingGrid::square(Vec2::new(0.1, 0.2), 1.3, 17).unwrap();
        let hi = g.extent();
        let mut seen = std::collections::HashSet::new();
        for (i, p) in g.points().enumerate() {
            assert!(p.x > g.origin.x && p.x < hi.x && p.y > g.origin.y && p.y < hi.y);
            assert_eq!(g.nearest(p), g.coords(i));
            assert!(seen.insert((p.x.to_bits(), p.y.to_bits())));
        }
        assert_eq!(seen.len(), 17 * 17);
    }

    #[test]
    fn scene_separation_and_roi() {
        let m = Medium::with_wavelength(0.4).unwrap();
        let roi = Roi {
            center: Vec2::ZERO,
            side: 1.6,
        };
        let a = Inhomogeneity::with_relative_permittivity(Vec2::new(0.3, -0.3), 0.03, 5.0, &m).unwrap();
        let b = Inhomogeneity::with_relative_permittivity(Vec2::new(-0.4, -0.2), 0.03, 5.0, &m).unwrap();
        let s = Scene::new(m, vec![a, b], roi).unwrap();
        let d0 = s.min_separation().unwrap();
        assert!((d0 - Vec2::new(0.7, -0.1).norm()).abs() < 1e-15);
        let s2 = Scene::new(m, vec![b, a], roi).unwrap();
        assert_eq!(s2.min_separation(), Some(d0));

        let far = Inhomogeneity::new(Vec2::new(2.0, 0.0), 0.03, m.eps0).unwrap();
        assert!(Scene::new(m, vec![far], roi).is_err());
        assert!(Scene::new(m, vec![a, a], roi).is_err());
    }

    #[test]
    fn large_disk_is_flagged() {
        let m = Medium::with_wavelength(0.4).unwrap();
        let roi = Roi {
            center: Vec2::ZERO,
            side: 1.6,
        };
        let small = Inhomogeneity::with_relative_permittivity(Vec2::ZERO, 0.03, 5.0, &m).unwrap();
        assert!(Scene::new(m, vec![small], roi)
            .unwrap()
            .admissibility_warnings()
            .is_empty());
        let big = Inhomogeneity::with_relative_permittivity(Vec2::ZERO, 0.4, 5.0, &m).unwrap();
        assert_eq!(
            Scene::new(m, vec![big], roi)
                .unwrap()
                .admissibility_warnings()
                .len(),
            1
        );
    }
}
