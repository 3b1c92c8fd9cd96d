//! Test-only reference implementations, independent of the production code.
#![allow(dead_code)]

pub mod oracle;

use dsm_core::prelude::*;

/// One disk with `eps_rel = 5` and radius `0.075 λ`.
pub fn small_disk(medium: &Medium, at: Vec2) -> Inhomogeneity {
    Inhomogeneity::with_relative_permittivity(at, 0.075 * medium.wavelength, 5.0, medium).unwrap()
}

pub fn scene_of(medium: Medium, side: f64, disks: &[Vec2]) -> Scene {
    let roi = Roi {
        center: Vec2::ZERO,
        side,
    };
    let inh = disks.iter().map(|&p| small_disk(&medium, p)).collect();
    Scene::new(medium, inh, roi).unwrap()
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}
