mod support;

use std::f64::consts::PI;

use dsm_core::config::preset;
use dsm_core::imaging::{main_lobe_radius, psi1_value, psi2_value};
use dsm_core::prelude::*;
use dsm_core::specialfn::bessel_j0;
use proptest::prelude::*;
use support::{max_abs_diff, scene_of};

const LAMBDA: f64 = 0.4;

fn medium() -> Medium {
    Medium::with_wavelength(LAMBDA).unwrap()
}

fn example1() -> Scene {
    preset("example1").unwrap().validate().unwrap().scene
}

fn grid50() -> SamplingGrid {
    SamplingGrid::square(Vec2::ZERO, 4.0 * LAMBDA, 50).unwrap()
}

// (ix, iy, raw, normalized) from an independent scripted evaluation on the
// 50 x 50 grid of side 4 λ.
const PSI1: [(usize, usize, f64, f64); 5] = [
    (0, 0, 1.509_756_291_005_466_4e-14, 0.147_584_217_317_787_23),
    (17, 33, 1.011_979_852_949_010_4e-14, 0.098_924_743_966_050_05),
    (34, 15, -4.193_196_876_193_321e-16, 0.004_099_003_810_874_936),
    (49, 49, -1.393_531_785_730_192e-14, 0.136_222_845_455_064_33),
    (25, 24, 1.720_683_786_817_865_6e-14, 0.168_203_154_006_928_04),
];
const PSI2: [(usize, usize, f64, f64); 5] = [
    (0, 0, -8.328_368_411_657_789e-15, 0.081_624_520_002_262_92),
    (17, 33, -4.116_756_808_599_288e-14, 0.403_474_344_383_712_4),
    (34, 15, 6.921_709_276_739_707e-14, 0.678_381_610_158_174_7),
    (49, 49, -1.492_979_540_363_756_2e-14, 0.146_323_664_290_366_5),
    (25, 24, 9.541_898_188_598_349e-15, 0.093_518_060_327_949_51),
];

#[test]
fn structure_maps_match_scripted_values() {
    let s = example1();
    let g = grid50();
    let m1 = imaging::psi1_map(&s, &g).unwrap();
    let m2 = imaging::psi2_map(&s, &g).unwrap();
    for (table, map, value) in [
        (PSI1, &m1, psi1_value as fn(&Scene, Vec2) -> Result<f64>),
        (PSI2, &m2, psi2_value),
    ] {
        for (ix, iy, raw, norm) in table {
            let v = value(&s, g.point(ix, iy)).unwrap();
            assert!(
                (v - raw).abs() <= 1e-12 * raw.abs().max(1e-15),
                "raw at ({ix},{iy})"
            );
            assert!(
                (map.value_at(ix, iy) - norm).abs() < 1e-12,
                "normalized at ({ix},{iy})"
            );
        }
    }
}

#[test]
fn psi2_main_lobe_is_half_as_wide() {
    let m = medium();
    let r = Vec2::new(0.1, -0.05);
    let s = scene_of(m, 1.6, &[r]);
    let first_zero = 2.404_825_557_695_773;
    let r2 = main_lobe_radius(&m, 2.0);
    assert!((r2 - first_zero / (2.0 * m.wavenumber)).abs() < 1e-15);
    assert!((2.0 * r2 - main_lobe_radius(&m, 1.0)).abs() < 1e-15);
    let peak = psi2_value(&s, r).unwrap();
    for t in [0.0, 1.0, 2.5] {
        let v = psi2_value(&s, r + r2 * Vec2::from_angle(t)).unwrap();
        assert!(v.abs() < 1e-12 * peak.abs());
    }
}

/// Normalized `|J0(k|z - c|)|` on a grid.
fn j0_map(grid: &SamplingGrid, c: Vec2, k: f64) -> Vec<f64> {
    let raw: Vec<f64> = grid
        .points()
        .map(|z| bessel_j0(k * z.distance(c)).unwrap().abs())
        .collect();
    let max = raw.iter().cloned().fold(0.0, f64::max);
    raw.into_iter().map(|v| v / max).collect()
}

#[test]
fn single_transmit_map_approaches_j0() {
    let m = medium();
    let r = Vec2::new(0.15, 0.1);
    let s = scene_of(m, 2.4, &[r]);
    let g = SamplingGrid::square(Vec2::ZERO, 2.4, 61).unwrap();
    let dirs = DirectionSet::full_circle(360, false).unwrap();
    let data = forward::multistatic_matrix(&s, &DirectionSet::full_circle(1, false).unwrap(), &dirs).unwrap();
    let map = imaging::dsm_single(data.row(0), &dirs, &g, &m).unwrap();
    assert!(max_abs_diff(&map.values, &j0_map(&g, r, m.wavenumber)) < 0.02);
}

#[test]
fn mono_maps_converge_to_structure_maps() {
    let m = medium();
    let r = Vec2::new(0.5 * LAMBDA, -0.3 * LAMBDA);
    let s = scene_of(m, 6.0 * LAMBDA, &[r]);
    let g = SamplingGrid::square(Vec2::ZERO, 6.0 * LAMBDA, 75).unwrap();
    let p1 = imaging::psi1_map(&s, &g).unwrap();
    let p2 = imaging::psi2_map(&s, &g).unwrap();
    let mut last = (f64::INFINITY, f64::INFINITY);
    for n in [36, 90, 360] {
        let dirs = DirectionSet::full_circle(n, true).unwrap();
        let data = forward::monostatic_sweep(&s, &dirs).unwrap();
        let d1 = max_abs_diff(
            &imaging::dsm_mono(&data, &dirs, &g, &m).unwrap().values,
            &p1.values,
        );
        let d2 = max_abs_diff(
            &imaging::mdsm_mono(&data, &dirs, &g, &m).unwrap().values,
            &p2.values,
        );
        assert!(d1 <= last.0 + 1e-12 && d2 <= last.1 + 1e-12, "N = {n}: {d1} {d2}");
        last = (d1, d2);
    }
    assert!(last.0 < 0.02 && last.1 < 0.02);
}

#[test]
fn quarter_turn_rotates_maps_pointwise() {
    let m = medium();
    let s = scene_of(m, 1.6, &[Vec2::new(0.3, -0.1), Vec2::new(-0.2, -0.35)]);
    let g = grid50();
    let dirs = DirectionSet::full_circle(36, true).unwrap();
    let turned = s.rotated(PI / 2.0).unwrap();
    let tdirs = dirs.rotated(PI / 2.0).unwrap();
    let a = imaging::mdsm_mono(&forward::monostatic_sweep(&s, &dirs).unwrap(), &dirs, &g, &m).unwrap();
    let b = imaging::mdsm_mono(
        &forward::monostatic_sweep(&turned, &tdirs).unwrap(),
        &tdirs,
        &g,
        &m,
    )
    .unwrap();
    for (i, z) in g.points().enumerate() {
        let (ix, iy) = g.nearest(z.rotate(-PI / 2.0));
        assert!((b.values[i] - a.value_at(ix, iy)).abs() < 1e-9);
    }
}

fn location() -> impl Strategy<Value = Vec2> {
    (0.0f64..LAMBDA, 0.0f64..(2.0 * PI)).prop_map(|(r, t)| r * Vec2::from_angle(t))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn shift_law(r in location()) {
        let m = medium();
        let s = scene_of(m, 6.0 * LAMBDA, &[r]);
        let g = SamplingGrid::square(Vec2::ZERO, 6.0 * LAMBDA, 75).unwrap();
        let dirs = DirectionSet::full_circle(36, true).unwrap();
        let data = forward::monostatic_sweep(&s, &dirs).unwrap();
        let dsm = imaging::dsm_mono(&data, &dirs, &g, &m).unwrap();
        let mdsm = imaging::mdsm_mono(&data, &dirs, &g, &m).unwrap();
        prop_assert!(dsm.argmax_point().distance(2.0 * r) <= g.pixel_diagonal());
        prop_assert!(mdsm.argmax_point().distance(r) <= g.pixel_diagonal());
    }

    #[test]
    fn rotation_moves_the_peak(r in location(), angle in 0.0f64..(2.0 * PI)) {
        let m = medium();
        let s = scene_of(m, 6.0 * LAMBDA, &[r]);
        let g = SamplingGrid::square(Vec2::ZERO, 6.0 * LAMBDA, 75).unwrap();
        let dirs = DirectionSet::full_circle(36, true).unwrap();
        let (ts, tdirs) = (s.rotated(angle).unwrap(), dirs.rotated(angle).unwrap());
        let a = imaging::mdsm_mono(&forward::monostatic_sweep(&s, &dirs).unwrap(), &dirs, &g, &m).unwrap();
        let b = imaging::mdsm_mono(&forward::monostatic_sweep(&ts, &tdirs).unwrap(), &tdirs, &g, &m).unwrap();
        prop_assert!(b.argmax_point().distance(a.argmax_point().rotate(angle)) <= g.pixel_diagonal());
    }

    #[test]
    fn maps_ignore_the_data_scale(mag in 1e-6f64..1e6, phase in 0.0f64..(2.0 * PI), r in location()) {
        let m = medium();
        let s = scene_of(m, 1.6, &[r, Vec2::new(-0.5, 0.5)]);
        let g = SamplingGrid::square(Vec2::ZERO, 1.6, 30).unwrap();
        let c = Complex::from_polar(mag, phase);
        let dirs = DirectionSet::full_circle(24, false).unwrap();
        let multi = forward::multistatic_matrix(&s, &dirs, &dirs).unwrap();
        let a = imaging::dsm_multi(&multi, &dirs, &dirs, &g, &m).unwrap();
        let b = imaging::dsm_multi(&multi.scaled(c), &dirs, &dirs, &g, &m).unwrap();
        prop_assert!(max_abs_diff(&a.values, &b.values) < 1e-12);
        let mdirs = DirectionSet::full_circle(24, true).unwrap();
        let mono = forward::monostatic_sweep(&s, &mdirs).unwrap();
        for f in [imaging::dsm_mono, imaging::mdsm_mono] {
            let a = f(&mono, &mdirs, &g, &m).unwrap();
            let b = f(&mono.scaled(c), &mdirs, &g, &m).unwrap();
            prop_assert!(max_abs_diff(&a.values, &b.values) < 1e-12);
        }
    }

    #[test]
    fn maps_are_normalized(r in location()) {
        let m = medium();
        let s = scene_of(m, 1.6, &[r]);
        let dirs = DirectionSet::full_circle(19, true).unwrap();
        let map = imaging::dsm_mono(&forward::monostatic_sweep(&s, &dirs).unwrap(), &dirs, &grid50(), &m).unwrap();
        prop_assert!(map.values.iter().all(|v| (0.0..=1.0).contains(v)));
        prop_assert_eq!(map.values[map.argmax()], 1.0);
    }
}
