//! Support maps, thresholding, Jaccard scores and peak extraction.

use crate::error::{Error, Result};
use crate::imaging::IndicatorMap;
use crate::scene::{SamplingGrid, Scene, Vec2};

/// Values within this distance below a threshold still count as reaching it,
/// so `kappa = 1` keeps every pixel equal to the maximum up to rounding.
pub const THRESHOLD_TOLERANCE: f64 = 1e-12;

/// Binary membership per grid pixel.
#[derive(Debug, Clone, PartialEq)]
pub struct SupportMap {
    pub grid: SamplingGrid,
    pub membership: Vec<bool>,
}

impl SupportMap {
    pub fn count(&self) -> usize {
        self.membership.iter().filter(|&&b| b).count()
    }

    pub fn is_subset_of(&self, other: &SupportMap) -> bool {
        self.membership
            .iter()
            .zip(&other.membership)
            .all(|(&a, &b)| !a || b)
    }
}

/// Jaccard score (percent) per threshold.
#[derive(Debug, Clone, PartialEq)]
pub struct JaccardCurve {
    pub thresholds: Vec<f64>,
    pub scores: Vec<f64>,
}

/// Default threshold sweep `0.00, 0.01, ..., 1.00`.
pub fn default_thresholds() -> Vec<f64> {
    (0..=100).map(|i| i as f64 / 100.0).collect()
}

/// Pixels whose center lies in some scatterer disk.
pub fn exact_support(scene: &Scene, grid: &SamplingGrid) -> SupportMap {
    let membership = grid
        .points()
        .map(|z| scene.inhomogeneities.iter().any(|inh| inh.contains(z)))
        .collect();
    SupportMap {
        grid: *grid,
        membership,
    }
}

fn check_kappa(kappa: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&kappa) {
        return Err(Error::Domain(format!(
            "threshold must lie in [0, 1], got {kappa}"
        )));
    }
    Ok(())
}

/// Pixels where the normalized indicator reaches `kappa`.
pub fn threshold_map(map: &IndicatorMap, kappa: f64) -> Result<SupportMap> {
    check_kappa(kappa)?;
    let membership = map
        .values
        .iter()
        .map(|&v| v >= kappa - THRESHOLD_TOLERANCE)
        .collect();
    Ok(SupportMap {
        grid: map.grid,
        membership,
    })
}

/// `100 |A ∩ B| / |A ∪ B|`, and 100 when both sets are empty.
pub fn jaccard(a: &SupportMap, b: &SupportMap) -> Result<f64> {
    if a.grid != b.grid || a.membership.len() != b.membership.len() {
        return Err(Error::Usage("Jaccard index needs maps on the same grid".into()));
    }
    let (mut inter, mut union) = (0usize, 0usize);
    for (&x, &y) in a.membership.iter().zip(&b.membership) {
        inter += (x && y) as usize;
        union += (x || y) as usize;
    }
    if union == 0 {
        return Ok(100.0);
    }
    Ok(100.0 * inter as f64 / union as f64)
}

pub fn jaccard_curve(
    indicator: &IndicatorMap,
    exact: &SupportMap,
    thresholds: &[f64],
) -> Result<JaccardCurve> {
    for &k in thresholds {
        check_kappa(k)?;
    }
    if thresholds.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Domain("thresholds must be strictly ascending".into()));
    }
    let scores = thresholds
        .iter()
        .map(|&k| jaccard(&threshold_map(indicator, k)?, exact))
        .collect::<Result<Vec<_>>>()?;
    Ok(JaccardCurve {
        thresholds: thresholds.to_vec(),
        scores,
    })
}

/// One connected component of a superlevel set, represented by its highest
/// pixel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peak {
    pub index: usize,
    pub location: Vec2,
    pub value: f64,
}

/// Components (4-connected) of `{map >= kappa}`, each reported at its maximum
/// pixel, sorted by descending value then ascending index.
pub fn peak_locations(map: &IndicatorMap, kappa: f64) -> Result<Vec<Peak>> {
    let mask = threshold_map(map, kappa)?.membership;
    let g = &map.grid;
    let mut visited = vec![false; g.len()];
    let mut peaks = Vec::new();
    let mut stack = Vec::new();
    for start in 0..g.len() {
        if !mask[start] || visited[start] {
            continue;
        }
        visited[start] = true;
        stack.push(start);
        let mut best = start;
        while let Some(i) = stack.pop() {
            if map.values[i] > map.values[best] || (map.values[i] == map.values[best] && i < best) {
                best = i;
            }
            let (ix, iy) = g.coords(i);
            let mut visit = |j: usize| {
                if mask[j] && !visited[j] {
                    visited[j] = true;
                    stack.push(j);
                }
            };
            if ix > 0 {
                visit(i - 1);
            }
            if ix + 1 < g.nx {
                visit(i + 1);
            }
            if iy > 0 {
                visit(i - g.nx);
            }
            if iy + 1 < g.ny {
                visit(i + g.nx);
            }
        }
        peaks.push(Peak {
            index: best,
            location: g.point_at(best),
            value: map.values[best],
        });
    }
    peaks.sort_by(|a, b| b.value.total_cmp(&a.value).then(a.index.cmp(&b.index)));
    Ok(peaks)
}

/// Pixels not exceeded by any of their 8 neighbours, in index order.
pub fn local_maxima(map: &IndicatorMap) -> Vec<Peak> {
    let g = &map.grid;
    let mut out = Vec::new();
    for iy in 0..g.ny {
        for ix in 0..g.nx {
            let v = map.value_at(ix, iy);
            let mut is_max = true;
            'scan: for dy in -1i64..=1 {
                for dx in -1i64..=1 {
                    let (jx, jy) = (ix as i64 + dx, iy as i64 + dy);
                    if (dx == 0 && dy == 0) || jx < 0 || jy < 0 || jx >= g.nx as i64 || jy >= g.ny as i64 {
                        continue;
                    }
                    if map.value_at(jx as usize, jy as usize) > v {
                        is_max = false;
                        break 'scan;
                    }
                }
            }
            if is_max {
                let index = g.index(ix, iy);
                out.push(Peak {
                    index,
                    location: g.point_at(index),
                    value: v,
                });
            }
        }
    }
    out
}

/// Distance from `target` to the closest of `peaks`.
pub fn localization_error(peaks: &[Peak], target: Vec2) -> Option<f64> {
    peaks
        .iter()
        .map(|p| p.location.distance(target))
        .min_by(f64::total_cmp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::imaging::IndicatorKind;
    use crate::scene::{Inhomogeneity, Medium, Roi};

    fn grid(n: usize) -> SamplingGrid {
        SamplingGrid::square(Vec2::ZERO, 1.0, n).unwrap()
    }

    fn support(n: usize, on: &[usize]) -> SupportMap {
        let mut membership = vec![false; n * n];
        for &i in on {
            membership[i] = true;
        }
        SupportMap {
            grid: grid(n),
            membership,
        }
    }

    fn map(n: usize, values: Vec<f64>) -> IndicatorMap {
        IndicatorMap::from_normalized(grid(n), values, IndicatorKind::MdsmMono).unwrap()
    }

    #[test]
    fn jaccard_unit_cases() {
        let a = support(3, &[0, 1, 2]);
        assert_eq!(jaccard(&a, &a).unwrap(), 100.0);
        assert_eq!(jaccard(&a, &support(3, &[4, 5])).unwrap(), 0.0);
        assert_eq!(
            jaccard(&support(3, &[0, 1]), &support(3, &[1, 2, 3])).unwrap(),
            25.0
        );
        assert_eq!(jaccard(&support(3, &[]), &support(3, &[])).unwrap(), 100.0);
        assert!(jaccard(&support(3, &[]), &support(4, &[])).is_err());
    }

    #[test]
    fn threshold_extremes() {
        let m = map(2, vec![0.2, 1.0, 0.0, 1.0 - 1e-13]);
        assert_eq!(threshold_map(&m, 0.0).unwrap().count(), 4);
        assert_eq!(
            threshold_map(&m, 1.0).unwrap().membership,
            vec![false, true, false, true]
        );
        assert!(threshold_map(&m, 1.5).is_err());
        assert!(threshold_map(&m, -0.1).is_err());
    }

    #[test]
    fn exact_support_cases() {
        let m = Medium::with_wavelength(0.4).unwrap();
        let roi = Roi {
            center: Vec2::ZERO,
            side: 1.0,
        };
        let g = grid(10);
        let big = Inhomogeneity::with_relative_permittivity(Vec2::ZERO, 1.0, 5.0, &m).unwrap();
        let s = Scene::new(m, vec![big], roi).unwrap();
        assert_eq!(exact_support(&s, &g).count(), 100);
        let empty = Scene::new(m, vec![], roi).unwrap();
        assert_eq!(exact_support(&empty, &g).count(), 0);
    }

    #[test]
    fn curve_of_exact_indicator_is_perfect() {
        let on = [3, 4, 8];
        let exact = support(4, &on);
        let values = (0..16).map(|i| if on.contains(&i) { 1.0 } else { 0.0 }).collect();
        let curve = jaccard_curve(&map(4, values), &exact, &[0.1, 0.5, 1.0]).unwrap();
        assert_eq!(curve.scores, vec![100.0; 3]);
        let none = support(4, &[]);
        let values = (0..16).map(|i| i as f64 / 15.0).collect();
        let curve = jaccard_curve(&map(4, values), &none, &[0.5]).unwrap();
        assert_eq!(curve.scores, vec![0.0]);
        assert!(jaccard_curve(&map(4, vec![0.0; 16]), &none, &[0.5, 0.2]).is_err());
    }

    #[test]
    fn peaks_are_components_ordered_by_value() {
        #[rustfmt::skip]
        let values = vec![
            0.9, 0.0, 0.0, 0.0,
            0.8, 0.0, 0.6, 0.0,
            0.0, 0.0, 1.0, 0.7,
            0.0, 0.0, 0.0, 0.0,
        ];
        let m = map(4, values);
        let peaks = peak_locations(&m, 0.5).unwrap();
        let idx: Vec<_> = peaks.iter().map(|p| p.index).collect();
        assert_eq!(idx, vec![10, 0]);
        let top = peak_locations(&m, 1.0).unwrap();
        assert_eq!(top.len(), 1);
        assert_eq!(top[0].index, 10);
        assert!(peak_locations(&m, 1.0).unwrap()[0].value == 1.0);
        assert!(peak_locations(&map(4, vec![0.1; 16]), 0.5).unwrap().is_empty());
    }

    #[test]
    fn local_maxima_finds_isolated_peaks() {
        #[rustfmt::skip]
        let values = vec![
            0.9, 0.1, 0.0,
            0.1, 0.0, 0.1,
            0.0, 0.2, 1.0,
        ];
        let peaks = local_maxima(&map(3, values));
        let idx: Vec<_> = peaks.iter().map(|p| p.index).collect();
        assert_eq!(idx, vec![0, 8]);
        assert_eq!(localization_error(&peaks, peaks[1].location), Some(0.0));
    }
}
