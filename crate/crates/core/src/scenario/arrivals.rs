//! First-passage times of `|value|` through a threshold.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::grid::CorrelationGrid;

pub const DEFAULT_THRESHOLD: f64 = 0.1;

/// For each distance, the first time `|value| >= threshold`, linearly
/// interpolated between the bracketing grid times; `None` if never reached.
pub fn arrival_times(grid: &CorrelationGrid, threshold: f64) -> Result<BTreeMap<usize, Option<f64>>> {
    if !(threshold.is_finite() && threshold > 0.0) {
        return Err(Error::param("threshold", format!("must be positive, got {threshold}")));
    }
    let times = &grid.times;
    Ok(grid
        .distances
        .iter()
        .enumerate()
        .map(|(row, &delta)| {
            let values = grid.row(row);
            let hit = values.iter().position(|v| v.abs() >= threshold).map(|k| {
                if k == 0 {
                    return times[0];
                }
                let (lo, hi) = (values[k - 1].abs(), values[k].abs());
                let frac = (threshold - lo) / (hi - lo);
                times[k - 1] + frac * (times[k] - times[k - 1])
            });
            (delta, hit)
        })
        .collect())
}

/// Least-squares line `t = intercept + slope·δ` through the reached
/// arrivals, with the RMS residual relative to the mean arrival time.
pub fn linear_fit(arrivals: &BTreeMap<usize, Option<f64>>) -> Option<(f64, f64, f64)> {
    let pts: Vec<(f64, f64)> = arrivals
        .iter()
        .filter_map(|(&d, t)| t.map(|t| (d as f64, t)))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rms = (pts.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum::<f64>() / n).sqrt();
    Some((slope, intercept, rms / my.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_grid_never_arrives() {
        let g = CorrelationGrid::new("z", vec![2, 4], vec![0.0, 1.0, 2.0], vec![0.0; 6]).unwrap();
        let a = arrival_times(&g, 0.1).unwrap();
        assert!(a.values().all(Option::is_none));
        assert!(arrival_times(&g, 0.0).is_err());
    }

    #[test]
    fn interpolates_between_bracketing_times() {
        let g = CorrelationGrid::new(
            "x",
            vec![2, 4, 6],
            vec![0.0, 1.0, 2.0],
            vec![0.0, -0.2, 0.4, 0.5, 0.5, 0.5, 0.0, 0.05, 0.15],
        )
        .unwrap();
        let a = arrival_times(&g, 0.1).unwrap();
        assert!((a[&2].unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(a[&4], Some(0.0));
        assert!((a[&6].unwrap() - 1.5).abs() < 1e-15);
    }

    #[test]
    fn fit_recovers_a_line() {
        let a: BTreeMap<usize, Option<f64>> = (1..6).map(|d| (d, Some(0.5 + 0.25 * d as f64))).collect();
        let (slope, intercept, rel) = linear_fit(&a).unwrap();
        assert!((slope - 0.25).abs() < 1e-12 && (intercept - 0.5).abs() < 1e-12 && rel < 1e-12);
    }
}
