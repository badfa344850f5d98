//! Distance × time grids shared by the bound engine and the simulators.

use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};

/// Real values on a (distance, time) grid, stored distance-major.
#[derive(Clone, Debug, PartialEq)]
pub struct CorrelationGrid {
    pub label: String,
    pub distances: Vec<usize>,
    pub times: Vec<f64>,
    values: Vec<f64>,
    /// Minimising ball radius per cell, for bound grids.
    argmin_r: Option<Vec<usize>>,
}

/// Compact JSON description of a grid.
#[derive(Clone, Debug, Serialize)]
pub struct GridSummary {
    pub label: String,
    pub distances: Vec<usize>,
    pub times: Vec<f64>,
    pub min: f64,
    pub max: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub argmin_r_grid: Option<Vec<Vec<usize>>>,
}

impl CorrelationGrid {
    pub fn new(
        label: impl Into<String>,
        distances: Vec<usize>,
        times: Vec<f64>,
        values: Vec<f64>,
    ) -> Result<Self> {
        if distances.is_empty() || times.is_empty() {
            return Err(Error::Geometry("grid axes must be nonempty".into()));
        }
        if values.len() != distances.len() * times.len() {
            return Err(Error::Geometry(format!(
                "grid of {}x{} cells given {} values",
                distances.len(),
                times.len(),
                values.len()
            )));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::Geometry(format!("non-finite grid value {v}")));
        }
        Ok(Self {
            label: label.into(),
            distances,
            times,
            values,
            argmin_r: None,
        })
    }

    pub fn from_fn(
        label: impl Into<String>,
        distances: Vec<usize>,
        times: Vec<f64>,
        mut f: impl FnMut(usize, usize) -> f64,
    ) -> Result<Self> {
        let mut values = Vec::with_capacity(distances.len() * times.len());
        for row in 0..distances.len() {
            for col in 0..times.len() {
                values.push(f(row, col));
            }
        }
        Self::new(label, distances, times, values)
    }

    pub(crate) fn with_argmin(mut self, argmin_r: Vec<usize>) -> Self {
        debug_assert_eq!(argmin_r.len(), self.values.len());
        self.argmin_r = Some(argmin_r);
        self
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.distances.len(), self.times.len())
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.times.len() + col]
    }

    pub fn row(&self, row: usize) -> &[f64] {
        let nt = self.times.len();
        &self.values[row * nt..(row + 1) * nt]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn argmin_r(&self, row: usize, col: usize) -> Option<usize> {
        self.argmin_r
            .as_ref()
            .map(|a| a[row * self.times.len() + col])
    }

    pub fn same_axes(&self, other: &CorrelationGrid) -> bool {
        self.distances == other.distances && self.times == other.times
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// CSV with header `delta,t,value`, rows distance-major. Values use the
    /// shortest decimal representation that round-trips exactly.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("delta,t,value\n");
        for (row, delta) in self.distances.iter().enumerate() {
            for (col, t) in self.times.iter().enumerate() {
                let _ = writeln!(out, "{delta},{t:?},{:?}", self.get(row, col));
            }
        }
        out
    }

    /// Parses the output of [`to_csv`](Self::to_csv).
    pub fn from_csv(label: impl Into<String>, text: &str) -> Result<Self> {
        let mut lines = text.lines();
        match lines.next() {
            Some("delta,t,value") => {}
            other => {
                return Err(Error::Geometry(format!("unexpected CSV header {other:?}")));
            }
        }
        let mut distances: Vec<usize> = Vec::new();
        let mut times: Vec<f64> = Vec::new();
        let mut values = Vec::new();
        for (lineno, line) in lines.enumerate() {
            let bad = || Error::Geometry(format!("malformed CSV line {}: {line}", lineno + 2));
            let mut fields = line.split(',');
            let delta: usize = fields.next().and_then(|s| s.parse().ok()).ok_or_else(bad)?;
            let t: f64 = fields.next().and_then(|s| s.parse().ok()).ok_or_else(bad)?;
            let v: f64 = fields.next().and_then(|s| s.parse().ok()).ok_or_else(bad)?;
            if distances.last() != Some(&delta) {
                distances.push(delta);
            }
            if distances.len() == 1 {
                times.push(t);
            }
            values.push(v);
        }
        Self::new(label, distances, times, values)
    }

    pub fn summary(&self) -> GridSummary {
        let nt = self.times.len();
        GridSummary {
            label: self.label.clone(),
            distances: self.distances.clone(),
            times: self.times.clone(),
            min: self.min(),
            max: self.max(),
            argmin_r_grid: self
                .argmin_r
                .as_ref()
                .map(|a| a.chunks(nt).map(<[usize]>::to_vec).collect()),
        }
    }
}

/// `steps` evenly spaced points from `t_min` to `t_max` inclusive.
pub fn linspace(t_min: f64, t_max: f64, steps: usize) -> Vec<f64> {
    match steps {
        0 => Vec::new(),
        1 => vec![t_min],
        _ => {
            let h = (t_max - t_min) / (steps - 1) as f64;
            (0..steps)
                .map(|k| if k == steps - 1 { t_max } else { t_min + h * k as f64 })
                .collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn shape_is_checked() {
        assert!(CorrelationGrid::new("x", vec![1, 2], vec![0.0], vec![0.0]).is_err());
        assert!(CorrelationGrid::new("x", vec![], vec![0.0], vec![]).is_err());
        assert!(CorrelationGrid::new("x", vec![1], vec![0.0], vec![f64::NAN]).is_err());
    }

    #[test]
    fn csv_layout() {
        let g = CorrelationGrid::new("x", vec![2, 4], vec![0.0, 0.5], vec![1.0, 0.1, 0.2, 0.3]).unwrap();
        assert_eq!(
            g.to_csv(),
            "delta,t,value\n2,0.0,1.0\n2,0.5,0.1\n4,0.0,0.2\n4,0.5,0.3\n"
        );
    }

    #[test]
    fn linspace_endpoints() {
        let t = linspace(0.0, 5.0, 101);
        assert_eq!(t.len(), 101);
        assert_eq!(t[0], 0.0);
        assert_eq!(t[100], 5.0);
        assert!((t[1] - 0.05).abs() < 1e-15);
        assert_eq!(linspace(0.3, 1.0, 1), vec![0.3]);
    }

    proptest! {
        #[test]
        fn csv_round_trip_is_exact(
            rows in 1usize..6,
            cols in 1usize..6,
            seed in proptest::collection::vec(-1e3f64..1e3, 36),
            t0 in 0.0f64..3.0,
        ) {
            let distances: Vec<usize> = (1..=rows).map(|d| 2 * d).collect();
            let times = linspace(t0, t0 + 1.7, cols);
            let values: Vec<f64> = (0..rows * cols).map(|k| seed[k] * 1.000_000_1f64.powi(k as i32)).collect();
            let g = CorrelationGrid::new("exact", distances, times, values).unwrap();
            let back = CorrelationGrid::from_csv("exact", &g.to_csv()).unwrap();
            prop_assert_eq!(back, g);
        }
    }
}
