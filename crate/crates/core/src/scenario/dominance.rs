//! Cell-wise check that a bound grid dominates `|exact|`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::CorrelationGrid;

/// Absolute slack separating genuine violations from rounding.
pub const DOMINANCE_SLACK: f64 = 1e-9;

const SLACK_RATIONALE: &str = "a cell violates iff bound < |exact| - 1e-9; the absolute slack \
     absorbs floating-point rounding in both pipelines while any real violation of the inequality \
     at the scale of the plotted correlations is still reported";

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ViolatingCell {
    pub delta: usize,
    pub t: f64,
    pub bound: f64,
    pub exact: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DominanceReport {
    pub scenario: String,
    pub num_cells: usize,
    pub num_violations: usize,
    /// `min(bound - |exact|)` over all cells.
    pub worst_margin: f64,
    pub violating_cells: Vec<ViolatingCell>,
    pub slack: f64,
    pub slack_rationale: &'static str,
}

impl DominanceReport {
    pub fn passed(&self) -> bool {
        self.num_violations == 0
    }
}

pub fn verify_dominance(
    scenario: &str,
    bound: &CorrelationGrid,
    exact: &CorrelationGrid,
) -> Result<DominanceReport> {
    if !bound.same_axes(exact) {
        return Err(Error::AxisMismatch(format!(
            "bound grid {:?} vs exact grid {:?}",
            bound.shape(),
            exact.shape()
        )));
    }
    let (rows, cols) = bound.shape();
    let mut worst_margin = f64::INFINITY;
    let mut violating_cells = Vec::new();
    for row in 0..rows {
        for col in 0..cols {
            let b = bound.get(row, col);
            let e = exact.get(row, col);
            worst_margin = worst_margin.min(b - e.abs());
            if b < e.abs() - DOMINANCE_SLACK {
                violating_cells.push(ViolatingCell {
                    delta: bound.distances[row],
                    t: bound.times[col],
                    bound: b,
                    exact: e,
                });
            }
        }
    }
    Ok(DominanceReport {
        scenario: scenario.to_owned(),
        num_cells: rows * cols,
        num_violations: violating_cells.len(),
        worst_margin,
        violating_cells,
        slack: DOMINANCE_SLACK,
        slack_rationale: SLACK_RATIONALE,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(values: Vec<f64>) -> CorrelationGrid {
        CorrelationGrid::new("g", vec![2, 4], vec![0.0, 1.0], values).unwrap()
    }

    #[test]
    fn unit_bound_dominates_anything_normalised() {
        let r = verify_dominance("s", &grid(vec![1.0; 4]), &grid(vec![-1.0, 0.3, 0.99, 0.0])).unwrap();
        assert!(r.passed());
        assert_eq!(r.num_cells, 4);
        assert_eq!(r.worst_margin, 0.0);
    }

    #[test]
    fn single_violation_is_reported() {
        let r = verify_dominance("s", &grid(vec![0.0; 4]), &grid(vec![0.0, 0.0, 0.5, 0.0])).unwrap();
        assert_eq!(r.num_violations, 1);
        assert_eq!(r.worst_margin, -0.5);
        assert_eq!(r.violating_cells[0], ViolatingCell { delta: 4, t: 0.0, bound: 0.0, exact: 0.5 });
    }

    #[test]
    fn slack_absorbs_rounding() {
        let r = verify_dominance("s", &grid(vec![0.5; 4]), &grid(vec![0.5 + 1e-12; 4])).unwrap();
        assert!(r.passed());
        assert!(r.worst_margin < 0.0);
    }

    #[test]
    fn axes_must_match() {
        let other = CorrelationGrid::new("g", vec![2, 6], vec![0.0, 1.0], vec![0.0; 4]).unwrap();
        assert!(matches!(
            verify_dominance("s", &grid(vec![0.0; 4]), &other),
            Err(Error::AxisMismatch(_))
        ));
    }
}
