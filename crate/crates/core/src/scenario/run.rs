//! Scenario execution: bound, exact and closed-form grids plus the summary.

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde_json::json;

use super::config::{ClosedFormKind, ObservableKind, RowPlan, ScenarioConfig, SimulationSection};
use super::dominance::{verify_dominance, DominanceReport};
use super::emit::emit_outputs;
use crate::bounds::{bound_block_closed, bound_grid_rows, bound_power_closed, BoundConstants, GridRow};
use crate::error::{Error, Result};
use crate::grid::CorrelationGrid;
use crate::sim::{corr_xx, corr_zz, GaussianEvolver, GaussianState, HoppingMatrix, MagnonState, Propagator};

pub const BOUND_LABEL: &str = "bound";
pub const EXACT_LABEL: &str = "exact";
pub const CLOSED_FORM_LABEL: &str = "closed_form";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RunMode {
    /// Bound grid, plus the closed form if configured.
    Bound,
    /// Exact grid only.
    Simulate,
    /// Everything, with a dominance report.
    Verify,
}

#[derive(Clone, Debug)]
pub struct RunOutput {
    pub grids: Vec<CorrelationGrid>,
    pub report: Option<DominanceReport>,
    pub summary: serde_json::Value,
    pub constants: BoundConstants,
}

impl RunOutput {
    pub fn grid(&self, label: &str) -> Option<&CorrelationGrid> {
        self.grids.iter().find(|g| g.label == label)
    }
}

pub fn run_scenario(cfg: &ScenarioConfig, mode: RunMode) -> Result<RunOutput> {
    cfg.validate()?;
    cfg.check_boundary()?;
    let rows = cfg.rows()?;
    let times = cfg.times();
    let constants = BoundConstants::compute(cfg.decay_function()?, cfg.lattice_spec()?, &cfg.pair_interaction()?)?;

    let mut grids = Vec::new();
    if mode != RunMode::Simulate {
        let grid_rows: Vec<GridRow> = rows.iter().map(|r| GridRow { i: r.i, j: r.j, cor: r.cor }).collect();
        grids.push(bound_grid_rows(&grid_rows, &times, &constants)?);
        if cfg.closed_form.is_some() {
            grids.push(closed_form_grid(cfg, &rows, &times)?);
        }
    }
    if mode != RunMode::Bound {
        grids.push(exact_grid(cfg, &rows, &times)?);
    }
    let report = match mode {
        RunMode::Verify => {
            let bound = grids.iter().find(|g| g.label == BOUND_LABEL).expect("bound computed");
            let exact = grids.iter().find(|g| g.label == EXACT_LABEL).expect("exact computed");
            Some(verify_dominance(&cfg.name, bound, exact)?)
        }
        _ => None,
    };

    let summary = json!({
        "scenario": cfg.name,
        "constants": {
            "norm_F": constants.norm_f,
            "const_C": constants.const_c,
            "norm_phi": constants.norm_phi,
            "decay": constants.decay,
            "num_sites": constants.lattice.num_sites(),
        },
        "config": cfg,
        "grids": grids.iter().map(CorrelationGrid::summary).collect::<Vec<_>>(),
        "dominance": report.as_ref().map(|r| json!({
            "num_cells": r.num_cells,
            "num_violations": r.num_violations,
            "worst_margin": r.worst_margin,
        })),
    });
    Ok(RunOutput {
        grids,
        report,
        summary,
        constants,
    })
}

/// Emits the grids enabled under `outputs` into `directory`.
pub fn write_outputs(cfg: &ScenarioConfig, out: &RunOutput, directory: &Path) -> Result<Vec<PathBuf>> {
    let o = &cfg.outputs;
    let grids: Vec<CorrelationGrid> = out
        .grids
        .iter()
        .filter(|g| match g.label.as_str() {
            BOUND_LABEL => o.emit_bound,
            EXACT_LABEL => o.emit_exact,
            CLOSED_FORM_LABEL => o.emit_closed_form,
            _ => true,
        })
        .cloned()
        .collect();
    emit_outputs(&cfg.name, &grids, out.report.as_ref(), &out.summary, directory)
}

fn closed_form_grid(cfg: &ScenarioConfig, rows: &[RowPlan], times: &[f64]) -> Result<CorrelationGrid> {
    let cf = cfg.closed_form.expect("caller checked");
    let distances = rows.iter().map(|r| r.delta).collect();
    let values: Vec<f64> = match cf.kind {
        ClosedFormKind::Block => {
            let (p, q) = rows[0].pair.expect("validated block scenario has a fixed pair");
            let k = p.abs_diff(q) / 2;
            rows.iter()
                .flat_map(|r| times.iter().map(move |&t| bound_block_closed(t, r.delta / 2, k, &cf.params)))
                .collect()
        }
        ClosedFormKind::Power => rows
            .iter()
            .flat_map(|r| times.iter().map(move |&t| bound_power_closed(t, r.delta, &cf.params)))
            .collect::<Result<_>>()?,
    };
    CorrelationGrid::new(CLOSED_FORM_LABEL, distances, times.to_vec(), values)
}

fn cell_error(delta: usize, t: f64) -> impl Fn(Error) -> Error {
    move |e| Error::Cell {
        delta,
        t,
        source: Box::new(e),
    }
}

fn exact_grid(cfg: &ScenarioConfig, rows: &[RowPlan], times: &[f64]) -> Result<CorrelationGrid> {
    let n = cfg.lattice.num_sites;
    let h = cfg.hopping()?;
    let values: Vec<Vec<f64>> = match cfg.simulation {
        SimulationSection::GaussianQuench { .. } => {
            let initial = GaussianState::ground_state(&HoppingMatrix::uniform(n, cfg.interaction.j)?, n / 2)?;
            let evolver = GaussianEvolver::new(&initial, &h)?;
            rows.par_iter()
                .map(|r| {
                    times
                        .iter()
                        .map(|&t| evolver.corr_zz(r.i, r.j, t).map_err(cell_error(r.delta, t)))
                        .collect()
                })
                .collect::<Result<_>>()?
        }
        _ => {
            let prop = Propagator::new(&h);
            let flip = cfg.flip_site();
            let observable = cfg.observable();
            rows.par_iter()
                .map(|r| {
                    let state = match (r.pair, flip) {
                        (Some((p, q)), _) => MagnonState::bell(n, p, q),
                        (None, Some(f)) => MagnonState::prod_flip(n, f),
                        (None, None) => unreachable!("magnon scenarios carry a flip or a pair"),
                    }?;
                    times
                        .iter()
                        .map(|&t| {
                            let s = prop.propagate(&state, t)?;
                            match observable {
                                ObservableKind::Xx => corr_xx(&s, r.i, r.j),
                                ObservableKind::Zz => corr_zz(&s, r.i, r.j),
                            }
                            .map_err(cell_error(r.delta, t))
                        })
                        .collect()
                })
                .collect::<Result<_>>()?
        }
    };
    let distances = rows.iter().map(|r| r.delta).collect();
    CorrelationGrid::new(EXACT_LABEL, distances, times.to_vec(), values.concat())
}
