//! Scenario files: one TOML document per run, validated before any compute.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::bounds::ClosedFormParams;
use crate::corr::CorModel;
use crate::error::{Error, Result};
use crate::grid::linspace;
use crate::lattice::{DecayFunction, DecayKind, LatticeSpec, PairInteraction};
use crate::sim::HoppingMatrix;

/// Sites closer than this to either chain end count as boundary-affected.
pub const BOUNDARY_MARGIN: usize = 10;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub name: String,
    pub lattice: LatticeSection,
    pub decay: DecaySection,
    pub interaction: InteractionSection,
    pub cor_model: CorModelSection,
    pub simulation: SimulationSection,
    pub grid: GridSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub closed_form: Option<ClosedFormSection>,
    #[serde(default)]
    pub outputs: OutputsSection,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeSection {
    pub num_sites: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecaySection {
    #[serde(flatten)]
    pub kind: DecayKind,
    #[serde(default = "one")]
    pub prefactor: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InteractionSection {
    #[serde(rename = "J")]
    pub j: f64,
}

/// Like [`CorModel`], but the Bell pair may be left for the simulation to
/// fix when it moves with the measured sites.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case", deny_unknown_fields)]
pub enum CorModelSection {
    Product,
    BellPair {
        #[serde(default)]
        p: Option<usize>,
        #[serde(default)]
        q: Option<usize>,
    },
    PowerLaw {
        c1: f64,
        chi: f64,
    },
    ExpClustered {
        c0: f64,
        xi: f64,
    },
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ObservableKind {
    #[default]
    Xx,
    Zz,
}

/// How the measured pair sits around the chain centre `c` for distance `δ`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Geometry {
    /// `i = c - ⌊δ/2⌋`, `j = i + δ`.
    #[default]
    Symmetric,
    /// `i = c`, `j = c + δ`.
    Anchored,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SimulationSection {
    /// One flipped spin at `flip_site` (default: the centre).
    MagnonProd {
        #[serde(default)]
        flip_site: Option<usize>,
        #[serde(default)]
        observable: ObservableKind,
    },
    /// A Bell pair either at fixed sites `pair` or `pair_inset` sites inside
    /// the measured pair.
    MagnonBell {
        #[serde(default)]
        pair: Option<[usize; 2]>,
        #[serde(default)]
        pair_inset: Option<usize>,
        #[serde(default)]
        observable: ObservableKind,
    },
    /// Half-filled uniform ground state quenched to a dimerised chain; the
    /// observable is always `zz`.
    GaussianQuench {
        #[serde(default = "default_eta")]
        eta: f64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    pub t_min: f64,
    pub t_max: f64,
    pub t_steps: usize,
    pub delta_min: usize,
    pub delta_max: usize,
    #[serde(default = "one_usize")]
    pub delta_step: usize,
    /// Defaults to `num_sites / 2`.
    #[serde(default)]
    pub center: Option<usize>,
    #[serde(default)]
    pub geometry: Geometry,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClosedFormKind {
    /// Bell-pair block bound, needs a fixed pair symmetric about the centre.
    Block,
    Power,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClosedFormSection {
    pub kind: ClosedFormKind,
    #[serde(flatten)]
    pub params: ClosedFormParams,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputsSection {
    #[serde(default = "default_dir")]
    pub directory: PathBuf,
    #[serde(default = "yes")]
    pub emit_bound: bool,
    #[serde(default = "yes")]
    pub emit_exact: bool,
    #[serde(default = "yes")]
    pub emit_closed_form: bool,
}

impl Default for OutputsSection {
    fn default() -> Self {
        Self {
            directory: default_dir(),
            emit_bound: true,
            emit_exact: true,
            emit_closed_form: true,
        }
    }
}

fn one() -> f64 {
    1.0
}
fn one_usize() -> usize {
    1
}
fn yes() -> bool {
    true
}
fn default_eta() -> f64 {
    0.5
}
fn default_dir() -> PathBuf {
    PathBuf::from("out")
}

/// One row of a scenario grid: measured sites and the correlation model that
/// applies to them.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RowPlan {
    pub delta: usize,
    pub i: usize,
    pub j: usize,
    pub cor: CorModel,
    /// Bell pair for this row, if any.
    pub pair: Option<(usize, usize)>,
}

impl ScenarioConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: ScenarioConfig =
            toml::from_str(text).map_err(|e| Error::config("<document>", e.message().to_owned()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml_str(&text).map_err(|e| match e {
            Error::Config { path: field, reason } if field == "<document>" => {
                Error::config(path.display().to_string(), reason)
            }
            other => other,
        })
    }

    pub fn lattice_spec(&self) -> Result<LatticeSpec> {
        LatticeSpec::new(self.lattice.num_sites)
    }

    pub fn decay_function(&self) -> Result<DecayFunction> {
        DecayFunction::new(self.decay.kind, self.decay.prefactor)
    }

    /// Interaction norms of the Hamiltonian that generates the dynamics.
    pub fn pair_interaction(&self) -> Result<PairInteraction> {
        match self.simulation {
            SimulationSection::GaussianQuench { eta } => PairInteraction::dimerized_xx(self.interaction.j, eta),
            _ => PairInteraction::xx_chain(self.interaction.j),
        }
    }

    /// One-particle hopping matrix of the evolution Hamiltonian.
    pub fn hopping(&self) -> Result<HoppingMatrix> {
        let n = self.lattice.num_sites;
        match self.simulation {
            SimulationSection::GaussianQuench { eta } => HoppingMatrix::dimerized(n, self.interaction.j, eta),
            _ => HoppingMatrix::uniform(n, self.interaction.j),
        }
    }

    pub fn center(&self) -> usize {
        self.grid.center.unwrap_or(self.lattice.num_sites / 2)
    }

    pub fn times(&self) -> Vec<f64> {
        linspace(self.grid.t_min, self.grid.t_max, self.grid.t_steps)
    }

    pub fn distances(&self) -> Vec<usize> {
        (self.grid.delta_min..=self.grid.delta_max)
            .step_by(self.grid.delta_step.max(1))
            .collect()
    }

    pub fn observable(&self) -> ObservableKind {
        match self.simulation {
            SimulationSection::MagnonProd { observable, .. }
            | SimulationSection::MagnonBell { observable, .. } => observable,
            SimulationSection::GaussianQuench { .. } => ObservableKind::Zz,
        }
    }

    pub fn flip_site(&self) -> Option<usize> {
        match self.simulation {
            SimulationSection::MagnonProd { flip_site, .. } => Some(flip_site.unwrap_or(self.center())),
            _ => None,
        }
    }

    fn measured_pair(&self, delta: usize) -> Option<(usize, usize)> {
        let c = self.center();
        let i = match self.grid.geometry {
            Geometry::Symmetric => c.checked_sub(delta / 2)?,
            Geometry::Anchored => c,
        };
        Some((i, i + delta))
    }

    /// Per-distance sites and correlation models. Assumes a validated config.
    pub fn rows(&self) -> Result<Vec<RowPlan>> {
        self.distances()
            .into_iter()
            .map(|delta| {
                let (i, j) = self.measured_pair(delta).ok_or_else(|| {
                    Error::config("grid.center", format!("distance {delta} leaves the chain"))
                })?;
                let pair = match self.simulation {
                    SimulationSection::MagnonBell { pair: Some([p, q]), .. } => Some((p, q)),
                    SimulationSection::MagnonBell { pair_inset: Some(k), .. } => {
                        if 2 * k >= delta {
                            return Err(Error::config(
                                "simulation.pair_inset",
                                format!("inset {k} does not fit inside distance {delta}"),
                            ));
                        }
                        Some((i + k, j - k))
                    }
                    _ => None,
                };
                let cor = match self.cor_model {
                    CorModelSection::Product => CorModel::Product,
                    CorModelSection::BellPair { .. } => {
                        let (p, q) = pair.expect("validated bell scenario has a pair");
                        CorModel::BellPair { p, q }
                    }
                    CorModelSection::PowerLaw { c1, chi } => CorModel::PowerLawClustered { c1, chi },
                    CorModelSection::ExpClustered { c0, xi } => CorModel::ExpClustered { c0, xi },
                };
                Ok(RowPlan { delta, i, j, cor, pair })
            })
            .collect()
    }

    /// All sites whose dynamics feed a row: measured sites plus excitations.
    fn involved_sites(&self, rows: &[RowPlan]) -> (usize, usize) {
        let mut lo = usize::MAX;
        let mut hi = 0;
        for row in rows {
            let mut sites = vec![row.i, row.j];
            if let Some((p, q)) = row.pair {
                sites.extend([p, q]);
            }
            if let Some(f) = self.flip_site() {
                sites.push(f);
            }
            for s in sites {
                lo = lo.min(s);
                hi = hi.max(s);
            }
        }
        (lo, hi)
    }

    /// Rejects grids whose lightcone comes within [`BOUNDARY_MARGIN`] sites
    /// of a chain end.
    pub fn check_boundary(&self) -> Result<()> {
        let rows = self.rows()?;
        let (lo, hi) = self.involved_sites(&rows);
        let reach = (self.hopping()?.max_velocity() * self.grid.t_max.abs().max(self.grid.t_min.abs())).ceil();
        let n = self.lattice.num_sites as f64;
        let left = lo as f64 - reach;
        let right = hi as f64 + reach;
        let margin = BOUNDARY_MARGIN as f64;
        if left < margin || right > n - 1.0 - margin {
            return Err(Error::BoundaryGuard(format!(
                "sites {lo}..={hi} spread to [{left}, {right}] by t = {}, closer than {BOUNDARY_MARGIN} sites to the ends of a {}-site chain",
                self.grid.t_max, self.lattice.num_sites
            )));
        }
        Ok(())
    }

    /// Schema checks, each error naming the offending key.
    pub fn validate(&self) -> Result<()> {
        if self.name.trim().is_empty() {
            return Err(Error::config("name", "must be nonempty"));
        }
        if self.name.contains(['/', '\\']) {
            return Err(Error::config("name", "must not contain path separators"));
        }
        let n = self.lattice.num_sites;
        self.lattice_spec()
            .map_err(|e| Error::config("lattice.num_sites", e.to_string()))?;
        self.decay_function().map_err(|e| Error::config("decay", e.to_string()))?;
        if !(self.interaction.j.is_finite() && self.interaction.j != 0.0) {
            return Err(Error::config("interaction.J", "must be finite and nonzero"));
        }

        let g = &self.grid;
        if !(g.t_min.is_finite() && g.t_max.is_finite()) || g.t_max < g.t_min {
            return Err(Error::config("grid.t_max", "need finite t_min <= t_max"));
        }
        if g.t_steps == 0 || (g.t_steps == 1 && g.t_max != g.t_min) {
            return Err(Error::config("grid.t_steps", "need at least one step, two if t_max > t_min"));
        }
        if g.delta_step == 0 {
            return Err(Error::config("grid.delta_step", "must be positive"));
        }
        if g.delta_min == 0 || g.delta_max < g.delta_min {
            return Err(Error::config("grid.delta_min", "need 1 <= delta_min <= delta_max"));
        }
        let c = self.center();
        if c >= n {
            return Err(Error::config("grid.center", format!("site {c} outside a {n}-site chain")));
        }
        for delta in [g.delta_min, g.delta_max] {
            match self.measured_pair(delta) {
                Some((_, j)) if j < n => {}
                _ => {
                    return Err(Error::config(
                        "grid.delta_max",
                        format!("distance {delta} around site {c} leaves the chain"),
                    ))
                }
            }
        }

        match (self.simulation, self.cor_model) {
            (SimulationSection::MagnonProd { flip_site, .. }, CorModelSection::Product) => {
                if let Some(f) = flip_site {
                    if f >= n {
                        return Err(Error::config("simulation.flip_site", format!("site {f} outside chain")));
                    }
                }
            }
            (SimulationSection::MagnonProd { .. }, _) => {
                return Err(Error::config("cor_model.variant", "a single flip is a product state; use `product`"));
            }
            (SimulationSection::MagnonBell { pair, pair_inset, .. }, CorModelSection::BellPair { p, q }) => {
                match (pair, pair_inset) {
                    (Some([a, b]), None) => {
                        if a == b || a >= n || b >= n {
                            return Err(Error::config("simulation.pair", "need two distinct sites in the chain"));
                        }
                        if p.is_some_and(|p| p != a) || q.is_some_and(|q| q != b) {
                            return Err(Error::config("cor_model.p", "Bell pair differs from simulation.pair"));
                        }
                    }
                    (None, Some(k)) => {
                        if p.is_some() || q.is_some() {
                            return Err(Error::config(
                                "cor_model.p",
                                "the pair follows the measured sites when simulation.pair_inset is set; omit p and q",
                            ));
                        }
                        if 2 * k >= g.delta_min {
                            return Err(Error::config("simulation.pair_inset", "pair must lie strictly inside every measured pair"));
                        }
                    }
                    _ => {
                        return Err(Error::config("simulation.pair", "set exactly one of `pair` and `pair_inset`"));
                    }
                }
            }
            (SimulationSection::MagnonBell { .. }, _) => {
                return Err(Error::config("cor_model.variant", "a Bell-pair state needs `bell_pair`"));
            }
            (SimulationSection::GaussianQuench { eta }, cor) => {
                if !(eta.is_finite() && eta.abs() < 1.0) {
                    return Err(Error::config("simulation.eta", "need |eta| < 1"));
                }
                if !n.is_multiple_of(2) {
                    return Err(Error::config("lattice.num_sites", "half filling needs an even chain"));
                }
                if matches!(cor, CorModelSection::Product | CorModelSection::BellPair { .. }) {
                    return Err(Error::config(
                        "cor_model.variant",
                        "the critical ground state is correlated; use `power_law` or `exp_clustered`",
                    ));
                }
            }
        }
        match self.cor_model {
            CorModelSection::PowerLaw { c1, chi } => CorModel::PowerLawClustered { c1, chi }.validate(),
            CorModelSection::ExpClustered { c0, xi } => CorModel::ExpClustered { c0, xi }.validate(),
            _ => Ok(()),
        }
        .map_err(|e| Error::config("cor_model", e.to_string()))?;

        if let Some(cf) = &self.closed_form {
            cf.params.validate().map_err(|e| Error::config("closed_form", e.to_string()))?;
            if cf.kind == ClosedFormKind::Block {
                match self.simulation {
                    SimulationSection::MagnonBell { pair: Some([p, q]), .. } if p + q == 2 * c => {}
                    _ => {
                        return Err(Error::config(
                            "closed_form.kind",
                            "the block form needs a fixed Bell pair placed symmetrically about grid.center",
                        ))
                    }
                }
                if g.geometry != Geometry::Symmetric || !g.delta_min.is_multiple_of(2) || !g.delta_step.is_multiple_of(2) {
                    return Err(Error::config(
                        "closed_form.kind",
                        "the block form needs symmetric geometry with even distances",
                    ));
                }
            }
        }
        self.rows()?;
        Ok(())
    }
}
