//! Lieb-Robinson-type upper bounds on equal-time connected correlation
//! functions for quantum spin chains prepared in correlated (entangled)
//! initial states, together with exact XX-chain dynamics used to certify
//! that the bounds dominate the true correlations.
//!
//! The crate is organised bottom-up:
//!
//! * [`lattice`]: open-chain geometry, decay functions `F` and the
//!   constants `‖F‖`, `C`, `‖Φ‖`.
//! * [`corr`]: envelopes for the initial correlations between two balls.
//! * [`bounds`]: the bound engine (`g`, `G`, radius-optimised bound,
//!   closed-form specialisations) and [`grid::CorrelationGrid`].
//! * [`sim`]: single-magnon, Gaussian-fermion and brute-force
//!   exact-diagonalisation dynamics.
//! * [`scenario`]: configuration, orchestration, dominance reports,
//!   arrival-time analysis and file output.

pub mod bounds;
pub mod corr;
pub mod error;
pub mod grid;
pub mod lattice;
pub mod scenario;
pub mod sim;

pub use bounds::{BoundConstants, ClosedFormParams};
pub use corr::CorModel;
pub use error::{Error, Result};
pub use grid::CorrelationGrid;
pub use lattice::{DecayFunction, DecayKind, LatticeSpec, PairInteraction};
pub use scenario::{run_scenario, RunMode, ScenarioConfig};
