//! Exact dynamics of XX chains.
//!
//! * [`magnon`]: one-flip sector of the spin chain, a free particle hopping
//!   with amplitude `-2J`.
//! * [`gaussian`]: Jordan-Wigner fermions described by their two-point
//!   matrix, used for the half-filled critical quench.
//! * [`ed`]: dense exact diagonalisation over the full `2^N` Hilbert space,
//!   independent of both fast paths.

pub mod ed;
pub mod gaussian;
pub mod hopping;
pub mod magnon;

pub use ed::{connected, ed_oracle, embed_single_flips, ExactDiag, Observable};
pub use gaussian::{corr_zz_gaussian, evolve_gaussian, GaussianEvolver, GaussianState};
pub use hopping::{HoppingMatrix, Spectrum};
pub use magnon::{corr_xx, corr_zz, propagate, MagnonState, Propagator};
