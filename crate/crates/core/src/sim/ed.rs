//! Brute-force exact diagonalisation over the full `2^N`-dimensional Hilbert
//! space. The Hamiltonian is assembled from Kronecker products of Pauli
//! matrices and expectation values are taken directly, so nothing here relies
//! on the one-flip sector or on Jordan-Wigner fermions.
//!
//! Basis convention: site 0 is the leftmost Kronecker factor, local state
//! `0` is spin up (`σᶻ = +1`).

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::magnon::MagnonState;
use crate::error::{Error, Result};

pub const MAX_ED_SITES: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Observable {
    Xx(usize, usize),
    Zz(usize, usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Pauli {
    X,
    Y,
    Z,
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn pauli_matrix(p: Option<Pauli>) -> DMatrix<Complex64> {
    let z = c(0.0, 0.0);
    let o = c(1.0, 0.0);
    let i = c(0.0, 1.0);
    match p {
        None => DMatrix::from_row_slice(2, 2, &[o, z, z, o]),
        Some(Pauli::X) => DMatrix::from_row_slice(2, 2, &[z, o, o, z]),
        Some(Pauli::Y) => DMatrix::from_row_slice(2, 2, &[z, -i, i, z]),
        Some(Pauli::Z) => DMatrix::from_row_slice(2, 2, &[o, z, z, -o]),
    }
}

/// `⊗_m P_m` with the given Paulis on two sites and identities elsewhere.
fn pauli_string(n: usize, a: (usize, Pauli), b: (usize, Pauli)) -> DMatrix<Complex64> {
    let factor = |m: usize| {
        if m == a.0 {
            pauli_matrix(Some(a.1))
        } else if m == b.0 {
            pauli_matrix(Some(b.1))
        } else {
            pauli_matrix(None)
        }
    };
    (1..n).fold(factor(0), |acc, m| acc.kronecker(&factor(m)))
}

/// `H = -Σ_m J_m (σˣ_m σˣ_{m+1} + σʸ_m σʸ_{m+1})` as a dense matrix.
pub fn xx_hamiltonian(couplings: &[f64]) -> DMatrix<Complex64> {
    let n = couplings.len() + 1;
    let dim = 1usize << n;
    let mut h = DMatrix::zeros(dim, dim);
    for (m, &j) in couplings.iter().enumerate() {
        let xx = pauli_string(n, (m, Pauli::X), (m + 1, Pauli::X));
        let yy = pauli_string(n, (m, Pauli::Y), (m + 1, Pauli::Y));
        h -= (xx + yy) * c(j, 0.0);
    }
    h
}

/// Dense eigendecomposition of an XX chain with bond couplings `J_m`.
#[derive(Clone, Debug)]
pub struct ExactDiag {
    num_sites: usize,
    energies: DVector<f64>,
    vectors: DMatrix<f64>,
}

impl ExactDiag {
    pub fn new(couplings: &[f64]) -> Result<Self> {
        let n = couplings.len() + 1;
        if !(2..=MAX_ED_SITES).contains(&n) {
            return Err(Error::param(
                "num_sites",
                format!("exact diagonalisation supports 2..={MAX_ED_SITES} sites, got {n}"),
            ));
        }
        let h = xx_hamiltonian(couplings);
        let imag = h.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
        if imag > 1e-14 {
            return Err(Error::param("couplings", "XX Hamiltonian should be real in the σᶻ basis"));
        }
        let eig = h.map(|z| z.re).symmetric_eigen();
        Ok(Self {
            num_sites: n,
            energies: eig.eigenvalues,
            vectors: eig.eigenvectors,
        })
    }

    pub fn uniform(num_sites: usize, j: f64) -> Result<Self> {
        Self::new(&vec![j; num_sites.saturating_sub(1)])
    }

    pub fn num_sites(&self) -> usize {
        self.num_sites
    }

    pub fn dim(&self) -> usize {
        1 << self.num_sites
    }

    /// Lowest eigenvector; errors if the ground level is degenerate.
    pub fn ground_state(&self) -> Result<Vec<Complex64>> {
        let mut order: Vec<usize> = (0..self.energies.len()).collect();
        order.sort_by(|&a, &b| self.energies[a].total_cmp(&self.energies[b]));
        if (self.energies[order[1]] - self.energies[order[0]]).abs() < 1e-9 {
            return Err(Error::param("couplings", "degenerate ground state"));
        }
        Ok(self.vectors.column(order[0]).iter().map(|&x| c(x, 0.0)).collect())
    }

    /// `ψ(t) = exp(-iHt) ψ(0)`.
    pub fn evolve(&self, psi0: &[Complex64], t: f64) -> Result<Vec<Complex64>> {
        if psi0.len() != self.dim() {
            return Err(Error::Geometry(format!(
                "state of length {} for a {}-site chain",
                psi0.len(),
                self.num_sites
            )));
        }
        let v = self.vectors.map(|x| c(x, 0.0));
        let mut modes = v.tr_mul(&DVector::from_column_slice(psi0));
        for (k, m) in modes.iter_mut().enumerate() {
            *m *= Complex64::from_polar(1.0, -self.energies[k] * t);
        }
        Ok((v * modes).iter().copied().collect())
    }

    /// Full-space vector of a one-flip state.
    pub fn embed_magnon(&self, state: &MagnonState) -> Result<Vec<Complex64>> {
        embed_single_flips(self.num_sites, state.amplitudes())
    }
}

pub fn embed_single_flips(num_sites: usize, amplitudes: &[Complex64]) -> Result<Vec<Complex64>> {
    if amplitudes.len() != num_sites {
        return Err(Error::Geometry("amplitude vector length differs from chain".into()));
    }
    let mut psi = vec![c(0.0, 0.0); 1 << num_sites];
    for (m, &a) in amplitudes.iter().enumerate() {
        psi[1 << (num_sites - 1 - m)] = a;
    }
    Ok(psi)
}

fn bit(num_sites: usize, site: usize) -> usize {
    1 << (num_sites - 1 - site)
}

/// `P_site |ψ⟩` by direct action on basis states.
fn apply(num_sites: usize, psi: &[Complex64], site: usize, p: Pauli) -> Vec<Complex64> {
    let mask = bit(num_sites, site);
    let mut out = vec![c(0.0, 0.0); psi.len()];
    for (s, &amp) in psi.iter().enumerate() {
        let down = s & mask != 0;
        match p {
            Pauli::X => out[s ^ mask] += amp,
            // σʸ|↑⟩ = i|↓⟩, σʸ|↓⟩ = -i|↑⟩
            Pauli::Y => out[s ^ mask] += amp * if down { c(0.0, -1.0) } else { c(0.0, 1.0) },
            Pauli::Z => out[s] += if down { -amp } else { amp },
        }
    }
    out
}

fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Connected correlator `⟨P_i P_j⟩ - ⟨P_i⟩⟨P_j⟩` in the state `psi`.
pub fn connected(num_sites: usize, psi: &[Complex64], obs: Observable) -> Result<f64> {
    let (i, j, p) = match obs {
        Observable::Xx(i, j) => (i, j, Pauli::X),
        Observable::Zz(i, j) => (i, j, Pauli::Z),
    };
    if i >= num_sites || j >= num_sites || i == j {
        return Err(Error::Geometry(format!("invalid site pair ({i}, {j})")));
    }
    let pj = apply(num_sites, psi, j, p);
    let pipj = apply(num_sites, &pj, i, p);
    let pi = apply(num_sites, psi, i, p);
    let both = inner(psi, &pipj).re;
    let ei = inner(psi, &pi).re;
    let ej = inner(psi, &pj).re;
    Ok(both - ei * ej)
}

/// Evolves `initial` under the uniform `J = 1` XX chain by dense
/// diagonalisation and returns the connected correlator at time `t`.
pub fn ed_oracle(num_sites: usize, initial: &[Complex64], t: f64, obs: Observable) -> Result<f64> {
    let ed = ExactDiag::uniform(num_sites, 1.0)?;
    let psi = ed.evolve(initial, t)?;
    connected(num_sites, &psi, obs)
}
