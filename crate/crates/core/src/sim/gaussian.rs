//! Gaussian (free-fermion) states of the XX chain in the Jordan-Wigner
//! picture, `C_{mn} = ⟨f_m† f_n⟩`. A down spin is an occupied site and
//! `σᶻ = 1 - 2n`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::hopping::{HoppingMatrix, Spectrum};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct GaussianState {
    corr: DMatrix<Complex64>,
}

fn to_complex(m: &DMatrix<f64>) -> DMatrix<Complex64> {
    m.map(|x| Complex64::new(x, 0.0))
}

impl GaussianState {
    pub fn from_matrix(corr: DMatrix<Complex64>) -> Result<Self> {
        if !corr.is_square() {
            return Err(Error::param("corr_matrix", "must be square"));
        }
        let state = Self { corr };
        if state.hermiticity_error() > 1e-10 {
            return Err(Error::param("corr_matrix", "must be Hermitian"));
        }
        let (lo, hi) = state.occupation_range();
        if lo < -1e-10 || hi > 1.0 + 1e-10 {
            return Err(Error::param(
                "corr_matrix",
                format!("eigenvalues must lie in [0, 1], found [{lo}, {hi}]"),
            ));
        }
        Ok(state)
    }

    pub fn empty(num_sites: usize) -> Self {
        Self {
            corr: DMatrix::zeros(num_sites, num_sites),
        }
    }

    pub fn full(num_sites: usize) -> Self {
        Self {
            corr: DMatrix::identity(num_sites, num_sites),
        }
    }

    /// Slater determinant filling the `particles` lowest modes of `h`.
    pub fn ground_state(h: &HoppingMatrix, particles: usize) -> Result<Self> {
        let n = h.num_sites();
        if particles > n {
            return Err(Error::param("particles", format!("{particles} exceeds {n} sites")));
        }
        let spectrum = h.spectrum();
        if particles > 0 && particles < n && (spectrum.values[particles] - spectrum.values[particles - 1]).abs() < 1e-12 {
            return Err(Error::param("particles", "degenerate Fermi level"));
        }
        let occupied = spectrum.vectors.columns(0, particles);
        Ok(Self {
            corr: to_complex(&(occupied * occupied.transpose())),
        })
    }

    /// Half-filled ground state of the uniform `J = 1` chain.
    pub fn half_filled_ground_state(num_sites: usize) -> Result<Self> {
        if !num_sites.is_multiple_of(2) {
            return Err(Error::param("num_sites", format!("half filling needs even N, got {num_sites}")));
        }
        Self::ground_state(&HoppingMatrix::uniform(num_sites, 1.0)?, num_sites / 2)
    }

    pub fn num_sites(&self) -> usize {
        self.corr.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.corr
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.corr[(i, j)]
    }

    /// Particle number, `tr C`.
    pub fn trace(&self) -> f64 {
        self.corr.trace().re
    }

    pub fn hermiticity_error(&self) -> f64 {
        (&self.corr - self.corr.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Smallest and largest eigenvalue of `C`.
    pub fn occupation_range(&self) -> (f64, f64) {
        let herm = (&self.corr + self.corr.adjoint()) * Complex64::new(0.5, 0.0);
        let values: DVector<f64> = herm.symmetric_eigenvalues();
        (values.min(), values.max())
    }
}

fn unitary(spectrum: &Spectrum, t: f64) -> DMatrix<Complex64> {
    let v = to_complex(&spectrum.vectors);
    let phases = DVector::from_iterator(
        spectrum.dim(),
        spectrum.values.iter().map(|&w| Complex64::from_polar(1.0, w * t)),
    );
    &v * DMatrix::from_diagonal(&phases) * v.transpose()
}

/// `C(t) = U C U†` with `U = exp(+i h t)`.
pub fn evolve_gaussian(state: &GaussianState, h: &HoppingMatrix, t: f64) -> Result<GaussianState> {
    if h.num_sites() != state.num_sites() {
        return Err(Error::Geometry("state and Hamiltonian sizes differ".into()));
    }
    let u = unitary(&h.spectrum(), t);
    Ok(GaussianState {
        corr: &u * &state.corr * u.adjoint(),
    })
}

/// Evaluates single entries of `C(t)` without forming the full matrix:
/// with `C̃ = Vᵀ C V` in the eigenbasis of `h`,
/// `C_ij(t) = Σ_qp V_iq e^{iε_q t} C̃_qp e^{-iε_p t} V_jp`.
#[derive(Clone, Debug)]
pub struct GaussianEvolver {
    spectrum: Spectrum,
    rotated: DMatrix<Complex64>,
}

impl GaussianEvolver {
    pub fn new(state: &GaussianState, h: &HoppingMatrix) -> Result<Self> {
        if h.num_sites() != state.num_sites() {
            return Err(Error::Geometry("state and Hamiltonian sizes differ".into()));
        }
        let spectrum = h.spectrum();
        let v = to_complex(&spectrum.vectors);
        let rotated = v.transpose() * state.matrix() * &v;
        Ok(Self { spectrum, rotated })
    }

    pub fn entry(&self, i: usize, j: usize, t: f64) -> Complex64 {
        let v = &self.spectrum.vectors;
        let w = &self.spectrum.values;
        let n = self.spectrum.dim();
        let left: Vec<Complex64> = (0..n).map(|q| Complex64::from_polar(v[(i, q)], w[q] * t)).collect();
        let right: Vec<Complex64> = (0..n).map(|p| Complex64::from_polar(v[(j, p)], -w[p] * t)).collect();
        let mut acc = Complex64::new(0.0, 0.0);
        for (p, rp) in right.iter().enumerate() {
            let col = self.rotated.column(p);
            let mut inner = Complex64::new(0.0, 0.0);
            for (q, lq) in left.iter().enumerate() {
                inner += lq * col[q];
            }
            acc += inner * rp;
        }
        acc
    }

    /// Connected `⟨σᶻ_i σᶻ_j⟩_c` at time `t`.
    pub fn corr_zz(&self, i: usize, j: usize, t: f64) -> Result<f64> {
        check_pair(self.spectrum.dim(), i, j)?;
        Ok(-4.0 * self.entry(i, j, t).norm_sqr())
    }
}

fn check_pair(n: usize, i: usize, j: usize) -> Result<()> {
    if i >= n || j >= n {
        return Err(Error::Geometry(format!("sites ({i}, {j}) outside chain of {n} sites")));
    }
    if i == j {
        return Err(Error::Geometry(format!("correlator needs two distinct sites, got {i}")));
    }
    Ok(())
}

/// Connected `⟨σᶻ_i σᶻ_j⟩_c = -4|C_ij|²` by Wick's theorem; the
/// Jordan-Wigner string cancels for this density-density observable.
pub fn corr_zz_gaussian(state: &GaussianState, i: usize, j: usize) -> Result<f64> {
    check_pair(state.num_sites(), i, j)?;
    Ok(-4.0 * state.entry(i, j).norm_sqr())
}
