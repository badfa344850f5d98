use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Real symmetric tridiagonal single-particle Hamiltonian of an open chain.
#[derive(Clone, Debug, PartialEq)]
pub struct HoppingMatrix {
    /// `bonds[m]` couples sites `m` and `m + 1`.
    bonds: Vec<f64>,
}

impl HoppingMatrix {
    pub fn from_bonds(bonds: Vec<f64>) -> Result<Self> {
        if bonds.is_empty() {
            return Err(Error::param("num_sites", "need at least 2 sites"));
        }
        if bonds.iter().any(|b| !b.is_finite()) {
            return Err(Error::param("hopping", "bond amplitudes must be finite"));
        }
        Ok(Self { bonds })
    }

    /// Uniform XX chain: `h_{m,m+1} = -2J`.
    pub fn uniform(num_sites: usize, j: f64) -> Result<Self> {
        Self::from_bonds(vec![-2.0 * j; num_sites.saturating_sub(1)])
    }

    /// Dimerised chain: `h_{m,m+1} = -2J(1 + η(-1)^m)`.
    pub fn dimerized(num_sites: usize, j: f64, eta: f64) -> Result<Self> {
        let bonds = (0..num_sites.saturating_sub(1))
            .map(|m| {
                let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                -2.0 * j * (1.0 + eta * sign)
            })
            .collect();
        Self::from_bonds(bonds)
    }

    pub fn num_sites(&self) -> usize {
        self.bonds.len() + 1
    }

    pub fn bonds(&self) -> &[f64] {
        &self.bonds
    }

    /// Spin coupling `J_m` of each bond, `h_{m,m+1} = -2 J_m`.
    pub fn spin_couplings(&self) -> Vec<f64> {
        self.bonds.iter().map(|b| -b / 2.0).collect()
    }

    /// Largest single-particle group velocity, `2 max |h_{m,m+1}|`.
    pub fn max_velocity(&self) -> f64 {
        2.0 * self.bonds.iter().map(|b| b.abs()).fold(0.0, f64::max)
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let n = self.num_sites();
        let mut h = DMatrix::zeros(n, n);
        for (m, &b) in self.bonds.iter().enumerate() {
            h[(m, m + 1)] = b;
            h[(m + 1, m)] = b;
        }
        h
    }

    /// Dense symmetric eigendecomposition, eigenvalues ascending.
    pub fn spectrum(&self) -> Spectrum {
        let eig = self.to_dense().symmetric_eigen();
        Spectrum::sorted(eig.eigenvalues, eig.eigenvectors)
    }
}

/// Eigenvalues in ascending order with matching eigenvector columns.
#[derive(Clone, Debug)]
pub struct Spectrum {
    pub values: DVector<f64>,
    pub vectors: DMatrix<f64>,
}

impl Spectrum {
    fn sorted(values: DVector<f64>, vectors: DMatrix<f64>) -> Self {
        let mut order: Vec<usize> = (0..values.len()).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        let values = DVector::from_iterator(values.len(), order.iter().map(|&k| values[k]));
        let vectors = DMatrix::from_fn(vectors.nrows(), vectors.ncols(), |r, c| vectors[(r, order[c])]);
        Self { values, vectors }
    }

    /// Closed-form eigensystem of the uniform chain:
    /// `ε_q = -4J cos(πq/(N+1))`, `φ_q(m) = sqrt(2/(N+1)) sin(πq(m+1)/(N+1))`.
    pub fn uniform_closed_form(num_sites: usize, j: f64) -> Self {
        let n1 = (num_sites + 1) as f64;
        let norm = (2.0 / n1).sqrt();
        let values = DVector::from_fn(num_sites, |q, _| -4.0 * j * (PI * (q + 1) as f64 / n1).cos());
        let vectors = DMatrix::from_fn(num_sites, num_sites, |m, q| {
            norm * (PI * ((q + 1) * (m + 1)) as f64 / n1).sin()
        });
        Self::sorted(values, vectors)
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }
}
