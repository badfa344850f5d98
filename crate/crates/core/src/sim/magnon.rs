//! Single-magnon sector of the XX chain.
//!
//! With the all-up reference state, `σˣσˣ + σʸσʸ = 2(σ⁺σ⁻ + σ⁻σ⁺)` moves a
//! single flipped spin to a neighbouring site, so the one-flip sector
//! evolves under the tridiagonal [`HoppingMatrix`] with amplitude `-2J`.
//! Within the sector:
//!
//! * `⟨σˣ_i σˣ_j⟩ = 2 Re(c̄_i c_j)` and `⟨σˣ_i⟩ = 0`;
//! * `⟨σᶻ_m⟩ = 1 - 2|c_m|²` and `⟨σᶻ_i σᶻ_j⟩ = 1 - 2|c_i|² - 2|c_j|²`,
//!   so the connected zz correlator is `-4|c_i|²|c_j|²`.

use nalgebra::DVector;
use num_complex::Complex64;

use super::hopping::{HoppingMatrix, Spectrum};
use crate::error::{Error, Result};

const NORM_TOL: f64 = 1e-12;

/// Amplitudes `c_m` of the flipped spin at site `m`.
#[derive(Clone, Debug, PartialEq)]
pub struct MagnonState {
    amplitudes: Vec<Complex64>,
}

impl MagnonState {
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let state = Self { amplitudes };
        let norm = state.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::param("amplitudes", format!("state norm is {norm}, expected 1")));
        }
        Ok(state)
    }

    /// Single flipped spin at `site`.
    pub fn prod_flip(num_sites: usize, site: usize) -> Result<Self> {
        check_site(num_sites, site)?;
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); num_sites];
        amplitudes[site] = Complex64::new(1.0, 0.0);
        Ok(Self { amplitudes })
    }

    /// `(|↑⟩_p|↓⟩_q + |↓⟩_p|↑⟩_q)/√2` with all other spins up.
    pub fn bell(num_sites: usize, p: usize, q: usize) -> Result<Self> {
        check_site(num_sites, p)?;
        check_site(num_sites, q)?;
        if p == q {
            return Err(Error::Geometry(format!("Bell pair needs two sites, got {p} twice")));
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); num_sites];
        amplitudes[p] = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        amplitudes[q] = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        Ok(Self { amplitudes })
    }

    pub fn num_sites(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }
}

fn check_site(num_sites: usize, site: usize) -> Result<()> {
    if site < num_sites {
        Ok(())
    } else {
        Err(Error::Geometry(format!("site {site} outside chain of {num_sites} sites")))
    }
}

/// `exp(-i h t)` applied through a precomputed eigendecomposition of `h`.
#[derive(Clone, Debug)]
pub struct Propagator {
    spectrum: Spectrum,
}

impl Propagator {
    pub fn new(h: &HoppingMatrix) -> Self {
        Self {
            spectrum: h.spectrum(),
        }
    }

    pub fn from_spectrum(spectrum: Spectrum) -> Self {
        Self { spectrum }
    }

    pub fn num_sites(&self) -> usize {
        self.spectrum.dim()
    }

    pub fn propagate(&self, state: &MagnonState, t: f64) -> Result<MagnonState> {
        let n = self.num_sites();
        if state.num_sites() != n {
            return Err(Error::Geometry(format!(
                "state has {} sites, Hamiltonian {n}",
                state.num_sites()
            )));
        }
        if t == 0.0 {
            return Ok(state.clone());
        }
        let v = &self.spectrum.vectors;
        let c0 = DVector::from_column_slice(&state.amplitudes);
        let vc = v.map(|x| Complex64::new(x, 0.0));
        let mut modes = vc.tr_mul(&c0);
        for (q, m) in modes.iter_mut().enumerate() {
            *m *= Complex64::from_polar(1.0, -self.spectrum.values[q] * t);
        }
        let ct = vc * modes;
        Ok(MagnonState {
            amplitudes: ct.iter().copied().collect(),
        })
    }
}

/// `c(t) = exp(-i h t) c(0)`.
pub fn propagate(state: &MagnonState, h: &HoppingMatrix, t: f64) -> Result<MagnonState> {
    Propagator::new(h).propagate(state, t)
}

fn check_pair(state: &MagnonState, i: usize, j: usize) -> Result<()> {
    check_site(state.num_sites(), i)?;
    check_site(state.num_sites(), j)?;
    if i == j {
        return Err(Error::Geometry(format!("correlator needs two distinct sites, got {i}")));
    }
    Ok(())
}

/// Connected `⟨σˣ_i σˣ_j⟩_c = 2 Re(c̄_i c_j)`.
pub fn corr_xx(state: &MagnonState, i: usize, j: usize) -> Result<f64> {
    check_pair(state, i, j)?;
    let c = &state.amplitudes;
    Ok(2.0 * (c[i].conj() * c[j]).re)
}

/// Connected `⟨σᶻ_i σᶻ_j⟩_c = -4|c_i|²|c_j|²`.
pub fn corr_zz(state: &MagnonState, i: usize, j: usize) -> Result<f64> {
    check_pair(state, i, j)?;
    let c = &state.amplitudes;
    Ok(-4.0 * c[i].norm_sqr() * c[j].norm_sqr())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    /// Power series for the integer-order Bessel function; test oracle only.
    fn bessel_j(n: i64, x: f64) -> f64 {
        let m = n.unsigned_abs() as i32;
        let sign = if n < 0 && m % 2 == 1 { -1.0 } else { 1.0 };
        let half = x / 2.0;
        let mut term = half.powi(m) / (1..=m).map(f64::from).product::<f64>();
        let mut sum = term;
        for k in 1..200 {
            term *= -half * half / (k as f64 * (k as f64 + m as f64));
            sum += term;
            if term.abs() < 1e-18 * sum.abs().max(1e-300) && k > 10 {
                break;
            }
        }
        sign * sum
    }

    fn random_state(n: usize, rng: &mut StdRng) -> MagnonState {
        let raw: Vec<Complex64> = (0..n)
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let norm = raw.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        MagnonState::from_amplitudes(raw.into_iter().map(|c| c / norm).collect()).unwrap()
    }

    #[test]
    fn initial_states() {
        let s = MagnonState::prod_flip(7, 3).unwrap();
        let re: Vec<f64> = s.amplitudes().iter().map(|c| c.re).collect();
        assert_eq!(re, vec![0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0]);
        let b = MagnonState::bell(11, 2, 8).unwrap();
        assert_eq!(b.amplitudes()[2].re, std::f64::consts::FRAC_1_SQRT_2);
        assert_eq!(b.amplitudes()[8].re, std::f64::consts::FRAC_1_SQRT_2);
        assert_eq!(b.amplitudes().iter().filter(|c| c.norm() > 0.0).count(), 2);
        assert!((s.norm() - 1.0).abs() < 1e-15 && (b.norm() - 1.0).abs() < 1e-15);
        assert!(MagnonState::prod_flip(7, 7).is_err());
        assert!(MagnonState::bell(7, 2, 2).is_err());
        assert!(MagnonState::from_amplitudes(vec![Complex64::new(0.5, 0.0); 2]).is_err());
    }

    #[test]
    fn zero_time_is_identity_and_norm_is_preserved() {
        let mut rng = StdRng::seed_from_u64(7);
        let h = HoppingMatrix::uniform(30, 1.0).unwrap();
        let prop = Propagator::new(&h);
        let s = random_state(30, &mut rng);
        let same = prop.propagate(&s, 0.0).unwrap();
        for (a, b) in s.amplitudes().iter().zip(same.amplitudes()) {
            assert!((a - b).norm() < 1e-13);
        }
        let later = prop.propagate(&s, 3.7).unwrap();
        assert!((later.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn matches_bessel_propagator_in_the_bulk() {
        let n = 201;
        let centre = 100;
        let t = 2.0;
        let s = MagnonState::prod_flip(n, centre).unwrap();
        let ct = propagate(&s, &HoppingMatrix::uniform(n, 1.0).unwrap(), t).unwrap();
        for m in 40..=160usize {
            let offset = m as i64 - centre as i64;
            let expected = bessel_j(offset, 4.0 * t).abs();
            assert!(
                (ct.amplitudes()[m].norm() - expected).abs() < 1e-6,
                "site {m}: {} vs {expected}",
                ct.amplitudes()[m].norm()
            );
        }
    }

    #[test]
    fn correlator_examples() {
        let s = MagnonState::prod_flip(9, 4).unwrap();
        for i in 0..9 {
            for j in 0..9 {
                if i != j {
                    assert_eq!(corr_xx(&s, i, j).unwrap(), 0.0);
                    assert_eq!(corr_zz(&s, i, j).unwrap(), 0.0);
                }
            }
        }
        let b = MagnonState::bell(11, 2, 8).unwrap();
        assert!((corr_xx(&b, 2, 8).unwrap() - 1.0).abs() < 1e-15);
        assert!((corr_zz(&b, 2, 8).unwrap() + 1.0).abs() < 1e-15);
        // pair one site inside the measured sites: no initial correlation
        let inner = MagnonState::bell(11, 3, 7).unwrap();
        assert_eq!(corr_xx(&inner, 2, 8).unwrap(), 0.0);
        assert!(corr_xx(&b, 3, 3).is_err());
        assert!(corr_zz(&b, 3, 3).is_err());
    }

    #[test]
    fn zz_is_bounded() {
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..20 {
            let s = random_state(12, &mut rng);
            for i in 0..12 {
                for j in 0..12 {
                    if i != j {
                        assert!(corr_zz(&s, i, j).unwrap().abs() <= 1.0);
                    }
                }
            }
        }
    }

    #[test]
    fn reflection_symmetry() {
        let n = 41;
        let prop = Propagator::new(&HoppingMatrix::uniform(n, 1.0).unwrap());
        for state in [
            MagnonState::bell(n, 12, n - 1 - 12).unwrap(),
            MagnonState::prod_flip(n, n / 2).unwrap(),
        ] {
            for t in [0.3, 1.1, 2.5] {
                let s = prop.propagate(&state, t).unwrap();
                for i in 0..n {
                    for j in 0..n {
                        if i == j {
                            continue;
                        }
                        let (ri, rj) = (n - 1 - j, n - 1 - i);
                        assert!((corr_xx(&s, i, j).unwrap() - corr_xx(&s, ri, rj).unwrap()).abs() < 1e-10);
                        assert!((corr_zz(&s, i, j).unwrap() - corr_zz(&s, ri, rj).unwrap()).abs() < 1e-10);
                    }
                }
            }
        }
    }

    #[test]
    fn time_reversal() {
        let n = 25;
        let prop = Propagator::new(&HoppingMatrix::dimerized(n, 1.0, 0.3).unwrap());
        let mut rng = StdRng::seed_from_u64(3);
        let real: Vec<Complex64> = (0..n).map(|_| Complex64::new(rng.random_range(-1.0..1.0), 0.0)).collect();
        let norm = real.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        let s0 = MagnonState::from_amplitudes(real.into_iter().map(|c| c / norm).collect()).unwrap();
        for t in [0.4, 1.9] {
            let fwd = prop.propagate(&s0, t).unwrap();
            let bwd = prop.propagate(&s0, -t).unwrap();
            for (i, j) in [(0, 5), (3, 17), (12, 13)] {
                assert!((corr_xx(&fwd, i, j).unwrap() - corr_xx(&bwd, i, j).unwrap()).abs() < 1e-12);
                assert!((corr_zz(&fwd, i, j).unwrap() - corr_zz(&bwd, i, j).unwrap()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn lightcone_of_a_single_flip() {
        // Flip on the measured site i, partner j = i + δ.
        let n = 201;
        let i0 = 100;
        let prop = Propagator::new(&HoppingMatrix::uniform(n, 1.0).unwrap());
        let s0 = MagnonState::prod_flip(n, i0).unwrap();
        for step in 0..=50 {
            let t = 0.1 * step as f64;
            let s = prop.propagate(&s0, t).unwrap();
            for delta in 1..=80usize {
                if delta as f64 > 4.0 * t * 1.3 + 8.0 {
                    let v = corr_xx(&s, i0, i0 + delta).unwrap();
                    assert!(v.abs() < 1e-4, "t={t} delta={delta} value={v}");
                }
            }
        }
    }
}
