//! Open-chain geometry, spatial decay functions and the three lattice
//! constants `‖F‖`, `C` and `‖Φ‖` that parameterise every bound.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Spatial dimension of the lattice. Only open chains are supported.
pub const DIM: usize = 1;

/// Above this size [`constant_c`] switches from the exhaustive pair scan to
/// the distance-class reduction.
pub const EXHAUSTIVE_C_MAX_SITES: usize = 512;

/// A one-dimensional open chain with sites `0..num_sites`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeSpec {
    num_sites: usize,
}

impl LatticeSpec {
    pub fn new(num_sites: usize) -> Result<Self> {
        if num_sites < 2 {
            return Err(Error::param(
                "num_sites",
                format!("need at least 2 sites, got {num_sites}"),
            ));
        }
        Ok(Self { num_sites })
    }

    pub fn num_sites(&self) -> usize {
        self.num_sites
    }

    /// Graph distance on the chain.
    #[inline]
    pub fn dist(&self, i: usize, j: usize) -> usize {
        i.abs_diff(j)
    }

    pub fn contains(&self, i: usize) -> bool {
        i < self.num_sites
    }

    pub fn check_site(&self, i: usize) -> Result<()> {
        if self.contains(i) {
            Ok(())
        } else {
            Err(Error::Geometry(format!(
                "site {i} outside chain of {} sites",
                self.num_sites
            )))
        }
    }

    /// Largest distance realised on the chain.
    pub fn diameter(&self) -> usize {
        self.num_sites - 1
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DecayKind {
    /// `e^{-a x} / (1+x)^{D+1}`, suited to finite-range or exponentially
    /// decaying interactions.
    ExpPoly { a: f64 },
    /// `(1+x)^{-alpha}` with `alpha > D`.
    PowerLaw { alpha: f64 },
}

/// Positive, strictly decreasing decay profile `F(x)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayFunction {
    #[serde(flatten)]
    kind: DecayKind,
    prefactor: f64,
}

impl DecayFunction {
    pub fn new(kind: DecayKind, prefactor: f64) -> Result<Self> {
        if !(prefactor.is_finite() && prefactor > 0.0) {
            return Err(Error::param(
                "prefactor",
                format!("must be positive and finite, got {prefactor}"),
            ));
        }
        match kind {
            DecayKind::ExpPoly { a } => {
                if !(a.is_finite() && a > 0.0) {
                    return Err(Error::param(
                        "a",
                        format!("decay rate must be positive, got {a}"),
                    ));
                }
            }
            DecayKind::PowerLaw { alpha } => {
                if !(alpha.is_finite() && alpha > DIM as f64) {
                    return Err(Error::param(
                        "alpha",
                        format!("need alpha > {DIM} for summability, got {alpha}"),
                    ));
                }
            }
        }
        Ok(Self { kind, prefactor })
    }

    pub fn exp_poly(a: f64) -> Result<Self> {
        Self::new(DecayKind::ExpPoly { a }, 1.0)
    }

    pub fn power_law(alpha: f64) -> Result<Self> {
        Self::new(DecayKind::PowerLaw { alpha }, 1.0)
    }

    pub fn with_prefactor(self, prefactor: f64) -> Result<Self> {
        Self::new(self.kind, prefactor)
    }

    pub fn kind(&self) -> DecayKind {
        self.kind
    }

    pub fn prefactor(&self) -> f64 {
        self.prefactor
    }

    /// Exponential decay rate, if this is the `ExpPoly` family.
    pub fn rate(&self) -> Option<f64> {
        match self.kind {
            DecayKind::ExpPoly { a } => Some(a),
            DecayKind::PowerLaw { .. } => None,
        }
    }

    /// `F(x)` for `x >= 0`.
    pub fn eval(&self, x: f64) -> f64 {
        debug_assert!(x >= 0.0);
        match self.kind {
            DecayKind::ExpPoly { a } => {
                self.prefactor * (-a * x).exp() / (1.0 + x).powi(DIM as i32 + 1)
            }
            DecayKind::PowerLaw { alpha } => self.prefactor * (1.0 + x).powf(-alpha),
        }
    }

    /// `ln F(x)`; stays finite where `F` itself underflows.
    pub fn ln_eval(&self, x: f64) -> f64 {
        let p = self.prefactor.ln();
        match self.kind {
            DecayKind::ExpPoly { a } => p - a * x - (DIM as f64 + 1.0) * x.ln_1p(),
            DecayKind::PowerLaw { alpha } => p - alpha * x.ln_1p(),
        }
    }

    /// `F(d)` for every integer distance realised on `lattice`.
    pub fn table(&self, lattice: &LatticeSpec) -> Vec<f64> {
        (0..lattice.num_sites())
            .map(|d| self.eval(d as f64))
            .collect()
    }
}

/// `F` evaluated at a distance. Kept as a free function for symmetry with
/// the other constants.
pub fn f_eval(decay: &DecayFunction, x: f64) -> f64 {
    decay.eval(x)
}

/// `‖F‖ = max_i Σ_j F(dist(i, j))`, by a full scan over `i`.
pub fn norm_f(decay: &DecayFunction, lattice: &LatticeSpec) -> f64 {
    let table = decay.table(lattice);
    let n = lattice.num_sites();
    (0..n)
        .map(|i| (0..n).map(|j| table[lattice.dist(i, j)]).sum::<f64>())
        .fold(f64::NEG_INFINITY, f64::max)
}

/// The ratio `F(d_ik) F(d_kj) / F(d_ij)`, evaluated in log space.
#[inline]
fn reproducing_term(ln_f: &[f64], d_ik: usize, d_kj: usize, d_ij: usize) -> f64 {
    (ln_f[d_ik] + ln_f[d_kj] - ln_f[d_ij]).exp()
}

fn ln_table(decay: &DecayFunction, lattice: &LatticeSpec) -> Vec<f64> {
    (0..lattice.num_sites())
        .map(|d| decay.ln_eval(d as f64))
        .collect()
}

/// `C = max_{i,j} Σ_k F(d_ik) F(d_kj) / F(d_ij)` by scanning every pair.
pub fn constant_c_exhaustive(decay: &DecayFunction, lattice: &LatticeSpec) -> f64 {
    let ln_f = ln_table(decay, lattice);
    let n = lattice.num_sites();
    (0..n * n)
        .into_par_iter()
        .map(|pair| {
            let (i, j) = (pair / n, pair % n);
            let d_ij = lattice.dist(i, j);
            (0..n)
                .map(|k| reproducing_term(&ln_f, lattice.dist(i, k), lattice.dist(k, j), d_ij))
                .sum::<f64>()
        })
        .reduce(|| f64::NEG_INFINITY, f64::max)
}

/// `C` via distance classes. For `i <= j` with `d = j - i` the sum splits
/// into a position-independent middle part (`i <= k <= j`) and two
/// one-sided tails `P_d(i) + P_d(n-1-j)` with
/// `P_d(L) = Σ_{m=1}^{L} F(m) F(m+d) / F(d)`.
pub fn constant_c_reduced(decay: &DecayFunction, lattice: &LatticeSpec) -> f64 {
    let ln_f = ln_table(decay, lattice);
    let n = lattice.num_sites();
    (0..n)
        .into_par_iter()
        .map(|d| {
            let middle: f64 = (0..=d).map(|m| reproducing_term(&ln_f, m, d - m, d)).sum();
            let room = n - 1 - d;
            // prefix[L] = P_d(L), L = 0..=room
            let mut prefix = Vec::with_capacity(room + 1);
            prefix.push(0.0);
            let mut acc = 0.0;
            for m in 1..=room {
                acc += reproducing_term(&ln_f, m, m + d, d);
                prefix.push(acc);
            }
            (0..=room)
                .map(|i| middle + prefix[i] + prefix[room - i])
                .fold(f64::NEG_INFINITY, f64::max)
        })
        .reduce(|| f64::NEG_INFINITY, f64::max)
}

/// The reproducibility constant `C`.
pub fn constant_c(decay: &DecayFunction, lattice: &LatticeSpec) -> f64 {
    if lattice.num_sites() <= EXHAUSTIVE_C_MAX_SITES {
        constant_c_exhaustive(decay, lattice)
    } else {
        constant_c_reduced(decay, lattice)
    }
}

/// `Σ_{j : dist(i,j) > r} F(dist(i,j))`, the weight outside the closed ball `S_i(r)`.
pub fn tail_sum(decay: &DecayFunction, lattice: &LatticeSpec, i: usize, r: usize) -> f64 {
    let n = lattice.num_sites();
    // summed per side, in the same order as `tail_sums`
    let left: f64 = (r + 1..=i).map(|d| decay.eval(d as f64)).sum();
    let right: f64 = (r + 1..n.saturating_sub(i)).map(|d| decay.eval(d as f64)).sum();
    left + right
}

/// Tail sums `tail_sum(i, r)` for every radius `r = 0..=max_r`, computed
/// from one precomputed table.
pub fn tail_sums(table: &[f64], lattice: &LatticeSpec, i: usize, max_r: usize) -> Vec<f64> {
    let n = lattice.num_sites();
    (0..=max_r)
        .map(|r| {
            let left: f64 = (r + 1..=i).map(|d| table[d]).sum();
            let right: f64 = (r + 1..n.saturating_sub(i)).map(|d| table[d]).sum();
            left + right
        })
        .collect()
}

/// Pair interaction norms by distance: `range_norms[d-1]` is the largest
/// operator norm `‖Φ({i,j})‖` over pairs at distance `d`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairInteraction {
    range_norms: Vec<f64>,
}

impl PairInteraction {
    pub fn new(range_norms: Vec<f64>) -> Result<Self> {
        if let Some(bad) = range_norms.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(Error::param(
                "coupling_norm",
                format!("norms must be finite and nonnegative, got {bad}"),
            ));
        }
        Ok(Self { range_norms })
    }

    /// Nearest-neighbour XX chain: `‖J(σˣσˣ + σʸσʸ)‖ = 2|J|`.
    pub fn xx_chain(j: f64) -> Result<Self> {
        Self::new(vec![2.0 * j.abs()])
    }

    /// Dimerised XX chain with bond couplings `J(1 ± η)`.
    pub fn dimerized_xx(j: f64, eta: f64) -> Result<Self> {
        Self::new(vec![2.0 * j.abs() * (1.0 + eta.abs())])
    }

    pub fn none() -> Self {
        Self {
            range_norms: Vec::new(),
        }
    }

    /// Operator norm of the interaction at distance `d >= 1`.
    pub fn coupling_norm(&self, d: usize) -> f64 {
        if d == 0 {
            return 0.0;
        }
        self.range_norms.get(d - 1).copied().unwrap_or(0.0)
    }

    pub fn max_range(&self) -> usize {
        self.range_norms.len()
    }
}

/// `‖Φ‖ = max_{d >= 1} coupling_norm(d) / F(d)`; for pair interactions the
/// only set containing two distinct sites is the pair itself.
pub fn norm_phi(
    interaction: &PairInteraction,
    decay: &DecayFunction,
    lattice: &LatticeSpec,
) -> Result<f64> {
    let mut best = 0.0_f64;
    for d in 1..=interaction.max_range().min(lattice.diameter()) {
        let norm = interaction.coupling_norm(d);
        if norm == 0.0 {
            continue;
        }
        let ratio = norm / decay.eval(d as f64);
        if !ratio.is_finite() {
            return Err(Error::param(
                "coupling_norm",
                format!("coupling at distance {d} is not bounded by F"),
            ));
        }
        best = best.max(ratio);
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use nalgebra::Matrix4;
    use num_complex::Complex64;
    use proptest::prelude::*;

    fn chain(n: usize) -> LatticeSpec {
        LatticeSpec::new(n).unwrap()
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(LatticeSpec::new(1).is_err());
        assert!(DecayFunction::exp_poly(0.0).is_err());
        assert!(DecayFunction::exp_poly(-1.0).is_err());
        assert!(DecayFunction::power_law(1.0).is_err());
        assert!(DecayFunction::power_law(0.5).is_err());
        assert!(DecayFunction::power_law(2.0).unwrap().with_prefactor(0.0).is_err());
    }

    #[test]
    fn f_eval_examples() {
        let p = DecayFunction::power_law(2.0).unwrap();
        assert_eq!(f_eval(&p, 1.0), 0.25);
        let e = DecayFunction::exp_poly(1.0).unwrap();
        assert_eq!(f_eval(&e, 0.0), 1.0);
        // mpmath, 30 digits: e^{-3}/16
        assert_relative_eq!(f_eval(&e, 3.0), 0.003_111_691_772_991_496_4, max_relative = 1e-15);
    }

    #[test]
    fn distance_is_a_metric() {
        let l = chain(7);
        for i in 0..7 {
            for j in 0..7 {
                assert_eq!(l.dist(i, j), l.dist(j, i));
                assert_eq!(l.dist(i, j) == 0, i == j);
                for k in 0..7 {
                    assert!(l.dist(i, j) <= l.dist(i, k) + l.dist(k, j));
                }
            }
        }
    }

    #[test]
    fn norm_f_examples() {
        let p = DecayFunction::power_law(2.0).unwrap();
        assert_relative_eq!(norm_f(&p, &chain(3)), 1.5, max_relative = 1e-15);

        // Independent summation at the centre site, then the Basel limit.
        let direct = 1.0 + 2.0 * (1..=100).map(|d| 1.0 / ((1 + d) as f64).powi(2)).sum::<f64>();
        let v = norm_f(&p, &chain(201));
        assert_relative_eq!(v, direct, max_relative = 1e-13);
        assert_relative_eq!(v, 2.270_163_859_579_667, max_relative = 1e-13);
        let basel = 2.0 * std::f64::consts::PI.powi(2) / 6.0 - 1.0;
        assert!(v < basel && basel - v < 0.02);

        let e = DecayFunction::exp_poly(1.0).unwrap();
        assert_relative_eq!(
            norm_f(&e, &chain(2)),
            1.0 + (-1.0f64).exp() / 4.0,
            max_relative = 1e-15
        );
    }

    #[test]
    fn constant_c_small_chains() {
        let p = DecayFunction::power_law(2.0).unwrap();
        // pairs (i,i): 1 + 1/16; pairs (i,j), i != j: 2 F(0)F(1)/F(1) = 2
        assert_relative_eq!(constant_c(&p, &chain(2)), 2.0, max_relative = 1e-15);
        // nine-pair scan, maximised by the end-to-end pair: 1 + 1 + (1/16)/(1/9)
        assert_relative_eq!(constant_c(&p, &chain(3)), 2.5625, max_relative = 1e-14);
    }

    #[test]
    fn constant_c_is_homogeneous_in_prefactor() {
        for decay in [
            DecayFunction::power_law(2.5).unwrap(),
            DecayFunction::exp_poly(0.7).unwrap(),
        ] {
            let l = chain(17);
            let scaled = decay.with_prefactor(3.5).unwrap();
            assert_relative_eq!(
                constant_c(&scaled, &l),
                3.5 * constant_c(&decay, &l),
                max_relative = 1e-13
            );
            assert_relative_eq!(norm_f(&scaled, &l), 3.5 * norm_f(&decay, &l), max_relative = 1e-13);
        }
    }

    #[test]
    fn reduced_c_matches_exhaustive() {
        for decay in [
            DecayFunction::power_law(2.0).unwrap(),
            DecayFunction::power_law(1.3).unwrap(),
            DecayFunction::exp_poly(1.0).unwrap(),
            DecayFunction::exp_poly(0.2).unwrap().with_prefactor(0.4).unwrap(),
        ] {
            for n in [2, 3, 4, 5, 10, 33, 120] {
                let l = chain(n);
                assert_relative_eq!(
                    constant_c_reduced(&decay, &l),
                    constant_c_exhaustive(&decay, &l),
                    max_relative = 1e-12
                );
            }
        }
    }

    #[test]
    fn c_is_at_least_f0_and_nondecreasing_in_n() {
        let decay = DecayFunction::exp_poly(1.0).unwrap();
        let mut prev_c = 0.0;
        let mut prev_f = 0.0;
        for n in 2..40 {
            let l = chain(n);
            let c = constant_c(&decay, &l);
            let f = norm_f(&decay, &l);
            assert!(c >= decay.eval(0.0));
            assert!(c >= prev_c && f >= prev_f, "n={n}");
            prev_c = c;
            prev_f = f;
        }
    }

    #[test]
    fn tail_sum_examples() {
        let p = DecayFunction::power_law(2.0).unwrap();
        let l = chain(5);
        assert_relative_eq!(tail_sum(&p, &l, 2, 1), 2.0 / 9.0, max_relative = 1e-15);
        for i in 0..5 {
            assert_eq!(tail_sum(&p, &l, i, 4), 0.0);
            assert_eq!(tail_sum(&p, &l, i, 9), 0.0);
        }
    }

    #[test]
    fn tail_sum_partition_and_monotonicity() {
        let decay = DecayFunction::exp_poly(0.5).unwrap();
        let l = chain(23);
        let table = decay.table(&l);
        for i in 0..23 {
            let total: f64 = (0..23).map(|j| decay.eval(l.dist(i, j) as f64)).sum();
            let fast = tail_sums(&table, &l, i, 25);
            for r in 0..25 {
                let inside: f64 = (0..23)
                    .filter(|&j| l.dist(i, j) <= r)
                    .map(|j| decay.eval(l.dist(i, j) as f64))
                    .sum();
                let tail = tail_sum(&decay, &l, i, r);
                assert_relative_eq!(tail + inside, total, max_relative = 1e-14);
                assert_relative_eq!(fast[r], tail, max_relative = 1e-14);
                assert!(tail_sum(&decay, &l, i, r + 1) <= tail);
            }
        }
    }

    #[test]
    fn xx_pair_operator_norm_is_two() {
        let i = Complex64::i();
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let sx = [[zero, one], [one, zero]];
        let sy = [[zero, -i], [i, zero]];
        let kron = |a: [[Complex64; 2]; 2], b: [[Complex64; 2]; 2]| {
            Matrix4::from_fn(|r, c| a[r / 2][c / 2] * b[r % 2][c % 2])
        };
        let m = kron(sx, sx) + kron(sy, sy);
        let herm = m.clone().map(|z| z.re);
        assert!(m.iter().all(|z| z.im.abs() < 1e-15));
        let eig = herm.symmetric_eigen();
        let norm = eig.eigenvalues.iter().map(|v| v.abs()).fold(0.0, f64::max);
        assert_relative_eq!(norm, 2.0, max_relative = 1e-14);
        assert_eq!(PairInteraction::xx_chain(1.0).unwrap().coupling_norm(1), norm.round());
    }

    #[test]
    fn norm_phi_examples() {
        let l = chain(11);
        let xx = PairInteraction::xx_chain(1.0).unwrap();
        let e = DecayFunction::exp_poly(1.0).unwrap();
        assert_relative_eq!(
            norm_phi(&xx, &e, &l).unwrap(),
            8.0 * std::f64::consts::E,
            max_relative = 1e-14
        );
        let p = DecayFunction::power_law(2.0).unwrap();
        assert_eq!(norm_phi(&xx, &p, &l).unwrap(), 8.0);
        assert_eq!(norm_phi(&PairInteraction::none(), &p, &l).unwrap(), 0.0);
        assert!(PairInteraction::new(vec![-1.0]).is_err());
    }

    #[test]
    fn norm_phi_rejects_unbounded_ratio() {
        let l = chain(2000);
        let e = DecayFunction::exp_poly(1.0).unwrap();
        let mut norms = vec![0.0; 1500];
        norms[1499] = 1.0;
        let far = PairInteraction::new(norms).unwrap();
        assert!(norm_phi(&far, &e, &l).is_err());
    }

    proptest! {
        #[test]
        fn decay_is_strictly_decreasing(
            a in 0.01f64..5.0,
            alpha in 1.01f64..6.0,
            x in 0.0f64..50.0,
            dx in 0.01f64..5.0,
        ) {
            let e = DecayFunction::exp_poly(a).unwrap();
            let p = DecayFunction::power_law(alpha).unwrap();
            prop_assert!(e.eval(x) > e.eval(x + dx));
            prop_assert!(p.eval(x) > p.eval(x + dx));
            prop_assert!(e.eval(x) > 0.0 && p.eval(x) > 0.0);
        }

        #[test]
        fn constants_are_pure(n in 2usize..30, a in 0.1f64..3.0) {
            let e = DecayFunction::exp_poly(a).unwrap();
            let l = LatticeSpec::new(n).unwrap();
            prop_assert_eq!(constant_c(&e, &l).to_bits(), constant_c(&e, &l).to_bits());
            prop_assert_eq!(norm_f(&e, &l).to_bits(), norm_f(&e, &l).to_bits());
        }
    }
}
