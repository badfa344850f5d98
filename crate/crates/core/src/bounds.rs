//! The bound engine.
//!
//! For single-site observables at `i != j` and a ball radius `r` with
//! `2r < dist(i, j)` the connected correlation obeys
//!
//! ```text
//! |⟨A(t)B(t)⟩_c| / (‖A‖‖B‖) <= Cor(S_i(r):S_j(r))
//!                              + 4 G(t) [tail_i(r) + tail_j(r)]
//! ```
//!
//! with `G(t) = ((C+‖F‖)/C) ‖Φ‖ ∫_0^|t| g(τ) dτ` and
//! `g(t) = e^{2‖Φ‖C|t|} - 1`. [`bound_optimized`] minimises the right-hand
//! side over integer radii and caps the result at 1. The closed forms at the
//! bottom of the module are the integral-approximated specialisations used
//! for qualitative comparison; only the exact-sum path is used to certify
//! dominance.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corr::{cor_between_balls, CorModel};
use crate::error::{Error, Result};
use crate::grid::CorrelationGrid;
use crate::lattice::{
    constant_c, norm_f, norm_phi, tail_sum, tail_sums, DecayFunction, LatticeSpec,
    PairInteraction, DIM,
};

/// `‖Φ‖`, `C`, `‖F‖` together with the decay function and lattice they
/// were computed for.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundConstants {
    pub norm_phi: f64,
    pub const_c: f64,
    pub norm_f: f64,
    pub decay: DecayFunction,
    pub lattice: LatticeSpec,
}

impl BoundConstants {
    /// Computes all three constants for `interaction` on `lattice`.
    pub fn compute(
        decay: DecayFunction,
        lattice: LatticeSpec,
        interaction: &PairInteraction,
    ) -> Result<Self> {
        let norm_phi = norm_phi(interaction, &decay, &lattice)?;
        if norm_phi <= 0.0 {
            return Err(Error::param("interaction", "interaction norm must be positive"));
        }
        Self::from_parts(norm_phi, constant_c(&decay, &lattice), norm_f(&decay, &lattice), decay, lattice)
    }

    /// Assembles constants from given values. Production code goes through
    /// [`compute`](Self::compute); this exists so tests can inject values.
    pub fn from_parts(
        norm_phi: f64,
        const_c: f64,
        norm_f: f64,
        decay: DecayFunction,
        lattice: LatticeSpec,
    ) -> Result<Self> {
        for (name, v) in [("norm_phi", norm_phi), ("const_c", const_c), ("norm_F", norm_f)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::param(name, format!("must be positive and finite, got {v}")));
            }
        }
        Ok(Self {
            norm_phi,
            const_c,
            norm_f,
            decay,
            lattice,
        })
    }

    /// `2‖Φ‖C`, the growth rate of `g`.
    pub fn rate(&self) -> f64 {
        2.0 * self.norm_phi * self.const_c
    }

    /// Default Lieb-Robinson velocity `v = 2‖Φ‖C / a` for `ExpPoly` decay.
    pub fn velocity(&self) -> Option<f64> {
        self.decay.rate().map(|a| self.rate() / a)
    }

    fn g_prefactor(&self) -> f64 {
        (self.const_c + self.norm_f) / (2.0 * self.const_c * self.const_c)
    }
}

/// Parameters of the closed-form scenario bounds.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClosedFormParams {
    pub a: f64,
    pub v: f64,
    #[serde(default = "one")]
    pub c_tilde: f64,
    #[serde(default = "one")]
    pub c1: f64,
    #[serde(default = "one")]
    pub c2: f64,
    #[serde(default)]
    pub chi: f64,
}

fn one() -> f64 {
    1.0
}

impl ClosedFormParams {
    /// `a = v = c̃ = c1 = c2 = 1`, `chi = 2`.
    pub fn unit() -> Self {
        Self {
            a: 1.0,
            v: 1.0,
            c_tilde: 1.0,
            c1: 1.0,
            c2: 1.0,
            chi: 2.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.a, self.v, self.c_tilde, self.c1, self.c2, self.chi];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::param("closed_form", "all parameters must be finite"));
        }
        if self.a <= 0.0 || self.v <= 0.0 {
            return Err(Error::param("closed_form", "a and v must be positive"));
        }
        if self.c_tilde <= 0.0 || self.c2 <= 0.0 || self.c1 < 0.0 || self.chi < 0.0 {
            return Err(Error::param(
                "closed_form",
                "need c_tilde > 0, c2 > 0, c1 >= 0, chi >= 0",
            ));
        }
        Ok(())
    }
}

/// `e^x - 1 - x` without cancellation for small `x >= 0`.
fn expm1_minus_x(x: f64) -> f64 {
    if x < 0.5 {
        let mut term = x * x / 2.0;
        let mut sum = term;
        let mut n = 2.0;
        while term > sum * 1e-17 {
            n += 1.0;
            term *= x / n;
            sum += term;
        }
        sum
    } else {
        x.exp_m1() - x
    }
}

/// `g(t)`; the disjoint-support form vanishes at `t = 0`. Overflow yields `+∞`.
pub fn g_func(t: f64, bc: &BoundConstants, supports_disjoint: bool) -> f64 {
    let x = bc.rate() * t.abs();
    if supports_disjoint {
        x.exp_m1()
    } else {
        x.exp()
    }
}

/// `G(t) = ((C+‖F‖)/C) ‖Φ‖ ∫_0^|t| g(τ) dτ = (C+‖F‖)/(2C²) (e^x - 1 - x)`
/// with `x = 2‖Φ‖C|t|`.
pub fn big_g(t: f64, bc: &BoundConstants) -> f64 {
    bc.g_prefactor() * expm1_minus_x(bc.rate() * t.abs())
}

/// The simplified upper estimate `(C+‖F‖)/(2C²) e^{2‖Φ‖C|t|} >= G(t)`.
pub fn big_g_simple(t: f64, bc: &BoundConstants) -> f64 {
    bc.g_prefactor() * (bc.rate() * t.abs()).exp()
}

/// Right-hand side of the Lieb-Robinson commutator bound for unit-norm
/// observables supported on `x` and `y`.
pub fn lr_commutator_bound(x: &[usize], y: &[usize], t: f64, bc: &BoundConstants) -> Result<f64> {
    if x.is_empty() || y.is_empty() {
        return Err(Error::Geometry("observable supports must be nonempty".into()));
    }
    for &s in x.iter().chain(y) {
        bc.lattice.check_site(s)?;
    }
    let disjoint = !x.iter().any(|s| y.contains(s));
    let pair_sum: f64 = x
        .iter()
        .flat_map(|&i| y.iter().map(move |&j| (i, j)))
        .map(|(i, j)| bc.decay.eval(bc.lattice.dist(i, j) as f64))
        .sum();
    Ok(2.0 / bc.const_c * g_func(t, bc, disjoint) * pair_sum)
}

fn check_pair(i: usize, j: usize, bc: &BoundConstants) -> Result<usize> {
    bc.lattice.check_site(i)?;
    bc.lattice.check_site(j)?;
    if i == j {
        return Err(Error::Geometry(format!("observables must sit on distinct sites, got {i} twice")));
    }
    Ok(bc.lattice.dist(i, j))
}

/// `4 G(t) × tails`, with an empty complement contributing nothing even when
/// `G` has overflowed.
fn dynamical_term(g: f64, tails: f64) -> f64 {
    if tails == 0.0 {
        0.0
    } else {
        4.0 * g * tails
    }
}

/// The radius-`r` bound for single-site observables at `i` and `j`.
pub fn bound_at_radius(
    i: usize,
    j: usize,
    r: usize,
    t: f64,
    bc: &BoundConstants,
    cor: &CorModel,
) -> Result<f64> {
    let dist = check_pair(i, j, bc)?;
    if 2 * r >= dist {
        return Err(Error::Geometry(format!(
            "radius {r} too large for sites {i}, {j}: balls would overlap"
        )));
    }
    let cor_value = cor_between_balls(cor, i, j, r)?;
    let tails = tail_sum(&bc.decay, &bc.lattice, i, r) + tail_sum(&bc.decay, &bc.lattice, j, r);
    Ok(cor_value + dynamical_term(big_g(t, bc), tails))
}

/// The time-independent part of the radius scan for one site pair:
/// `(Cor(r), tail_i(r) + tail_j(r))` for every admissible `r`.
#[derive(Clone, Debug)]
pub struct RadiusProfile {
    cor: Vec<f64>,
    tails: Vec<f64>,
}

impl RadiusProfile {
    pub fn new(i: usize, j: usize, bc: &BoundConstants, cor: &CorModel) -> Result<Self> {
        let table = bc.decay.table(&bc.lattice);
        Self::with_table(i, j, bc, cor, &table)
    }

    fn with_table(
        i: usize,
        j: usize,
        bc: &BoundConstants,
        cor: &CorModel,
        table: &[f64],
    ) -> Result<Self> {
        let dist = check_pair(i, j, bc)?;
        let max_r = (dist - 1) / 2;
        let ti = tail_sums(table, &bc.lattice, i, max_r);
        let tj = tail_sums(table, &bc.lattice, j, max_r);
        let tails = ti.iter().zip(&tj).map(|(a, b)| a + b).collect();
        let cor = (0..=max_r)
            .map(|r| cor_between_balls(cor, i, j, r))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { cor, tails })
    }

    pub fn max_radius(&self) -> usize {
        self.cor.len() - 1
    }

    /// Minimum over `r` of `min(1, B_r(t))`; ties resolve to the smallest `r`.
    pub fn optimize(&self, g: f64) -> (f64, usize) {
        let mut best = (f64::INFINITY, 0);
        for (r, (c, tail)) in self.cor.iter().zip(&self.tails).enumerate() {
            let v = (c + dynamical_term(g, *tail)).min(1.0);
            if v < best.0 {
                best = (v, r);
            }
        }
        best
    }
}

/// Optimised bound `min_r min(1, B_r(t))` and the minimising radius.
pub fn bound_optimized(
    i: usize,
    j: usize,
    t: f64,
    bc: &BoundConstants,
    cor: &CorModel,
) -> Result<(f64, usize)> {
    let profile = RadiusProfile::new(i, j, bc, cor)?;
    Ok(profile.optimize(big_g(t, bc)))
}

/// One row of a bound grid: the measured sites and the initial-correlation
/// model that applies to them.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridRow {
    pub i: usize,
    pub j: usize,
    pub cor: CorModel,
}

/// [`bound_optimized`] over a grid with one shared correlation model.
pub fn bound_grid(
    pairs: &[(usize, usize)],
    times: &[f64],
    bc: &BoundConstants,
    cor: &CorModel,
) -> Result<CorrelationGrid> {
    let rows: Vec<GridRow> = pairs.iter().map(|&(i, j)| GridRow { i, j, cor: *cor }).collect();
    bound_grid_rows(&rows, times, bc)
}

/// [`bound_optimized`] over a grid whose rows may carry different models.
pub fn bound_grid_rows(rows: &[GridRow], times: &[f64], bc: &BoundConstants) -> Result<CorrelationGrid> {
    if rows.is_empty() || times.is_empty() {
        return Err(Error::Geometry("bound grid needs at least one pair and one time".into()));
    }
    let table = bc.decay.table(&bc.lattice);
    let g_values: Vec<f64> = times.iter().map(|&t| big_g(t, bc)).collect();
    let cells: Vec<Vec<(f64, usize)>> = rows
        .par_iter()
        .map(|row| {
            let dist = row.i.abs_diff(row.j);
            let profile = RadiusProfile::with_table(row.i, row.j, bc, &row.cor, &table)
                .map_err(|e| Error::Cell {
                    delta: dist,
                    t: times[0],
                    source: Box::new(e),
                })?;
            Ok(g_values.iter().map(|&g| profile.optimize(g)).collect())
        })
        .collect::<Result<_>>()?;
    let distances = rows.iter().map(|r| r.i.abs_diff(r.j)).collect();
    let flat: Vec<(f64, usize)> = cells.into_iter().flatten().collect();
    let values = flat.iter().map(|c| c.0).collect();
    let argmin = flat.iter().map(|c| c.1).collect();
    Ok(CorrelationGrid::new("bound", distances, times.to_vec(), values)?.with_argmin(argmin))
}

/// Integral-approximated bound for `ExpPoly` decay at real radius
/// `0 < r <= dist/2`: `cor + 4c(C+‖F‖) e^{2‖Φ‖C|t| - a r} / (C² r²)`.
pub fn closed_form_exponential(
    r: f64,
    t: f64,
    dist_ij: f64,
    bc: &BoundConstants,
    c: f64,
    cor_value: f64,
) -> Result<f64> {
    let a = bc
        .decay
        .rate()
        .ok_or_else(|| Error::param("decay", "exponential closed form needs exp_poly decay"))?;
    if !(r > 0.0) {
        return Err(Error::param("r", format!("radius must be positive, got {r}")));
    }
    if !(dist_ij > 0.0) || 2.0 * r > dist_ij {
        return Err(Error::Geometry(format!("radius {r} exceeds half the distance {dist_ij}")));
    }
    let cc = bc.const_c;
    let dynamical = 4.0 * c * (cc + bc.norm_f) * (bc.rate() * t.abs() - a * r).exp() / (cc * cc * r * r);
    Ok(cor_value + dynamical)
}

/// Integral-approximated bound for power-law decay:
/// `cor + 4c(C+‖F‖) e^{2‖Φ‖C|t|} / (C² r^{α-D})`.
pub fn closed_form_powerlaw(
    r: f64,
    t: f64,
    bc: &BoundConstants,
    c: f64,
    alpha: f64,
    cor_value: f64,
) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::param("r", format!("radius must be positive, got {r}")));
    }
    if !(alpha > DIM as f64) {
        return Err(Error::param("alpha", format!("need alpha > {DIM}, got {alpha}")));
    }
    let cc = bc.const_c;
    let dynamical =
        4.0 * c * (cc + bc.norm_f) * (bc.rate() * t.abs()).exp() / (cc * cc * r.powf(alpha - DIM as f64));
    Ok(cor_value + dynamical)
}

/// Bell-pair closed form `min{1, c̃ e^{a(v|t| - |i-k|)}}` for sites at `±i`
/// and the pair at `±k`.
pub fn bound_block_closed(t: f64, i: usize, k: usize, p: &ClosedFormParams) -> f64 {
    let gap = i.abs_diff(k) as f64;
    (p.c_tilde * (p.a * (p.v * t.abs() - gap)).exp()).min(1.0)
}

/// Power-law clustered closed form
/// `min{1, min_r [c1/(dist-2r)^χ + c2 e^{a(v|t| - r)}]}` over integer
/// `r = 0..=(dist-1)/2`.
pub fn bound_power_closed(t: f64, dist_ij: usize, p: &ClosedFormParams) -> Result<f64> {
    if dist_ij == 0 {
        return Err(Error::Geometry("distance must be at least 1".into()));
    }
    let best = (0..=(dist_ij - 1) / 2)
        .map(|r| {
            let gap = (dist_ij - 2 * r) as f64;
            p.c1 / gap.powf(p.chi) + p.c2 * (p.a * (p.v * t.abs() - r as f64)).exp()
        })
        .fold(f64::INFINITY, f64::min);
    Ok(best.min(1.0))
}
