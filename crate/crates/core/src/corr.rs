//! Envelopes for the initial correlations `Cor(S_i(r) : S_j(r))` between two
//! disjoint balls. Each model returns an upper bound on the maximal connected
//! correlation of norm-one observables supported on the two balls, capped at 1.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum CorModel {
    /// Uncorrelated product state.
    Product,
    /// One maximally entangled pair on sites `p` and `q`, product elsewhere.
    BellPair { p: usize, q: usize },
    /// `|⟨O_i O_j⟩_c| <= c1 / dist^chi`, applied to the closest pair of the balls.
    #[serde(rename = "power_law")]
    PowerLawClustered { c1: f64, chi: f64 },
    /// `|⟨O_i O_j⟩_c| <= c0 e^{-dist/xi}`.
    ExpClustered { c0: f64, xi: f64 },
}

impl CorModel {
    pub fn validate(&self) -> Result<()> {
        match *self {
            CorModel::Product => Ok(()),
            CorModel::BellPair { p, q } => {
                if p == q {
                    Err(Error::param("bell_pair", format!("p and q coincide at {p}")))
                } else {
                    Ok(())
                }
            }
            CorModel::PowerLawClustered { c1, chi } => {
                if !(c1.is_finite() && c1 >= 0.0) {
                    return Err(Error::param("c1", format!("must be >= 0, got {c1}")));
                }
                if !(chi.is_finite() && chi >= 0.0) {
                    return Err(Error::param("chi", format!("must be >= 0, got {chi}")));
                }
                Ok(())
            }
            CorModel::ExpClustered { c0, xi } => {
                if !(c0.is_finite() && c0 >= 0.0) {
                    return Err(Error::param("c0", format!("must be >= 0, got {c0}")));
                }
                if !(xi.is_finite() && xi > 0.0) {
                    return Err(Error::param("xi", format!("must be > 0, got {xi}")));
                }
                Ok(())
            }
        }
    }
}

/// Envelope of `Cor(S_i(r) : S_j(r))` for closed balls of radius `r`.
///
/// The balls must be disjoint, `2r < dist(i, j)`.
pub fn cor_between_balls(model: &CorModel, i: usize, j: usize, r: usize) -> Result<f64> {
    let dist = i.abs_diff(j);
    if 2 * r >= dist {
        return Err(Error::Geometry(format!(
            "balls of radius {r} around sites {i} and {j} overlap"
        )));
    }
    // closest pair of sites across the two balls
    let gap = (dist - 2 * r) as f64;
    let value = match *model {
        CorModel::Product => 0.0,
        CorModel::BellPair { p, q } => {
            let inside = |site: usize, centre: usize| site.abs_diff(centre) <= r;
            let straddles = (inside(p, i) && inside(q, j)) || (inside(p, j) && inside(q, i));
            if straddles {
                1.0
            } else {
                0.0
            }
        }
        CorModel::PowerLawClustered { c1, chi } => c1 / gap.powf(chi),
        CorModel::ExpClustered { c0, xi } => c0 * (-gap / xi).exp(),
    };
    Ok(value.min(1.0))
}
