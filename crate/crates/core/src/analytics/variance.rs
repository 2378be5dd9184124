use serde::{Deserialize, Serialize};

use super::{check_population_size, check_proportion};
use crate::error::{Error, Result};
use crate::mechanisms::{CardDistribution, MechanismSpec};

/// First two moments of the card value `Y`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CardMoments {
    pub mean: f64,
    pub variance: f64,
}

pub fn card_moments(dist: &CardDistribution) -> CardMoments {
    CardMoments {
        mean: dist.mean(),
        variance: dist.variance(),
    }
}

/// Exact variance of the estimator when all `n` population members are
/// surveyed (sampling without replacement).
///
/// `pi_a` only matters for the Simmons design and the deck design; the
/// deck design's distribution must be the one realized by its `n` cards.
pub fn variance_theoretical(spec: &MechanismSpec, n: u64, pi_a: f64) -> Result<f64> {
    check_population_size(n)?;
    check_proportion(pi_a)?;
    let n = n as f64;
    Ok(match spec {
        MechanismSpec::Warner(w) => {
            let p = w.p();
            let d = 2.0 * p - 1.0;
            p * (1.0 - p) / (n * d * d)
        }
        MechanismSpec::Simmons(s) => {
            let (p, pi_b) = (s.p(), s.pi_b());
            let q = 1.0 - p;
            (pi_b * q - pi_b * pi_b * q * q) / (n * p * p) + pi_a * (q - 2.0 * pi_b * q) / (n * p)
        }
        MechanismSpec::Christofides { distribution } => {
            let d = distribution.denominator();
            distribution.variance() / (n * d * d)
        }
        MechanismSpec::ImprovedChristofides { distribution } => {
            let d = distribution.denominator();
            4.0 * pi_a * (1.0 - pi_a) * distribution.variance() / ((n - 1.0) * d * d)
        }
    })
}

/// Variance of the classic designs that sample respondents with replacement:
/// the census variance plus `pi_A (1 - pi_A) / N`. The deck design has no
/// such counterpart.
pub fn variance_with_replacement(spec: &MechanismSpec, n: u64, pi_a: f64) -> Result<f64> {
    if let MechanismSpec::ImprovedChristofides { .. } = spec {
        return Err(Error::Unsupported(
            "the deck design has no with-replacement counterpart".into(),
        ));
    }
    let census = variance_theoretical(spec, n, pi_a)?;
    Ok(census + pi_a * (1.0 - pi_a) / n as f64)
}
