use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const SUM_TOLERANCE: f64 = 1e-12;
const SINGULAR_TOLERANCE: f64 = 1e-12;

/// Law of the card value `Y` on `1..=L`.
///
/// Construction rejects distributions whose estimator denominator
/// `L + 1 - 2 E[Y]` vanishes, which includes every uniform distribution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct CardDistribution {
    proportions: Vec<f64>,
}

impl CardDistribution {
    pub fn new(proportions: impl Into<Vec<f64>>) -> Result<Self> {
        let proportions = proportions.into();
        let l = proportions.len();
        if l < 2 {
            return Err(Error::InvalidDistribution(format!(
                "need at least 2 card values, got {l}"
            )));
        }
        if let Some(bad) = proportions.iter().find(|p| !p.is_finite() || **p < 0.0) {
            return Err(Error::InvalidDistribution(format!(
                "proportions must be finite and nonnegative, got {bad}"
            )));
        }
        let total: f64 = proportions.iter().sum();
        if (total - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::InvalidDistribution(format!(
                "proportions sum to {total}, expected 1"
            )));
        }
        let first = proportions[0];
        if proportions.iter().all(|p| *p == first) {
            return Err(Error::InvalidDistribution(
                "proportions are all equal".into(),
            ));
        }
        let dist = Self { proportions };
        let denom = dist.denominator();
        if denom.abs() <= SINGULAR_TOLERANCE {
            return Err(Error::InvalidDistribution(format!(
                "L + 1 - 2E[Y] = {denom} makes the estimator singular"
            )));
        }
        Ok(dist)
    }

    /// Number of card values `L`.
    pub fn card_values(&self) -> usize {
        self.proportions.len()
    }

    /// `p_k` for `k` in `1..=L`.
    pub fn proportion(&self, k: usize) -> f64 {
        self.proportions[k - 1]
    }

    pub fn proportions(&self) -> &[f64] {
        &self.proportions
    }

    /// `E[Y] = sum k p_k`.
    pub fn mean(&self) -> f64 {
        self.proportions
            .iter()
            .enumerate()
            .map(|(i, p)| (i + 1) as f64 * p)
            .sum()
    }

    /// `Var[Y] = sum k^2 p_k - E[Y]^2`.
    pub fn variance(&self) -> f64 {
        let second: f64 = self
            .proportions
            .iter()
            .enumerate()
            .map(|(i, p)| ((i + 1) * (i + 1)) as f64 * p)
            .sum();
        let m = self.mean();
        second - m * m
    }

    /// `L + 1 - 2 E[Y]`, the estimator's denominator. Never zero.
    pub fn denominator(&self) -> f64 {
        (self.card_values() + 1) as f64 - 2.0 * self.mean()
    }

    /// Card value for a uniform variate `u` in `[0, 1)` by inverse CDF.
    pub(crate) fn sample_with(&self, u: f64) -> usize {
        let mut acc = 0.0;
        let mut last_nonzero = 1;
        for (i, p) in self.proportions.iter().enumerate() {
            if *p > 0.0 {
                acc += p;
                last_nonzero = i + 1;
                if u < acc {
                    return i + 1;
                }
            }
        }
        // rounding left the cumulative sum just below 1
        last_nonzero
    }
}

impl TryFrom<Vec<f64>> for CardDistribution {
    type Error = Error;

    fn try_from(value: Vec<f64>) -> Result<Self> {
        Self::new(value)
    }
}

impl From<CardDistribution> for Vec<f64> {
    fn from(value: CardDistribution) -> Self {
        value.proportions
    }
}
