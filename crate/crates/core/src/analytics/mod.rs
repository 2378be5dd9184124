//! Closed-form analysis: estimators, exact variances under census sampling,
//! privacy budgets and their inverses, minimum-variance designs at a fixed
//! budget, regime classification and sample-size solving.

mod budget;
mod design;
mod estimate;
mod regime;
mod sample_size;
mod variance;

pub use budget::{epsilon_of, params_from_epsilon, DesignAux, PrivacyBudget};
pub use design::min_variance_at_epsilon;
pub use estimate::{
    christofides_estimate, estimate, estimate_from_mean, simmons_estimate, warner_estimate,
    Estimate,
};
pub use regime::{
    classify_regime, ic_mc_crossover, regime_thresholds, variance_ratio_ic_mc, Family, Regime,
    RegimeReport,
};
pub use sample_size::{min_sample_size, PiAssumption};
pub use variance::{card_moments, variance_theoretical, variance_with_replacement, CardMoments};

use crate::error::{Error, Result};

pub(crate) fn check_population_size(n: u64) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "N must be at least 2, got {n}"
        )));
    }
    Ok(())
}

pub(crate) fn check_proportion(pi_a: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&pi_a) {
        return Err(Error::InvalidParameter(format!(
            "pi_A must lie in [0, 1], got {pi_a}"
        )));
    }
    Ok(())
}
