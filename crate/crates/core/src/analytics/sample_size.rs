use serde::{Deserialize, Serialize};

use super::{check_proportion, min_variance_at_epsilon, DesignAux, PrivacyBudget};
use crate::error::{Error, Result};
use crate::mechanisms::MechanismKind;

/// What is assumed about `pi_A` when sizing a survey.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum PiAssumption {
    Known(f64),
    /// `pi_A = 1/2`, where the deck design's variance peaks.
    WorstCase,
}

impl PiAssumption {
    pub fn value(&self) -> f64 {
        match self {
            PiAssumption::Known(p) => *p,
            PiAssumption::WorstCase => 0.5,
        }
    }
}

/// Smallest census size `N >= 2` whose minimum variance at `eps` is at most
/// `var_target`.
///
/// Every minimum-variance formula is `c / N` or `c / (N - 1)`, so the bound
/// is solved in closed form and then confirmed by evaluating at `N` and
/// `N - 1`.
pub fn min_sample_size(
    kind: MechanismKind,
    eps: PrivacyBudget,
    pi_a: PiAssumption,
    var_target: f64,
    p2: f64,
) -> Result<u64> {
    if !(var_target > 0.0 && var_target.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "variance target must be positive, got {var_target}"
        )));
    }
    let pi = pi_a.value();
    check_proportion(pi)?;
    if kind.is_card_based() {
        DesignAux::with_p2(p2).check_p2()?;
    }
    let var_at = |n: u64| min_variance_at_epsilon(kind, eps, n, pi, p2);

    // c is the variance at N = 2 times N (or N - 1) at N = 2
    let estimate = match kind {
        MechanismKind::ImprovedChristofides => {
            let c = var_at(2)?;
            1.0 + c / var_target
        }
        _ => {
            let c = 2.0 * var_at(2)?;
            c / var_target
        }
    };
    let mut n = (estimate.ceil() as u64).max(2);
    while var_at(n)? > var_target {
        n += 1;
    }
    while n > 2 && var_at(n - 1)? <= var_target {
        n -= 1;
    }
    Ok(n)
}
