use super::{check_population_size, check_proportion, DesignAux, PrivacyBudget};
use crate::error::Result;
use crate::mechanisms::MechanismKind;

/// Smallest achievable estimator variance at budget `eps` for a census of
/// `n`. Warner and Simmons share `e^eps / (N (e^eps - 1)^2)`; the card
/// designs (`L = 3`, middle proportion `p2`) use the bracket
/// `(e^eps + 1)^2 / ((e^eps - 1)^2 (1 - p2)) - 1`, scaled by `1/(4N)`
/// with replacement and by `pi_A (1 - pi_A)/(N - 1)` for the deck.
pub fn min_variance_at_epsilon(
    kind: MechanismKind,
    eps: PrivacyBudget,
    n: u64,
    pi_a: f64,
    p2: f64,
) -> Result<f64> {
    check_population_size(n)?;
    let n = n as f64;
    let e = eps.epsilon().exp();
    let em1 = eps.epsilon().exp_m1();
    Ok(match kind {
        MechanismKind::Warner | MechanismKind::Simmons => e / (n * em1 * em1),
        MechanismKind::Christofides => card_bracket(e, em1, p2)? / (4.0 * n),
        MechanismKind::ImprovedChristofides => {
            check_proportion(pi_a)?;
            pi_a * (1.0 - pi_a) / (n - 1.0) * card_bracket(e, em1, p2)?
        }
    })
}

fn card_bracket(e: f64, em1: f64, p2: f64) -> Result<f64> {
    DesignAux::with_p2(p2).check_p2()?;
    let ep1 = e + 1.0;
    Ok(ep1 * ep1 / (em1 * em1 * (1.0 - p2)) - 1.0)
}
