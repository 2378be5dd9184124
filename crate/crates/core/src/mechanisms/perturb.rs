use super::{CardDistribution, Deck, SimmonsParams, WarnerParams};
use crate::error::Result;
use crate::rng::UniformSource;

/// Reports the true bit with probability `p`, its complement otherwise.
/// Consumes one variate.
#[inline]
pub fn warner_perturb(x: bool, params: &WarnerParams, rng: &mut impl UniformSource) -> bool {
    if rng.uniform() < params.p() {
        x
    } else {
        !x
    }
}

/// Reports the true bit with probability `p`, otherwise an independent
/// Bernoulli(`pi_B`) bit. Always consumes two variates so the stream stays
/// aligned whichever branch is taken.
#[inline]
pub fn simmons_perturb(x: bool, params: &SimmonsParams, rng: &mut impl UniformSource) -> bool {
    let u = rng.uniform();
    let v = rng.uniform();
    if u < params.p() {
        x
    } else {
        v < params.pi_b()
    }
}

/// Number reported for a drawn card: `k` for non-members, `L + 1 - k` for
/// members of the sensitive group.
#[inline]
pub fn report_card(x: bool, card: usize, card_values: usize) -> u32 {
    if x {
        (card_values + 1 - card) as u32
    } else {
        card as u32
    }
}

/// Draws a card with replacement and reports it. Consumes one variate.
#[inline]
pub fn christofides_perturb(x: bool, dist: &CardDistribution, rng: &mut impl UniformSource) -> u32 {
    let card = dist.sample_with(rng.uniform());
    report_card(x, card, dist.card_values())
}

/// Draws a card from `deck` without replacement and reports it. Consumes one
/// variate.
#[inline]
pub fn improved_christofides_perturb(
    x: bool,
    deck: &mut Deck,
    rng: &mut impl UniformSource,
) -> Result<u32> {
    let card = deck.draw(rng)?;
    Ok(report_card(x, card, deck.card_values()))
}
