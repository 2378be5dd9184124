use super::CardDistribution;
use crate::error::{Error, Result};
use crate::rng::UniformSource;

/// Remainders closer than this are treated as tied.
const TIE_TOLERANCE: f64 = 1e-9;

/// Apportions `n` items over `weights` (summing to 1) by the largest-remainder
/// method. Ties go to the lower index.
pub fn largest_remainder(n: u64, weights: &[f64]) -> Vec<u64> {
    let quotas: Vec<f64> = weights.iter().map(|w| w * n as f64).collect();
    let mut counts: Vec<u64> = quotas.iter().map(|q| q.floor().max(0.0) as u64).collect();
    let assigned: u64 = counts.iter().sum();
    let mut leftover = n.saturating_sub(assigned);
    let mut order: Vec<usize> = (0..weights.len()).collect();
    order.sort_by(|&a, &b| {
        let ra = quotas[a] - quotas[a].floor();
        let rb = quotas[b] - quotas[b].floor();
        if (ra - rb).abs() <= TIE_TOLERANCE {
            a.cmp(&b)
        } else {
            rb.partial_cmp(&ra).unwrap()
        }
    });
    for &i in order.iter().cycle() {
        if leftover == 0 {
            break;
        }
        counts[i] += 1;
        leftover -= 1;
    }
    counts
}

/// A physical deck of cards, consumed one card per respondent.
#[derive(Debug, Clone, PartialEq)]
pub struct Deck {
    initial: Vec<u64>,
    counts: Vec<u64>,
    remaining: u64,
    realized: CardDistribution,
}

impl Deck {
    /// Builds an `n`-card deck approximating `dist` by largest-remainder
    /// rounding. Fails if the rounded composition is itself not a valid
    /// card distribution.
    pub fn build(n: u64, dist: &CardDistribution) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameter(format!(
                "a deck needs at least 2 cards, got {n}"
            )));
        }
        Self::from_counts(largest_remainder(n, dist.proportions()))
    }

    /// Deck with explicit counts `n_1..n_L`.
    pub fn from_counts(counts: Vec<u64>) -> Result<Self> {
        let total: u64 = counts.iter().sum();
        if total == 0 {
            return Err(Error::RealizedDistributionInvalid {
                cards: 0,
                reason: "deck has no cards".into(),
            });
        }
        let proportions: Vec<f64> = counts.iter().map(|c| *c as f64 / total as f64).collect();
        let realized =
            CardDistribution::new(proportions).map_err(|e| Error::RealizedDistributionInvalid {
                cards: total,
                reason: format!("counts {counts:?}: {e}"),
            })?;
        Ok(Self {
            initial: counts.clone(),
            counts,
            remaining: total,
            realized,
        })
    }

    /// Counts still in the deck.
    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Counts at construction.
    pub fn initial_counts(&self) -> &[u64] {
        &self.initial
    }

    pub fn remaining(&self) -> u64 {
        self.remaining
    }

    /// Total number of cards at construction.
    pub fn size(&self) -> u64 {
        self.initial.iter().sum()
    }

    pub fn card_values(&self) -> usize {
        self.initial.len()
    }

    /// `n_k / N` at construction.
    pub fn realized_distribution(&self) -> &CardDistribution {
        &self.realized
    }

    /// Puts every drawn card back.
    pub fn reset(&mut self) {
        self.counts.copy_from_slice(&self.initial);
        self.remaining = self.size();
    }

    /// Removes one card uniformly at random among those left and returns its
    /// value in `1..=L`. Consumes exactly one variate.
    pub fn draw(&mut self, rng: &mut impl UniformSource) -> Result<usize> {
        if self.remaining == 0 {
            return Err(Error::DeckExhausted);
        }
        let u = rng.uniform();
        let slot = ((u * self.remaining as f64) as u64).min(self.remaining - 1);
        Ok(self.take_slot(slot))
    }

    fn take_slot(&mut self, slot: u64) -> usize {
        let mut acc = 0;
        for (i, c) in self.counts.iter_mut().enumerate() {
            acc += *c;
            if slot < acc {
                *c -= 1;
                self.remaining -= 1;
                return i + 1;
            }
        }
        unreachable!("slot {slot} outside a deck of {} cards", self.remaining)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{ScriptedSource, SeededSource};

    fn dist(p: &[f64]) -> CardDistribution {
        CardDistribution::new(p.to_vec()).unwrap()
    }

    #[test]
    fn exact_multiples() {
        let deck = Deck::build(10, &dist(&[0.2, 0.5, 0.3])).unwrap();
        assert_eq!(deck.counts(), &[2, 5, 3]);
        assert_eq!(deck.remaining(), 10);
    }

    #[test]
    fn largest_remainder_rounding() {
        // quotas (1.4, 3.5, 2.1)
        let deck = Deck::build(7, &dist(&[0.2, 0.5, 0.3])).unwrap();
        assert_eq!(deck.counts(), &[1, 4, 2]);
    }

    #[test]
    fn ties_go_to_lower_index() {
        assert_eq!(largest_remainder(10, &[0.25, 0.5, 0.25]), vec![3, 5, 2]);
        assert_eq!(largest_remainder(2, &[0.25, 0.25, 0.5]), vec![1, 0, 1]);
    }

    #[test]
    fn rounding_onto_singular_composition_is_rejected() {
        // quotas (1.2, 1.8, 1.0) round to (1, 2, 1), whose mean is exactly 2
        let err = Deck::build(4, &dist(&[0.3, 0.45, 0.25])).unwrap_err();
        assert!(matches!(
            err,
            Error::RealizedDistributionInvalid { cards: 4, .. }
        ));
        // quotas (2.88, 3.24, 2.88) round to the uniform deck (3, 3, 3)
        let p1 = 0.64 / (0.01f64.exp() + 1.0);
        let err = Deck::build(9, &dist(&[p1, 0.36, 0.64 - p1])).unwrap_err();
        assert!(matches!(
            err,
            Error::RealizedDistributionInvalid { cards: 9, .. }
        ));
    }

    #[test]
    fn realized_distribution_uses_counts() {
        let deck = Deck::build(7, &dist(&[0.2, 0.5, 0.3])).unwrap();
        let r = deck.realized_distribution();
        assert_eq!(r.proportions(), &[1.0 / 7.0, 4.0 / 7.0, 2.0 / 7.0]);
    }

    #[test]
    fn draw_until_exhausted() {
        let mut deck = Deck::from_counts(vec![1, 0, 2]).unwrap();
        let mut rng = SeededSource::new(3);
        let mut seen = vec![];
        for _ in 0..3 {
            seen.push(deck.draw(&mut rng).unwrap());
        }
        seen.sort();
        assert_eq!(seen, vec![1, 3, 3]);
        assert_eq!(deck.remaining(), 0);
        assert!(matches!(deck.draw(&mut rng), Err(Error::DeckExhausted)));
        deck.reset();
        assert_eq!(deck.counts(), &[1, 0, 2]);
    }

    #[test]
    fn draw_maps_uniform_onto_slots() {
        let mut deck = Deck::from_counts(vec![1, 2, 2]).unwrap();
        // slot floor(0.3 * 5) = 1 -> second card position, value 2
        let mut rng = ScriptedSource::new(vec![0.3]);
        assert_eq!(deck.draw(&mut rng).unwrap(), 2);
        assert_eq!(deck.counts(), &[1, 1, 2]);
        assert_eq!(rng.consumed(), 1);
    }

    #[test]
    fn empty_deck_is_rejected() {
        assert!(Deck::from_counts(vec![0, 0, 0]).is_err());
        assert!(Deck::build(1, &dist(&[0.2, 0.5, 0.3])).is_err());
    }
}
