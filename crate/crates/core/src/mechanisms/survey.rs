use super::{
    christofides_perturb, improved_christofides_perturb, simmons_perturb, warner_perturb, Deck,
    MechanismSpec, Population,
};
use crate::error::{Error, Result};
use crate::rng::UniformSource;

/// Responses of a whole survey, in respondent order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Responses {
    /// Yes/no answers (Warner, Simmons).
    Binary(Vec<bool>),
    /// Reported card numbers in `1..=L` (Christofides designs).
    Numeric(Vec<u32>),
}

impl Responses {
    pub fn len(&self) -> usize {
        match self {
            Responses::Binary(v) => v.len(),
            Responses::Numeric(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Sum of responses, counting a yes as 1.
    pub fn total(&self) -> u64 {
        match self {
            Responses::Binary(v) => v.iter().filter(|b| **b).count() as u64,
            Responses::Numeric(v) => v.iter().map(|x| *x as u64).sum(),
        }
    }

    /// Mean response, or `None` when empty.
    pub fn mean(&self) -> Option<f64> {
        (!self.is_empty()).then(|| self.total() as f64 / self.len() as f64)
    }
}

/// Runs `spec` over every respondent of `pop`, in order.
///
/// The deck design builds a fresh deck of exactly `N` cards from the
/// distribution; estimation must then use `spec.realize(N)`.
pub fn survey_run(
    pop: &Population,
    spec: &MechanismSpec,
    rng: &mut impl UniformSource,
) -> Result<Responses> {
    let bits = pop.bits();
    Ok(match spec {
        MechanismSpec::Warner(w) => {
            Responses::Binary(bits.iter().map(|&x| warner_perturb(x, w, rng)).collect())
        }
        MechanismSpec::Simmons(s) => {
            Responses::Binary(bits.iter().map(|&x| simmons_perturb(x, s, rng)).collect())
        }
        MechanismSpec::Christofides { distribution } => Responses::Numeric(
            bits.iter()
                .map(|&x| christofides_perturb(x, distribution, rng))
                .collect(),
        ),
        MechanismSpec::ImprovedChristofides { distribution } => {
            let mut deck = Deck::build(pop.len() as u64, distribution)?;
            Responses::Numeric(survey_run_with_deck(pop, &mut deck, rng)?)
        }
    })
}

/// Runs the deck design against a caller-supplied deck, which is left
/// mutated. Fails with [`Error::DeckExhausted`] if the deck holds fewer cards
/// than respondents.
pub fn survey_run_with_deck(
    pop: &Population,
    deck: &mut Deck,
    rng: &mut impl UniformSource,
) -> Result<Vec<u32>> {
    pop.bits()
        .iter()
        .map(|&x| improved_christofides_perturb(x, deck, rng))
        .collect()
}

/// Survey runner specialized for repeated replications: keeps a deck
/// template and only accumulates the response total.
#[derive(Debug, Clone)]
pub(crate) struct Surveyor {
    spec: MechanismSpec,
    deck: Option<Deck>,
}

impl Surveyor {
    pub(crate) fn new(spec: &MechanismSpec, n: usize) -> Result<Self> {
        let deck = match spec {
            MechanismSpec::ImprovedChristofides { distribution } => {
                Some(Deck::build(n as u64, distribution)?)
            }
            _ => None,
        };
        Ok(Self {
            spec: spec.clone(),
            deck,
        })
    }

    /// Response total of one census of `pop`.
    pub(crate) fn total(&mut self, pop: &Population, rng: &mut impl UniformSource) -> Result<u64> {
        let bits = pop.bits();
        Ok(match (&self.spec, &mut self.deck) {
            (MechanismSpec::Warner(w), _) => {
                bits.iter().filter(|&&x| warner_perturb(x, w, rng)).count() as u64
            }
            (MechanismSpec::Simmons(s), _) => {
                bits.iter().filter(|&&x| simmons_perturb(x, s, rng)).count() as u64
            }
            (MechanismSpec::Christofides { distribution }, _) => bits
                .iter()
                .map(|&x| christofides_perturb(x, distribution, rng) as u64)
                .sum(),
            (MechanismSpec::ImprovedChristofides { .. }, Some(deck)) => {
                deck.reset();
                let mut total = 0u64;
                for &x in bits {
                    total += improved_christofides_perturb(x, deck, rng)? as u64;
                }
                total
            }
            (MechanismSpec::ImprovedChristofides { .. }, None) => {
                return Err(Error::DeckExhausted);
            }
        })
    }
}
