//! Respondent-side randomization for the four randomized-response designs
//! (Warner, Simmons, Christofides with replacement, Christofides with a
//! finite deck drawn without replacement) and whole-population surveys.

mod deck;
mod distribution;
mod params;
mod perturb;
mod survey;

pub use deck::{largest_remainder, Deck};
pub use distribution::CardDistribution;
pub use params::{MechanismKind, MechanismSpec, Population, SimmonsParams, WarnerParams};
pub use perturb::{
    christofides_perturb, improved_christofides_perturb, report_card, simmons_perturb,
    warner_perturb,
};
pub use survey::{survey_run, survey_run_with_deck, Responses};

pub(crate) use survey::Surveyor;
