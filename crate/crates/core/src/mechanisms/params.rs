use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{CardDistribution, Deck};
use crate::error::{Error, Result};

/// The surveyed population: one sensitive bit per respondent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Population {
    bits: Vec<bool>,
    members: usize,
}

impl Population {
    pub fn new(bits: Vec<bool>) -> Result<Self> {
        if bits.len() < 2 {
            return Err(Error::InvalidParameter(format!(
                "population needs at least 2 respondents, got {}",
                bits.len()
            )));
        }
        let members = bits.iter().filter(|b| **b).count();
        Ok(Self { bits, members })
    }

    /// Population of `n` respondents of which exactly `n * pi_a` are in the
    /// sensitive group. `n * pi_a` must be an integer.
    pub fn from_proportion(n: usize, pi_a: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&pi_a) {
            return Err(Error::InvalidParameter(format!(
                "pi_A must lie in [0, 1], got {pi_a}"
            )));
        }
        let target = n as f64 * pi_a;
        let members = target.round();
        if (target - members).abs() > 1e-9 * n.max(1) as f64 {
            return Err(Error::InvalidParameter(format!(
                "N * pi_A = {target} is not an integer"
            )));
        }
        let members = members as usize;
        let mut bits = vec![false; n];
        bits[..members].fill(true);
        Self::new(bits)
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    /// Number of respondents in the sensitive group.
    pub fn members(&self) -> usize {
        self.members
    }

    /// `pi_A = (sum x_i) / N`.
    pub fn true_proportion(&self) -> f64 {
        self.members as f64 / self.bits.len() as f64
    }
}

/// Warner design: answer the direct statement with probability `p`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "WarnerRaw", into = "WarnerRaw")]
pub struct WarnerParams {
    p: f64,
}

impl WarnerParams {
    /// `p` must lie strictly inside `(0, 1/2)`.
    pub fn new(p: f64) -> Result<Self> {
        if !(p > 0.0 && p < 0.5) {
            return Err(Error::InvalidParameter(format!(
                "Warner p must lie in (0, 1/2), got {p}"
            )));
        }
        Ok(Self { p })
    }

    pub fn p(&self) -> f64 {
        self.p
    }
}

#[derive(Serialize, Deserialize)]
struct WarnerRaw {
    p: f64,
}

impl TryFrom<WarnerRaw> for WarnerParams {
    type Error = Error;
    fn try_from(raw: WarnerRaw) -> Result<Self> {
        Self::new(raw.p)
    }
}

impl From<WarnerParams> for WarnerRaw {
    fn from(w: WarnerParams) -> Self {
        Self { p: w.p }
    }
}

/// Unrelated-question design: answer the sensitive statement with probability
/// `p`, otherwise an innocuous statement that is true with probability `pi_b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SimmonsRaw", into = "SimmonsRaw")]
pub struct SimmonsParams {
    p: f64,
    pi_b: f64,
}

impl SimmonsParams {
    pub fn new(p: f64, pi_b: f64) -> Result<Self> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "Simmons p must lie in (0, 1), got {p}"
            )));
        }
        if !(pi_b > 0.0 && pi_b < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "Simmons pi_B must lie in (0, 1), got {pi_b}"
            )));
        }
        Ok(Self { p, pi_b })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn pi_b(&self) -> f64 {
        self.pi_b
    }
}

#[derive(Serialize, Deserialize)]
struct SimmonsRaw {
    p: f64,
    pi_b: f64,
}

impl TryFrom<SimmonsRaw> for SimmonsParams {
    type Error = Error;
    fn try_from(raw: SimmonsRaw) -> Result<Self> {
        Self::new(raw.p, raw.pi_b)
    }
}

impl From<SimmonsParams> for SimmonsRaw {
    fn from(s: SimmonsParams) -> Self {
        Self {
            p: s.p,
            pi_b: s.pi_b,
        }
    }
}

/// Which of the four designs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MechanismKind {
    Warner,
    Simmons,
    Christofides,
    ImprovedChristofides,
}

impl MechanismKind {
    pub const ALL: [MechanismKind; 4] = [
        MechanismKind::Warner,
        MechanismKind::Simmons,
        MechanismKind::Christofides,
        MechanismKind::ImprovedChristofides,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            MechanismKind::Warner => "warner",
            MechanismKind::Simmons => "simmons",
            MechanismKind::Christofides => "christofides",
            MechanismKind::ImprovedChristofides => "improved-christofides",
        }
    }

    pub fn is_card_based(&self) -> bool {
        matches!(
            self,
            MechanismKind::Christofides | MechanismKind::ImprovedChristofides
        )
    }
}

impl fmt::Display for MechanismKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MechanismKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "warner" | "mw" => Ok(MechanismKind::Warner),
            "simmons" | "ms" => Ok(MechanismKind::Simmons),
            "christofides" | "mc" => Ok(MechanismKind::Christofides),
            "improved-christofides" | "improved_christofides" | "ic" => {
                Ok(MechanismKind::ImprovedChristofides)
            }
            other => Err(Error::InvalidParameter(format!(
                "unknown mechanism `{other}`"
            ))),
        }
    }
}

/// A fully parameterized design.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mechanism", rename_all = "kebab-case")]
pub enum MechanismSpec {
    Warner(WarnerParams),
    Simmons(SimmonsParams),
    Christofides { distribution: CardDistribution },
    ImprovedChristofides { distribution: CardDistribution },
}

impl MechanismSpec {
    pub fn kind(&self) -> MechanismKind {
        match self {
            MechanismSpec::Warner(_) => MechanismKind::Warner,
            MechanismSpec::Simmons(_) => MechanismKind::Simmons,
            MechanismSpec::Christofides { .. } => MechanismKind::Christofides,
            MechanismSpec::ImprovedChristofides { .. } => MechanismKind::ImprovedChristofides,
        }
    }

    pub fn distribution(&self) -> Option<&CardDistribution> {
        match self {
            MechanismSpec::Christofides { distribution }
            | MechanismSpec::ImprovedChristofides { distribution } => Some(distribution),
            _ => None,
        }
    }

    /// The design actually run on a census of `n` respondents. For the deck
    /// design this is the distribution realized by an `n`-card deck; the
    /// other designs are returned unchanged.
    pub fn realize(&self, n: u64) -> Result<MechanismSpec> {
        match self {
            MechanismSpec::ImprovedChristofides { distribution } => {
                let deck = Deck::build(n, distribution)?;
                Ok(MechanismSpec::ImprovedChristofides {
                    distribution: deck.realized_distribution().clone(),
                })
            }
            other => Ok(other.clone()),
        }
    }
}
