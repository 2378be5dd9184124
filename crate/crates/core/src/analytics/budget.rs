use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mechanisms::{
    CardDistribution, MechanismKind, MechanismSpec, SimmonsParams, WarnerParams,
};

/// A local differential privacy budget `epsilon > 0`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct PrivacyBudget(f64);

impl PrivacyBudget {
    pub fn new(epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "privacy budget must be positive and finite, got {epsilon}"
            )));
        }
        Ok(Self(epsilon))
    }

    pub fn epsilon(&self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for PrivacyBudget {
    type Error = Error;
    fn try_from(value: f64) -> Result<Self> {
        Self::new(value)
    }
}

impl From<PrivacyBudget> for f64 {
    fn from(value: PrivacyBudget) -> Self {
        value.0
    }
}

impl fmt::Display for PrivacyBudget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Free design parameters not fixed by the budget.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DesignAux {
    /// Probability that the unrelated statement is true (Simmons).
    pub pi_b: f64,
    /// Proportion of the middle card value 2 (Christofides designs, `L = 3`).
    pub p2: f64,
}

impl Default for DesignAux {
    fn default() -> Self {
        Self { pi_b: 0.5, p2: 0.0 }
    }
}

impl DesignAux {
    pub fn with_p2(p2: f64) -> Self {
        Self {
            p2,
            ..Self::default()
        }
    }

    pub(crate) fn check_p2(&self) -> Result<()> {
        if !(0.0..1.0).contains(&self.p2) {
            return Err(Error::InvalidAux(format!(
                "p2 must lie in [0, 1), got {}",
                self.p2
            )));
        }
        Ok(())
    }

    fn check_pi_b(&self) -> Result<()> {
        if !(self.pi_b > 0.0 && self.pi_b < 1.0) {
            return Err(Error::InvalidAux(format!(
                "pi_B must lie in (0, 1), got {}",
                self.pi_b
            )));
        }
        Ok(())
    }
}

/// The smallest budget the design satisfies: the log of the largest ratio
/// between the probabilities of one output under the two possible inputs.
pub fn epsilon_of(spec: &MechanismSpec) -> Result<PrivacyBudget> {
    let eps = match spec {
        MechanismSpec::Warner(w) => ((1.0 - w.p()) / w.p()).ln(),
        MechanismSpec::Simmons(s) => {
            let (p, pi_b) = (s.p(), s.pi_b());
            let b = if pi_b <= 0.5 { pi_b } else { 1.0 - pi_b };
            ((p + (1.0 - p) * b) / ((1.0 - p) * b)).ln()
        }
        MechanismSpec::Christofides { distribution }
        | MechanismSpec::ImprovedChristofides { distribution } => card_epsilon(distribution)?,
    };
    PrivacyBudget::new(eps)
}

fn card_epsilon(dist: &CardDistribution) -> Result<f64> {
    let l = dist.card_values();
    let mut worst = f64::NEG_INFINITY;
    for k in 1..=l {
        let mirror = dist.proportion(l + 1 - k);
        let own = dist.proportion(k);
        if mirror == 0.0 {
            continue;
        }
        if own == 0.0 {
            return Err(Error::UnboundedBudget { value: l + 1 - k });
        }
        worst = worst.max((mirror / own).ln());
    }
    Ok(worst)
}

/// The design of kind `kind` that spends exactly `eps`. The card designs
/// use `L = 3` and the minimum-variance split `p1 = (1 - p2)/(e^eps + 1)`,
/// `p3 = e^eps (1 - p2)/(e^eps + 1)`.
pub fn params_from_epsilon(
    kind: MechanismKind,
    eps: PrivacyBudget,
    aux: &DesignAux,
) -> Result<MechanismSpec> {
    let e = eps.epsilon().exp();
    let em1 = eps.epsilon().exp_m1();
    Ok(match kind {
        MechanismKind::Warner => MechanismSpec::Warner(WarnerParams::new(1.0 / (1.0 + e))?),
        MechanismKind::Simmons => {
            aux.check_pi_b()?;
            let b = if aux.pi_b <= 0.5 {
                aux.pi_b
            } else {
                1.0 - aux.pi_b
            };
            let p = b * em1 / (1.0 + b * em1);
            MechanismSpec::Simmons(SimmonsParams::new(p, aux.pi_b)?)
        }
        MechanismKind::Christofides | MechanismKind::ImprovedChristofides => {
            aux.check_p2()?;
            let rest = 1.0 - aux.p2;
            let p1 = rest / (e + 1.0);
            let p3 = e * rest / (e + 1.0);
            let distribution = CardDistribution::new(vec![p1, aux.p2, p3])?;
            if kind == MechanismKind::Christofides {
                MechanismSpec::Christofides { distribution }
            } else {
                MechanismSpec::ImprovedChristofides { distribution }
            }
        }
    })
}
