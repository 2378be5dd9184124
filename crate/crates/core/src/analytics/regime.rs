use std::fmt;

use serde::{Deserialize, Serialize};

use super::{
    check_population_size, check_proportion, min_variance_at_epsilon, DesignAux, PrivacyBudget,
};
use crate::error::{Error, Result};
use crate::mechanisms::MechanismKind;

/// Relative gap below which two variances count as tied.
const TIE_RELATIVE: f64 = 1e-12;

/// Interval of `pi_A` inside which the deck design loses to Christofides with
/// replacement: `1/2 -+ 1/(2 sqrt N)`.
pub fn ic_mc_crossover(n: u64) -> Result<(f64, f64)> {
    check_population_size(n)?;
    let half_width = 0.5 / (n as f64).sqrt();
    Ok((0.5 - half_width, 0.5 + half_width))
}

/// `(pi_A1, pi_A2)`: outside this interval the deck design beats Warner and
/// Simmons at matched budget.
pub fn regime_thresholds(n: u64, eps: PrivacyBudget, p2: f64) -> Result<(f64, f64)> {
    check_population_size(n)?;
    DesignAux::with_p2(p2).check_p2()?;
    let nf = n as f64;
    // e^eps + e^-eps - 2 = 4 sinh^2(eps / 2)
    let s = (eps.epsilon() / 2.0).sinh();
    let d = 4.0 * s * s;
    let radicand = 1.0 - (nf - 1.0) / nf * (1.0 - p2) / (1.0 + p2 * d / 4.0);
    let half = 0.5 * radicand.max(0.0).sqrt();
    Ok((0.5 - half, 0.5 + half))
}

/// `4 N pi_A (1 - pi_A) / (N - 1)`: deck-design variance over
/// with-replacement Christofides variance for the same card distribution.
pub fn variance_ratio_ic_mc(n: u64, pi_a: f64) -> Result<f64> {
    check_population_size(n)?;
    check_proportion(pi_a)?;
    let n = n as f64;
    Ok(4.0 * n * pi_a * (1.0 - pi_a) / (n - 1.0))
}

/// The three families compared at a matched budget. Warner and Simmons
/// share their optimum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    #[serde(rename = "IC")]
    ImprovedChristofides,
    #[serde(rename = "MW/MS")]
    WarnerSimmons,
    #[serde(rename = "MC")]
    Christofides,
}

impl Family {
    pub fn label(&self) -> &'static str {
        match self {
            Family::ImprovedChristofides => "IC",
            Family::WarnerSimmons => "MW/MS",
            Family::Christofides => "MC",
        }
    }

    fn kind(&self) -> MechanismKind {
        match self {
            Family::ImprovedChristofides => MechanismKind::ImprovedChristofides,
            Family::WarnerSimmons => MechanismKind::Warner,
            Family::Christofides => MechanismKind::Christofides,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// The three strict orderings that occur away from boundaries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    /// `IC < MW/MS < MC`: `pi_A` outside `[pi_A1, pi_A2]`.
    DeckBest,
    /// `MW/MS < IC < MC`: between `pi_A1` and the crossover interval.
    WarnerBestDeckSecond,
    /// `MW/MS < MC < IC`: inside the crossover interval.
    DeckWorst,
}

impl Regime {
    pub fn ordering(&self) -> [Family; 3] {
        use Family::*;
        match self {
            Regime::DeckBest => [ImprovedChristofides, WarnerSimmons, Christofides],
            Regime::WarnerBestDeckSecond => [WarnerSimmons, ImprovedChristofides, Christofides],
            Regime::DeckWorst => [WarnerSimmons, Christofides, ImprovedChristofides],
        }
    }
}

/// Variances of the three families at matched budget, ranked.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegimeReport {
    pub pi_a: f64,
    pub pi_a1: f64,
    pub pi_a2: f64,
    pub icmc_lo: f64,
    pub icmc_hi: f64,
    /// `(family, variance)` for IC, MW/MS and MC, in that order.
    pub variances: Vec<(Family, f64)>,
    /// Families from smallest to largest variance; tied families share a
    /// group.
    pub ordering: Vec<Vec<Family>>,
}

impl RegimeReport {
    /// The regime implied by where `pi_a` falls relative to the thresholds,
    /// or `None` exactly on a boundary.
    pub fn regime_from_intervals(&self) -> Option<Regime> {
        let p = self.pi_a;
        let on = |b: f64| p == b;
        if on(self.pi_a1) || on(self.pi_a2) || on(self.icmc_lo) || on(self.icmc_hi) {
            return None;
        }
        if p < self.pi_a1 || p > self.pi_a2 {
            Some(Regime::DeckBest)
        } else if p > self.icmc_lo && p < self.icmc_hi {
            Some(Regime::DeckWorst)
        } else if self.pi_a1 < self.icmc_lo {
            Some(Regime::WarnerBestDeckSecond)
        } else {
            None
        }
    }

    /// The regime read off the direct variance ordering, if strict.
    pub fn regime(&self) -> Option<Regime> {
        if self.ordering.len() != 3 {
            return None;
        }
        let flat: Vec<Family> = self.ordering.iter().map(|g| g[0]).collect();
        [
            Regime::DeckBest,
            Regime::WarnerBestDeckSecond,
            Regime::DeckWorst,
        ]
        .into_iter()
        .find(|r| r.ordering().as_slice() == flat.as_slice())
    }

    /// e.g. `IC < MW/MS < MC` or `MW/MS = MC < IC`.
    pub fn ordering_label(&self) -> String {
        self.ordering
            .iter()
            .map(|g| g.iter().map(Family::label).collect::<Vec<_>>().join(" = "))
            .collect::<Vec<_>>()
            .join(" < ")
    }
}

/// Ranks IC, MW/MS and MC at budget `eps` by evaluating their minimum
/// variances directly; thresholds are attached for reference.
pub fn classify_regime(pi_a: f64, n: u64, eps: PrivacyBudget, p2: f64) -> Result<RegimeReport> {
    if !(pi_a > 0.0 && pi_a < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "pi_A must lie in (0, 1), got {pi_a}"
        )));
    }
    let (pi_a1, pi_a2) = regime_thresholds(n, eps, p2)?;
    let (icmc_lo, icmc_hi) = ic_mc_crossover(n)?;
    let families = [
        Family::ImprovedChristofides,
        Family::WarnerSimmons,
        Family::Christofides,
    ];
    let mut variances = Vec::with_capacity(3);
    for f in families {
        variances.push((f, min_variance_at_epsilon(f.kind(), eps, n, pi_a, p2)?));
    }
    let mut sorted = variances.clone();
    sorted.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
    let mut ordering: Vec<Vec<Family>> = Vec::new();
    let mut last: Option<f64> = None;
    for (f, v) in sorted {
        match last {
            Some(prev) if (v - prev).abs() <= TIE_RELATIVE * v.abs().max(prev.abs()) => {
                ordering.last_mut().unwrap().push(f);
            }
            _ => ordering.push(vec![f]),
        }
        last = Some(v);
    }
    for group in &mut ordering {
        group.sort();
    }
    Ok(RegimeReport {
        pi_a,
        pi_a1,
        pi_a2,
        icmc_lo,
        icmc_hi,
        variances,
        ordering,
    })
}
