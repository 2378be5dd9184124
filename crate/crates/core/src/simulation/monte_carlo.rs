use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytics::{
    epsilon_of, estimate_from_mean, params_from_epsilon, variance_theoretical, DesignAux,
    PrivacyBudget,
};
use crate::error::{Error, Result};
use crate::mechanisms::{MechanismKind, MechanismSpec, Population, Surveyor};
use crate::rng::SeededSource;

/// A grid of designs and the census they are run on.
///
/// Cells are `epsilons x kinds`. Card designs are always realized as an
/// `N`-card deck, so their budget is the one the deck actually achieves.
/// When the grid contains a card design, every mechanism at the same grid
/// point runs at that realized budget so rows of one grid point are
/// compared at equal privacy; otherwise the nominal budget is used.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub kinds: Vec<MechanismKind>,
    pub epsilons: Vec<f64>,
    pub n: usize,
    pub pi_a: f64,
    pub aux: DesignAux,
    /// Replications per cell; 0 means analytic values only.
    pub replications: usize,
    pub seed: u64,
    /// Explicit population overriding `(n, pi_a)`, e.g. from a dataset.
    #[serde(skip)]
    pub population: Option<Population>,
}

impl SimConfig {
    pub fn new(kinds: Vec<MechanismKind>, epsilons: Vec<f64>, n: usize, pi_a: f64) -> Self {
        Self {
            kinds,
            epsilons,
            n,
            pi_a,
            aux: DesignAux::default(),
            replications: 0,
            seed: 0,
            population: None,
        }
    }

    pub fn with_population(mut self, pop: Population) -> Self {
        self.n = pop.len();
        self.pi_a = pop.true_proportion();
        self.population = Some(pop);
        self
    }

    fn census(&self) -> Result<Population> {
        match &self.population {
            Some(p) => Ok(p.clone()),
            None => Population::from_proportion(self.n, self.pi_a),
        }
    }
}

/// One planned cell: the concrete design run at a grid point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellDesign {
    pub kind: MechanismKind,
    pub target_epsilon: f64,
    pub epsilon: f64,
    /// Middle-card proportion of the realized deck at this grid point.
    pub p2: f64,
    pub spec: MechanismSpec,
}

/// One row of a report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub mechanism: MechanismKind,
    pub epsilon: f64,
    pub var_theoretical: f64,
    pub var_empirical: Option<f64>,
    pub bias: Option<f64>,
    #[serde(rename = "R")]
    pub replications: usize,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "pi_A")]
    pub pi_a: f64,
    pub p2: f64,
}

impl ReportRow {
    /// Empirical mean of the estimates, when simulated.
    pub fn empirical_mean(&self) -> Option<f64> {
        self.bias.map(|b| self.pi_a + b)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SimulationReport {
    pub rows: Vec<ReportRow>,
}

impl SimulationReport {
    pub fn find(&self, kind: MechanismKind, target_index: usize) -> Option<&ReportRow> {
        self.rows
            .iter()
            .filter(|r| r.mechanism == kind)
            .nth(target_index)
    }
}

/// Resolves every `(epsilon, kind)` cell into a concrete design, in cell
/// order (epsilon-major).
pub fn plan_cells(config: &SimConfig) -> Result<Vec<CellDesign>> {
    if config.n < 2 {
        return Err(Error::InvalidParameter(format!(
            "N must be at least 2, got {}",
            config.n
        )));
    }
    let n = config.n as u64;
    let matched = config.kinds.iter().any(MechanismKind::is_card_based);
    let mut cells = Vec::with_capacity(config.kinds.len() * config.epsilons.len());
    for &target in &config.epsilons {
        let budget = PrivacyBudget::new(target)?;
        let (epsilon, p2, card) = if matched {
            let nominal =
                params_from_epsilon(MechanismKind::ImprovedChristofides, budget, &config.aux)?;
            let realized = nominal.realize(n).map_err(|e| {
                Error::InvalidParameter(format!(
                    "eps = {target}, p2 = {} cannot be realized with {n} cards: {e}",
                    config.aux.p2
                ))
            })?;
            let eps_r = epsilon_of(&realized).map_err(|e| {
                Error::InvalidParameter(format!(
                    "eps = {target}: the {n}-card deck has no finite budget: {e}"
                ))
            })?;
            let dist = realized.distribution().cloned();
            let p2 = dist
                .as_ref()
                .map(|d| d.proportion(2))
                .unwrap_or(config.aux.p2);
            (eps_r.epsilon(), p2, dist)
        } else {
            (target, config.aux.p2, None)
        };
        let budget = PrivacyBudget::new(epsilon)?;
        for &kind in &config.kinds {
            let spec = match (kind, &card) {
                (MechanismKind::Christofides, Some(d)) => MechanismSpec::Christofides {
                    distribution: d.clone(),
                },
                (MechanismKind::ImprovedChristofides, Some(d)) => {
                    MechanismSpec::ImprovedChristofides {
                        distribution: d.clone(),
                    }
                }
                _ => params_from_epsilon(kind, budget, &config.aux)?,
            };
            cells.push(CellDesign {
                kind,
                target_epsilon: target,
                epsilon,
                p2,
                spec,
            });
        }
    }
    Ok(cells)
}

/// `replications` independent estimates of `pi_A` for one cell. Replicate
/// `r` draws from a stream seeded by `(seed, cell, r)`, so the output does
/// not depend on how replicates are scheduled across threads.
pub fn replicate_estimates(
    spec: &MechanismSpec,
    pop: &Population,
    replications: usize,
    seed: u64,
    cell: u64,
) -> Result<Vec<f64>> {
    let template = Surveyor::new(spec, pop.len())?;
    let n = pop.len() as f64;
    (0..replications)
        .into_par_iter()
        .map_init(
            || template.clone(),
            |surveyor, r| {
                let mut rng = SeededSource::for_replicate(seed, cell, r as u64);
                let total = surveyor.total(pop, &mut rng)?;
                Ok(estimate_from_mean(spec, total as f64 / n))
            },
        )
        .collect()
}

/// Runs `config.replications` census surveys per cell and compares the
/// empirical moments of the estimator with the closed-form variance.
///
/// Empirical variance divides by `R`, so `R = 1` reports 0.
pub fn monte_carlo(config: &SimConfig) -> Result<SimulationReport> {
    if config.replications == 0 {
        return Err(Error::InvalidParameter(
            "Monte Carlo needs at least one replication".into(),
        ));
    }
    let pop = config.census()?;
    let pi = pop.true_proportion();
    let cells = plan_cells(config)?;
    let mut rows = Vec::with_capacity(cells.len());
    for (index, cell) in cells.iter().enumerate() {
        let estimates = replicate_estimates(
            &cell.spec,
            &pop,
            config.replications,
            config.seed,
            index as u64,
        )?;
        let r = estimates.len() as f64;
        let mean = estimates.iter().sum::<f64>() / r;
        let var = estimates
            .iter()
            .map(|e| (e - mean) * (e - mean))
            .sum::<f64>()
            / r;
        rows.push(ReportRow {
            mechanism: cell.kind,
            epsilon: cell.epsilon,
            var_theoretical: variance_theoretical(&cell.spec, pop.len() as u64, pi)?,
            var_empirical: Some(var),
            bias: Some(mean - pi),
            replications: config.replications,
            n: pop.len(),
            pi_a: pi,
            p2: cell.p2,
        });
    }
    Ok(SimulationReport { rows })
}

/// Variance-versus-budget table. Always reports closed-form variances; adds
/// Monte Carlo columns when `replications > 0`. With no replications no
/// population is built, so `N pi_A` need not be integral.
pub fn sweep_epsilon(config: &SimConfig) -> Result<SimulationReport> {
    if config.replications > 0 {
        return monte_carlo(config);
    }
    let pi = match &config.population {
        Some(p) => p.true_proportion(),
        None => config.pi_a,
    };
    let cells = plan_cells(config)?;
    let rows = cells
        .iter()
        .map(|cell| {
            Ok(ReportRow {
                mechanism: cell.kind,
                epsilon: cell.epsilon,
                var_theoretical: variance_theoretical(&cell.spec, config.n as u64, pi)?,
                var_empirical: None,
                bias: None,
                replications: 0,
                n: config.n,
                pi_a: pi,
                p2: cell.p2,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SimulationReport { rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(kinds: Vec<MechanismKind>, eps: Vec<f64>, n: usize, pi: f64) -> SimConfig {
        SimConfig::new(kinds, eps, n, pi)
    }

    #[test]
    fn warner_only_grid_keeps_nominal_budget() {
        let c = config(vec![MechanismKind::Warner], vec![0.25], 100, 0.1);
        let cells = plan_cells(&c).unwrap();
        assert_eq!(cells[0].epsilon, 0.25);
    }

    #[test]
    fn card_grid_uses_realized_budget() {
        let mut c = config(MechanismKind::ALL.to_vec(), vec![0.25], 100, 0.1);
        c.aux.p2 = 0.5;
        let cells = plan_cells(&c).unwrap();
        // deck (22, 50, 28)
        let eps_r = (28.0f64 / 22.0).ln();
        for cell in &cells {
            assert!((cell.epsilon - eps_r).abs() < 1e-12);
            assert_eq!(cell.p2, 0.5);
            assert!((epsilon_of(&cell.spec).unwrap().epsilon() - eps_r).abs() < 1e-12);
        }
    }

    #[test]
    fn unrealizable_grid_point_is_an_error() {
        let mut c = config(
            vec![MechanismKind::ImprovedChristofides],
            vec![0.01],
            9,
            1.0 / 9.0,
        );
        c.aux.p2 = 0.36;
        assert!(plan_cells(&c).is_err());
    }

    #[test]
    fn single_replication_has_zero_variance() {
        let mut c = config(vec![MechanismKind::Warner], vec![1.0], 10, 0.3);
        c.replications = 1;
        c.seed = 4;
        let report = monte_carlo(&c).unwrap();
        let row = &report.rows[0];
        assert_eq!(row.var_empirical, Some(0.0));
        assert!(row.bias.is_some());
    }

    #[test]
    fn zero_replications_rejected_by_monte_carlo() {
        let c = config(vec![MechanismKind::Warner], vec![1.0], 10, 0.3);
        assert!(monte_carlo(&c).is_err());
        assert_eq!(sweep_epsilon(&c).unwrap().rows.len(), 1);
    }

    #[test]
    fn analytic_sweep_accepts_fractional_census() {
        let mut c = config(
            MechanismKind::ALL.to_vec(),
            vec![0.05, 0.5],
            3_252_599,
            0.0778,
        );
        c.aux.p2 = 0.01;
        let report = sweep_epsilon(&c).unwrap();
        assert_eq!(report.rows.len(), 8);
        assert!(report.rows.iter().all(|r| r.var_empirical.is_none()));
    }

    #[test]
    fn replays_identically() {
        let mut c = config(MechanismKind::ALL.to_vec(), vec![0.5, 1.0], 20, 0.25);
        c.aux.p2 = 0.2;
        c.replications = 200;
        c.seed = 99;
        let a = monte_carlo(&c).unwrap();
        let b = monte_carlo(&c).unwrap();
        assert_eq!(a, b);
    }
}
