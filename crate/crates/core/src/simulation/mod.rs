//! Verification engine: seeded Monte Carlo replications of full census
//! surveys, and an exact oracle that enumerates every random outcome of a
//! small survey to obtain the estimator's true mean and variance.

mod monte_carlo;
mod oracle;

pub use monte_carlo::{
    monte_carlo, plan_cells, replicate_estimates, sweep_epsilon, CellDesign, ReportRow, SimConfig,
    SimulationReport,
};
pub use oracle::{
    exact_oracle, exact_oracle_with_cap, exact_oracle_with_replacement, ExactResult,
    DEFAULT_ORACLE_CAP,
};
