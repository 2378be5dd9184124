//! Randomized-response mechanisms for local differential privacy.
//!
//! Four designs are supported: Warner, Simmons (unrelated question),
//! Christofides with cards drawn with replacement, and the deck variant in
//! which the `N` cards are drawn without replacement across respondents.
//! All of them survey the whole population, so the only randomness is the
//! respondents' own.
//!
//! The crate is organised in four layers:
//!
//! * [`mechanisms`]: respondent-side perturbation, decks and census runs.
//! * [`analytics`]: estimators, exact variances, privacy budgets, optimal
//!   designs at a fixed budget, regime classification and sample sizes.
//! * [`simulation`]: seeded Monte Carlo sweeps and an exact enumeration
//!   oracle used to check every variance formula.
//! * [`io`]: CSV ingestion, synthetic datasets, report serialization and
//!   run manifests.
//!
//! ```
//! use rrldp::analytics::{min_sample_size, PiAssumption, PrivacyBudget};
//! use rrldp::mechanisms::MechanismKind;
//!
//! let eps = PrivacyBudget::new(0.25).unwrap();
//! let n = min_sample_size(
//!     MechanismKind::ImprovedChristofides,
//!     eps,
//!     PiAssumption::Known(0.1),
//!     0.1,
//!     0.01,
//! )
//! .unwrap();
//! assert_eq!(n, 59);
//! ```

pub mod analytics;
pub mod error;
pub mod io;
pub mod mechanisms;
pub mod rng;
pub mod simulation;

pub use error::{Error, Result};
