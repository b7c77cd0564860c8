//! Modified Conway–Maxwell–Poisson type binomial (MCMPB) distribution.
//!
//! The crate covers exact probabilities and moments of the law, its two
//! constructions (a finite-capacity birth–death queue and the conditional
//! law of one CMP variable given the sum of two), maximum-likelihood
//! fitting with profile selection of `n`, and goodness-of-fit comparison
//! against CMP, CMPB, beta-binomial and negative binomial models.

pub mod bernoulli;
pub mod cmp;
pub mod competitors;
pub mod data;
pub mod error;
pub mod fixtures;
pub mod gof;
pub mod inference;
pub mod mcmpb;
pub mod models;
pub mod optim;
pub mod queue;
pub mod simulation;
pub mod special;

pub use data::FrequencyData;
pub use error::{Error, Result};
pub use inference::{fit_fixed_n, fit_model, fit_profile_n, FitReport, NChoice};
pub use mcmpb::{build_table, McmpbParams, MomentSet, ProbTable};
pub use models::{ModelKind, ModelParams};
