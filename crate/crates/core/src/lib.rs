//! Amplitude-level simulation of quantum perceptron training.
//!
//! Two quantum trainers are provided alongside classical baselines, all
//! instrumented with a [`QueryLedger`] so that oracle-call counts can be
//! compared directly:
//!
//! - [`online`]: Grover search for a misclassified example, wrapped in the
//!   standard perceptron update loop;
//! - [`vspace`]: Grover search over Gaussian-sampled hyperplanes for a member
//!   of the version space.
//!
//! [`grover`] holds the search simulator, [`datagen`] the planted-margin data
//! generator and [`harness`] the sweep runner and exponent fitting behind the
//! command-line tool.

pub mod data;
pub mod datagen;
pub mod error;
pub mod grover;
pub mod harness;
pub mod ledger;
pub mod linalg;
pub mod model;
pub mod online;
pub mod rng;
pub mod util;
pub mod verify;
pub mod vspace;

pub use data::{LabeledExample, TrainingSet};
pub use error::{Error, Result};
pub use grover::{GroverAngle, GroverInstance, MeasurementOutcome};
pub use ledger::{OracleCost, QueryLedger};
pub use model::PerceptronModel;

use serde::{Deserialize, Serialize};

/// Outcome of one training run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrainReport {
    pub model: PerceptronModel,
    /// Perceptron updates applied. Always 0 for the version-space trainers.
    pub updates_made: u64,
    /// True when the final search or check found nothing left to fix.
    pub converged: bool,
    pub ledger: QueryLedger,
}
