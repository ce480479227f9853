//! Online perceptron training driven by a search for misclassified examples.
//!
//! Three trainers share one loop shape (find a mistake, update, repeat):
//! - [`train_online_quantum`] finds mistakes with Grover exponential search
//!   over example indices, costing `O(√N)` marking-oracle calls per search;
//! - [`train_online_classical`] samples `⌈N ln(1/δ)⌉` indices uniformly;
//! - [`train_online_streaming`] sweeps the whole set in order.
//!
//! Each mistake search is allowed failure probability `δ = ε·γ²`, so the union
//! bound over at most `1/γ²` searches keeps the total failure below `ε`.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::data::{LabeledExample, TrainingSet};
use crate::error::{invalid, Result};
use crate::grover::{self, exponential_search, GroverInstance, DEFAULT_GROWTH};
use crate::ledger::{OracleCost, QueryLedger};
use crate::model::PerceptronModel;
use crate::rng;
use crate::util::ceil_tol;
use crate::TrainReport;

/// Sweep cap for the streaming trainer when no margin bound is supplied.
pub const STREAMING_SWEEP_CAP: u64 = 10_000;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum InitialModel {
    #[default]
    Zero,
    /// Standard normal weights drawn from the run's seed.
    Gaussian,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OnlineTrainConfig {
    pub epsilon: f64,
    pub gamma_bound: f64,
    pub growth: f64,
    pub seed: u64,
    pub init: InitialModel,
}

impl OnlineTrainConfig {
    pub fn new(epsilon: f64, gamma_bound: f64, seed: u64) -> Self {
        Self {
            epsilon,
            gamma_bound,
            growth: DEFAULT_GROWTH,
            seed,
            init: InitialModel::Zero,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return invalid(format!("epsilon {} outside (0, 1)", self.epsilon));
        }
        if !(self.gamma_bound > 0.0 && self.gamma_bound <= 1.0) {
            return invalid(format!("gamma bound {} outside (0, 1]", self.gamma_bound));
        }
        if !(self.growth > 1.0 && self.growth < 2.0) {
            return invalid(format!("growth factor {} outside (1, 2)", self.growth));
        }
        Ok(())
    }

    /// Failure budget for a single mistake search, `ε·γ²`.
    pub fn per_search_delta(&self) -> f64 {
        self.epsilon * self.gamma_bound * self.gamma_bound
    }

    /// Mistake bound `⌈1/γ²⌉`.
    pub fn update_cap(&self) -> u64 {
        ceil_tol(1.0 / (self.gamma_bound * self.gamma_bound)) as u64
    }
}

/// One Grover-search round for an example the model gets wrong.
///
/// Each Grover iteration costs one marking-oracle query; each measured index
/// is retrieved and checked classically at one classical query.
pub fn quantum_find_misclassified<R: Rng + ?Sized>(
    model: &PerceptronModel,
    data: &TrainingSet,
    delta: f64,
    growth: f64,
    rng: &mut R,
    ledger: &mut QueryLedger,
) -> Result<Option<LabeledExample>> {
    let mistakes = model.mistakes(data)?;
    let mut mask = vec![false; data.len()];
    mistakes.iter().for_each(|&i| mask[i] = true);
    let instance = GroverInstance::from_mask(mask)?;
    let rounds = grover::failure_rounds(delta)?;
    let found = exponential_search(&instance, growth, rounds, rng, ledger, OracleCost::UNIT, |i| {
        // retrieve example i, then evaluate the predicate on it
        model.misclassifies(&data.examples()[i]).unwrap_or(false)
    })?;
    Ok(found.map(|i| data.examples()[i].clone()))
}

/// Uniform sampling with replacement: `⌈N ln(1/δ)⌉` draws, one classical query
/// each, stopping at the first mistake.
pub fn classical_find_misclassified<R: Rng + ?Sized>(
    model: &PerceptronModel,
    data: &TrainingSet,
    delta: f64,
    rng: &mut R,
    ledger: &mut QueryLedger,
) -> Result<Option<LabeledExample>> {
    if !(delta > 0.0 && delta < 1.0) {
        return invalid(format!("failure probability {delta} outside (0, 1)"));
    }
    if model.dim() != data.dim() {
        return invalid("model and data dimensions differ");
    }
    let draws = classical_sample_budget(data.len(), delta);
    for _ in 0..draws {
        let ex = &data.examples()[rng.random_range(0..data.len())];
        ledger.charge_classical(1);
        if model.misclassifies(ex)? {
            return Ok(Some(ex.clone()));
        }
    }
    Ok(None)
}

/// `⌈N ln(1/δ)⌉`.
pub fn classical_sample_budget(n: usize, delta: f64) -> u64 {
    ceil_tol(n as f64 * (1.0 / delta).ln()).max(1.0) as u64
}

fn initial_model<R: Rng + ?Sized>(dim: usize, init: InitialModel, rng: &mut R) -> PerceptronModel {
    match init {
        InitialModel::Zero => PerceptronModel::zeros(dim),
        InitialModel::Gaussian => {
            PerceptronModel::new((0..dim).map(|_| rng.sample(StandardNormal)).collect())
        }
    }
}

/// Search-then-update loop shared by the quantum and sampling trainers.
///
/// Stops when a search comes back empty (converged) or when a search still
/// finds a mistake after `update_cap` updates (not converged).
fn train_with<F>(data: &TrainingSet, config: &OnlineTrainConfig, mut find: F) -> Result<TrainReport>
where
    F: FnMut(&PerceptronModel, &mut rng::ChaCha8Rng, &mut QueryLedger) -> Result<Option<LabeledExample>>,
{
    config.validate()?;
    let mut init_rng = rng::seeded(rng::derive(config.seed, 1));
    let mut search_rng = rng::seeded(rng::derive(config.seed, 2));
    let mut model = initial_model(data.dim(), config.init, &mut init_rng);
    let mut ledger = QueryLedger::new();
    let cap = config.update_cap();
    let mut updates = 0;
    let converged = loop {
        match find(&model, &mut search_rng, &mut ledger)? {
            None => break true,
            Some(_) if updates >= cap => break false,
            Some(ex) => {
                model = model.updated(&ex)?;
                updates += 1;
            }
        }
    };
    Ok(TrainReport {
        model,
        updates_made: updates,
        converged,
        ledger,
    })
}

pub fn train_online_quantum(data: &TrainingSet, config: &OnlineTrainConfig) -> Result<TrainReport> {
    let delta = config.per_search_delta();
    train_with(data, config, |model, rng, ledger| {
        quantum_find_misclassified(model, data, delta, config.growth, rng, ledger)
    })
}

pub fn train_online_classical(data: &TrainingSet, config: &OnlineTrainConfig) -> Result<TrainReport> {
    let delta = config.per_search_delta();
    train_with(data, config, |model, rng, ledger| {
        classical_find_misclassified(model, data, delta, rng, ledger)
    })
}

/// Deterministic Rosenblatt sweeps in index order until a clean sweep.
///
/// With a margin bound the sweep count is capped at `⌈1/γ²⌉ + 1`, otherwise at
/// [`STREAMING_SWEEP_CAP`]. Every predicate evaluation costs one classical query.
pub fn train_online_streaming(data: &TrainingSet, gamma_bound: Option<f64>) -> Result<TrainReport> {
    train_online_streaming_from(data, PerceptronModel::zeros(data.dim()), gamma_bound)
}

/// [`train_online_streaming`] from an arbitrary starting model.
pub fn train_online_streaming_from(
    data: &TrainingSet,
    start: PerceptronModel,
    gamma_bound: Option<f64>,
) -> Result<TrainReport> {
    if start.dim() != data.dim() {
        return invalid("model and data dimensions differ");
    }
    let max_sweeps = match gamma_bound {
        Some(g) if g > 0.0 && g <= 1.0 => ceil_tol(1.0 / (g * g)) as u64 + 1,
        Some(g) => return invalid(format!("gamma bound {g} outside (0, 1]")),
        None => STREAMING_SWEEP_CAP,
    };
    let mut model = start;
    let mut ledger = QueryLedger::new();
    let mut updates = 0;
    let mut converged = false;
    for _ in 0..max_sweeps {
        let mut clean = true;
        for ex in data {
            ledger.charge_classical(1);
            if model.misclassifies(ex)? {
                model = model.updated(ex)?;
                updates += 1;
                clean = false;
            }
        }
        if clean {
            converged = true;
            break;
        }
    }
    Ok(TrainReport {
        model,
        updates_made: updates,
        converged,
        ledger,
    })
}
