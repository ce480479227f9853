//! Version-space training: sample Gaussian hyperplanes, then search the sample
//! for one that separates the data.
//!
//! The quantum trainer runs exponential Grover search over the `K` candidates,
//! with the membership oracle (one application tests a candidate against all
//! `N` examples) billed as `2N` half-space queries plus one composite query.
//! The classical trainer tests candidates one at a time by rejection sampling.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use statrs::function::erf::erf;

use crate::data::TrainingSet;
use crate::error::{invalid, Result};
use crate::grover::{self, exponential_search, GroverInstance, DEFAULT_GROWTH};
use crate::ledger::{OracleCost, QueryLedger};
use crate::linalg::dot;
use crate::model::PerceptronModel;
use crate::rng;
use crate::util::ceil_tol;
use crate::TrainReport;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VersionSpaceEnsemble {
    candidates: Vec<Vec<f64>>,
    seed: Option<u64>,
}

impl VersionSpaceEnsemble {
    /// Wraps explicit candidates (all of one dimension).
    pub fn from_candidates(candidates: Vec<Vec<f64>>) -> Result<Self> {
        let Some(first) = candidates.first() else {
            return invalid("ensemble must hold at least one candidate");
        };
        let dim = first.len();
        if dim == 0 || candidates.iter().any(|c| c.len() != dim) {
            return invalid("ensemble candidates must share a positive dimension");
        }
        Ok(Self {
            candidates,
            seed: None,
        })
    }

    pub fn candidates(&self) -> &[Vec<f64>] {
        &self.candidates
    }

    pub fn len(&self) -> usize {
        self.candidates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.candidates.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.candidates[0].len()
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VSTrainConfig {
    pub epsilon: f64,
    pub gamma_bound: f64,
    pub growth: f64,
    pub k_override: Option<usize>,
    pub seed: u64,
}

impl VSTrainConfig {
    pub fn new(epsilon: f64, gamma_bound: f64, seed: u64) -> Self {
        Self {
            epsilon,
            gamma_bound,
            growth: DEFAULT_GROWTH,
            k_override: None,
            seed,
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
        if self.k_override == Some(0) {
            return invalid("K override must be positive");
        }
        Ok(())
    }
}

/// Strict membership: `y_i·⟨w, φ_i⟩ > 0` for every example.
pub fn in_version_space(w: &[f64], data: &TrainingSet) -> Result<bool> {
    if w.len() != data.dim() {
        return invalid(format!(
            "hyperplane dimension {} does not match data dimension {}",
            w.len(),
            data.dim()
        ));
    }
    Ok(data.iter().all(|e| e.sign() * dot(w, e.features()) > 0.0))
}

/// `erf(γ/√2)`: the probability that a standard normal lands in `(−γ, γ)`,
/// used as the per-draw version-space hit rate when sizing `K`.
pub fn margin_probability(gamma: f64) -> f64 {
    erf(gamma / std::f64::consts::SQRT_2)
}

/// `⌈ln(1/δ) / erf(γ/√2)⌉`: draws needed so that, at the rate above, no
/// draw lands in the version space with probability at most `δ`.
pub fn required_k(gamma: f64, delta: f64) -> Result<usize> {
    if !(gamma > 0.0 && gamma <= 1.0) {
        return invalid(format!("gamma {gamma} outside (0, 1]"));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return invalid(format!("delta {delta} outside (0, 1)"));
    }
    Ok(ceil_tol((1.0 / delta).ln() / margin_probability(gamma)).max(1.0) as usize)
}

fn gaussian_candidate<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Vec<f64> {
    (0..dim).map(|_| rng.sample(StandardNormal)).collect()
}

/// `K` independent `N(0, I_D)` draws, reproducible from `seed`.
pub fn sample_ensemble(k: usize, dim: usize, seed: u64) -> Result<VersionSpaceEnsemble> {
    if k == 0 || dim == 0 {
        return invalid("K and D must be positive");
    }
    let mut r = rng::seeded(seed);
    let candidates = (0..k).map(|_| gaussian_candidate(&mut r, dim)).collect();
    Ok(VersionSpaceEnsemble {
        candidates,
        seed: Some(seed),
    })
}

/// Monte Carlo estimate of `P(w ∈ VS)` for `w ~ N(0, I_D)`.
pub fn version_space_hit_rate(data: &TrainingSet, draws: usize, seed: u64) -> Result<f64> {
    if draws == 0 {
        return invalid("need at least one draw");
    }
    let mut r = rng::seeded(seed);
    let mut hits = 0usize;
    for _ in 0..draws {
        if in_version_space(&gaussian_candidate(&mut r, data.dim()), data)? {
            hits += 1;
        }
    }
    Ok(hits as f64 / draws as f64)
}

/// Size of the ensemble the quantum trainer uses for `config`.
pub fn ensemble_size(config: &VSTrainConfig) -> Result<usize> {
    match config.k_override {
        Some(k) => Ok(k),
        None => required_k(config.gamma_bound, config.epsilon / 2.0),
    }
}

pub fn train_version_space_quantum(data: &TrainingSet, config: &VSTrainConfig) -> Result<TrainReport> {
    config.validate()?;
    let k = ensemble_size(config)?;
    let ensemble = sample_ensemble(k, data.dim(), rng::derive(config.seed, 1))?;
    train_version_space_quantum_with(data, &ensemble, config)
}

/// Quantum version-space search over a given ensemble.
///
/// Failure budget is split evenly: `ε/2` for the ensemble missing the version
/// space (used when sizing `K`) and `ε/2` for the search missing a member.
pub fn train_version_space_quantum_with(
    data: &TrainingSet,
    ensemble: &VersionSpaceEnsemble,
    config: &VSTrainConfig,
) -> Result<TrainReport> {
    config.validate()?;
    if ensemble.dim() != data.dim() {
        return invalid("ensemble and data dimensions differ");
    }
    let mask = ensemble
        .candidates()
        .iter()
        .map(|w| in_version_space(w, data))
        .collect::<Result<Vec<_>>>()?;
    let instance = GroverInstance::from_mask(mask)?;
    let rounds = grover::failure_rounds(config.epsilon / 2.0)?;
    let cost = OracleCost::version_space(data.len());
    let mut search_rng = rng::seeded(rng::derive(config.seed, 2));
    let mut ledger = QueryLedger::new();
    let found = exponential_search(&instance, config.growth, rounds, &mut search_rng, &mut ledger, cost, |i| {
        in_version_space(&ensemble.candidates()[i], data).unwrap_or(false)
    })?;
    Ok(finish(found.map(|i| ensemble.candidates()[i].clone()), data.dim(), ledger))
}

/// Rejection sampling: draw `N(0, I_D)` candidates one at a time and test each
/// with a full pass (`N` classical queries), giving up after
/// `K = required_k(γ, ε)` draws (or the override).
pub fn train_version_space_classical(data: &TrainingSet, config: &VSTrainConfig) -> Result<TrainReport> {
    config.validate()?;
    let k = match config.k_override {
        Some(k) => k,
        None => required_k(config.gamma_bound, config.epsilon)?,
    };
    let mut r = rng::seeded(rng::derive(config.seed, 3));
    let mut ledger = QueryLedger::new();
    for _ in 0..k {
        let w = gaussian_candidate(&mut r, data.dim());
        ledger.charge_classical(data.len() as u64);
        if in_version_space(&w, data)? {
            return Ok(finish(Some(w), data.dim(), ledger));
        }
    }
    Ok(finish(None, data.dim(), ledger))
}

fn finish(found: Option<Vec<f64>>, dim: usize, ledger: QueryLedger) -> TrainReport {
    let converged = found.is_some();
    TrainReport {
        model: found.map_or_else(|| PerceptronModel::zeros(dim), PerceptronModel::new),
        updates_made: 0,
        converged,
        ledger,
    }
}
