//! Perceptron weights, the misclassification predicate and the additive
//! update rule.

use serde::{Deserialize, Serialize};

use crate::data::{LabeledExample, TrainingSet};
use crate::error::{invalid, Result};
use crate::linalg::{dot, norm};

/// Linear separator through the origin. No bias term: append a constant
/// feature (and renormalize) to emulate one.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PerceptronModel {
    weights: Vec<f64>,
}

impl PerceptronModel {
    pub fn new(weights: Vec<f64>) -> Self {
        Self { weights }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            weights: vec![0.0; dim],
        }
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn is_zero(&self) -> bool {
        self.weights.iter().all(|&w| w == 0.0)
    }

    fn check_dim(&self, example: &LabeledExample) -> Result<()> {
        if self.dim() != example.dim() {
            return invalid(format!(
                "model dimension {} does not match example dimension {}",
                self.dim(),
                example.dim()
            ));
        }
        Ok(())
    }

    /// Signed functional score `y·⟨w, φ⟩`.
    pub fn score(&self, example: &LabeledExample) -> Result<f64> {
        self.check_dim(example)?;
        Ok(example.sign() * dot(&self.weights, example.features()))
    }

    /// True iff `y·⟨w, φ⟩ ≤ 0`. A zero score is a mistake.
    pub fn misclassifies(&self, example: &LabeledExample) -> Result<bool> {
        Ok(self.score(example)? <= 0.0)
    }

    /// Returns `w + y·φ`, leaving `self` untouched.
    pub fn updated(&self, example: &LabeledExample) -> Result<PerceptronModel> {
        self.check_dim(example)?;
        let y = example.sign();
        let weights = self
            .weights
            .iter()
            .zip(example.features())
            .map(|(w, x)| w + y * x)
            .collect();
        Ok(PerceptronModel { weights })
    }

    /// Normalized margin `min_i y_i·⟨w, φ_i⟩ / ‖w‖`. Nonpositive when `w`
    /// does not separate the data.
    pub fn margin(&self, data: &TrainingSet) -> Result<f64> {
        if self.dim() != data.dim() {
            return invalid(format!(
                "model dimension {} does not match data dimension {}",
                self.dim(),
                data.dim()
            ));
        }
        let n = norm(&self.weights);
        if n == 0.0 {
            return invalid("margin is undefined for the zero weight vector");
        }
        let min = data
            .iter()
            .map(|e| e.sign() * dot(&self.weights, e.features()))
            .fold(f64::INFINITY, f64::min);
        Ok(min / n)
    }

    /// Indices of every example this model misclassifies.
    pub fn mistakes(&self, data: &TrainingSet) -> Result<Vec<usize>> {
        if self.dim() != data.dim() {
            return invalid("model and data dimensions differ");
        }
        Ok(data
            .iter()
            .enumerate()
            .filter(|(_, e)| e.sign() * dot(&self.weights, e.features()) <= 0.0)
            .map(|(i, _)| i)
            .collect())
    }

    /// True iff every example is strictly correctly classified.
    pub fn separates(&self, data: &TrainingSet) -> Result<bool> {
        Ok(self.mistakes(data)?.is_empty())
    }
}

pub fn misclassifies(model: &PerceptronModel, example: &LabeledExample) -> Result<bool> {
    model.misclassifies(example)
}

pub fn perceptron_update(model: &PerceptronModel, example: &LabeledExample) -> Result<PerceptronModel> {
    model.updated(example)
}

pub fn margin(data: &TrainingSet, model: &PerceptronModel) -> Result<f64> {
    model.margin(data)
}
