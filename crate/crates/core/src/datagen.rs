//! Synthetic linearly separable data with a planted separator.
//!
//! Each example is built around a uniformly random unit vector `w*`:
//! `φ = y·s·w* + √(1−s²)·v` with `v` a random unit direction orthogonal to
//! `w*` and `s ∈ [γ, 1]`. Hence `‖φ‖ = 1` and `y·⟨w*, φ⟩ = s ≥ γ`.

use std::fs::File;
use std::path::{Path, PathBuf};

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::data::{LabeledExample, TrainingSet};
use crate::error::{invalid, Result};
use crate::linalg::{dot, norm, scale};
use crate::model::PerceptronModel;
use crate::online::train_online_streaming;
use crate::rng::{self, GAUSSIAN_TRANSFORM};

#[derive(Clone, Debug)]
pub struct PlantedDataset {
    pub data: TrainingSet,
    pub w_star: Vec<f64>,
    pub gamma_planted: f64,
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct GeneratorOptions {
    /// Put every example exactly on the margin (`s = γ`).
    pub pin_to_margin: bool,
}

/// Sidecar metadata written next to a generated dataset.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DatasetMetadata {
    pub n: usize,
    pub dim: usize,
    pub gamma: f64,
    pub seed: u64,
    pub pin_to_margin: bool,
    pub w_star: Vec<f64>,
    pub gaussian_transform: String,
}

fn gaussian_vec<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Vec<f64> {
    (0..dim).map(|_| rng.sample(StandardNormal)).collect()
}

fn random_unit<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Vec<f64> {
    loop {
        let v = gaussian_vec(rng, dim);
        let n = norm(&v);
        if n > 1e-12 {
            return scale(&v, 1.0 / n);
        }
    }
}

/// Random unit vector orthogonal to the unit vector `axis`.
fn random_orthogonal_unit<R: Rng + ?Sized>(rng: &mut R, axis: &[f64]) -> Vec<f64> {
    loop {
        let mut v = gaussian_vec(rng, axis.len());
        let p = dot(&v, axis);
        v.iter_mut().zip(axis).for_each(|(x, a)| *x -= p * a);
        let n = norm(&v);
        if n > 1e-9 {
            return scale(&v, 1.0 / n);
        }
    }
}

pub fn generate_margin_dataset(n: usize, dim: usize, gamma: f64, seed: u64) -> Result<PlantedDataset> {
    generate_margin_dataset_with(n, dim, gamma, seed, GeneratorOptions::default())
}

pub fn generate_margin_dataset_with(
    n: usize,
    dim: usize,
    gamma: f64,
    seed: u64,
    options: GeneratorOptions,
) -> Result<PlantedDataset> {
    if n < 2 {
        return invalid(format!("need at least 2 examples, got {n}"));
    }
    if dim < 2 {
        return invalid(format!("need dimension at least 2, got {dim}"));
    }
    if !(gamma > 0.0 && gamma < 1.0) {
        return invalid(format!("gamma {gamma} outside (0, 1)"));
    }
    let mut rng = rng::seeded(seed);
    let w_star = random_unit(&mut rng, dim);

    let mut labels: Vec<i8> = (0..n).map(|_| if rng.random::<bool>() { 1 } else { -1 }).collect();
    if labels.iter().all(|&y| y == labels[0]) {
        let flip = rng.random_range(0..n);
        labels[flip] = -labels[flip];
    }

    let mut examples = Vec::with_capacity(n);
    for y in labels {
        let v = random_orthogonal_unit(&mut rng, &w_star);
        let s = if options.pin_to_margin {
            gamma
        } else {
            rng.random_range(gamma..=1.0)
        };
        let c = (1.0 - s * s).max(0.0).sqrt();
        let ys = f64::from(y) * s;
        let mut phi: Vec<f64> = w_star.iter().zip(&v).map(|(w, o)| ys * w + c * o).collect();
        // strip the last ulps of norm drift
        let nrm = norm(&phi);
        phi.iter_mut().for_each(|x| *x /= nrm);
        examples.push(LabeledExample::new(phi, y)?);
    }

    Ok(PlantedDataset {
        data: TrainingSet::new(examples)?,
        w_star,
        gamma_planted: gamma,
        seed,
    })
}

impl PlantedDataset {
    pub fn metadata(&self, pin_to_margin: bool) -> DatasetMetadata {
        DatasetMetadata {
            n: self.data.len(),
            dim: self.data.dim(),
            gamma: self.gamma_planted,
            seed: self.seed,
            pin_to_margin,
            w_star: self.w_star.clone(),
            gaussian_transform: GAUSSIAN_TRANSFORM.to_string(),
        }
    }

    pub fn planted_model(&self) -> PerceptronModel {
        PerceptronModel::new(self.w_star.clone())
    }

    /// Writes the data to `path` (CSV, or JSON for `.json`) plus a sidecar
    /// `<path>.meta.json`. Returns the sidecar path.
    pub fn save(&self, path: &Path, pin_to_margin: bool) -> Result<PathBuf> {
        self.data.save(path)?;
        let meta_path = sidecar_path(path);
        let file = File::create(&meta_path)?;
        serde_json::to_writer_pretty(file, &self.metadata(pin_to_margin))?;
        Ok(meta_path)
    }
}

pub fn sidecar_path(path: &Path) -> PathBuf {
    let mut name = path.as_os_str().to_owned();
    name.push(".meta.json");
    PathBuf::from(name)
}

/// Number of random unit probes used by [`measure_empirical_margin`].
pub const MARGIN_PROBES: usize = 10_000;

/// Lower-bound estimate of the best achievable margin.
///
/// Takes the best of the planted separator (if supplied), the normalized
/// solution of the streaming perceptron, and [`MARGIN_PROBES`] random unit
/// directions. This is not the exact maximum margin.
pub fn measure_empirical_margin(data: &TrainingSet, planted: Option<&[f64]>) -> Result<f64> {
    let mut best = f64::NEG_INFINITY;
    let mut consider = |w: &[f64]| -> Result<()> {
        if norm(w) > 0.0 {
            best = best.max(PerceptronModel::new(w.to_vec()).margin(data)?);
        }
        Ok(())
    };
    if let Some(w) = planted {
        if w.len() != data.dim() {
            return invalid("planted separator dimension does not match data");
        }
        consider(w)?;
    }
    let report = train_online_streaming(data, None)?;
    consider(report.model.weights())?;
    let mut rng = rng::seeded(0x6d61_7267_696e);
    for _ in 0..MARGIN_PROBES {
        consider(&random_unit(&mut rng, data.dim()))?;
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn outputs_are_unit_and_respect_margin() {
        for seed in 0..20 {
            let p = generate_margin_dataset(50, 5, 0.3, seed).unwrap();
            for e in &p.data {
                assert!((norm(e.features()) - 1.0).abs() < 1e-12);
            }
            let brute = p
                .data
                .iter()
                .map(|e| e.sign() * dot(&p.w_star, e.features()))
                .fold(f64::INFINITY, f64::min);
            assert!(brute >= 0.3 - 1e-12);
            assert!(p.planted_model().margin(&p.data).unwrap() >= 0.3 - 1e-9);
            assert!((norm(&p.w_star) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn both_labels_present() {
        for seed in 0..200 {
            let p = generate_margin_dataset(2, 3, 0.5, seed).unwrap();
            let labels: Vec<i8> = p.data.iter().map(|e| e.label()).collect();
            assert!(labels.contains(&1) && labels.contains(&-1), "seed {seed}");
        }
    }

    #[test]
    fn near_unit_margin_hugs_the_axis() {
        let p = generate_margin_dataset(2, 4, 0.99, 11).unwrap();
        for e in &p.data {
            let s = e.sign() * dot(&p.w_star, e.features());
            assert!((0.99 - 1e-12..=1.0 + 1e-12).contains(&s));
            let residual: Vec<f64> = e
                .features()
                .iter()
                .zip(&p.w_star)
                .map(|(x, w)| x - e.sign() * s * w)
                .collect();
            assert!(norm(&residual) <= (1.0 - 0.99f64 * 0.99).sqrt() + 1e-12);
        }
    }

    #[test]
    fn pinned_examples_sit_on_the_margin() {
        let p = generate_margin_dataset_with(30, 3, 0.2, 5, GeneratorOptions { pin_to_margin: true })
            .unwrap();
        for e in &p.data {
            assert!((e.sign() * dot(&p.w_star, e.features()) - 0.2).abs() < 1e-12);
        }
    }

    #[test]
    fn reproducible_from_seed() {
        let a = generate_margin_dataset(64, 6, 0.1, 99).unwrap();
        let b = generate_margin_dataset(64, 6, 0.1, 99).unwrap();
        assert_eq!(a.data, b.data);
        assert_eq!(a.w_star, b.w_star);
        let c = generate_margin_dataset(64, 6, 0.1, 100).unwrap();
        assert_ne!(a.data, c.data);
    }

    #[test]
    fn label_balance() {
        for seed in 0..100 {
            let p = generate_margin_dataset(256, 4, 0.2, seed).unwrap();
            let pos = p.data.iter().filter(|e| e.label() == 1).count() as f64 / 256.0;
            assert!((0.4..=0.6).contains(&pos), "seed {seed}: {pos}");
        }
    }

    #[test]
    fn rejects_bad_ranges() {
        assert!(generate_margin_dataset(1, 3, 0.1, 0).is_err());
        assert!(generate_margin_dataset(4, 1, 0.1, 0).is_err());
        assert!(generate_margin_dataset(4, 3, 0.0, 0).is_err());
        assert!(generate_margin_dataset(4, 3, 1.0, 0).is_err());
    }

    #[test]
    fn empirical_margin_examples() {
        let p = generate_margin_dataset(40, 3, 0.25, 3).unwrap();
        assert!(measure_empirical_margin(&p.data, Some(&p.w_star)).unwrap() >= 0.25 - 1e-9);

        let single = TrainingSet::new(vec![LabeledExample::new(vec![0.6, -0.8], -1).unwrap()]).unwrap();
        assert!((measure_empirical_margin(&single, None).unwrap() - 1.0).abs() < 1e-12);

        let contradictory = TrainingSet::new(vec![
            LabeledExample::new(vec![1.0, 0.0], 1).unwrap(),
            LabeledExample::new(vec![1.0, 0.0], -1).unwrap(),
        ])
        .unwrap();
        assert!(measure_empirical_margin(&contradictory, None).unwrap() <= 0.0);
    }

    #[test]
    fn sidecar_written() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("d.csv");
        let p = generate_margin_dataset(8, 3, 0.2, 1).unwrap();
        let meta = p.save(&path, false).unwrap();
        assert_eq!(meta, dir.path().join("d.csv.meta.json"));
        let m: DatasetMetadata = serde_json::from_reader(File::open(meta).unwrap()).unwrap();
        assert_eq!(m.w_star, p.w_star);
        assert_eq!(TrainingSet::load(&path).unwrap(), p.data);
    }
}
