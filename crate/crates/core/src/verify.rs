//! Built-in property suites run by the `verify` subcommand.

use serde::Serialize;

use crate::datagen::generate_margin_dataset;
use crate::error::Result;
use crate::grover::{
    deterministic_boost, grover_angle, mean_success_probability, statevector_reference, success_probability,
    GroverAngle, GroverInstance,
};
use crate::online::{train_online_classical, train_online_quantum, train_online_streaming, OnlineTrainConfig};

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// Marked mass of the dense simulation against `sin²((2m+1)θ)` for every
/// `N ∈ 2..=max_n`, `k ∈ 0..=N`, `m ∈ 0..=max_m`.
pub fn grover_exactness(max_n: usize, max_m: u64) -> Result<CheckResult> {
    let mut worst = 0.0f64;
    for n in 2..=max_n {
        for k in 0..=n {
            // spread marked items across the index range
            let inst = GroverInstance::from_predicate(n, |i| i * k / n != (i + 1) * k / n)?;
            debug_assert_eq!(inst.num_marked(), k);
            let theta = grover_angle(k, n)?;
            for m in 0..=max_m {
                let p = statevector_reference(&inst, m)?;
                let mass: f64 = p.iter().zip(inst.mask()).filter(|(_, &b)| b).map(|(p, _)| p).sum();
                worst = worst.max((mass - success_probability(theta, m)).abs());
            }
        }
    }
    Ok(CheckResult {
        name: "grover-exactness",
        passed: worst <= 1e-10,
        detail: format!("N<={max_n}, m<={max_m}: max deviation {worst:.3e}"),
    })
}

/// Averaged success probability on `θ ∈ {0.01, …, 1.5}` with `M = ⌈1/sin 2θ⌉`:
/// at least 1/4 and equal to the direct average.
pub fn averaged_probability_bound() -> Result<CheckResult> {
    let mut min_mean = f64::INFINITY;
    let mut worst = 0.0f64;
    for i in 1..=150 {
        let theta = GroverAngle::new(f64::from(i) * 0.01)?;
        let big_m = (1.0 / (2.0 * theta.radians()).sin()).ceil() as u64;
        let closed = mean_success_probability(theta, big_m)?;
        let direct = (0..big_m).map(|j| success_probability(theta, j)).sum::<f64>() / big_m as f64;
        min_mean = min_mean.min(closed);
        worst = worst.max((closed - direct).abs());
    }
    Ok(CheckResult {
        name: "averaged-probability-bound",
        passed: min_mean >= 0.25 && worst <= 1e-10,
        detail: format!("min mean {min_mean:.6}, max closed-vs-direct {worst:.3e}"),
    })
}

pub fn worked_examples() -> Result<CheckResult> {
    let quarter = success_probability(grover_angle(1, 4)?, 1);
    let half = grover_angle(1, 2)?;
    let half_worst = (0..=20)
        .map(|j| (success_probability(half, j) - 0.5).abs())
        .fold(0.0, f64::max);
    let (j, q) = deterministic_boost(0.5)?;
    let passed = quarter == 1.0 && half_worst <= 1e-12 && j == 1 && (q - 0.5).abs() <= 1e-15;
    Ok(CheckResult {
        name: "worked-examples",
        passed,
        detail: format!("p(1/4, j=1)={quarter}, max |p(1/2, j)-1/2|={half_worst:.1e}, boost(0.5)=({j}, {q})"),
    })
}

/// Online trainers on planted data (N=256, D=8, γ=0.2): at most 25 updates,
/// separating whenever converged.
pub fn mistake_bounds(datasets: u64) -> Result<CheckResult> {
    let mut max_updates = 0;
    let mut bad_converged = 0;
    for seed in 0..datasets {
        let p = generate_margin_dataset(256, 8, 0.2, seed)?;
        let cfg = OnlineTrainConfig::new(0.1, 0.2, seed);
        for r in [
            train_online_quantum(&p.data, &cfg)?,
            train_online_classical(&p.data, &cfg)?,
            train_online_streaming(&p.data, Some(0.2))?,
        ] {
            max_updates = max_updates.max(r.updates_made);
            if r.converged && !r.model.separates(&p.data)? {
                bad_converged += 1;
            }
        }
    }
    Ok(CheckResult {
        name: "mistake-bounds",
        passed: max_updates <= 25 && bad_converged == 0,
        detail: format!("{datasets} datasets: max updates {max_updates}, non-separating converged runs {bad_converged}"),
    })
}

pub fn run_all() -> Result<Vec<CheckResult>> {
    Ok(vec![
        grover_exactness(64, 16)?,
        averaged_probability_bound()?,
        worked_examples()?,
        mistake_bounds(20)?,
    ])
}
