//! Outcome-level simulation of Grover search from a uniform superposition.
//!
//! Starting from the uniform state over `N` items, alternating the marking
//! reflection `1 − 2P` and the diffusion `2ψψ† − 1` keeps the state inside
//! `span(ψ, Pψ)` with equal amplitudes inside the marked and unmarked subsets.
//! Measurement after `m` iterations therefore yields a marked item with
//! probability `sin²((2m+1)θ)`, `θ = asin(√(k/N))`, and conditionally on that
//! event the index is uniform over its subset. [`run_grover`] samples exactly
//! that distribution in `O(1)` time; [`statevector_reference`] applies the
//! reflections literally and serves as the cross-check.

use std::f64::consts::FRAC_PI_2;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::ledger::{OracleCost, QueryLedger};
use crate::util::ceil_tol;

/// Largest item count accepted by the dense state-vector reference.
pub const MAX_STATEVECTOR_ITEMS: usize = 1 << 16;

/// Default growth factor for the exponential search schedule.
pub const DEFAULT_GROWTH: f64 = 1.5;

/// A search problem over items `0..N` with a fixed marked subset.
#[derive(Clone, Debug)]
pub struct GroverInstance {
    mask: Vec<bool>,
    marked: Vec<usize>,
    unmarked: Vec<usize>,
}

impl GroverInstance {
    pub fn from_predicate(num_items: usize, mut marked: impl FnMut(usize) -> bool) -> Result<Self> {
        if num_items == 0 {
            return invalid("a search instance needs at least one item");
        }
        Self::from_mask((0..num_items).map(&mut marked).collect())
    }

    pub fn from_mask(mask: Vec<bool>) -> Result<Self> {
        if mask.is_empty() {
            return invalid("a search instance needs at least one item");
        }
        let (marked, unmarked): (Vec<usize>, Vec<usize>) = (0..mask.len()).partition(|&i| mask[i]);
        Ok(Self {
            mask,
            marked,
            unmarked,
        })
    }

    pub fn num_items(&self) -> usize {
        self.mask.len()
    }

    pub fn num_marked(&self) -> usize {
        self.marked.len()
    }

    pub fn is_marked(&self, index: usize) -> bool {
        self.mask[index]
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    pub fn angle(&self) -> GroverAngle {
        GroverAngle::from_fraction(self.num_marked(), self.num_items())
    }
}

/// Rotation angle `θ = asin(√(k/N))`, in radians, in `[0, π/2]`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct GroverAngle(f64);

impl GroverAngle {
    fn from_fraction(k: usize, n: usize) -> Self {
        GroverAngle((k as f64 / n as f64).sqrt().asin())
    }

    /// Wraps a raw angle; it must lie in `[0, π/2]`.
    pub fn new(theta: f64) -> Result<Self> {
        if !(0.0..=FRAC_PI_2).contains(&theta) {
            return invalid(format!("angle {theta} outside [0, pi/2]"));
        }
        Ok(GroverAngle(theta))
    }

    pub fn radians(self) -> f64 {
        self.0
    }
}

pub fn grover_angle(k: usize, n: usize) -> Result<GroverAngle> {
    if n == 0 {
        return invalid("N must be positive");
    }
    if k > n {
        return invalid(format!("marked count {k} exceeds item count {n}"));
    }
    Ok(GroverAngle::from_fraction(k, n))
}

/// `sin²((2m+1)θ)`.
pub fn success_probability(theta: GroverAngle, m: u64) -> f64 {
    let s = ((2 * m + 1) as f64 * theta.0).sin();
    s * s
}

/// Average of [`success_probability`] over `m ∈ {0, …, M−1}`.
///
/// Uses the closed form `½(1 − sin(4Mθ)/(2M sin 2θ))` away from the endpoints.
/// Where `sin 2θ` vanishes numerically the closed form is `0/0`, so the sum is
/// evaluated directly.
pub fn mean_success_probability(theta: GroverAngle, big_m: u64) -> Result<f64> {
    if big_m == 0 {
        return invalid("M must be at least 1");
    }
    let t = theta.0;
    if t == 0.0 {
        return Ok(0.0);
    }
    let s2 = (2.0 * t).sin();
    if s2.abs() < 1e-9 {
        let total: f64 = (0..big_m).map(|j| success_probability(theta, j)).sum();
        return Ok(total / big_m as f64);
    }
    let m = big_m as f64;
    Ok(0.5 * (1.0 - (4.0 * m * t).sin() / (2.0 * m * s2)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeasurementOutcome {
    pub index: usize,
    pub was_marked: bool,
    pub iterations_used: u64,
}

/// Samples the measurement after `m` Grover iterations, charging `m` quantum
/// queries.
pub fn run_grover<R: Rng + ?Sized>(
    instance: &GroverInstance,
    m: u64,
    rng: &mut R,
    ledger: &mut QueryLedger,
) -> MeasurementOutcome {
    run_grover_priced(instance, m, rng, ledger, OracleCost::UNIT)
}

/// [`run_grover`] with an explicit per-iteration price.
pub fn run_grover_priced<R: Rng + ?Sized>(
    instance: &GroverInstance,
    m: u64,
    rng: &mut R,
    ledger: &mut QueryLedger,
    cost: OracleCost,
) -> MeasurementOutcome {
    ledger.charge_iterations(m, cost);
    let k = instance.num_marked();
    let n = instance.num_items();
    let hit = if k == 0 {
        false
    } else if k == n {
        true
    } else {
        rng.random::<f64>() < success_probability(instance.angle(), m)
    };
    let pool = if hit {
        &instance.marked
    } else {
        &instance.unmarked
    };
    let index = pool[rng.random_range(0..pool.len())];
    MeasurementOutcome {
        index,
        was_marked: hit,
        iterations_used: m,
    }
}

/// Applies `((2ψψ† − 1)(1 − 2P))^m` to the real state `initial` (taken as ψ)
/// and returns the squared amplitudes.
///
/// `initial` must be a unit vector; `mask` selects the marked basis states.
pub fn amplify_state(initial: &[f64], mask: &[bool], m: u64) -> Result<Vec<f64>> {
    if initial.len() != mask.len() {
        return invalid("state and mask lengths differ");
    }
    if initial.len() > MAX_STATEVECTOR_ITEMS {
        return Err(Error::Capacity(format!(
            "state vector of {} entries exceeds limit {MAX_STATEVECTOR_ITEMS}",
            initial.len()
        )));
    }
    let mut amp = initial.to_vec();
    for _ in 0..m {
        for (a, &marked) in amp.iter_mut().zip(mask) {
            if marked {
                *a = -*a;
            }
        }
        let overlap: f64 = amp.iter().zip(initial).map(|(a, p)| a * p).sum();
        for (a, p) in amp.iter_mut().zip(initial) {
            *a = 2.0 * overlap * p - *a;
        }
    }
    Ok(amp.into_iter().map(|a| a * a).collect())
}

/// Outcome distribution after `m` iterations, computed by dense reflection.
pub fn statevector_reference(instance: &GroverInstance, m: u64) -> Result<Vec<f64>> {
    let n = instance.num_items();
    if n > MAX_STATEVECTOR_ITEMS {
        return Err(Error::Capacity(format!(
            "{n} items exceeds state-vector limit {MAX_STATEVECTOR_ITEMS}"
        )));
    }
    let uniform = vec![1.0 / (n as f64).sqrt(); n];
    amplify_state(&uniform, instance.mask(), m)
}

/// Chooses an iteration count `j` and a Bernoulli acceptance probability `q`
/// so that diluting a success probability `a` to `a·q = sin²(π/(2(2j+1)))`
/// makes `j` Grover iterations succeed with certainty.
///
/// `j` is the smallest positive integer with `q ≤ 1`.
pub fn deterministic_boost(a: f64) -> Result<(u64, f64)> {
    if !(a > 0.0 && a <= 1.0) {
        return invalid(format!("success probability {a} outside (0, 1]"));
    }
    let mut j: u64 = 1;
    loop {
        let target = (std::f64::consts::PI / (2.0 * (2 * j + 1) as f64)).sin().powi(2);
        let q = target / a;
        if q <= 1.0 + 1e-12 {
            return Ok((j, q.min(1.0)));
        }
        j += 1;
    }
}

/// Number of middle-loop steps `⌈log_c(1/sin(2·asin(1/√N)))⌉`, i.e. enough
/// doublings for the schedule to pass `M₀` in the single-marked-item case.
///
/// Never less than 1. With a single item the check is deterministic and one
/// step suffices.
pub fn inner_loop_depth(num_items: usize, growth: f64) -> u32 {
    if num_items <= 1 {
        return 1;
    }
    let theta = (1.0 / (num_items as f64).sqrt()).asin();
    let m0 = 1.0 / (2.0 * theta).sin();
    (ceil_tol(m0.ln() / growth.ln()).max(1.0)) as u32
}

/// `⌈log_{3/4} δ⌉`, at least 1: rounds after which a per-round success rate of
/// at least 1/4 drives the miss probability below `δ`.
pub fn failure_rounds(delta: f64) -> Result<u32> {
    if !(delta > 0.0 && delta < 1.0) {
        return invalid(format!("failure probability {delta} outside (0, 1)"));
    }
    Ok(ceil_tol(delta.ln() / 0.75f64.ln()).max(1.0) as u32)
}

/// Largest value of `m` the schedule can draw at middle-loop step `j`.
pub fn schedule_cap(growth: f64, j: u32) -> u64 {
    growth.powi(j as i32).ceil() as u64
}

/// Randomized exponential search for a marked item when the marked count is
/// unknown.
///
/// Runs `failure_rounds` outer rounds; each round walks `j = 1..=J`
/// ([`inner_loop_depth`]), draws `m` uniformly from `{0, …, ⌈c^j⌉}`, measures
/// after `m` iterations, and classically checks the outcome with `verify`.
/// Returns the first index that passes the check.
#[allow(clippy::too_many_arguments)]
pub fn exponential_search<R, F>(
    instance: &GroverInstance,
    growth: f64,
    failure_rounds: u32,
    rng: &mut R,
    ledger: &mut QueryLedger,
    cost: OracleCost,
    mut verify: F,
) -> Result<Option<usize>>
where
    R: Rng + ?Sized,
    F: FnMut(usize) -> bool,
{
    if !(growth > 1.0 && growth < 2.0) {
        return invalid(format!("growth factor {growth} outside (1, 2)"));
    }
    let depth = inner_loop_depth(instance.num_items(), growth);
    for _ in 0..failure_rounds {
        for j in 1..=depth {
            let m = rng.random_range(0..=schedule_cap(growth, j));
            let outcome = run_grover_priced(instance, m, rng, ledger, cost);
            ledger.charge_check(cost);
            if verify(outcome.index) {
                return Ok(Some(outcome.index));
            }
        }
    }
    Ok(None)
}
