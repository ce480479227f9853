//! Independent estimate of how often a Gaussian direction lands in the
//! version space of planted data, using its own sampler and membership test.

use qperceptron::datagen::generate_margin_dataset;
use qperceptron::vspace::version_space_hit_rate;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn box_muller(rng: &mut ChaCha8Rng) -> f64 {
    let u1: f64 = 1.0 - rng.random::<f64>();
    let u2: f64 = rng.random::<f64>();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

fn independent_hit_rate(phi: &[Vec<f64>], y: &[f64], draws: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = phi[0].len();
    let mut hits = 0;
    for _ in 0..draws {
        let w: Vec<f64> = (0..dim).map(|_| box_muller(&mut rng)).collect();
        let inside = phi.iter().zip(y).all(|(p, &l)| l * p.iter().zip(&w).map(|(a, b)| a * b).sum::<f64>() > 0.0);
        hits += usize::from(inside);
    }
    hits as f64 / draws as f64
}

#[test]
fn planted_high_dimensional_sets_are_almost_never_hit() {
    let draws = 200_000;
    for (i, g) in [0.01, 0.02, 0.04, 0.08].into_iter().enumerate() {
        let p = generate_margin_dataset(128, 10, g, 70 + i as u64).unwrap();
        let phi: Vec<Vec<f64>> = p.data.iter().map(|e| e.features().to_vec()).collect();
        let y: Vec<f64> = p.data.iter().map(|e| e.sign()).collect();
        let ours = independent_hit_rate(&phi, &y, draws, 1);
        let lib = version_space_hit_rate(&p.data, draws, 2).unwrap();
        // far below the γ/π a margin wedge would give
        assert!(ours < 1e-4 && lib < 1e-4, "gamma={g}: independent {ours}, library {lib}");
    }
}

#[test]
fn samplers_agree_on_low_dimensional_sets() {
    let draws = 200_000;
    for seed in 0..4 {
        let p = generate_margin_dataset(4, 3, 0.1, seed).unwrap();
        let phi: Vec<Vec<f64>> = p.data.iter().map(|e| e.features().to_vec()).collect();
        let y: Vec<f64> = p.data.iter().map(|e| e.sign()).collect();
        let a = independent_hit_rate(&phi, &y, draws, 10 + seed);
        let b = version_space_hit_rate(&p.data, draws, 20 + seed).unwrap();
        let sd = (a.max(b) * (1.0 - a.min(b)) / draws as f64).sqrt();
        assert!(a > 0.0 && (a - b).abs() < 5.0 * sd * 2f64.sqrt(), "seed {seed}: {a} vs {b}");
    }
}
