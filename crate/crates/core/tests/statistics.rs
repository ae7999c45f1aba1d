//! Spectral statistics against random-matrix references and brute-force gap searches.

mod common;

use common::*;
use faer::Mat;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use swapcrystal::spectral::{level_spacing_ratio, pairing_gaps, pairing_parameter, quasienergies};

fn brute_ratio(mu: &[f64]) -> f64 {
    let gaps: Vec<f64> = mu.windows(2).map(|w| w[1] - w[0]).collect();
    let ratios: Vec<f64> = gaps
        .windows(2)
        .map(|g| {
            let (lo, hi) = if g[0] < g[1] { (g[0], g[1]) } else { (g[1], g[0]) };
            if hi == 0.0 {
                1.0
            } else {
                lo / hi
            }
        })
        .collect();
    ratios.iter().sum::<f64>() / ratios.len() as f64
}

fn uniform_levels(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut mu: Vec<f64> = (0..n).map(|_| rng.random_range(-std::f64::consts::PI..std::f64::consts::PI)).collect();
    mu.sort_by(f64::total_cmp);
    mu
}

#[test]
fn level_ratio_matches_direct_definition() {
    for seed in 0..5 {
        let mu = uniform_levels(200, seed);
        assert!((level_spacing_ratio(&mu).unwrap() - brute_ratio(&mu)).abs() < 1e-13);
    }
}

#[test]
fn poisson_levels_give_poisson_ratio() {
    let mut total = 0.0;
    for seed in 0..10 {
        total += level_spacing_ratio(&uniform_levels(4000, seed)).unwrap();
    }
    let r = total / 10.0;
    // 2 ln 2 - 1
    assert!((r - 0.38629).abs() < 0.005, "{r}");
}

#[test]
fn circular_orthogonal_ensemble_ratio() {
    let mut total = 0.0;
    let n = 30;
    for seed in 0..n {
        let u = haar_unitary(200, seed);
        let w: Mat<_> = u.transpose() * &u;
        total += level_spacing_ratio(&quasienergies(&w).unwrap()).unwrap();
    }
    let r = total / n as f64;
    assert!((r - 0.5269).abs() < 0.01, "{r}");
}

#[test]
fn circular_unitary_ensemble_ratio() {
    let mut total = 0.0;
    let n = 30;
    for seed in 100..100 + n {
        total += level_spacing_ratio(&quasienergies(&haar_unitary(200, seed)).unwrap()).unwrap();
    }
    let r = total / n as f64;
    assert!((r - 0.5996).abs() < 0.01, "{r}");
}

#[test]
fn pi_gaps_match_brute_force() {
    for seed in 0..20 {
        let mu = uniform_levels(3 + seed as usize * 7, seed);
        let gaps = pairing_gaps(&mu).unwrap();
        let oracle = brute_deltapi(&mu);
        for (a, (&got, &want)) in gaps.deltapi.iter().zip(&oracle).enumerate() {
            assert!((got - want).abs() < 1e-13, "seed {seed} level {a}");
            let target = mu[a] + std::f64::consts::PI;
            let d = (mu[gaps.partner[a]] - target).rem_euclid(std::f64::consts::TAU);
            assert!((d.min(std::f64::consts::TAU - d) - want).abs() < 1e-13);
        }
        for (i, w) in mu.windows(2).enumerate() {
            assert_eq!(gaps.delta0[i], w[1] - w[0]);
        }
    }
}

#[test]
fn paired_spectrum_has_negative_pairing_parameter() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let half: Vec<f64> = (0..100).map(|_| rng.random_range(-std::f64::consts::PI..0.0)).collect();
    let mut mu: Vec<f64> = half.iter().flat_map(|&x| [x, x + std::f64::consts::PI - 1e-9]).collect();
    mu.sort_by(f64::total_cmp);
    let paired = pairing_parameter(&[pairing_gaps(&mu).unwrap()]).unwrap();
    assert!(paired < -5.0, "{paired}");
    let random = pairing_parameter(&[pairing_gaps(&uniform_levels(200, 9)).unwrap()]).unwrap();
    assert!(random.abs() < 0.5, "{random}");
}
