//! Independent reference constructions: full tensor-product operators,
//! a scaling-and-squaring matrix exponential and random unitaries.
#![allow(dead_code)]

use faer::{c64, Mat};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use swapcrystal::{DisorderRealization, LocalSpin, ModelParams, SectorBasis};

pub fn c(re: f64, im: f64) -> c64 {
    c64::new(re, im)
}

/// `(X, Y, Z)` with Pauli matrices for spin-1/2 and S matrices for spin-1,
/// local basis ordered +, (0), -.
pub fn local_ops(spin: LocalSpin) -> (Mat<c64>, Mat<c64>, Mat<c64>) {
    match spin {
        LocalSpin::Half => {
            let x = Mat::from_fn(2, 2, |i, j| if i != j { c(1.0, 0.0) } else { c(0.0, 0.0) });
            let y = Mat::from_fn(2, 2, |i, j| match (i, j) {
                (0, 1) => c(0.0, -1.0),
                (1, 0) => c(0.0, 1.0),
                _ => c(0.0, 0.0),
            });
            let z = Mat::from_fn(2, 2, |i, j| if i == j { c(if i == 0 { 1.0 } else { -1.0 }, 0.0) } else { c(0.0, 0.0) });
            (x, y, z)
        }
        LocalSpin::One => {
            let r = std::f64::consts::FRAC_1_SQRT_2;
            // S+ has entries sqrt(2) above the diagonal
            let x = Mat::from_fn(3, 3, |i, j| if i.abs_diff(j) == 1 { c(r, 0.0) } else { c(0.0, 0.0) });
            let y = Mat::from_fn(3, 3, |i, j| {
                if j == i + 1 {
                    c(0.0, -r)
                } else if i == j + 1 {
                    c(0.0, r)
                } else {
                    c(0.0, 0.0)
                }
            });
            let z = Mat::from_fn(3, 3, |i, j| if i == j { c(1.0 - i as f64, 0.0) } else { c(0.0, 0.0) });
            (x, y, z)
        }
    }
}

pub fn scaled(m: &Mat<c64>, z: c64) -> Mat<c64> {
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)] * z)
}

pub fn kron(a: &Mat<c64>, b: &Mat<c64>) -> Mat<c64> {
    let (ra, ca, rb, cb) = (a.nrows(), a.ncols(), b.nrows(), b.ncols());
    Mat::from_fn(ra * rb, ca * cb, |i, j| a[(i / rb, j / cb)] * b[(i % rb, j % cb)])
}

pub fn identity(n: usize) -> Mat<c64> {
    Mat::from_fn(n, n, |i, j| if i == j { c(1.0, 0.0) } else { c(0.0, 0.0) })
}

/// Product of single-site operators placed on the given sites (site 0 slowest).
pub fn embed(ops: &[(usize, &Mat<c64>)], length: usize, d: usize) -> Mat<c64> {
    let mut m = identity(1);
    for site in 0..length {
        let local = ops.iter().find(|(s, _)| *s == site).map(|(_, o)| (*o).clone()).unwrap_or_else(|| identity(d));
        m = kron(&m, &local);
    }
    m
}

pub fn full_hopping(spin: LocalSpin, length: usize, k: usize) -> Mat<c64> {
    let (x, y, _) = local_ops(spin);
    let d = spin.dim();
    embed(&[(k, &x), (k + 1, &x)], length, d) + embed(&[(k, &y), (k + 1, &y)], length, d)
}

pub fn full_swap(spin: LocalSpin, length: usize, k: usize) -> Mat<c64> {
    let d = spin.dim();
    let n = d.pow(length as u32);
    let digits = |mut i: usize| {
        let mut v = vec![0; length];
        for s in (0..length).rev() {
            v[s] = i % d;
            i /= d;
        }
        v
    };
    Mat::from_fn(n, n, |row, col| {
        let mut v = digits(col);
        v.swap(2 * k, 2 * k + 1);
        let target = v.iter().fold(0, |acc, &x| acc * d + x);
        if target == row {
            c(1.0, 0.0)
        } else {
            c(0.0, 0.0)
        }
    })
}

pub fn full_h_int(params: &ModelParams, r: &DisorderRealization) -> Mat<c64> {
    let (_, _, z) = local_ops(params.spin);
    let (l, d) = (params.length, params.spin.dim());
    let n = d.pow(l as u32);
    let mut h = Mat::<c64>::zeros(n, n);
    for k in 0..l {
        h += scaled(&embed(&[(k, &z)], l, d), c(r.fields()[k], 0.0));
        for q in k + 1..l {
            h += scaled(&embed(&[(k, &z), (q, &z)], l, d), c(r.coupling(k, q), 0.0));
        }
    }
    for k in 0..l - 1 {
        h -= scaled(&full_hopping(params.spin, l, k), c(params.j, 0.0));
    }
    h
}

/// Two-site `S_1 . S_2` (or `sigma_1 . sigma_2`) on a `d^2` space.
pub fn pair_dot(spin: LocalSpin) -> Mat<c64> {
    let (x, y, z) = local_ops(spin);
    kron(&x, &x) + kron(&y, &y) + kron(&z, &z)
}

/// The kick generator `K` on the full space, assembled from spin operators.
pub fn full_kick_generator(spin: LocalSpin, length: usize, epsilon: f64) -> Mat<c64> {
    let d = spin.dim();
    let n = d.pow(length as u32);
    let (x, y, z) = local_ops(spin);
    let mut k_mat = Mat::<c64>::zeros(n, n);
    for pair in 0..length / 2 {
        let (a, b) = (2 * pair, 2 * pair + 1);
        let dot = embed(&[(a, &x), (b, &x)], length, d) + embed(&[(a, &y), (b, &y)], length, d) + embed(&[(a, &z), (b, &z)], length, d);
        match spin {
            LocalSpin::Half => k_mat += scaled(&dot, c(std::f64::consts::FRAC_PI_4 + epsilon, 0.0)),
            LocalSpin::One => {
                let sq = &dot * &dot;
                k_mat += scaled(&(sq + dot), c(std::f64::consts::FRAC_PI_2 + epsilon, 0.0));
            }
        }
    }
    k_mat
}

fn one_norm(a: &Mat<c64>) -> f64 {
    (0..a.ncols()).map(|j| (0..a.nrows()).map(|i| a[(i, j)].norm()).sum::<f64>()).fold(0.0, f64::max)
}

/// `exp(A)` by scaling and squaring of a truncated Taylor series.
pub fn expm(a: &Mat<c64>) -> Mat<c64> {
    let n = a.nrows();
    let norm = one_norm(a);
    let squarings = if norm > 0.25 { (norm / 0.25).log2().ceil() as u32 } else { 0 };
    let small = scaled(a, c(0.5f64.powi(squarings as i32), 0.0));
    let mut term = identity(n);
    let mut sum = identity(n);
    for k in 1..=24 {
        term = scaled(&(&term * &small), c(1.0 / k as f64, 0.0));
        sum += &term;
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

/// `exp(-i A)`.
pub fn expm_minus_i(a: &Mat<c64>) -> Mat<c64> {
    expm(&scaled(a, c(0.0, -1.0)))
}

/// Full-space index of each sector state, computed from its values.
pub fn sector_indices(basis: &SectorBasis) -> Vec<usize> {
    let spin = basis.spin();
    let d = spin.dim();
    basis
        .configs()
        .iter()
        .map(|cfg| cfg.values().iter().fold(0, |acc, &v| acc * d + spin.values().iter().position(|&x| x == v).unwrap()))
        .collect()
}

pub fn restrict(m: &Mat<c64>, basis: &SectorBasis) -> Mat<c64> {
    let idx = sector_indices(basis);
    Mat::from_fn(idx.len(), idx.len(), |i, j| m[(idx[i], idx[j])])
}

pub fn max_diff(a: &Mat<c64>, b: &Mat<c64>) -> f64 {
    assert_eq!((a.nrows(), a.ncols()), (b.nrows(), b.ncols()));
    let mut worst = 0.0f64;
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            worst = worst.max((a[(i, j)] - b[(i, j)]).norm());
        }
    }
    worst
}

pub fn real_to_complex(m: &Mat<f64>) -> Mat<c64> {
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| c(m[(i, j)], 0.0))
}

fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    // Box-Muller
    let u: f64 = 1.0 - rng.random::<f64>();
    let v: f64 = rng.random();
    (-2.0 * u.ln()).sqrt() * (std::f64::consts::TAU * v).cos()
}

/// Haar-random unitary: QR of a complex Ginibre matrix with the R-diagonal phases removed.
pub fn haar_unitary(n: usize, seed: u64) -> Mat<c64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = Mat::from_fn(n, n, |_, _| c(gaussian(&mut rng), gaussian(&mut rng)));
    let qr = g.qr();
    let q = qr.compute_Q();
    let r = qr.R();
    Mat::from_fn(n, n, |i, j| {
        let d = r[(j, j)];
        q[(i, j)] * (d / d.norm())
    })
}

/// Brute-force pi-gap: min over all levels of the circle distance to `mu + pi`.
pub fn brute_deltapi(mu: &[f64]) -> Vec<f64> {
    mu.iter()
        .map(|&m| {
            mu.iter()
                .map(|&x| {
                    let diff = (x - m - std::f64::consts::PI).rem_euclid(std::f64::consts::TAU);
                    diff.min(std::f64::consts::TAU - diff)
                })
                .fold(f64::INFINITY, f64::min)
        })
        .collect()
}
