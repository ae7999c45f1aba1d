//! Local imbalance: the fraction of swap pairs whose two spins differ, its
//! operator forms for spin-1/2 and spin-1, and the exact distribution of the
//! imbalance over all classical configurations.

use faer::c64;

use crate::basis::{LocalSpin, SectorBasis};
use crate::error::{Error, Result};

/// `(1/(L/2)) sum_k (1 - delta(s_{2k}, s_{2k+1}))` on a classical configuration.
/// Valid for any local dimension.
pub fn local_imbalance(values: &[i8]) -> f64 {
    let pairs = values.len() / 2;
    let unaligned = values.chunks_exact(2).filter(|p| p[0] != p[1]).count();
    unaligned as f64 / pairs as f64
}

/// Single-pair value of the polynomial operator form (sigma^z or S^z
/// polynomial) evaluated on z eigenvalues.
pub fn pair_imbalance_operator(spin: LocalSpin, a: i8, b: i8) -> f64 {
    let (a, b) = (f64::from(a), f64::from(b));
    match spin {
        LocalSpin::Half => (b - a).powi(2) / 4.0,
        LocalSpin::One => a * a + b * b - 0.5 * a * b * (1.0 + 3.0 * a * b),
    }
}

/// Diagonal of the local-imbalance operator in the sector.
pub fn imbalance_operator_diagonal(basis: &SectorBasis) -> Vec<f64> {
    let pairs = (basis.length() / 2) as f64;
    basis
        .configs()
        .iter()
        .map(|c| {
            c.values()
                .chunks_exact(2)
                .map(|p| pair_imbalance_operator(basis.spin(), p[0], p[1]))
                .sum::<f64>()
                / pairs
        })
        .collect()
}

/// Expectation of the local-imbalance operator on a normalized sector state.
pub fn local_imbalance_state(basis: &SectorBasis, state: &[c64]) -> Result<f64> {
    if state.len() != basis.dim() {
        return Err(Error::DimensionMismatch { expected: basis.dim(), found: state.len() });
    }
    Ok(imbalance_operator_diagonal(basis)
        .iter()
        .zip(state)
        .map(|(w, z)| w * z.norm_sqr())
        .sum())
}

fn binomial_u128(n: u32, k: u32) -> Option<u128> {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // exact at every step: acc * (n-i) is divisible by (i+1)
        acc = acc.checked_mul(u128::from(n - i))? / u128::from(i + 1);
    }
    Some(acc)
}

fn check_even(length: usize) -> Result<()> {
    if length == 0 || length % 2 != 0 {
        return Err(Error::OddLength(length));
    }
    Ok(())
}

/// Number of configurations with exactly `unaligned` differing pairs:
/// `(d(d-1))^N d^{L/2-N} C(L/2, N)`.
pub fn eigenspace_degeneracy(length: usize, d: u32, unaligned: usize) -> Result<u128> {
    check_even(length)?;
    if d < 2 {
        return Err(Error::InvalidArgument(format!("local dimension {d} < 2")));
    }
    let pairs = length / 2;
    if unaligned > pairs {
        return Err(Error::InvalidArgument(format!("{unaligned} unaligned pairs exceed L/2 = {pairs}")));
    }
    let d = u128::from(d);
    let overflow = || Error::Overflow("eigenspace degeneracy");
    let differing = (d * (d - 1)).checked_pow(unaligned as u32).ok_or_else(overflow)?;
    let equal = d.checked_pow((pairs - unaligned) as u32).ok_or_else(overflow)?;
    let ways = binomial_u128(pairs as u32, unaligned as u32).ok_or_else(overflow)?;
    differing
        .checked_mul(equal)
        .and_then(|x| x.checked_mul(ways))
        .ok_or_else(overflow)
}

/// Exact distribution of the imbalance over uniformly random configurations.
#[derive(Debug, Clone, PartialEq)]
pub struct ImbalanceDistribution {
    pub length: usize,
    pub d: u32,
    /// `N / (L/2)` for `N = 0..=L/2`.
    pub support: Vec<f64>,
    pub pmf: Vec<f64>,
}

impl ImbalanceDistribution {
    pub fn mean(&self) -> f64 {
        self.support.iter().zip(&self.pmf).map(|(x, p)| x * p).sum()
    }

    pub fn variance(&self) -> f64 {
        let m = self.mean();
        self.support.iter().zip(&self.pmf).map(|(x, p)| (x - m).powi(2) * p).sum()
    }
}

/// Binomial pmf with `L/2` trials and success probability `(d-1)/d`.
///
/// Exact integer counts are used while `d^L` fits in 128 bits; beyond that
/// the pmf is evaluated in log space.
pub fn imbalance_pmf(length: usize, d: u32) -> Result<ImbalanceDistribution> {
    check_even(length)?;
    if d < 2 {
        return Err(Error::InvalidArgument(format!("local dimension {d} < 2")));
    }
    let pairs = length / 2;
    let support = (0..=pairs).map(|n| n as f64 / pairs as f64).collect();
    let total = u128::from(d).checked_pow(length as u32);
    let exact: Option<Vec<f64>> = total.and_then(|total| {
        (0..=pairs)
            .map(|n| eigenspace_degeneracy(length, d, n).ok().map(|c| c as f64 / total as f64))
            .collect()
    });
    let pmf = match exact {
        Some(p) => p,
        None => {
            let q = f64::from(d - 1) / f64::from(d);
            let ln_fact: Vec<f64> = std::iter::once(0.0)
                .chain((1..=pairs).scan(0.0, |acc, i| {
                    *acc += (i as f64).ln();
                    Some(*acc)
                }))
                .collect();
            (0..=pairs)
                .map(|n| {
                    let ln_c = ln_fact[pairs] - ln_fact[n] - ln_fact[pairs - n];
                    (ln_c + n as f64 * q.ln() + (pairs - n) as f64 * (1.0 - q).ln()).exp()
                })
                .collect()
        }
    };
    Ok(ImbalanceDistribution { length, d, support, pmf })
}

/// Mean `(d-1)/d` and variance `2(d-1)/(L d^2)` of the large-L normal limit.
pub fn normal_approximation(length: usize, d: u32) -> Result<(f64, f64)> {
    check_even(length)?;
    let d = f64::from(d);
    Ok(((d - 1.0) / d, 2.0 * (d - 1.0) / (length as f64 * d * d)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::{enumerate_sector, SpinConfig};

    #[test]
    fn presets() {
        assert_eq!(local_imbalance(&[1, -1, 1, -1, 1, -1]), 1.0);
        // half-Neel, L = 10: 2*floor(10/4) = 4 AF sites
        let half = [1, -1, 1, -1, 1, 1, 1, 1, 1, 1];
        assert_eq!(local_imbalance(&half), 2.0 / 5.0);
        assert_eq!(local_imbalance(&[1, 1, -1, -1]), 0.0);
    }

    #[test]
    fn operator_forms_match_delta_definition() {
        for spin in [LocalSpin::Half, LocalSpin::One] {
            for &a in spin.values() {
                for &b in spin.values() {
                    let expect = if a == b { 0.0 } else { 1.0 };
                    assert_eq!(pair_imbalance_operator(spin, a, b), expect, "{spin} {a} {b}");
                }
            }
        }
        assert_eq!(pair_imbalance_operator(LocalSpin::One, 1, 0), 1.0);
        assert_eq!(pair_imbalance_operator(LocalSpin::One, 1, -1), 1.0);
        assert_eq!(pair_imbalance_operator(LocalSpin::One, 1, 1), 0.0);
        assert_eq!(pair_imbalance_operator(LocalSpin::One, 0, 0), 0.0);
    }

    #[test]
    fn state_expectation_on_basis_state() {
        let b = enumerate_sector(4, LocalSpin::One, 1).unwrap();
        let c = SpinConfig::new(LocalSpin::One, vec![1, 0, 0, 0]).unwrap();
        let i = b.index_of(&c).unwrap();
        let mut psi = vec![c64::new(0.0, 0.0); b.dim()];
        psi[i] = c64::new(1.0, 0.0);
        assert_eq!(local_imbalance_state(&b, &psi).unwrap(), 0.5);
        assert!(local_imbalance_state(&b, &psi[1..]).is_err());
    }

    #[test]
    fn degeneracy_cases() {
        assert_eq!(eigenspace_degeneracy(4, 2, 1).unwrap(), 8);
        assert_eq!(eigenspace_degeneracy(2, 3, 1).unwrap(), 6);
        assert!(eigenspace_degeneracy(4, 2, 3).is_err());
        // exhaustive check of L = 4, d = 2
        let mut counts = [0u128; 3];
        for code in 0..16u32 {
            let v: Vec<i8> = (0..4).map(|i| if code >> i & 1 == 1 { 1 } else { -1 }).collect();
            counts[v.chunks_exact(2).filter(|p| p[0] != p[1]).count()] += 1;
        }
        for (n, &c) in counts.iter().enumerate() {
            assert_eq!(eigenspace_degeneracy(4, 2, n).unwrap(), c);
        }
    }

    #[test]
    fn zero_imbalance_fraction() {
        for d in [2u32, 3, 4] {
            for l in [4usize, 8, 12] {
                let pmf = imbalance_pmf(l, d).unwrap();
                let expect = f64::from(d).powi(-(l as i32) / 2);
                assert!((pmf.pmf[0] / expect - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn log_space_branch_agrees() {
        // 4^64 overflows u128, so L = 64, d = 4 takes the log-space route
        let big = imbalance_pmf(64, 4).unwrap();
        let sum: f64 = big.pmf.iter().sum();
        assert!((sum - 1.0).abs() < 1e-12);
        assert!((big.mean() - 0.75).abs() < 1e-12);
        assert!((big.variance() - 2.0 * 3.0 / (64.0 * 16.0)).abs() < 1e-12);
    }

    #[test]
    fn normal_limits() {
        let (m, v) = normal_approximation(120, 2).unwrap();
        assert_eq!(m, 0.5);
        assert!((v - 1.0 / 240.0).abs() < 1e-15);
        let (m, v) = normal_approximation(120, 3).unwrap();
        assert!((m - 2.0 / 3.0).abs() < 1e-15);
        assert!((v - 1.0 / 270.0).abs() < 1e-15);
        let mut prev = f64::INFINITY;
        for l in (2..200).step_by(2) {
            let (_, v) = normal_approximation(l, 3).unwrap();
            assert!(v < prev);
            prev = v;
        }
    }
}
