//! Quasienergies and Floquet states, level-spacing ratio and pi-pairing gaps.

use std::f64::consts::{PI, TAU};

use faer::{c64, Mat};

use crate::error::{Error, Result};

/// Gaps below this value are floored before taking logarithms.
pub const GAP_FLOOR: f64 = 1e-14;

/// Quasienergies closer than this are treated as one degenerate cluster
/// whose eigenvectors are re-orthonormalized.
const DEGENERACY_TOL: f64 = 1e-10;

/// Fold a phase into the Brillouin zone `(-pi, pi]`.
pub fn fold_quasienergy(x: f64) -> f64 {
    let y = x.rem_euclid(TAU);
    if y > PI {
        y - TAU
    } else {
        y
    }
}

/// Distance between two phases on the unit circle, in `[0, pi]`.
pub fn circle_distance(a: f64, b: f64) -> f64 {
    fold_quasienergy(a - b).abs()
}

/// Eigen-decomposition of a Floquet operator: `U |psi_b> = exp(-i mu_b) |psi_b>`.
#[derive(Debug, Clone)]
pub struct FloquetSpectrum {
    /// Quasienergies in `(-pi, pi]`, ascending.
    pub mu: Vec<f64>,
    /// Floquet states as columns, in the order of `mu`.
    pub states: Mat<c64>,
}

impl FloquetSpectrum {
    pub fn dim(&self) -> usize {
        self.mu.len()
    }

    pub fn state(&self, beta: usize) -> Vec<c64> {
        self.states.col(beta).iter().copied().collect()
    }

    pub fn level_spacing_ratio(&self) -> Result<f64> {
        level_spacing_ratio(&self.mu)
    }

    pub fn pairing_gaps(&self) -> Result<PairingGaps> {
        pairing_gaps(&self.mu)
    }
}

fn check_unitary_columns(u: &Mat<c64>) -> Result<()> {
    if u.nrows() != u.ncols() {
        return Err(Error::DimensionMismatch { expected: u.nrows(), found: u.ncols() });
    }
    let mut worst = 0.0f64;
    for j in 0..u.ncols() {
        let norm2: f64 = u.col(j).iter().map(|z| z.norm_sqr()).sum();
        worst = worst.max((norm2 - 1.0).abs());
    }
    if !(worst <= 1e-8) {
        return Err(Error::NotUnitary(worst));
    }
    Ok(())
}

fn eigen_to_mu(lambda: c64) -> f64 {
    fold_quasienergy(-lambda.arg())
}

/// Diagonalize a unitary matrix.
pub fn diagonalize(u: &Mat<c64>) -> Result<FloquetSpectrum> {
    check_unitary_columns(u)?;
    let n = u.nrows();
    let eig = u.eigen().map_err(|e| Error::Eigensolver(format!("{e:?}")))?;
    let (vals, vecs) = (eig.S(), eig.U());
    let raw: Vec<f64> = (0..n).map(|i| eigen_to_mu(vals[i])).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| raw[a].total_cmp(&raw[b]));
    let mu: Vec<f64> = order.iter().map(|&i| raw[i]).collect();
    let mut states = Mat::<c64>::from_fn(n, n, |i, j| vecs[(i, order[j])]);

    // Eigenvectors of a normal matrix are orthogonal except inside
    // degenerate clusters, where the solver returns an arbitrary basis.
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && mu[end] - mu[end - 1] < DEGENERACY_TOL {
            end += 1;
        }
        orthonormalize_columns(&mut states, start, end);
        start = end;
    }
    Ok(FloquetSpectrum { mu, states })
}

/// Modified Gram-Schmidt (two passes) on columns `start..end`.
fn orthonormalize_columns(m: &mut Mat<c64>, start: usize, end: usize) {
    let n = m.nrows();
    for j in start..end {
        for _ in 0..2 {
            for i in start..j {
                let mut overlap = c64::new(0.0, 0.0);
                for r in 0..n {
                    overlap += m[(r, i)].conj() * m[(r, j)];
                }
                for r in 0..n {
                    let v = m[(r, i)];
                    m[(r, j)] -= overlap * v;
                }
            }
        }
        let norm = m.col(j).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for r in 0..n {
            m[(r, j)] /= norm;
        }
    }
}

/// Quasienergies only, ascending in `(-pi, pi]`.
pub fn quasienergies(u: &Mat<c64>) -> Result<Vec<f64>> {
    check_unitary_columns(u)?;
    let vals = u.eigenvalues().map_err(|e| Error::Eigensolver(format!("{e:?}")))?;
    let mut mu: Vec<f64> = vals.into_iter().map(eigen_to_mu).collect();
    mu.sort_by(f64::total_cmp);
    Ok(mu)
}

/// Mean ratio of consecutive level spacings over the sorted spectrum.
///
/// Normalized by the number of ratios (`dim - 2`); two exactly zero gaps
/// count as equal gaps (ratio 1).
pub fn level_spacing_ratio(mu: &[f64]) -> Result<f64> {
    if mu.len() < 3 {
        return Err(Error::SpectrumTooSmall { needed: 3, found: mu.len() });
    }
    let gaps: Vec<f64> = mu.windows(2).map(|w| w[1] - w[0]).collect();
    let total: f64 = gaps
        .windows(2)
        .map(|g| {
            let (lo, hi) = if g[0] < g[1] { (g[0], g[1]) } else { (g[1], g[0]) };
            if hi == 0.0 {
                1.0
            } else {
                lo / hi
            }
        })
        .sum();
    Ok(total / (gaps.len() - 1) as f64)
}

/// Consecutive gaps and pi-shifted gaps of one spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct PairingGaps {
    /// `mu_{b+1} - mu_b`, length `dim - 1`.
    pub delta0: Vec<f64>,
    /// Circle distance from `mu_b + pi` to the nearest quasienergy, length `dim`.
    pub deltapi: Vec<f64>,
    /// Index of that nearest quasienergy.
    pub partner: Vec<usize>,
}

/// Pairing gaps of a sorted quasienergy list.
pub fn pairing_gaps(mu: &[f64]) -> Result<PairingGaps> {
    let n = mu.len();
    if n < 2 {
        return Err(Error::SpectrumTooSmall { needed: 2, found: n });
    }
    let delta0 = mu.windows(2).map(|w| w[1] - w[0]).collect();
    let mut deltapi = Vec::with_capacity(n);
    let mut partner = Vec::with_capacity(n);
    for &m in mu {
        let target = fold_quasienergy(m + PI);
        // Nearest point on the circle is one of the two sorted neighbours of the target.
        let p = mu.partition_point(|&x| x < target);
        let candidates = [(p + n - 1) % n, p % n];
        let (best, dist) = candidates
            .iter()
            .map(|&g| (g, circle_distance(mu[g], target)))
            .fold((usize::MAX, f64::INFINITY), |acc, c| {
                if c.1 < acc.1 || (c.1 == acc.1 && c.0 < acc.0) {
                    c
                } else {
                    acc
                }
            });
        deltapi.push(dist);
        partner.push(best);
    }
    Ok(PairingGaps { delta0, deltapi, partner })
}

/// Log-averaged gaps of one spectrum: `(<log10 Delta^pi>, <log10 Delta^0>)`.
pub fn log_gap_means(gaps: &PairingGaps) -> (f64, f64) {
    let mean_log = |v: &[f64]| v.iter().map(|&x| x.max(GAP_FLOOR).log10()).sum::<f64>() / v.len() as f64;
    (mean_log(&gaps.deltapi), mean_log(&gaps.delta0))
}

/// Spectral-pairing parameter `<log10 Delta^pi> - <log10 Delta^0>` over an
/// ensemble of spectra (averaged over levels, then over realizations).
pub fn pairing_parameter(ensemble: &[PairingGaps]) -> Result<f64> {
    if ensemble.is_empty() {
        return Err(Error::InvalidArgument("empty ensemble".into()));
    }
    let mut pi_sum = 0.0;
    let mut zero_sum = 0.0;
    for gaps in ensemble {
        if gaps.delta0.iter().all(|&g| g == 0.0) {
            return Err(Error::InvalidArgument("all consecutive gaps vanish".into()));
        }
        let (p, z) = log_gap_means(gaps);
        pi_sum += p;
        zero_sum += z;
    }
    let n = ensemble.len() as f64;
    Ok(pi_sum / n - zero_sum / n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn folding() {
        assert_eq!(fold_quasienergy(PI), PI);
        assert!((fold_quasienergy(-PI) - PI).abs() < 1e-15);
        assert!((fold_quasienergy(3.0 * PI / 2.0) + PI / 2.0).abs() < 1e-15);
        assert!((circle_distance(3.0, -3.0) - (TAU - 6.0)).abs() < 1e-15);
    }

    #[test]
    fn identity_spectrum() {
        let s = diagonalize(&Mat::<c64>::identity(5, 5)).unwrap();
        assert!(s.mu.iter().all(|&m| m.abs() < 1e-14));
        // degenerate cluster still yields an orthonormal basis
        let g = s.states.adjoint() * &s.states;
        for i in 0..5 {
            for j in 0..5 {
                let e = if i == j { 1.0 } else { 0.0 };
                assert!((g[(i, j)] - c64::new(e, 0.0)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn rejects_non_unitary() {
        let m = Mat::<c64>::from_fn(3, 3, |i, j| c64::new(if i == j { 2.0 } else { 0.0 }, 0.0));
        assert!(matches!(diagonalize(&m), Err(Error::NotUnitary(_))));
        assert!(quasienergies(&m).is_err());
    }

    #[test]
    fn rigid_spectrum_ratio_is_one() {
        let mu: Vec<f64> = (0..20).map(|i| -3.0 + 0.3 * i as f64).collect();
        assert!((level_spacing_ratio(&mu).unwrap() - 1.0).abs() < 1e-12);
        assert!(level_spacing_ratio(&mu[..2]).is_err());
    }

    #[test]
    fn two_level_pairing() {
        let g = pairing_gaps(&[-PI / 2.0, PI / 2.0]).unwrap();
        assert!((g.delta0[0] - PI).abs() < 1e-15);
        assert!(g.deltapi.iter().all(|&d| d < 1e-15));
        assert_eq!(g.partner, vec![1, 0]);
        assert!(pairing_gaps(&[0.0]).is_err());
    }

    #[test]
    fn pairing_parameter_zero_for_identical_gaps() {
        let g = PairingGaps { delta0: vec![0.1, 0.2], deltapi: vec![0.1, 0.2], partner: vec![0, 0] };
        assert!(pairing_parameter(&[g.clone(), g]).unwrap().abs() < 1e-15);
        assert!(pairing_parameter(&[]).is_err());
        let zero = PairingGaps { delta0: vec![0.0], deltapi: vec![0.0, 0.0], partner: vec![0, 1] };
        assert!(pairing_parameter(&[zero]).is_err());
    }

    #[test]
    fn floored_pairing_is_strongly_negative() {
        let g = PairingGaps { delta0: vec![0.5; 7], deltapi: vec![0.0; 8], partner: vec![0; 8] };
        let l = pairing_parameter(&[g]).unwrap();
        assert!((l - (-14.0 - 0.5f64.log10())).abs() < 1e-12);
    }
}
