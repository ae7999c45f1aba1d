//! ZZ connected correlators, the global correlation quantifier, one- and
//! two-site reduced density matrices, entropies and mutual information.

use std::collections::HashMap;

use faer::{c64, Mat, Side};

use crate::basis::SectorBasis;
use crate::error::{Error, Result};

/// Eigenvalues of a density matrix below this are treated as zero.
const ENTROPY_CUTOFF: f64 = 1e-14;

fn check_state(basis: &SectorBasis, state: &[c64]) -> Result<()> {
    if state.len() != basis.dim() {
        return Err(Error::DimensionMismatch { expected: basis.dim(), found: state.len() });
    }
    Ok(())
}

fn check_pair(basis: &SectorBasis, i: usize, j: usize) -> Result<()> {
    basis.check_site(i)?;
    basis.check_site(j)?;
    if i == j {
        return Err(Error::InvalidArgument(format!("correlator needs two distinct sites, got {i} twice")));
    }
    Ok(())
}

/// `<z_i z_j> - <z_i><z_j>` with the stored z values (sigma^z or S^z).
pub fn connected_correlator(basis: &SectorBasis, state: &[c64], i: usize, j: usize) -> Result<f64> {
    check_state(basis, state)?;
    check_pair(basis, i, j)?;
    let (mut zi, mut zj, mut zij) = (0.0, 0.0, 0.0);
    for (config, amp) in basis.configs().iter().zip(state) {
        let p = amp.norm_sqr();
        let (a, b) = (f64::from(config.values()[i]), f64::from(config.values()[j]));
        zi += p * a;
        zj += p * b;
        zij += p * a * b;
    }
    Ok(zij - zi * zj)
}

/// Upper-triangular `|C(i, j)|` plus the two quantifiers.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationReport {
    /// `abs_c[i][j]` for `i < j`; zero elsewhere.
    pub abs_c: Vec<Vec<f64>>,
    pub sigma: f64,
    pub sigma_mi: Option<f64>,
}

/// All `|C(i, j)|` at once, in one pass over the state.
pub fn correlation_matrix(basis: &SectorBasis, state: &[c64]) -> Result<Vec<Vec<f64>>> {
    check_state(basis, state)?;
    let l = basis.length();
    let mut mean = vec![0.0; l];
    let mut second = vec![vec![0.0; l]; l];
    for (config, amp) in basis.configs().iter().zip(state) {
        let p = amp.norm_sqr();
        if p == 0.0 {
            continue;
        }
        let v = config.values();
        for i in 0..l {
            let a = p * f64::from(v[i]);
            mean[i] += a;
            if v[i] != 0 {
                for j in i + 1..l {
                    second[i][j] += a * f64::from(v[j]);
                }
            }
        }
    }
    let mut out = vec![vec![0.0; l]; l];
    for i in 0..l {
        for j in i + 1..l {
            out[i][j] = (second[i][j] - mean[i] * mean[j]).abs();
        }
    }
    Ok(out)
}

/// `Sigma = (1/L) sum_{i<j} |C(i, j)|`.
pub fn sigma_quantifier(basis: &SectorBasis, state: &[c64]) -> Result<f64> {
    let c = correlation_matrix(basis, state)?;
    Ok(c.iter().flatten().sum::<f64>() / basis.length() as f64)
}

pub fn correlation_report(basis: &SectorBasis, state: &[c64], with_mutual_information: bool) -> Result<CorrelationReport> {
    let abs_c = correlation_matrix(basis, state)?;
    let sigma = abs_c.iter().flatten().sum::<f64>() / basis.length() as f64;
    let sigma_mi = if with_mutual_information {
        Some(sigma_mi_quantifier(basis, state)?)
    } else {
        None
    };
    Ok(CorrelationReport { abs_c, sigma, sigma_mi })
}

/// Reduced density matrix on one or two sites, local levels ordered as in
/// [`crate::basis::LocalSpin::values`] (first listed site is the slow index).
pub fn reduced_density(basis: &SectorBasis, state: &[c64], sites: &[usize]) -> Result<Mat<c64>> {
    check_state(basis, state)?;
    match sites {
        [i] => basis.check_site(*i)?,
        [i, j] => check_pair(basis, *i, *j)?,
        _ => {
            return Err(Error::InvalidArgument(format!(
                "reduced density supports 1 or 2 sites, got {}",
                sites.len()
            )))
        }
    }
    let spin = basis.spin();
    let d = spin.dim();
    let dim_a = d.pow(sites.len() as u32);
    // group amplitudes by the configuration of the complement
    let places: Vec<u64> = sites.iter().map(|&s| basis.place_value(s)).collect();
    let mut groups: HashMap<u64, Vec<(usize, c64)>> = HashMap::new();
    for (index, (config, &amp)) in basis.configs().iter().zip(state).enumerate() {
        if amp.norm_sqr() == 0.0 {
            continue;
        }
        let v = config.values();
        let mut local = 0;
        let mut rest = basis.code(index);
        for (&s, &place) in sites.iter().zip(&places) {
            let level = spin.level(v[s]);
            local = local * d + level;
            rest -= level as u64 * place;
        }
        groups.entry(rest).or_default().push((local, amp));
    }
    let mut rho = Mat::<c64>::zeros(dim_a, dim_a);
    for members in groups.values() {
        for &(a, za) in members {
            for &(b, zb) in members {
                rho[(a, b)] += za * zb.conj();
            }
        }
    }
    Ok(rho)
}

/// `-Tr rho ln rho`.
pub fn von_neumann_entropy(rho: &Mat<c64>) -> Result<f64> {
    let evals = rho
        .self_adjoint_eigenvalues(Side::Lower)
        .map_err(|e| Error::Eigensolver(format!("{e:?}")))?;
    Ok(evals
        .into_iter()
        .filter(|&p| p > ENTROPY_CUTOFF)
        .map(|p| -p * p.ln())
        .sum())
}

/// `I(i, j) = S_i + S_j - S_ij` in nats.
pub fn mutual_information(basis: &SectorBasis, state: &[c64], i: usize, j: usize) -> Result<f64> {
    check_pair(basis, i, j)?;
    let si = von_neumann_entropy(&reduced_density(basis, state, &[i])?)?;
    let sj = von_neumann_entropy(&reduced_density(basis, state, &[j])?)?;
    let sij = von_neumann_entropy(&reduced_density(basis, state, &[i, j])?)?;
    Ok(si + sj - sij)
}

/// `Sigma(I) = (1/L) sum_{i<j} I(i, j)`.
pub fn sigma_mi_quantifier(basis: &SectorBasis, state: &[c64]) -> Result<f64> {
    check_state(basis, state)?;
    let l = basis.length();
    let single: Vec<f64> = (0..l)
        .map(|i| von_neumann_entropy(&reduced_density(basis, state, &[i])?))
        .collect::<Result<_>>()?;
    let mut total = 0.0;
    for i in 0..l {
        for j in i + 1..l {
            total += single[i] + single[j] - von_neumann_entropy(&reduced_density(basis, state, &[i, j])?)?;
        }
    }
    Ok(total / l as f64)
}
