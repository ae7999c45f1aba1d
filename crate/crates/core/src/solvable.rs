//! Closed forms at the solvable point `J = epsilon = 0`.
//!
//! There `U_F |{s_k}> = exp(-i phi_kick) exp(-i E({s_k})) |{s_kbar}>`, so
//! every configuration and its pair-swapped partner span a two-dimensional
//! invariant subspace diagonalized by cat states with quasienergies
//! `(E + E_bar)/2 + phi_kick` and that value plus pi. `phi_kick` is the
//! global phase of the perfect-swap kick, kept to match the numerically
//! built operator.

use std::f64::consts::{FRAC_PI_4, LN_2, PI};

use faer::c64;

use crate::basis::{LocalSpin, SectorBasis, SpinConfig};
use crate::error::{Error, Result};
use crate::hamiltonian::DisorderRealization;
use crate::imbalance::local_imbalance;
use crate::spectral::fold_quasienergy;

/// `E({s_k}) = sum_{k<q} V_kq s_k s_q + sum_k h_k s_k`.
pub fn classical_energy(config: &SpinConfig, realization: &DisorderRealization) -> Result<f64> {
    let s = config.values();
    if s.len() != realization.length() {
        return Err(Error::DimensionMismatch { expected: realization.length(), found: s.len() });
    }
    let mut zz = 0.0;
    for q in 1..s.len() {
        for k in 0..q {
            zz += realization.coupling(k, q) * f64::from(s[k] * s[q]);
        }
    }
    let field: f64 = realization.fields().iter().zip(s).map(|(h, &v)| h * f64::from(v)).sum();
    Ok(zz + field)
}

/// Global phase `phi` of the perfect-swap kick, `exp(-iK) = exp(-i phi) prod_k P_k`.
pub fn kick_phase(spin: LocalSpin, length: usize) -> f64 {
    let pairs = (length / 2) as f64;
    match spin {
        LocalSpin::Half => pairs * FRAC_PI_4,
        LocalSpin::One => pairs * PI,
    }
}

/// A configuration, its swapped partner and the corresponding Floquet pair.
#[derive(Debug, Clone, PartialEq)]
pub struct CatPair {
    pub spin: LocalSpin,
    pub config: SpinConfig,
    pub swapped: SpinConfig,
    pub e_plus: f64,
    pub e_swap: f64,
    /// Quasienergy of the symmetric cat (or of the lone state), folded to `(-pi, pi]`.
    pub mu_plus: f64,
    /// `mu_plus + pi` folded; meaningful only when `paired`.
    pub mu_minus: f64,
    pub paired: bool,
}

pub fn cat_pair(spin: LocalSpin, config: &SpinConfig, realization: &DisorderRealization) -> Result<CatPair> {
    if let Some(&bad) = config.values().iter().find(|&&v| !spin.is_valid(v)) {
        return Err(Error::InvalidConfiguration(format!("value {bad} is not a spin-{spin} eigenvalue")));
    }
    let swapped = config.swapped();
    let e_plus = classical_energy(config, realization)?;
    let e_swap = classical_energy(&swapped, realization)?;
    let paired = swapped != *config;
    let phase = kick_phase(spin, config.len());
    let mu_plus = fold_quasienergy(0.5 * (e_plus + e_swap) + phase);
    Ok(CatPair {
        spin,
        mu_minus: fold_quasienergy(mu_plus + PI),
        config: config.clone(),
        swapped,
        e_plus,
        e_swap,
        mu_plus,
        paired,
    })
}

impl CatPair {
    /// Normalized Floquet states in the sector basis:
    /// `(e^{iE/2}|s> +- e^{iE_bar/2}|s_bar>)/sqrt 2`, or the bare configuration when unpaired.
    pub fn vectors(&self, basis: &SectorBasis) -> Result<(Vec<c64>, Option<Vec<c64>>)> {
        let i = basis.index_of(&self.config).ok_or(Error::SectorMismatch)?;
        let zero = c64::new(0.0, 0.0);
        let mut plus = vec![zero; basis.dim()];
        if !self.paired {
            plus[i] = c64::new(1.0, 0.0);
            return Ok((plus, None));
        }
        let j = basis.index_of(&self.swapped).ok_or(Error::SectorMismatch)?;
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let (a, b) = (c64::cis(0.5 * self.e_plus) * r, c64::cis(0.5 * self.e_swap) * r);
        let mut minus = vec![zero; basis.dim()];
        plus[i] = a;
        plus[j] = b;
        minus[i] = a;
        minus[j] = -b;
        Ok((plus, Some(minus)))
    }

    pub fn imbalance(&self) -> f64 {
        local_imbalance(self.config.values())
    }
}

/// Every quasienergy of a sector at the solvable point, ascending.
pub fn solvable_quasienergies(basis: &SectorBasis, realization: &DisorderRealization) -> Result<Vec<f64>> {
    let mut mu = Vec::with_capacity(basis.dim());
    for (i, config) in basis.configs().iter().enumerate() {
        let j = basis.swapped_index(i);
        if j < i {
            continue;
        }
        let pair = cat_pair(basis.spin(), config, realization)?;
        mu.push(pair.mu_plus);
        if pair.paired {
            mu.push(pair.mu_minus);
        }
    }
    mu.sort_by(f64::total_cmp);
    Ok(mu)
}

/// `Sigma = I (I L - 1) / 2` for the spin-1/2 cat state built on `config`.
pub fn exact_sigma(spin: LocalSpin, config: &SpinConfig) -> Result<f64> {
    if spin != LocalSpin::Half {
        return Err(Error::Unsupported("connected-correlation closed form exists only for spin-1/2".into()));
    }
    let i = local_imbalance(config.values());
    Ok(0.5 * i * (i * config.len() as f64 - 1.0))
}

/// `Sigma(I) = I (I L - 1) ln 2 / 2`, valid for any spin when more than one pair is unaligned.
pub fn exact_sigma_mutual_information(config: &SpinConfig) -> f64 {
    let i = local_imbalance(config.values());
    0.5 * i * (i * config.len() as f64 - 1.0) * LN_2
}
