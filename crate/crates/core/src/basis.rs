//! Fixed-magnetization sectors of spin-1/2 and spin-1 chains.
//!
//! Basis states are classical z-configurations. Spin-1/2 values are stored
//! in the Pauli convention (`+1`/`-1` are the eigenvalues of sigma^z), so the
//! total magnetization of a spin-1/2 configuration is half the sum of its
//! values. Spin-1 values are the S^z eigenvalues `+1`, `0`, `-1`.
//!
//! Sites are 0-based; swap pair `k` acts on sites `2k` and `2k + 1`.

use std::collections::HashMap;
use std::fmt;

use faer::Mat;

use crate::error::{Error, Result};

/// Local spin magnitude of every site in the chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "harness", derive(serde::Serialize, serde::Deserialize))]
pub enum LocalSpin {
    #[cfg_attr(feature = "harness", serde(rename = "1/2"))]
    Half,
    #[cfg_attr(feature = "harness", serde(rename = "1"))]
    One,
}

impl LocalSpin {
    /// Local Hilbert-space dimension `d = 2s + 1`.
    pub fn dim(self) -> usize {
        match self {
            LocalSpin::Half => 2,
            LocalSpin::One => 3,
        }
    }

    /// Allowed stored values, in descending (canonical) order.
    pub fn values(self) -> &'static [i8] {
        match self {
            LocalSpin::Half => &[1, -1],
            LocalSpin::One => &[1, 0, -1],
        }
    }

    pub fn is_valid(self, value: i8) -> bool {
        self.values().contains(&value)
    }

    /// Position of `value` in [`LocalSpin::values`].
    pub fn level(self, value: i8) -> usize {
        match self {
            LocalSpin::Half => usize::from(value < 0),
            LocalSpin::One => (1 - value) as usize,
        }
    }

    /// Change of the stored value under one application of S^+.
    fn raise_step(self) -> i8 {
        match self {
            LocalSpin::Half => 2,
            LocalSpin::One => 1,
        }
    }

    /// Physical spin projection m of a stored value.
    fn projection(self, value: i8) -> f64 {
        match self {
            LocalSpin::Half => 0.5 * f64::from(value),
            LocalSpin::One => f64::from(value),
        }
    }

    /// Factor between the stored-value operators and physical spin operators:
    /// sigma = 2 S for spin-1/2, S itself for spin-1.
    pub(crate) fn operator_scale(self) -> f64 {
        match self {
            LocalSpin::Half => 2.0,
            LocalSpin::One => 1.0,
        }
    }

    pub fn spin_value(self) -> f64 {
        match self {
            LocalSpin::Half => 0.5,
            LocalSpin::One => 1.0,
        }
    }

    /// Total magnetization of a configuration (an integer for even L).
    pub fn magnetization(self, values: &[i8]) -> i32 {
        let sum: i32 = values.iter().map(|&v| i32::from(v)).sum();
        match self {
            LocalSpin::Half => sum / 2,
            LocalSpin::One => sum,
        }
    }

    /// Largest reachable |S_z| on a chain of `length` sites.
    pub fn max_magnetization(self, length: usize) -> i32 {
        match self {
            LocalSpin::Half => (length / 2) as i32,
            LocalSpin::One => length as i32,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            LocalSpin::Half => "1/2",
            LocalSpin::One => "1",
        }
    }
}

impl fmt::Display for LocalSpin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// A classical product state `|{s_k}>`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SpinConfig(Vec<i8>);

impl SpinConfig {
    pub fn new(spin: LocalSpin, values: Vec<i8>) -> Result<Self> {
        check_length(values.len())?;
        if let Some(&bad) = values.iter().find(|&&v| !spin.is_valid(v)) {
            return Err(Error::InvalidConfiguration(format!(
                "value {bad} is not a spin-{spin} eigenvalue"
            )));
        }
        Ok(SpinConfig(values))
    }

    pub fn values(&self) -> &[i8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The configuration with every pair `(2k, 2k+1)` exchanged.
    pub fn swapped(&self) -> SpinConfig {
        let mut out = self.0.clone();
        for pair in out.chunks_exact_mut(2) {
            pair.swap(0, 1);
        }
        SpinConfig(out)
    }

    /// Exchange only pair `k`.
    pub fn swapped_pair(&self, k: usize) -> SpinConfig {
        let mut out = self.0.clone();
        out.swap(2 * k, 2 * k + 1);
        SpinConfig(out)
    }

    pub fn is_swap_invariant(&self) -> bool {
        self.0.chunks_exact(2).all(|p| p[0] == p[1])
    }
}

impl fmt::Display for SpinConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("|")?;
        for v in &self.0 {
            let c = match v {
                1 => '+',
                -1 => '-',
                _ => '0',
            };
            write!(f, "{c}")?;
        }
        f.write_str(">")
    }
}

pub(crate) fn check_length(length: usize) -> Result<()> {
    if length == 0 || length % 2 != 0 {
        return Err(Error::OddLength(length));
    }
    Ok(())
}

/// All configurations of a chain with a fixed total magnetization.
#[derive(Debug, Clone)]
pub struct SectorBasis {
    spin: LocalSpin,
    length: usize,
    sz: i32,
    configs: Vec<SpinConfig>,
    codes: Vec<u64>,
    index_of: HashMap<u64, usize>,
}

impl SectorBasis {
    pub fn spin(&self) -> LocalSpin {
        self.spin
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn sz(&self) -> i32 {
        self.sz
    }

    pub fn dim(&self) -> usize {
        self.configs.len()
    }

    pub fn configs(&self) -> &[SpinConfig] {
        &self.configs
    }

    pub fn config(&self, index: usize) -> &SpinConfig {
        &self.configs[index]
    }

    /// Base-d integer label of state `index` (site 0 is the most significant digit).
    pub fn code(&self, index: usize) -> u64 {
        self.codes[index]
    }

    /// Weight of `site` in [`SectorBasis::code`].
    pub fn place_value(&self, site: usize) -> u64 {
        (self.spin.dim() as u64).pow((self.length - 1 - site) as u32)
    }

    pub fn index_of(&self, config: &SpinConfig) -> Option<usize> {
        if config.len() != self.length {
            return None;
        }
        self.index_of.get(&encode(self.spin, config.values())).copied()
    }

    /// Basis index of the configuration obtained by swapping pair `k` of state `index`.
    pub fn pair_swapped_index(&self, index: usize, k: usize) -> usize {
        let mut values = self.configs[index].values().to_vec();
        values.swap(2 * k, 2 * k + 1);
        self.index_of[&encode(self.spin, &values)]
    }

    /// Basis index of the fully swapped partner of state `index`.
    pub fn swapped_index(&self, index: usize) -> usize {
        let swapped = self.configs[index].swapped();
        self.index_of[&encode(self.spin, swapped.values())]
    }

    pub(crate) fn check_site(&self, site: usize) -> Result<()> {
        if site >= self.length {
            return Err(Error::SiteOutOfRange { site, length: self.length });
        }
        Ok(())
    }
}

fn encode(spin: LocalSpin, values: &[i8]) -> u64 {
    let d = spin.dim() as u64;
    values.iter().fold(0u64, |acc, &v| acc * d + spin.level(v) as u64)
}

/// Enumerate the sector of total magnetization `sz`, in descending
/// lexicographic order of the value vector.
pub fn enumerate_sector(length: usize, spin: LocalSpin, sz: i32) -> Result<SectorBasis> {
    check_length(length)?;
    if length > 40 {
        return Err(Error::InvalidArgument(format!("chain length {length} too large to enumerate")));
    }
    if sz.abs() > spin.max_magnetization(length) {
        return Err(Error::EmptySector { length, spin: spin.label(), sz });
    }
    // Target sum in stored units; every stored value lies in [-1, 1].
    let target = match spin {
        LocalSpin::Half => 2 * sz,
        LocalSpin::One => sz,
    };
    let mut configs = Vec::new();
    let mut current = Vec::with_capacity(length);
    fill(spin, length, target, &mut current, &mut configs);
    if configs.is_empty() {
        return Err(Error::EmptySector { length, spin: spin.label(), sz });
    }
    let codes: Vec<u64> = configs.iter().map(|c| encode(spin, c.values())).collect();
    let index_of = codes.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    Ok(SectorBasis { spin, length, sz, configs, codes, index_of })
}

fn fill(spin: LocalSpin, length: usize, remaining: i32, current: &mut Vec<i8>, out: &mut Vec<SpinConfig>) {
    let left = (length - current.len()) as i32;
    if left == 0 {
        if remaining == 0 {
            out.push(SpinConfig(current.clone()));
        }
        return;
    }
    for &v in spin.values() {
        let rest = remaining - i32::from(v);
        if rest.abs() <= left - 1 {
            current.push(v);
            fill(spin, length, rest, current, out);
            current.pop();
        }
    }
}

/// Every non-empty sector of the chain, ordered by ascending magnetization.
pub fn all_sectors(length: usize, spin: LocalSpin) -> Result<Vec<SectorBasis>> {
    let max = spin.max_magnetization(length);
    (-max..=max).map(|sz| enumerate_sector(length, spin, sz)).collect()
}

/// Diagonal of sigma^z_k (spin-1/2) or S^z_k (spin-1) in the sector.
pub fn sigma_z_diagonal(basis: &SectorBasis, site: usize) -> Result<Vec<f64>> {
    basis.check_site(site)?;
    Ok(basis.configs.iter().map(|c| f64::from(c.values()[site])).collect())
}

/// Sigma^x sigma^x + sigma^y sigma^y on bond `(k, k+1)` (S operators for spin-1),
/// with unit coefficient.
pub fn hopping_matrix(basis: &SectorBasis, k: usize) -> Result<Mat<f64>> {
    if k + 1 >= basis.length {
        return Err(Error::SiteOutOfRange { site: k + 1, length: basis.length });
    }
    let dim = basis.dim();
    let mut m = Mat::<f64>::zeros(dim, dim);
    for (col, row, amp) in hopping_elements(basis, k) {
        m[(row, col)] += amp;
    }
    Ok(m)
}

/// Nonzero elements `(column, row, amplitude)` of the XX+YY term on bond `(k, k+1)`.
pub(crate) fn hopping_elements(basis: &SectorBasis, k: usize) -> Vec<(usize, usize, f64)> {
    let spin = basis.spin;
    let s = spin.spin_value();
    let step = spin.raise_step();
    let scale = spin.operator_scale().powi(2);
    // XX + YY = (S+ S- + S- S+) / 2
    let ladder = |m: f64, up: bool| {
        let shifted = if up { m + 1.0 } else { m - 1.0 };
        (s * (s + 1.0) - m * shifted).max(0.0).sqrt()
    };
    let mut out = Vec::new();
    for (col, config) in basis.configs.iter().enumerate() {
        let v = config.values();
        let (a, b) = (v[k], v[k + 1]);
        for (da, db) in [(step, -step), (-step, step)] {
            let (na, nb) = (a + da, b + db);
            if !spin.is_valid(na) || !spin.is_valid(nb) {
                continue;
            }
            let amp = 0.5
                * scale
                * ladder(spin.projection(a), da > 0)
                * ladder(spin.projection(b), db > 0);
            let mut target = v.to_vec();
            target[k] = na;
            target[k + 1] = nb;
            let row = basis.index_of[&encode(spin, &target)];
            out.push((col, row, amp));
        }
    }
    out
}

/// Permutation matrix exchanging the two sites of swap pair `k`.
pub fn pair_swap_matrix(basis: &SectorBasis, k: usize) -> Result<Mat<f64>> {
    if 2 * k + 1 >= basis.length {
        return Err(Error::PairOutOfRange { pair: k, length: basis.length });
    }
    let dim = basis.dim();
    let mut m = Mat::<f64>::zeros(dim, dim);
    for col in 0..dim {
        m[(basis.pair_swapped_index(col, k), col)] = 1.0;
    }
    Ok(m)
}
