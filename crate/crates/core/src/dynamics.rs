//! Stroboscopic evolution from classical product states, the order parameter
//! Z(t), decay times and the three-term decomposition of an observable.
//!
//! States are propagated spectrally, `|psi(t)> = sum_b R_b exp(-i mu_b t) |psi_b>`,
//! so any stroboscopic time costs one `dim x dim` product.

use std::fmt;
use std::str::FromStr;

use faer::{c64, Mat};

use crate::basis::{LocalSpin, SectorBasis, SpinConfig};
use crate::error::{Error, Result};
use crate::spectral::{FloquetSpectrum, PairingGaps};

/// Times evaluated together in one matrix product.
const CHUNK: usize = 256;

/// A classical initial state, either explicit or one of the named presets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InitialState {
    Config(SpinConfig),
    /// `|+-+-...>`
    Neel,
    /// Antiferromagnetic on the first `2 floor(L/4)` sites, `+` elsewhere.
    HalfNeel,
    /// `|+1, 0, +1, 0, ...>`, spin-1 only.
    UpZero,
}

impl InitialState {
    pub fn config(&self, spin: LocalSpin, length: usize) -> Result<SpinConfig> {
        let values = match self {
            InitialState::Config(c) => {
                if c.len() != length {
                    return Err(Error::DimensionMismatch { expected: length, found: c.len() });
                }
                return SpinConfig::new(spin, c.values().to_vec());
            }
            InitialState::Neel => (0..length).map(|k| if k % 2 == 0 { 1 } else { -1 }).collect(),
            InitialState::HalfNeel => {
                let af = 2 * (length / 4);
                (0..length).map(|k| if k < af && k % 2 == 1 { -1 } else { 1 }).collect()
            }
            InitialState::UpZero => {
                if spin != LocalSpin::One {
                    return Err(Error::InvalidConfiguration("Up-Zero needs spin-1".into()));
                }
                (0..length).map(|k| if k % 2 == 0 { 1 } else { 0 }).collect()
            }
        };
        SpinConfig::new(spin, values)
    }

    /// Magnetization sector the state lives in.
    pub fn sector(&self, spin: LocalSpin, length: usize) -> Result<i32> {
        Ok(spin.magnetization(self.config(spin, length)?.values()))
    }
}

impl fmt::Display for InitialState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InitialState::Config(c) => {
                for v in c.values() {
                    f.write_str(match v {
                        1 => "+",
                        -1 => "-",
                        _ => "0",
                    })?;
                }
                Ok(())
            }
            InitialState::Neel => f.write_str("neel"),
            InitialState::HalfNeel => f.write_str("half-neel"),
            InitialState::UpZero => f.write_str("up-zero"),
        }
    }
}

/// Parses `neel`, `half-neel`, `up-zero`, or an explicit string over `+ - 0`.
/// Explicit strings are validated against the spin when expanded.
impl FromStr for InitialState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "neel" => return Ok(InitialState::Neel),
            "half-neel" | "halfneel" => return Ok(InitialState::HalfNeel),
            "up-zero" | "upzero" => return Ok(InitialState::UpZero),
            _ => {}
        }
        let values = s
            .chars()
            .map(|c| match c {
                '+' => Ok(1),
                '-' => Ok(-1),
                '0' => Ok(0),
                _ => Err(Error::InvalidConfiguration(format!("unknown initial state {s:?}"))),
            })
            .collect::<Result<Vec<i8>>>()?;
        let spin = if values.contains(&0) { LocalSpin::One } else { LocalSpin::Half };
        Ok(InitialState::Config(SpinConfig::new(spin, values)?))
    }
}

/// Stroboscopic samples of one evolution.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservableTrace {
    pub times: Vec<u64>,
    pub z: Vec<f64>,
    /// `magnetization[t][k] = <S_k^z(t)>` in physical units (bounded by s).
    pub magnetization: Vec<Vec<f64>>,
    pub norm: Vec<f64>,
}

/// `Z(t) = (2/L) sum_k sign(m_{2k}(0) - m_{2k+1}(0)) (m_{2k}(t) - m_{2k+1}(t))`
/// on z expectations in the stored convention (sigma^z for spin-1/2).
pub fn z_observable(m_t: &[f64], m_0: &[f64]) -> f64 {
    let total: f64 = m_t
        .chunks_exact(2)
        .zip(m_0.chunks_exact(2))
        .map(|(now, init)| {
            let d0 = init[0] - init[1];
            let sign = if d0 > 0.0 {
                1.0
            } else if d0 < 0.0 {
                -1.0
            } else {
                0.0
            };
            sign * (now[0] - now[1])
        })
        .sum();
    2.0 * total / m_t.len() as f64
}

/// Spectral propagator for one initial product state.
#[derive(Debug, Clone)]
pub struct Propagator {
    spin: LocalSpin,
    mu: Vec<f64>,
    states: Mat<c64>,
    /// `R_b = <psi_b | psi(0)>`
    overlaps: Vec<c64>,
    /// `site_values[(k, i)]`: stored z value of site k in basis state i.
    site_values: Mat<f64>,
    initial_values: Vec<f64>,
}

impl Propagator {
    pub fn new(spectrum: &FloquetSpectrum, basis: &SectorBasis, initial: &SpinConfig) -> Result<Self> {
        if spectrum.dim() != basis.dim() {
            return Err(Error::DimensionMismatch { expected: basis.dim(), found: spectrum.dim() });
        }
        if initial.len() != basis.length() {
            return Err(Error::DimensionMismatch { expected: basis.length(), found: initial.len() });
        }
        let index = basis.index_of(initial).ok_or(Error::SectorMismatch)?;
        let overlaps = (0..basis.dim()).map(|b| spectrum.states[(index, b)].conj()).collect();
        let site_values = Mat::from_fn(basis.length(), basis.dim(), |k, i| f64::from(basis.config(i).values()[k]));
        Ok(Propagator {
            spin: basis.spin(),
            mu: spectrum.mu.clone(),
            states: spectrum.states.clone(),
            overlaps,
            site_values,
            initial_values: initial.values().iter().map(|&v| f64::from(v)).collect(),
        })
    }

    pub fn dim(&self) -> usize {
        self.mu.len()
    }

    pub fn length(&self) -> usize {
        self.initial_values.len()
    }

    /// Amplitudes `R_b`.
    pub fn overlaps(&self) -> &[c64] {
        &self.overlaps
    }

    /// `|psi(t)>` in the sector basis.
    pub fn state_at(&self, t: u64) -> Vec<c64> {
        let coeffs = self.phased(&[t]);
        let psi = &self.states * &coeffs;
        psi.col(0).iter().copied().collect()
    }

    fn phased(&self, times: &[u64]) -> Mat<c64> {
        Mat::from_fn(self.dim(), times.len(), |b, j| {
            self.overlaps[b] * c64::cis(-phase_mod(self.mu[b], times[j]))
        })
    }

    /// Stored-convention z expectations (rows: sites, columns: times) and norms.
    fn sample_chunk(&self, times: &[u64]) -> (Mat<f64>, Vec<f64>) {
        let psi = &self.states * self.phased(times);
        let probs = Mat::<f64>::from_fn(psi.nrows(), psi.ncols(), |i, j| psi[(i, j)].norm_sqr());
        let norms = (0..probs.ncols()).map(|j| probs.col(j).iter().sum::<f64>().sqrt()).collect();
        (&self.site_values * &probs, norms)
    }

    /// Full trace at the requested times. `times` must start at 0 and increase strictly.
    pub fn sample(&self, times: &[u64]) -> Result<ObservableTrace> {
        check_times(times)?;
        let scale = self.spin.operator_scale();
        let mut trace = ObservableTrace {
            times: times.to_vec(),
            z: Vec::with_capacity(times.len()),
            magnetization: Vec::with_capacity(times.len()),
            norm: Vec::with_capacity(times.len()),
        };
        for chunk in times.chunks(CHUNK) {
            let (m, norms) = self.sample_chunk(chunk);
            for j in 0..chunk.len() {
                let stored: Vec<f64> = m.col(j).iter().copied().collect();
                trace.z.push(z_observable(&stored, &self.initial_values));
                trace.magnetization.push(stored.iter().map(|x| x / scale).collect());
            }
            trace.norm.extend(norms);
        }
        Ok(trace)
    }

    /// Z(t) alone at many times.
    pub fn z_series(&self, times: &[u64]) -> Vec<f64> {
        let mut out = Vec::with_capacity(times.len());
        for chunk in times.chunks(CHUNK) {
            let (m, _) = self.sample_chunk(chunk);
            for j in 0..chunk.len() {
                let stored: Vec<f64> = m.col(j).iter().copied().collect();
                out.push(z_observable(&stored, &self.initial_values));
            }
        }
        out
    }
}

/// `mu * t` reduced mod 2 pi without forming the large product directly.
fn phase_mod(mu: f64, t: u64) -> f64 {
    // split t so that each partial product stays well inside f64 precision
    const SPLIT: u64 = 1 << 20;
    let (hi, lo) = ((t / SPLIT) as f64, (t % SPLIT) as f64);
    let tau = std::f64::consts::TAU;
    ((mu * SPLIT as f64).rem_euclid(tau) * hi).rem_euclid(tau) + (mu * lo).rem_euclid(tau)
}

fn check_times(times: &[u64]) -> Result<()> {
    if times.first() != Some(&0) {
        return Err(Error::InvalidSchedule("times must start at t = 0".into()));
    }
    if times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidSchedule("times must be strictly increasing".into()));
    }
    Ok(())
}

/// Evolve `initial` with the Floquet states of `spectrum` and sample at `times`.
pub fn evolve(spectrum: &FloquetSpectrum, basis: &SectorBasis, initial: &InitialState, times: &[u64]) -> Result<ObservableTrace> {
    let config = initial.config(basis.spin(), basis.length())?;
    Propagator::new(spectrum, basis, &config)?.sample(times)
}

/// First time the sign alternation of Z fails.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DecayTime {
    pub tau: u64,
    pub stride: u64,
    pub censored: bool,
}

/// Period doubling predicts `sign Z(t) = (-1)^n sign Z(t-n)`; a violation is
/// `(-1)^n Z(t-n) Z(t) < 0`.
pub fn alternation_violated(previous: f64, current: f64, stride: u64) -> bool {
    let parity = if stride % 2 == 0 { 1.0 } else { -1.0 };
    parity * previous * current < 0.0
}

/// Decay time of a trace sampled at `0, n, 2n, ...`.
pub fn decay_time(times: &[u64], z: &[f64], stride: u64) -> Result<DecayTime> {
    if times.len() != z.len() {
        return Err(Error::DimensionMismatch { expected: times.len(), found: z.len() });
    }
    if stride == 0 {
        return Err(Error::InvalidSchedule("stride must be positive".into()));
    }
    let horizon = *times.last().ok_or_else(|| Error::InvalidSchedule("empty trace".into()))?;
    if stride > horizon {
        return Err(Error::InvalidSchedule(format!("stride {stride} exceeds horizon {horizon}")));
    }
    if times.iter().enumerate().any(|(i, &t)| t != i as u64 * stride) {
        return Err(Error::InvalidSchedule(format!("times are not consecutive multiples of {stride}")));
    }
    for i in 1..z.len() {
        if alternation_violated(z[i - 1], z[i], stride) {
            return Ok(DecayTime { tau: times[i], stride, censored: false });
        }
    }
    Ok(DecayTime { tau: horizon, stride, censored: true })
}

/// Decay time found by sampling `0, n, 2n, ...` chunk by chunk, stopping at
/// the first violation. The horizon is rounded down to a multiple of `stride`.
pub fn scan_decay_time(propagator: &Propagator, stride: u64, horizon: u64) -> Result<DecayTime> {
    if stride == 0 || stride > horizon {
        return Err(Error::InvalidSchedule(format!("stride {stride} must lie in 1..={horizon}")));
    }
    let last = horizon / stride;
    let mut previous = None;
    let mut k = 0u64;
    while k <= last {
        let end = (k + CHUNK as u64 - 1).min(last);
        let times: Vec<u64> = (k..=end).map(|i| i * stride).collect();
        for (t, z) in times.iter().zip(propagator.z_series(&times)) {
            if let Some(p) = previous {
                if alternation_violated(p, z, stride) {
                    return Ok(DecayTime { tau: *t, stride, censored: false });
                }
            }
            previous = Some(z);
        }
        k = end + 1;
    }
    Ok(DecayTime { tau: last * stride, stride, censored: true })
}

/// Stroboscopic sampling plans.
#[derive(Debug, Clone, PartialEq)]
pub enum Schedule {
    /// `0, n, 2n, ...` up to the horizon.
    Strided { stride: u64, horizon: u64 },
    /// Every period up to `dense`, then `per_decade` log-spaced points up to the horizon.
    Hybrid { dense: u64, per_decade: u32, horizon: u64 },
    Explicit(Vec<u64>),
}

impl Schedule {
    pub fn times(&self) -> Result<Vec<u64>> {
        let times = match self {
            Schedule::Strided { stride, horizon } => {
                if *stride == 0 {
                    return Err(Error::InvalidSchedule("stride must be positive".into()));
                }
                (0..=horizon / stride).map(|i| i * stride).collect()
            }
            Schedule::Hybrid { dense, per_decade, horizon } => {
                if *per_decade == 0 {
                    return Err(Error::InvalidSchedule("per_decade must be positive".into()));
                }
                let dense = (*dense).min(*horizon);
                let mut times: Vec<u64> = (0..=dense).collect();
                let mut x = (dense.max(1) as f64).log10();
                let step = 1.0 / f64::from(*per_decade);
                loop {
                    x += step;
                    let t = 10f64.powf(x).round() as u64;
                    if t > *horizon {
                        break;
                    }
                    if t > *times.last().unwrap() {
                        times.push(t);
                    }
                }
                if *times.last().unwrap() != *horizon {
                    times.push(*horizon);
                }
                times
            }
            Schedule::Explicit(t) => t.clone(),
        };
        check_times(&times)?;
        Ok(times)
    }
}

/// Stride keeping the sampling step below 1% of the spread of decay times.
pub fn stride_for_spread(tau_stddev: f64) -> u64 {
    ((0.01 * tau_stddev).floor() as u64).max(1)
}

/// `<O(t)> = sum_{a,b} A_ab exp(i (mu_a - mu_b) t)` with
/// `A_ab = R_a^* R_b <psi_a|O|psi_b>`, split into its diagonal,
/// period-doubling (`b` the pi-partner of `a`) and remaining parts.
#[derive(Debug, Clone)]
pub struct ObservableDecomposition {
    pub mu: Vec<f64>,
    pub amplitudes: Mat<c64>,
    /// Mutual pi-partner of each state, if any.
    pub partner: Vec<Option<usize>>,
    /// States whose nearest pi-shifted level does not point back at them.
    /// Their terms are counted as off-diagonal.
    pub non_mutual: Vec<usize>,
}

impl ObservableDecomposition {
    fn term(&self, a: usize, b: usize, t: f64) -> c64 {
        self.amplitudes[(a, b)] * c64::cis((self.mu[a] - self.mu[b]) * t)
    }

    pub fn diagonal(&self) -> f64 {
        (0..self.mu.len()).map(|a| self.amplitudes[(a, a)].re).sum()
    }

    /// Sum of the period-doubling amplitudes `A_{a, partner(a)}`.
    pub fn period_doubling_amplitude(&self) -> f64 {
        self.partner
            .iter()
            .enumerate()
            .filter_map(|(a, p)| p.map(|b| self.amplitudes[(a, b)]))
            .sum::<c64>()
            .re
    }

    pub fn period_doubling(&self, t: f64) -> f64 {
        let mut z = c64::new(0.0, 0.0);
        for (a, p) in self.partner.iter().enumerate() {
            if let Some(b) = *p {
                z += self.term(a, b, t);
            }
        }
        z.re
    }

    pub fn off_diagonal(&self, t: f64) -> f64 {
        let n = self.mu.len();
        let mut z = c64::new(0.0, 0.0);
        for a in 0..n {
            for b in 0..n {
                if a != b && self.partner[a] != Some(b) {
                    z += self.term(a, b, t);
                }
            }
        }
        z.re
    }

    pub fn total(&self, t: f64) -> f64 {
        self.diagonal() + self.period_doubling(t) + self.off_diagonal(t)
    }
}

/// Decompose a z-diagonal observable (given by its diagonal in the sector basis).
pub fn decompose_observable(
    spectrum: &FloquetSpectrum,
    basis: &SectorBasis,
    initial: &InitialState,
    observable: &[f64],
    gaps: &PairingGaps,
) -> Result<ObservableDecomposition> {
    let n = basis.dim();
    if observable.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: observable.len() });
    }
    if gaps.partner.len() != spectrum.dim() {
        return Err(Error::DimensionMismatch { expected: spectrum.dim(), found: gaps.partner.len() });
    }
    let config = initial.config(basis.spin(), basis.length())?;
    let propagator = Propagator::new(spectrum, basis, &config)?;
    let r = propagator.overlaps();
    let v = &spectrum.states;
    let ov = Mat::<c64>::from_fn(n, n, |i, b| v[(i, b)] * observable[i]);
    let o = v.adjoint() * &ov;
    let amplitudes = Mat::from_fn(n, n, |a, b| r[a].conj() * r[b] * o[(a, b)]);
    let mut partner = vec![None; n];
    let mut non_mutual = Vec::new();
    for a in 0..n {
        let b = gaps.partner[a];
        if b != a && gaps.partner[b] == a {
            partner[a] = Some(b);
        } else {
            non_mutual.push(a);
        }
    }
    Ok(ObservableDecomposition { mu: spectrum.mu.clone(), amplitudes, partner, non_mutual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::enumerate_sector;
    use crate::hamiltonian::{build_floquet, draw_disorder, ModelParams};
    use crate::spectral::diagonalize;

    #[test]
    fn presets_expand() {
        let s = LocalSpin::Half;
        assert_eq!(InitialState::Neel.config(s, 4).unwrap().values(), &[1, -1, 1, -1]);
        assert_eq!(InitialState::HalfNeel.config(s, 10).unwrap().values(), &[1, -1, 1, -1, 1, 1, 1, 1, 1, 1]);
        assert_eq!(InitialState::HalfNeel.config(s, 6).unwrap().values(), &[1, -1, 1, 1, 1, 1]);
        assert_eq!(InitialState::UpZero.config(LocalSpin::One, 4).unwrap().values(), &[1, 0, 1, 0]);
        assert!(InitialState::UpZero.config(s, 4).is_err());
        assert_eq!(InitialState::HalfNeel.sector(s, 10).unwrap(), 3);
        assert_eq!(InitialState::UpZero.sector(LocalSpin::One, 6).unwrap(), 3);
    }

    #[test]
    fn parse_initial_state() {
        assert_eq!("Neel".parse::<InitialState>().unwrap(), InitialState::Neel);
        assert_eq!("half-neel".parse::<InitialState>().unwrap(), InitialState::HalfNeel);
        let c: InitialState = "+0-0".parse().unwrap();
        assert_eq!(c.config(LocalSpin::One, 4).unwrap().values(), &[1, 0, -1, 0]);
        assert!(c.config(LocalSpin::Half, 4).is_err());
        assert!("+x".parse::<InitialState>().is_err());
        assert_eq!(c.to_string(), "+0-0");
    }

    #[test]
    fn z_at_time_zero() {
        assert_eq!(z_observable(&[1.0, -1.0, 1.0, -1.0], &[1.0, -1.0, 1.0, -1.0]), 2.0);
        assert_eq!(z_observable(&[1.0, 0.0, 1.0, 0.0], &[1.0, 0.0, 1.0, 0.0]), 1.0);
        assert_eq!(z_observable(&[1.0; 4], &[1.0; 4]), 0.0);
        // aligned initial pairs contribute nothing later either
        assert_eq!(z_observable(&[0.3, -0.3, 1.0, -1.0], &[1.0, 1.0, 1.0, -1.0]), 1.0);
    }

    #[test]
    fn synthetic_decay() {
        let times: Vec<u64> = (0..300).collect();
        let z: Vec<f64> = times.iter().map(|&t| if t < 100 { (-1f64).powi(t as i32) } else { 1.0 }).collect();
        // Z(99) = -1, Z(100) = +1 still alternates; Z(100) Z(101) > 0 is the first failure
        let d = decay_time(&times, &z, 1).unwrap();
        assert_eq!(d, DecayTime { tau: 101, stride: 1, censored: false });
    }

    #[test]
    fn alternating_trace_is_censored_for_any_stride() {
        for n in 1..6u64 {
            let times: Vec<u64> = (0..50).map(|i| i * n).collect();
            let z: Vec<f64> = times.iter().map(|&t| if t % 2 == 0 { 1.5 } else { -1.5 }).collect();
            let d = decay_time(&times, &z, n).unwrap();
            assert!(d.censored);
            assert_eq!(d.tau, 49 * n);
        }
        assert!(decay_time(&[0, 1], &[1.0, -1.0], 3).is_err());
        assert!(decay_time(&[0, 2, 3], &[1.0, 1.0, 1.0], 2).is_err());
    }

    #[test]
    fn schedules() {
        assert_eq!(Schedule::Strided { stride: 3, horizon: 10 }.times().unwrap(), vec![0, 3, 6, 9]);
        let h = Schedule::Hybrid { dense: 10, per_decade: 4, horizon: 1000 }.times().unwrap();
        assert_eq!(&h[..11], &(0..=10).collect::<Vec<_>>()[..]);
        assert_eq!(*h.last().unwrap(), 1000);
        assert!(h.windows(2).all(|w| w[1] > w[0]));
        assert!(Schedule::Explicit(vec![1, 2]).times().is_err());
        assert!(Schedule::Explicit(vec![0, 2, 2]).times().is_err());
        assert_eq!(stride_for_spread(50.0), 1);
        assert_eq!(stride_for_spread(12345.0), 123);
    }

    #[test]
    fn phase_reduction() {
        let mu = 2.345678901;
        for t in [0u64, 1, 12345, 1 << 20, (1 << 22) + 7] {
            let direct = (mu * t as f64).rem_euclid(std::f64::consts::TAU);
            let reduced = phase_mod(mu, t).rem_euclid(std::f64::consts::TAU);
            assert!(crate::spectral::circle_distance(direct, reduced) < 1e-8, "t = {t}");
        }
    }

    #[test]
    fn solvable_neel_alternates() {
        let p = ModelParams::new(LocalSpin::Half, 6);
        let b = enumerate_sector(6, LocalSpin::Half, 0).unwrap();
        let r = draw_disorder(&p, 11).unwrap();
        let s = diagonalize(&build_floquet(&p, &r, &b).unwrap().matrix).unwrap();
        let times: Vec<u64> = (0..40).collect();
        let tr = evolve(&s, &b, &InitialState::Neel, &times).unwrap();
        for (t, z) in tr.times.iter().zip(&tr.z) {
            let expect = if t % 2 == 0 { 2.0 } else { -2.0 };
            assert!((z - expect).abs() < 1e-10);
        }
        let other = enumerate_sector(6, LocalSpin::Half, 1).unwrap();
        assert!(matches!(evolve(&s, &other, &InitialState::Neel, &times), Err(_)));
        assert!(evolve(&s, &b, &InitialState::Neel, &[1, 2]).is_err());
    }
}
