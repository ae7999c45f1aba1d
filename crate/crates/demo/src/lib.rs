//! WebAssembly bindings for the browser demo in `www/`.

use wasm_bindgen::prelude::*;

use swapcrystal::dynamics::InitialState;
use swapcrystal::imbalance::imbalance_pmf as pmf;
use swapcrystal::spectral::{log_gap_means, pairing_gaps, quasienergies};
use swapcrystal::{build_floquet, diagonalize, draw_disorder, enumerate_sector, evolve, LocalSpin, ModelParams};

/// Largest chain the page allows; dense diagonalization above this stalls the tab.
const MAX_LENGTH: usize = 10;

fn spin_of(spin_one: bool) -> LocalSpin {
    if spin_one {
        LocalSpin::One
    } else {
        LocalSpin::Half
    }
}

fn check_length(length: usize, spin: LocalSpin) -> Result<(), String> {
    let cap = if spin == LocalSpin::One { 6 } else { MAX_LENGTH };
    if length > cap {
        return Err(format!("L = {length} is too large for the demo (max {cap})"));
    }
    Ok(())
}

fn params(spin: LocalSpin, length: usize, j: f64, epsilon: f64) -> ModelParams {
    ModelParams::new(spin, length).with_j(j).with_epsilon(epsilon)
}

pub fn z_trace_impl(length: usize, spin_one: bool, j: f64, epsilon: f64, seed: u64, periods: u32) -> Result<Vec<f64>, String> {
    let spin = spin_of(spin_one);
    check_length(length, spin)?;
    let initial = if spin_one { InitialState::UpZero } else { InitialState::Neel };
    let p = params(spin, length, j, epsilon);
    let sz = initial.sector(spin, length).map_err(|e| e.to_string())?;
    let basis = enumerate_sector(length, spin, sz).map_err(|e| e.to_string())?;
    let realization = draw_disorder(&p, seed).map_err(|e| e.to_string())?;
    let u = build_floquet(&p, &realization, &basis).map_err(|e| e.to_string())?;
    let spectrum = diagonalize(&u.matrix).map_err(|e| e.to_string())?;
    let times: Vec<u64> = (0..=u64::from(periods)).collect();
    let trace = evolve(&spectrum, &basis, &initial, &times).map_err(|e| e.to_string())?;
    Ok(trace.z)
}

/// `[<r>, ell_Delta, mu_0, mu_1, ...]` of the zero-magnetization sector.
pub fn spectrum_impl(length: usize, spin_one: bool, j: f64, epsilon: f64, seed: u64) -> Result<Vec<f64>, String> {
    let spin = spin_of(spin_one);
    check_length(length, spin)?;
    let p = params(spin, length, j, epsilon);
    let basis = enumerate_sector(length, spin, 0).map_err(|e| e.to_string())?;
    let realization = draw_disorder(&p, seed).map_err(|e| e.to_string())?;
    let u = build_floquet(&p, &realization, &basis).map_err(|e| e.to_string())?;
    let mu = quasienergies(&u.matrix).map_err(|e| e.to_string())?;
    let r = swapcrystal::spectral::level_spacing_ratio(&mu).map_err(|e| e.to_string())?;
    let (pi, zero) = log_gap_means(&pairing_gaps(&mu).map_err(|e| e.to_string())?);
    let mut out = vec![r, pi - zero];
    out.extend(mu);
    Ok(out)
}

/// Order parameter Z(t), t = 0..=periods, from the Neel (spin-1/2) or Up-Zero (spin-1) state.
#[wasm_bindgen]
pub fn z_trace(length: usize, spin_one: bool, j: f64, epsilon: f64, seed: u64, periods: u32) -> Result<Vec<f64>, JsError> {
    z_trace_impl(length, spin_one, j, epsilon, seed, periods).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn spectrum(length: usize, spin_one: bool, j: f64, epsilon: f64, seed: u64) -> Result<Vec<f64>, JsError> {
    spectrum_impl(length, spin_one, j, epsilon, seed).map_err(|e| JsError::new(&e))
}

/// Exact local-imbalance pmf on `0, 2/L, ..., 1`.
#[wasm_bindgen]
pub fn imbalance_pmf(length: usize, d: u32) -> Result<Vec<f64>, JsError> {
    pmf(length, d).map(|p| p.pmf).map_err(|e| JsError::new(&e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solvable_trace_alternates() {
        let z = z_trace_impl(6, false, 0.0, 0.0, 1, 20).unwrap();
        assert_eq!(z.len(), 21);
        for (t, v) in z.iter().enumerate() {
            let expect = if t % 2 == 0 { 2.0 } else { -2.0 };
            assert!((v - expect).abs() < 1e-10);
        }
        let z1 = z_trace_impl(4, true, 0.0, 0.0, 1, 4).unwrap();
        assert!((z1[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn spectrum_layout() {
        let s = spectrum_impl(6, false, 0.5, 0.0, 2).unwrap();
        assert_eq!(s.len(), 2 + 20);
        assert!(s[0] > 0.0 && s[0] < 1.0);
        assert!(spectrum_impl(14, false, 0.5, 0.0, 2).is_err());
    }

    #[test]
    fn pmf_through_bindings() {
        let p = pmf(8, 2).unwrap().pmf;
        assert_eq!(p.len(), 5);
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }
}
