//! Solvable-point self checks (`J = epsilon = 0`), compared against the closed forms.

use crate::basis::{all_sectors, enumerate_sector, LocalSpin};
use crate::correlations::sigma_quantifier;
use crate::dynamics::{evolve, InitialState};
use crate::error::Result;
use crate::hamiltonian::{build_floquet, draw_disorder, ModelParams};
use crate::solvable::{cat_pair, exact_sigma, solvable_quasienergies};
use crate::spectral::{circle_distance, diagonalize, pairing_gaps, quasienergies};

const TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn check(name: String, worst: f64, tol: f64) -> Check {
    Check { passed: worst <= tol, detail: format!("worst deviation {worst:.3e} (tolerance {tol:.0e})"), name }
}

/// Run the suite for the given spin and lengths with one disorder draw per length.
pub fn solvable_suite(spin: LocalSpin, lengths: &[usize], seed: u64) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for &l in lengths {
        let params = ModelParams::new(spin, l);
        let realization = draw_disorder(&params, seed)?;
        let mut perm_worst = 0.0f64;
        let mut spectrum_worst = 0.0f64;
        let mut unpaired = 0usize;
        for basis in all_sectors(l, spin)? {
            let u = build_floquet(&params, &realization, &basis)?.matrix;
            for col in 0..basis.dim() {
                let target = basis.swapped_index(col);
                for row in 0..basis.dim() {
                    let expect = if row == target { 1.0 } else { 0.0 };
                    perm_worst = perm_worst.max((u[(row, col)].norm() - expect).abs());
                }
            }
            let numeric = quasienergies(&u)?;
            for mu in solvable_quasienergies(&basis, &realization)? {
                let nearest = numeric.iter().map(|&x| circle_distance(x, mu)).fold(f64::INFINITY, f64::min);
                spectrum_worst = spectrum_worst.max(nearest);
            }
            if numeric.len() > 1 {
                unpaired += pairing_gaps(&numeric)?.deltapi.iter().filter(|&&d| d > 1e-8).count();
            } else {
                unpaired += 1;
            }
        }
        let label = format!("s={spin} L={l}");
        out.push(check(format!("{label}: U_F permutes configurations up to phase"), perm_worst, TOL));
        out.push(check(format!("{label}: quasienergies match the cat-pair closed form"), spectrum_worst, TOL));
        let expect = spin.dim().pow((l / 2) as u32);
        out.push(Check {
            name: format!("{label}: unpaired states equal d^(L/2)"),
            passed: unpaired == expect,
            detail: format!("{unpaired} unpaired, expected {expect}"),
        });

        let initial = match spin {
            LocalSpin::Half => InitialState::Neel,
            LocalSpin::One => InitialState::UpZero,
        };
        let config = initial.config(spin, l)?;
        let basis = enumerate_sector(l, spin, spin.magnetization(config.values()))?;
        let spectrum = diagonalize(&build_floquet(&params, &realization, &basis)?.matrix)?;
        let times: Vec<u64> = (0..=1000).collect();
        let trace = evolve(&spectrum, &basis, &initial, &times)?;
        let z_worst = trace
            .times
            .iter()
            .zip(&trace.z)
            .map(|(&t, &z)| (z - if t % 2 == 0 { trace.z[0] } else { -trace.z[0] }).abs())
            .fold(0.0, f64::max);
        out.push(check(format!("{label}: Z(t) = (-1)^t Z(0) over 1000 periods"), z_worst, TOL));

        if spin == LocalSpin::Half {
            let zero = enumerate_sector(l, spin, 0)?;
            let mut sigma_worst = 0.0f64;
            for config in zero.configs() {
                let pair = cat_pair(spin, config, &realization)?;
                let (plus, minus) = pair.vectors(&zero)?;
                let exact = exact_sigma(spin, config)?;
                for v in std::iter::once(plus).chain(minus) {
                    sigma_worst = sigma_worst.max((sigma_quantifier(&zero, &v)? - exact).abs());
                }
            }
            out.push(check(format!("{label}: cat-state Sigma = I(IL-1)/2"), sigma_worst, TOL));
        }
    }
    Ok(out)
}
