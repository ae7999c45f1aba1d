//! Sector operators against full tensor-product constructions.

mod common;

use common::*;
use faer::{c64, Mat};
use swapcrystal::basis::{all_sectors, hopping_matrix, pair_swap_matrix};
use swapcrystal::hamiltonian::{build_h_int, build_kick_unitary, KickUnitary};
use swapcrystal::{build_floquet, draw_disorder, enumerate_sector, LocalSpin, ModelParams};

const SPINS: [(LocalSpin, &[usize]); 2] = [(LocalSpin::Half, &[2, 4, 6, 8]), (LocalSpin::One, &[2, 4, 6])];

#[test]
fn hopping_and_swap_match_tensor_products() {
    for (spin, lengths) in SPINS {
        for &l in lengths.iter().filter(|&&l| l <= 6) {
            let hops: Vec<_> = (0..l - 1).map(|k| full_hopping(spin, l, k)).collect();
            let swaps: Vec<_> = (0..l / 2).map(|k| full_swap(spin, l, k)).collect();
            for basis in all_sectors(l, spin).unwrap() {
                for (k, full) in hops.iter().enumerate() {
                    let sector = real_to_complex(&hopping_matrix(&basis, k).unwrap());
                    assert!(max_diff(&sector, &restrict(full, &basis)) < 1e-12, "hop s={spin} L={l} k={k}");
                }
                for (k, full) in swaps.iter().enumerate() {
                    let sector = real_to_complex(&pair_swap_matrix(&basis, k).unwrap());
                    assert!(max_diff(&sector, &restrict(full, &basis)) < 1e-12, "swap s={spin} L={l} k={k}");
                }
            }
        }
    }
}

#[test]
fn interaction_hamiltonian_matches_tensor_product() {
    for (spin, lengths) in SPINS {
        for &l in lengths.iter().filter(|&&l| l <= 6) {
            let params = ModelParams::new(spin, l).with_j(0.37).with_alpha(1.3);
            let r = draw_disorder(&params, 11).unwrap();
            let full = full_h_int(&params, &r);
            for basis in all_sectors(l, spin).unwrap() {
                let sector = real_to_complex(&build_h_int(&params, &r, &basis).unwrap());
                assert!(max_diff(&sector, &restrict(&full, &basis)) < 1e-10, "s={spin} L={l} Sz={}", basis.sz());
            }
        }
    }
}

#[test]
fn kick_factorization_matches_matrix_exponential() {
    for (spin, lengths) in SPINS {
        for &l in lengths {
            for eps in [0.0, 0.03, -0.2] {
                let full_k = full_kick_generator(spin, l, eps);
                let params = ModelParams::new(spin, l).with_epsilon(eps);
                for basis in all_sectors(l, spin).unwrap() {
                    let oracle = expm_minus_i(&restrict(&full_k, &basis));
                    let kick = build_kick_unitary(&params, &basis).unwrap();
                    let diff = max_diff(&kick, &oracle);
                    assert!(diff < 1e-10, "s={spin} L={l} eps={eps} Sz={}: {diff:e}", basis.sz());
                }
            }
        }
    }
}

#[test]
fn kick_generator_conserves_magnetization() {
    for (spin, l) in [(LocalSpin::Half, 6), (LocalSpin::One, 4)] {
        let full_k = full_kick_generator(spin, l, 0.1);
        let d = spin.dim();
        let sz = |mut i: usize| {
            let mut m = 0i32;
            for _ in 0..l {
                m += i32::from(spin.values()[i % d]);
                i /= d;
            }
            m
        };
        for i in 0..full_k.nrows() {
            for j in 0..full_k.ncols() {
                if sz(i) != sz(j) {
                    assert!(full_k[(i, j)].norm() < 1e-14);
                }
            }
        }
    }
}

#[test]
fn unperturbed_spin_half_kick_is_phased_permutation() {
    for l in [2, 4, 6, 8] {
        let params = ModelParams::new(LocalSpin::Half, l);
        for basis in all_sectors(l, LocalSpin::Half).unwrap() {
            let kick = build_kick_unitary(&params, &basis).unwrap();
            for col in 0..basis.dim() {
                let target = basis.swapped_index(col);
                for row in 0..basis.dim() {
                    let expect = if row == target { 1.0 } else { 0.0 };
                    assert!((kick[(row, col)].norm() - expect).abs() < 1e-12);
                }
            }
        }
    }
}

#[test]
fn pair_factor_matches_two_site_exponential() {
    let (pi4, pi2) = (std::f64::consts::FRAC_PI_4, std::f64::consts::FRAC_PI_2);
    for eps in [0.0, 0.01, -0.07, 0.4] {
        let half = expm_minus_i(&scaled(&pair_dot(LocalSpin::Half), c(pi4 + eps, 0.0)));
        assert!(max_diff(&KickUnitary::new(LocalSpin::Half, eps).pair_factor(), &half) < 1e-12);

        let dot = pair_dot(LocalSpin::One);
        let gen = &dot * &dot + &dot;
        let one = expm_minus_i(&scaled(&gen, c(pi2 + eps, 0.0)));
        assert!(max_diff(&KickUnitary::new(LocalSpin::One, eps).pair_factor(), &one) < 1e-12);
    }
}

#[test]
fn pair_operator_identities() {
    // sigma.sigma = 2P - 1 and (S.S)^2 + S.S = P + 1
    let p2 = full_swap(LocalSpin::Half, 2, 0);
    let lhs = pair_dot(LocalSpin::Half);
    let rhs = scaled(&p2, c(2.0, 0.0)) - identity(4);
    assert!(max_diff(&lhs, &rhs) < 1e-14);
    let p3 = full_swap(LocalSpin::One, 2, 0);
    let dot = pair_dot(LocalSpin::One);
    let lhs = &dot * &dot + &dot;
    assert!(max_diff(&lhs, &(p3 + identity(9))) < 1e-13);
}

#[test]
fn floquet_operator_matches_full_space_product() {
    for spin in [LocalSpin::Half, LocalSpin::One] {
        let l = 4;
        let params = ModelParams::new(spin, l).with_j(0.1).with_epsilon(0.02);
        let r = draw_disorder(&params, 5).unwrap();
        let full_h = full_h_int(&params, &r);
        let full_k = full_kick_generator(spin, l, params.epsilon);
        let full_u: Mat<c64> = expm_minus_i(&full_k) * expm_minus_i(&full_h);
        for basis in all_sectors(l, spin).unwrap() {
            let u = build_floquet(&params, &r, &basis).unwrap().matrix;
            let diff = max_diff(&u, &restrict(&full_u, &basis));
            assert!(diff < 1e-8, "s={spin} Sz={}: {diff:e}", basis.sz());
        }
    }
}

#[test]
fn floquet_operator_is_unitary() {
    let params = ModelParams::new(LocalSpin::One, 6).with_j(0.8).with_epsilon(0.1);
    let r = draw_disorder(&params, 2).unwrap();
    let basis = enumerate_sector(6, LocalSpin::One, 0).unwrap();
    let u = build_floquet(&params, &r, &basis).unwrap().matrix;
    let prod = u.adjoint() * &u;
    assert!(max_diff(&prod, &identity(basis.dim())) < 1e-10);
}
