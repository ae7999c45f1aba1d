//! Disorder draws, the interaction Hamiltonian, the swap kick and the
//! one-period Floquet operator `U_F = exp(-iK) exp(-iH_int)`.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use faer::{c64, Mat, Side};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::basis::{check_length, hopping_elements, LocalSpin, SectorBasis};
use crate::error::{Error, Result};

/// Parameters of either chain model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub spin: LocalSpin,
    pub length: usize,
    /// Nearest-neighbour XX+YY amplitude.
    pub j: f64,
    /// Scale of the random ZZ couplings, drawn from `[V/2, 3V/2]`.
    pub v: f64,
    /// Half-width of the random longitudinal fields.
    pub h: f64,
    /// Power-law exponent of the ZZ couplings.
    pub alpha: f64,
    /// Swap imperfection.
    pub epsilon: f64,
}

impl ModelParams {
    pub const DEFAULT_V: f64 = 3.0;
    pub const DEFAULT_H: f64 = 16.0;

    /// Solvable point (`J = epsilon = 0`) with the default disorder scales and `alpha = 0.5`.
    pub fn new(spin: LocalSpin, length: usize) -> Self {
        ModelParams {
            spin,
            length,
            j: 0.0,
            v: Self::DEFAULT_V,
            h: Self::DEFAULT_H,
            alpha: 0.5,
            epsilon: 0.0,
        }
    }

    pub fn with_j(mut self, j: f64) -> Self {
        self.j = j;
        self
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Self {
        self.epsilon = epsilon;
        self
    }

    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = alpha;
        self
    }

    pub fn with_disorder(mut self, v: f64, h: f64) -> Self {
        self.v = v;
        self.h = h;
        self
    }

    pub fn validate(&self) -> Result<()> {
        check_length(self.length)?;
        let finite = [self.j, self.v, self.h, self.alpha, self.epsilon].iter().all(|x| x.is_finite());
        if !finite {
            return Err(Error::InvalidParams("non-finite parameter".into()));
        }
        if self.j < 0.0 || self.v < 0.0 || self.h < 0.0 {
            return Err(Error::InvalidParams("J, V and h must be non-negative".into()));
        }
        if self.alpha <= 0.0 {
            return Err(Error::InvalidParams("alpha must be positive".into()));
        }
        Ok(())
    }

    fn check_basis(&self, basis: &SectorBasis) -> Result<()> {
        if basis.length() != self.length {
            return Err(Error::DimensionMismatch { expected: self.length, found: basis.length() });
        }
        if basis.spin() != self.spin {
            return Err(Error::InvalidArgument(format!(
                "basis is spin-{} but the model is spin-{}",
                basis.spin(),
                self.spin
            )));
        }
        Ok(())
    }
}

/// Kac normalization `N_{L,alpha}` of the power-law couplings.
pub fn kac_constant(length: usize, alpha: f64) -> f64 {
    let l = length as f64;
    if alpha == 1.0 {
        l.ln()
    } else if alpha > 1.0 {
        1.0
    } else {
        l.powf(1.0 - alpha)
    }
}

/// SplitMix64 output function.
pub fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Seed of one stream derived from a master seed and a sequence of labels
/// (grid-point hash, realization index, ...).
pub fn derive_seed(master: u64, labels: &[u64]) -> u64 {
    labels.iter().fold(splitmix64(master), |acc, &label| splitmix64(acc ^ splitmix64(label)))
}

/// One draw of the random couplings and fields.
#[derive(Debug, Clone, PartialEq)]
pub struct DisorderRealization {
    length: usize,
    /// Raw couplings before power-law decay and Kac normalization, row-major `L x L`, only `k < q` set.
    raw_couplings: Vec<f64>,
    couplings: Vec<f64>,
    fields: Vec<f64>,
    seed: u64,
}

impl DisorderRealization {
    /// Build a realization from explicit couplings (`couplings[k][q]`, `k < q`, already normalized)
    /// and fields.
    pub fn from_parts(couplings: Vec<Vec<f64>>, fields: Vec<f64>) -> Result<Self> {
        let length = fields.len();
        if couplings.len() != length || couplings.iter().any(|row| row.len() != length) {
            return Err(Error::DimensionMismatch { expected: length, found: couplings.len() });
        }
        let mut flat = vec![0.0; length * length];
        for k in 0..length {
            for q in k + 1..length {
                flat[k * length + q] = couplings[k][q];
            }
        }
        Ok(DisorderRealization {
            length,
            raw_couplings: flat.clone(),
            couplings: flat,
            fields,
            seed: 0,
        })
    }

    pub fn length(&self) -> usize {
        self.length
    }

    /// `V_kq` for `k < q` (zero otherwise).
    pub fn coupling(&self, k: usize, q: usize) -> f64 {
        if k < q {
            self.couplings[k * self.length + q]
        } else {
            0.0
        }
    }

    /// Raw box-distributed draw `V~_kq` for `k < q`.
    pub fn raw_coupling(&self, k: usize, q: usize) -> f64 {
        if k < q {
            self.raw_couplings[k * self.length + q]
        } else {
            0.0
        }
    }

    pub fn fields(&self) -> &[f64] {
        &self.fields
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

/// Draw couplings and fields from their box distributions; deterministic in `seed`.
pub fn draw_disorder(params: &ModelParams, seed: u64) -> Result<DisorderRealization> {
    params.validate()?;
    let l = params.length;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut uniform = |lo: f64, hi: f64| lo + (hi - lo) * rng.random::<f64>();
    let fields: Vec<f64> = (0..l).map(|_| uniform(-params.h, params.h)).collect();
    let kac = kac_constant(l, params.alpha);
    let mut raw = vec![0.0; l * l];
    let mut couplings = vec![0.0; l * l];
    for k in 0..l {
        for q in k + 1..l {
            let draw = uniform(0.5 * params.v, 1.5 * params.v);
            raw[k * l + q] = draw;
            couplings[k * l + q] = draw / (kac * ((q - k) as f64).powf(params.alpha));
        }
    }
    Ok(DisorderRealization { length: l, raw_couplings: raw, couplings, fields, seed })
}

/// `H_int = -J sum (XX+YY) + sum V_kq Z_k Z_q + sum h_k Z_k` in the sector.
///
/// The spin-1 ZZ term carries the same random `V_kq` as the spin-1/2 model.
pub fn build_h_int(params: &ModelParams, realization: &DisorderRealization, basis: &SectorBasis) -> Result<Mat<f64>> {
    params.check_basis(basis)?;
    if realization.length() != params.length {
        return Err(Error::DimensionMismatch { expected: params.length, found: realization.length() });
    }
    let l = params.length;
    let dim = basis.dim();
    let mut h = Mat::<f64>::zeros(dim, dim);
    for (i, config) in basis.configs().iter().enumerate() {
        let s = config.values();
        let mut e = 0.0;
        for k in 0..l {
            let sk = f64::from(s[k]);
            e += realization.fields()[k] * sk;
            for q in k + 1..l {
                e += realization.coupling(k, q) * sk * f64::from(s[q]);
            }
        }
        h[(i, i)] = e;
    }
    if params.j != 0.0 {
        for k in 0..l - 1 {
            for (col, row, amp) in hopping_elements(basis, k) {
                h[(row, col)] -= params.j * amp;
            }
        }
    }
    Ok(h)
}

/// `exp(-iK)` as a product of commuting two-site factors `a 1 + b P_k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KickUnitary {
    spin: LocalSpin,
    identity_coeff: c64,
    swap_coeff: c64,
}

impl KickUnitary {
    pub fn new(spin: LocalSpin, epsilon: f64) -> Self {
        let (identity_coeff, swap_coeff) = match spin {
            // exp(-i theta sigma.sigma) with sigma.sigma = 2P - 1
            LocalSpin::Half => {
                let theta = FRAC_PI_4 + epsilon;
                let phase = c64::cis(theta);
                (phase * (2.0 * theta).cos(), phase * c64::new(0.0, -(2.0 * theta).sin()))
            }
            // exp(-i phi ((S.S)^2 + S.S)) with (S.S)^2 + S.S = P + 1
            LocalSpin::One => {
                let phi = FRAC_PI_2 + epsilon;
                let phase = c64::cis(-phi);
                (phase * phi.cos(), phase * c64::new(0.0, -phi.sin()))
            }
        };
        KickUnitary { spin, identity_coeff, swap_coeff }
    }

    /// Coefficients `(a, b)` of the per-pair factor `a 1 + b P`.
    pub fn coefficients(&self) -> (c64, c64) {
        (self.identity_coeff, self.swap_coeff)
    }

    /// The per-pair factor on the full `d^2`-dimensional two-site space,
    /// basis ordered `|s_1 s_2>` with `s_1` the slow index.
    pub fn pair_factor(&self) -> Mat<c64> {
        let d = self.spin.dim();
        Mat::from_fn(d * d, d * d, |row, col| {
            let (a1, a2) = (col / d, col % d);
            let swapped = a2 * d + a1;
            let mut z = c64::new(0.0, 0.0);
            if row == col {
                z += self.identity_coeff;
            }
            if row == swapped {
                z += self.swap_coeff;
            }
            z
        })
    }

    /// Replace `m` by `exp(-iK) m`.
    pub fn apply_left(&self, basis: &SectorBasis, m: &mut Mat<c64>) -> Result<()> {
        if basis.spin() != self.spin {
            return Err(Error::InvalidArgument("kick and basis have different local spin".into()));
        }
        if m.nrows() != basis.dim() {
            return Err(Error::DimensionMismatch { expected: basis.dim(), found: m.nrows() });
        }
        let (a, b) = (self.identity_coeff, self.swap_coeff);
        let dim = basis.dim();
        for k in 0..basis.length() / 2 {
            let perm: Vec<usize> = (0..dim).map(|i| basis.pair_swapped_index(i, k)).collect();
            let old = m.clone();
            for col in 0..m.ncols() {
                for (row, &src) in perm.iter().enumerate() {
                    m[(row, col)] = a * old[(row, col)] + b * old[(src, col)];
                }
            }
        }
        Ok(())
    }
}

/// Dense `exp(-iK)` in the sector.
pub fn build_kick_unitary(params: &ModelParams, basis: &SectorBasis) -> Result<Mat<c64>> {
    params.check_basis(basis)?;
    let mut m = Mat::<c64>::identity(basis.dim(), basis.dim());
    KickUnitary::new(params.spin, params.epsilon).apply_left(basis, &mut m)?;
    Ok(m)
}

/// `exp(-iH)` for a real symmetric `H` via its eigendecomposition.
pub fn hermitian_propagator(h: &Mat<f64>) -> Result<Mat<c64>> {
    let eig = h
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::Eigensolver(format!("{e:?}")))?;
    let (vecs, vals) = (eig.U(), eig.S());
    let n = h.nrows();
    // exp(-iH) = V cos(L) V^T - i V sin(L) V^T, two real products
    let vc = Mat::<f64>::from_fn(n, n, |i, j| vecs[(i, j)] * vals[j].cos());
    let vs = Mat::<f64>::from_fn(n, n, |i, j| vecs[(i, j)] * vals[j].sin());
    let re = &vc * vecs.transpose();
    let im = &vs * vecs.transpose();
    Ok(Mat::from_fn(n, n, |i, j| c64::new(re[(i, j)], -im[(i, j)])))
}

/// The one-period evolution restricted to a sector.
#[derive(Debug, Clone)]
pub struct FloquetOperator {
    pub matrix: Mat<c64>,
    pub params: ModelParams,
    pub realization: DisorderRealization,
}

pub fn build_floquet(params: &ModelParams, realization: &DisorderRealization, basis: &SectorBasis) -> Result<FloquetOperator> {
    let h = build_h_int(params, realization, basis)?;
    let mut u = hermitian_propagator(&h)?;
    KickUnitary::new(params.spin, params.epsilon).apply_left(basis, &mut u)?;
    Ok(FloquetOperator { matrix: u, params: *params, realization: realization.clone() })
}
