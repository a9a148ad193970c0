//! Wedderburn data of a semisimple algebra: its center and minimal central
//! idempotents.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::table::{Coeffs, WhaTable};
use crate::error::{Error, Result};
use crate::numerics::{eig_spectrum, null_space, rank, solve_least_squares, vec_max_diff, CMatrix, C64, ZERO};

/// Basis of `{z : z x = x z for all x}`.
pub fn center_basis(alg: &WhaTable, threshold: f64) -> Vec<Coeffs> {
    let d = alg.dim();
    let mut rows = Vec::with_capacity(d * d * d);
    for x in 0..d {
        for w in 0..d {
            for z in 0..d {
                let zx = alg.product_of(z, x).iter().filter(|e| e.0 == w).map(|e| e.1).sum::<C64>();
                let xz = alg.product_of(x, z).iter().filter(|e| e.0 == w).map(|e| e.1).sum::<C64>();
                rows.push(zx - xz);
            }
        }
    }
    let m = CMatrix::new(d * d, d, rows).expect("finite system");
    null_space(&m, threshold)
}

/// Minimal central idempotents, from the spectral projectors of a seeded
/// random central element.
pub fn central_idempotents(alg: &WhaTable, tol: f64) -> Result<Vec<Coeffs>> {
    let center = center_basis(alg, 1e-9);
    let k = center.len();
    if k == 0 {
        return Err(Error::InvalidInput("algebra has trivial center".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut h = vec![ZERO; alg.dim()];
    for b in &center {
        let r = rng.random::<f64>() + 0.5;
        for (hi, bi) in h.iter_mut().zip(b) {
            *hi += bi * r;
        }
    }
    // multiplication by h restricted to the center, in the center basis
    let basis_mat = CMatrix::from_columns(alg.dim(), &center);
    let mut cols = Vec::with_capacity(k);
    for b in &center {
        cols.push(solve_least_squares(&basis_mat, &alg.mul(&h, b))?);
    }
    let lh = CMatrix::from_columns(k, &cols);
    let spec = eig_spectrum(&lh, tol)?;
    let mu = spec.eigenvalues;
    for i in 0..k {
        for j in 0..i {
            if (mu[i] - mu[j]).norm() < 1e-6 {
                return Err(Error::Decomposition { residual: (mu[i] - mu[j]).norm() });
            }
        }
    }
    let one = alg.unit().to_vec();
    let mut out = Vec::with_capacity(k);
    for i in 0..k {
        let mut e = one.clone();
        for j in 0..k {
            if j == i {
                continue;
            }
            let shifted: Coeffs = h.iter().zip(&one).map(|(a, b)| a - b * mu[j]).collect();
            let scaled = alg.mul(&e, &shifted);
            let s = C64::new(1.0, 0.0) / (mu[i] - mu[j]);
            e = scaled.iter().map(|z| z * s).collect();
        }
        out.push(e);
    }
    for e in &out {
        if vec_max_diff(&alg.mul(e, e), e) > tol {
            return Err(Error::Decomposition { residual: vec_max_diff(&alg.mul(e, e), e) });
        }
    }
    Ok(out)
}

/// Rank of left multiplication by `v` in the regular representation.
pub fn regular_rank(alg: &WhaTable, v: &[C64]) -> usize {
    rank(&alg.left_regular(v), 1e-9)
}
