//! One-dimensional representations of a fusion ring and the minimal central
//! idempotents of its fusion algebra that project onto them.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::category::{perron_dims, FusionRing};
use crate::error::{Error, Result};
use crate::numerics::{eig_spectrum, null_space, CMatrix, C64, ONE, ZERO};

/// Eigenvalues closer than this are one cluster.
const CLUSTER: f64 = 1e-6;

/// All characters `chi(a) chi(b) = sum_c N_ab^c chi(c)` of the ring, as
/// tuples `lambda[a]`. The Frobenius-Perron character comes first, the rest
/// follow by descending real parts in label order.
///
/// A character is a common eigenvector of all fusion matrices
/// `(N_a)[b][c] = N_ab^c`, with components `chi(b)`. The joint eigenspaces
/// are found by intersecting eigenspaces label by label, so commutativity
/// is not assumed.
pub fn find_1d_irreps(ring: &FusionRing, tol: f64) -> Result<Vec<Vec<C64>>> {
    let k = ring.rank();
    // (basis of a subspace as columns, eigenvalues collected so far)
    let mut spaces: Vec<(Vec<Vec<C64>>, Vec<C64>)> =
        vec![((0..k).map(|i| unit_vector(k, i)).collect(), Vec::new())];
    for a in 0..k {
        let n_a = ring.fusion_matrix(a);
        let mut next = Vec::new();
        for mu in distinct_eigenvalues(&n_a, tol)? {
            let mut shifted = n_a.clone();
            shifted.add_scaled(&CMatrix::identity(k), -mu);
            let eigspace = null_space(&shifted, 1e-8);
            if eigspace.is_empty() {
                continue;
            }
            for (basis, lambda) in &spaces {
                let inter = intersect(basis, &eigspace);
                if !inter.is_empty() {
                    let mut lambda = lambda.clone();
                    lambda.push(mu);
                    next.push((inter, lambda));
                }
            }
        }
        spaces = next;
    }
    let fp = perron_dims(ring)?;
    let unit = ring.unit();
    let mut out: Vec<Vec<C64>> = Vec::new();
    for (basis, lambda) in spaces {
        // read the character off the vector itself and confirm it
        let v = &basis[0];
        if v[unit].norm() < 1e-12 {
            continue;
        }
        let chi: Vec<C64> = v.iter().map(|z| z / v[unit]).collect();
        let consistent = lambda.iter().zip(&chi).all(|(l, c)| (l - c).norm() <= 1e-6 * l.norm().max(1.0));
        if !consistent || character_residual(ring, &chi) > tol.max(1e-9) * 10.0 {
            continue;
        }
        if !out.iter().any(|o| max_gap(o, &chi) < CLUSTER) {
            out.push(chi);
        }
    }
    if out.is_empty() {
        return Err(Error::InvalidInput("fusion ring has no one-dimensional representation".into()));
    }
    let is_fp = |chi: &[C64]| chi.iter().zip(&fp).all(|(c, d)| (c - d).norm() < 1e-6);
    out.sort_by(|x, y| {
        is_fp(y).cmp(&is_fp(x)).then_with(|| {
            x.iter()
                .zip(y)
                .map(|(p, q)| q.re.total_cmp(&p.re).then(q.im.total_cmp(&p.im)))
                .find(|o| o.is_ne())
                .unwrap_or(std::cmp::Ordering::Equal)
        })
    });
    Ok(out)
}

/// Max over `(a, b)` of `|chi(a) chi(b) - sum_c N_ab^c chi(c)|`.
pub fn character_residual(ring: &FusionRing, chi: &[C64]) -> f64 {
    let k = ring.rank();
    let mut worst: f64 = 0.0;
    for a in 0..k {
        for b in 0..k {
            let rhs: C64 = (0..k).map(|c| chi[c] * f64::from(ring.n(a, b, c))).sum();
            worst = worst.max((chi[a] * chi[b] - rhs).norm());
        }
    }
    worst
}

fn unit_vector(k: usize, i: usize) -> Vec<C64> {
    (0..k).map(|j| if i == j { ONE } else { ZERO }).collect()
}

fn max_gap(a: &[C64], b: &[C64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

fn distinct_eigenvalues(m: &CMatrix, tol: f64) -> Result<Vec<C64>> {
    let spec = eig_spectrum(m, tol.max(1e-9))?;
    let mut out: Vec<C64> = Vec::new();
    for z in spec.eigenvalues {
        if !out.iter().any(|w| (w - z).norm() < CLUSTER) {
            out.push(z);
        }
    }
    Ok(out)
}

/// Orthonormal basis of `span(u) ∩ span(v)` for orthonormal inputs.
fn intersect(u: &[Vec<C64>], v: &[Vec<C64>]) -> Vec<Vec<C64>> {
    let n = u[0].len();
    let (p, q) = (u.len(), v.len());
    // [U, -V] (x; y) = 0
    let stacked = CMatrix::from_fn(n, p + q, |r, c| if c < p { u[c][r] } else { -v[c - p][r] });
    let mut out: Vec<Vec<C64>> = Vec::new();
    for sol in null_space(&stacked, 1e-8) {
        let mut w: Vec<C64> = (0..n).map(|r| (0..p).map(|c| u[c][r] * sol[c]).sum()).collect();
        for o in &out {
            let dot: C64 = o.iter().zip(&w).map(|(a, b)| a.conj() * b).sum();
            for (wi, oi) in w.iter_mut().zip(o) {
                *wi -= dot * oi;
            }
        }
        let norm = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-8 {
            out.push(w.into_iter().map(|z| z / norm).collect());
        }
    }
    out
}

/// Minimal central idempotent of the fusion algebra attached to a
/// one-dimensional representation: `Pi_m = sum_a coefficients[a] a`.
#[derive(Clone, Debug, Serialize)]
pub struct CentralIdempotent {
    pub m: usize,
    /// `lambda_ma`, the character values.
    pub lambda: Vec<C64>,
    /// `Pi_m^(a)`.
    pub coefficients: Vec<C64>,
    /// `max(|Pi Pi - Pi|, |Pi a - a Pi|)` in the fusion algebra.
    pub residual: f64,
}

/// Product in the fusion algebra on coefficient vectors.
pub fn fusion_product(ring: &FusionRing, x: &[C64], y: &[C64]) -> Vec<C64> {
    let k = ring.rank();
    let mut out = vec![ZERO; k];
    for (a, xa) in x.iter().enumerate() {
        for (b, yb) in y.iter().enumerate() {
            if *xa == ZERO || *yb == ZERO {
                continue;
            }
            for (c, o) in out.iter_mut().enumerate() {
                let n = ring.n(a, b, c);
                if n > 0 {
                    *o += xa * yb * f64::from(n);
                }
            }
        }
    }
    out
}

/// `Pi_m` by spectral projection: with `g = sum_a c_a a` for generic
/// seeded `c`, `Pi_m = prod_{mu != g_m} (g - mu) / (g_m - mu)` over the
/// spectrum of left multiplication by `g`, where `g_m = sum_a c_a
/// lambda_ma`.
pub fn build_central_idempotent(ring: &FusionRing, irreps: &[Vec<C64>], m: usize, seed: u64) -> Result<CentralIdempotent> {
    let lambda = irreps
        .get(m)
        .ok_or_else(|| Error::InvalidInput(format!("no one-dimensional representation with index {m}")))?
        .clone();
    let k = ring.rank();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let c: Vec<C64> = (0..k).map(|_| C64::new(rng.random::<f64>() + 0.5, rng.random::<f64>() - 0.5)).collect();
    // left multiplication: (L_g)[c][b] = sum_a c_a N_ab^c
    let l_g = CMatrix::from_fn(k, k, |row, col| (0..k).map(|a| c[a] * f64::from(ring.n(a, col, row))).sum());
    let g_m: C64 = c.iter().zip(&lambda).map(|(x, y)| x * y).sum();
    let spec = eig_spectrum(&l_g, 1e-9)?.eigenvalues;
    let multiplicity = spec.iter().filter(|z| (*z - g_m).norm() < CLUSTER * g_m.norm().max(1.0)).count();
    if multiplicity != 1 {
        return Err(Error::Unsupported(format!(
            "representation {m} does not occupy a one-dimensional block (multiplicity {multiplicity})"
        )));
    }
    let mut others: Vec<C64> = Vec::new();
    for z in spec {
        if (z - g_m).norm() >= CLUSTER * g_m.norm().max(1.0) && !others.iter().any(|w| (w - z).norm() < CLUSTER) {
            others.push(z);
        }
    }
    let mut pi = unit_vector(k, ring.unit());
    for mu in others {
        let gv = l_g.apply(&pi);
        let scale = g_m - mu;
        pi = gv.iter().zip(&pi).map(|(a, b)| (a - mu * b) / scale).collect();
    }
    let sq = fusion_product(ring, &pi, &pi);
    let mut residual = max_gap(&sq, &pi);
    for a in 0..k {
        let e = unit_vector(k, a);
        residual = residual.max(max_gap(&fusion_product(ring, &pi, &e), &fusion_product(ring, &e, &pi)));
    }
    Ok(CentralIdempotent { m, lambda, coefficients: pi, residual })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn intersection_of_coordinate_planes() {
        let e = |i| unit_vector(3, i);
        let inter = intersect(&[e(0), e(1)], &[e(1), e(2)]);
        assert_eq!(inter.len(), 1);
        assert!((inter[0][1].norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn fusion_product_of_fibonacci_generators() {
        let r = FusionRing::fibonacci();
        let tau = unit_vector(2, 1);
        assert_eq!(fusion_product(&r, &tau, &tau), vec![ONE, ONE]);
    }
}
