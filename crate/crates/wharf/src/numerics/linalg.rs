use nalgebra::DMatrix;

use super::matrix::{CMatrix, C64, ZERO};
use crate::error::{Error, Result};

/// Largest dimension accepted by the eigensolvers.
pub const MAX_EIG_DIM: usize = 4096;

/// Eigenvalues of a square matrix together with a residual certificate.
#[derive(Clone, Debug)]
pub struct SpectrumReport {
    /// Sorted by descending real part, then descending imaginary part.
    pub eigenvalues: Vec<C64>,
    /// Hermitian input: max |Av - lambda v| over the eigenpairs.
    /// Otherwise: max column norm of `A Q - Q T` for the Schur form `A = Q T Q^dagger`.
    pub residual: f64,
}

impl SpectrumReport {
    pub fn real_parts(&self) -> Vec<f64> {
        self.eigenvalues.iter().map(|z| z.re).collect()
    }
}

fn sort_spectrum(v: &mut [C64]) {
    v.sort_by(|a, b| b.re.total_cmp(&a.re).then(b.im.total_cmp(&a.im)));
}

/// Full eigenvalue multiset of `m`. Hermitian inputs (to within `tol`
/// relative to the Frobenius scale) go through the Hermitian solver.
pub fn eig_spectrum(m: &CMatrix, tol: f64) -> Result<SpectrumReport> {
    if !m.is_square() {
        return Err(Error::Shape(format!("eigenvalues of a {}x{} matrix", m.rows(), m.cols())));
    }
    let n = m.rows();
    if n > MAX_EIG_DIM {
        return Err(Error::Size { entries: n * n, cap: MAX_EIG_DIM * MAX_EIG_DIM });
    }
    if n == 0 {
        return Ok(SpectrumReport { eigenvalues: vec![], residual: 0.0 });
    }
    let scale = m.frob_norm().max(1.0);
    if m.hermiticity_residual() <= tol * scale {
        let (vals, vecs) = hermitian_eigen(m)?;
        let mut residual: f64 = 0.0;
        for (k, &lam) in vals.iter().enumerate() {
            let v = vecs.column(k);
            let av = m.apply(&v);
            let r: f64 = av
                .iter()
                .zip(&v)
                .map(|(a, b)| (a - b * lam).norm_sqr())
                .sum::<f64>()
                .sqrt();
            residual = residual.max(r);
        }
        let mut eigenvalues: Vec<C64> = vals.into_iter().map(|x| C64::new(x, 0.0)).collect();
        sort_spectrum(&mut eigenvalues);
        return Ok(SpectrumReport { eigenvalues, residual });
    }
    let a = m.to_nalgebra();
    let budget = 200 * n + 2000;
    // Spectra symmetric about the origin (cyclic permutations) can stall the
    // shifted QR iteration; a generic complex shift breaks the symmetry.
    let shifts = [ZERO, C64::new(0.2113, 0.0871), C64::new(-0.1379, 0.3049)];
    let (q, t, shift) = shifts
        .iter()
        .find_map(|&s| {
            let shifted = &a + DMatrix::<C64>::identity(n, n) * (s * scale);
            shifted.try_schur(f64::EPSILON, budget).map(|sc| {
                let (q, t) = sc.unpack();
                (q, t, s * scale)
            })
        })
        .ok_or(Error::NoConvergence { residual: f64::INFINITY })?;
    let t = t - DMatrix::<C64>::identity(n, n) * shift;
    let lhs = &a * &q;
    let rhs = &q * &t;
    let residual = (0..n)
        .map(|c| (lhs.column(c) - rhs.column(c)).norm())
        .fold(0.0, f64::max);
    let below: f64 = (0..n)
        .flat_map(|c| (c + 1..n).map(move |r| (r, c)))
        .map(|(r, c)| t[(r, c)].norm())
        .fold(0.0, f64::max);
    if below > tol.max(1e-8) * scale {
        return Err(Error::NoConvergence { residual: below });
    }
    let mut eigenvalues: Vec<C64> = (0..n).map(|i| t[(i, i)]).collect();
    sort_spectrum(&mut eigenvalues);
    Ok(SpectrumReport { eigenvalues, residual })
}

/// Eigen-decomposition of a Hermitian matrix: ascending real eigenvalues and
/// the matrix whose columns are the matching orthonormal eigenvectors.
/// Only the Hermitian part of `m` is used.
pub fn hermitian_eigen(m: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    if !m.is_square() {
        return Err(Error::Shape("Hermitian eigensolve of a non-square matrix".into()));
    }
    let n = m.rows();
    if n > MAX_EIG_DIM {
        return Err(Error::Size { entries: n * n, cap: MAX_EIG_DIM * MAX_EIG_DIM });
    }
    if n == 0 {
        return Ok((vec![], CMatrix::zeros(0, 0)));
    }
    let a = m.to_nalgebra();
    let h = (&a + a.adjoint()) * C64::new(0.5, 0.0);
    let eig = h.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let vals = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vecs = CMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    Ok((vals, vecs))
}

/// Singular values in descending order.
pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    if m.rows() == 0 || m.cols() == 0 {
        return vec![];
    }
    let mut s: Vec<f64> = reduced(m).singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Tall systems are first reduced to their square R factor, which has the
/// same singular values and right singular vectors.
fn reduced(m: &CMatrix) -> DMatrix<C64> {
    let a = m.to_nalgebra();
    if a.nrows() > a.ncols() {
        a.qr().r()
    } else if a.nrows() < a.ncols() {
        let mut padded = DMatrix::zeros(a.ncols(), a.ncols());
        padded.view_mut((0, 0), (a.nrows(), a.ncols())).copy_from(&a);
        padded
    } else {
        a
    }
}

/// Orthonormal basis of the kernel of `m`: right singular vectors whose
/// singular value is at most `rel_threshold` times the largest one
/// (or absolutely below `rel_threshold` when the matrix is tiny).
pub fn null_space(m: &CMatrix, rel_threshold: f64) -> Vec<Vec<C64>> {
    let n = m.cols();
    if n == 0 {
        return vec![];
    }
    if m.rows() == 0 {
        return (0..n)
            .map(|i| (0..n).map(|j| if i == j { C64::new(1.0, 0.0) } else { ZERO }).collect())
            .collect();
    }
    let a = reduced(m);
    let svd = a.svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let cut = rel_threshold * smax.max(1.0);
    let mut out = Vec::new();
    for (k, &s) in svd.singular_values.iter().enumerate() {
        if s <= cut {
            out.push((0..n).map(|j| v_t[(k, j)].conj()).collect());
        }
    }
    out
}

/// Numerical rank with the same threshold convention as [`null_space`].
pub fn rank(m: &CMatrix, rel_threshold: f64) -> usize {
    let s = singular_values(m);
    let smax = s.first().copied().unwrap_or(0.0);
    let cut = rel_threshold * smax.max(1.0);
    s.iter().filter(|&&x| x > cut).count()
}

/// Upper-triangular `C` with `g = C^dagger C` for a Hermitian positive
/// definite `g`.
pub fn cholesky_upper(g: &CMatrix) -> Result<CMatrix> {
    if !g.is_square() {
        return Err(Error::Shape("Cholesky of a non-square matrix".into()));
    }
    let a = g.to_nalgebra();
    let h = (&a + a.adjoint()) * C64::new(0.5, 0.0);
    let chol = h
        .cholesky()
        .ok_or_else(|| Error::InvalidInput("Gram matrix is not positive definite".into()))?;
    let l = chol.l();
    // complex Cholesky happily takes the square root of a negative pivot
    if l.diagonal().iter().any(|z| !(z.re > 0.0) || z.im.abs() > 1e-12 * z.re.max(1.0)) {
        return Err(Error::InvalidInput("Gram matrix is not positive definite".into()));
    }
    Ok(CMatrix::from_nalgebra(&l.adjoint()))
}

pub fn inverse(m: &CMatrix) -> Result<CMatrix> {
    if !m.is_square() {
        return Err(Error::Shape("inverse of a non-square matrix".into()));
    }
    m.to_nalgebra()
        .try_inverse()
        .map(|x| CMatrix::from_nalgebra(&x))
        .ok_or_else(|| Error::InvalidInput("matrix is singular".into()))
}

/// Least-squares solution of `a x = b`.
pub fn solve_least_squares(a: &CMatrix, b: &[C64]) -> Result<Vec<C64>> {
    if a.rows() != b.len() {
        return Err(Error::Shape("least-squares right-hand side length".into()));
    }
    let mut na = a.to_nalgebra();
    let mut nb = DMatrix::from_column_slice(b.len(), 1, b);
    // nalgebra's complex SVD of tall matrices can return an inaccurate
    // factorization, so solve on the square R factor: min |Rx - Q^dag b|
    if na.nrows() > na.ncols() {
        let (q, r) = na.qr().unpack();
        nb = q.adjoint() * nb;
        na = r;
    }
    let svd = na.svd(true, true);
    let x = svd
        .solve(&nb, 1e-13)
        .map_err(|e| Error::InvalidInput(format!("least squares: {e}")))?;
    Ok(x.iter().copied().collect())
}

/// Traces out one tensor factor. `site` is 0-based; `m` acts on the ordered
/// product of spaces with dimensions `site_dims`.
pub fn partial_trace(m: &CMatrix, site_dims: &[usize], site: usize) -> Result<CMatrix> {
    let total: usize = site_dims.iter().product();
    if !m.is_square() || m.rows() != total {
        return Err(Error::Shape(format!(
            "partial trace of a {}x{} matrix over sites {:?}",
            m.rows(),
            m.cols(),
            site_dims
        )));
    }
    if site >= site_dims.len() {
        return Err(Error::Shape(format!("site {site} out of range for {} sites", site_dims.len())));
    }
    let left: usize = site_dims[..site].iter().product();
    let d = site_dims[site];
    let right: usize = site_dims[site + 1..].iter().product();
    let n = left * right;
    let mut out = CMatrix::zeros(n, n);
    for l in 0..left {
        for r in 0..right {
            for l2 in 0..left {
                for r2 in 0..right {
                    let mut acc = ZERO;
                    for s in 0..d {
                        acc += m[((l * d + s) * right + r, (l2 * d + s) * right + r2)];
                    }
                    out[(l * right + r, l2 * right + r2)] = acc;
                }
            }
        }
    }
    Ok(out)
}

/// Greedy matching distance between two multisets of complex numbers of
/// equal size: the largest gap after pairing each element of `a` with the
/// nearest unused element of `b`. Elements of `a` are processed in order of
/// decreasing modulus so that isolated values claim their partners first.
pub fn multiset_distance(a: &[C64], b: &[C64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let mut order: Vec<usize> = (0..a.len()).collect();
    order.sort_by(|&i, &j| a[j].norm().total_cmp(&a[i].norm()));
    let mut used = vec![false; b.len()];
    let mut worst: f64 = 0.0;
    for i in order {
        let (k, d) = b
            .iter()
            .enumerate()
            .filter(|(k, _)| !used[*k])
            .map(|(k, z)| (k, (z - a[i]).norm()))
            .min_by(|x, y| x.1.total_cmp(&y.1))
            .expect("equal lengths");
        used[k] = true;
        worst = worst.max(d);
    }
    worst
}
