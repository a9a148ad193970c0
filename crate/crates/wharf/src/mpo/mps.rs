use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::tensor::MpoOperator;
use super::transfer::{self, Layer};
use crate::error::{Error, Result};
use crate::numerics::{eig_spectrum, kron, CMatrix, C64, ZERO};

/// Translation-invariant MPS `|psi> = sum tr[B A^{i1} ... A^{iL}] |i1 ... iL>`
/// with local tensor `a[alpha, beta, i]` and boundary `B` (identity for a
/// plain periodic MPS).
#[derive(Clone, Debug)]
pub struct MpsTensor {
    phys_dim: usize,
    bond_dim: usize,
    data: Vec<C64>,
    boundary: CMatrix,
}

impl MpsTensor {
    pub fn new(phys_dim: usize, bond_dim: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != bond_dim * bond_dim * phys_dim {
            return Err(Error::Shape("MPS tensor data length".into()));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidInput("non-finite MPS tensor entry".into()));
        }
        Ok(Self { phys_dim, bond_dim, data, boundary: CMatrix::identity(bond_dim) })
    }

    pub fn with_boundary(mut self, boundary: CMatrix) -> Result<Self> {
        if boundary.rows() != self.bond_dim || boundary.cols() != self.bond_dim {
            return Err(Error::Shape("MPS boundary shape".into()));
        }
        self.boundary = boundary;
        Ok(self)
    }

    /// Bond dimension 1 product state `|v> (x) ... (x) |v>`.
    pub fn product_state(v: &[C64]) -> Result<Self> {
        Self::new(v.len(), 1, v.to_vec())
    }

    /// Seeded Gaussian random tensor, normalized.
    pub fn random(phys_dim: usize, bond_dim: usize, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut gauss = || {
            // Box-Muller
            let u: f64 = rng.random::<f64>().max(1e-300);
            let v: f64 = rng.random();
            (-2.0 * u.ln()).sqrt() * (std::f64::consts::TAU * v).cos()
        };
        let data = (0..bond_dim * bond_dim * phys_dim).map(|_| C64::new(gauss(), gauss())).collect();
        Self::new(phys_dim, bond_dim, data)?.normalized()
    }

    /// Reads an MPS off an MPO tensor by treating the physical input index
    /// as part of the physical output: `a[alpha, beta, (i, j)] = t[alpha, beta, i, j]`.
    pub fn from_operator_tensor(t: &super::MpoTensor, boundary: CMatrix) -> Result<Self> {
        let d = t.phys_dim();
        Self::new(d * d, t.bond_dim(), t.data().to_vec())?.with_boundary(boundary)
    }

    pub fn phys_dim(&self) -> usize {
        self.phys_dim
    }

    pub fn bond_dim(&self) -> usize {
        self.bond_dim
    }

    pub fn boundary(&self) -> &CMatrix {
        &self.boundary
    }

    pub fn get(&self, a: usize, b: usize, i: usize) -> C64 {
        self.data[(a * self.bond_dim + b) * self.phys_dim + i]
    }

    /// `E = sum_i conj(A^i) (x) A^i`.
    pub fn transfer_matrix(&self) -> CMatrix {
        let d = self.bond_dim;
        let mut e = CMatrix::zeros(d * d, d * d);
        for i in 0..self.phys_dim {
            let a = CMatrix::from_fn(d, d, |x, y| self.get(x, y, i));
            e.add_scaled(&kron(&a.conj(), &a).expect("small"), C64::new(1.0, 0.0));
        }
        e
    }

    /// Rescaled so the largest transfer eigenvalue has modulus 1.
    pub fn normalized(&self) -> Result<Self> {
        let spec = eig_spectrum(&self.transfer_matrix(), 1e-9)?;
        let top = spec.eigenvalues.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if top == 0.0 {
            return Err(Error::InvalidInput("MPS has a nilpotent transfer matrix".into()));
        }
        let s = 1.0 / top.sqrt();
        Ok(Self { data: self.data.iter().map(|z| z * s).collect(), ..self.clone() })
    }

    /// MPS of `O |psi>` with bonds `(mpo, mps)` in row-major order.
    pub fn apply(&self, op: &MpoOperator) -> Result<Self> {
        let t = op.tensor();
        if t.phys_dim() != self.phys_dim {
            return Err(Error::Shape("MPO and MPS physical dimensions differ".into()));
        }
        let (dm, ds, d) = (t.bond_dim(), self.bond_dim, self.phys_dim);
        let bond = dm * ds;
        let mut data = vec![ZERO; bond * bond * d];
        for a in 0..dm {
            for b in 0..dm {
                for al in 0..ds {
                    for be in 0..ds {
                        for i in 0..d {
                            let mut acc = ZERO;
                            for j in 0..d {
                                acc += t.get(a, b, i, j) * self.get(al, be, j);
                            }
                            data[((a * ds + al) * bond + b * ds + be) * d + i] = acc;
                        }
                    }
                }
            }
        }
        Self::new(d, bond, data)?.with_boundary(kron(op.boundary(), &self.boundary)?)
    }

    fn layer(&self) -> Layer<'_> {
        Layer { data: &self.data, bond: self.bond_dim, d_out: self.phys_dim, d_in: 1, boundary: &self.boundary }
    }

    /// Dense state vector on `length` sites.
    pub fn dense(&self, length: usize) -> Result<Vec<C64>> {
        let d = self.phys_dim;
        let dim = d.checked_pow(length as u32).ok_or(Error::Size { entries: usize::MAX, cap: crate::numerics::DEFAULT_DENSE_CAP })?;
        if dim > crate::numerics::DEFAULT_DENSE_CAP {
            return Err(Error::Size { entries: dim, cap: crate::numerics::DEFAULT_DENSE_CAP });
        }
        let bond = self.bond_dim;
        let mut out = vec![ZERO; dim];
        for (idx, slot) in out.iter_mut().enumerate() {
            // digits of idx, first site most significant
            let mut digits = vec![0; length];
            let mut r = idx;
            for s in (0..length).rev() {
                digits[s] = r % d;
                r /= d;
            }
            let mut m = CMatrix::identity(bond);
            for &i in &digits {
                m = &m * &CMatrix::from_fn(bond, bond, |x, y| self.get(x, y, i));
            }
            *slot = (&self.boundary * &m).trace();
        }
        Ok(out)
    }
}

/// `<psi1 | psi2>` on `length` sites.
pub fn mps_overlap(a: &MpsTensor, b: &MpsTensor, length: usize) -> Result<C64> {
    if a.phys_dim != b.phys_dim {
        return Err(Error::Shape("MPS physical dimensions differ".into()));
    }
    Ok(transfer::round(transfer::overlap(a.layer(), b.layer(), length)))
}

#[derive(Clone, Debug, Serialize)]
pub struct MpsSymmetryCheck {
    /// `|| O psi - lambda psi || / || O psi ||` with the Rayleigh quotient `lambda`.
    pub residual: f64,
    pub is_eigen: bool,
    pub lambda: Option<C64>,
}

/// Tests whether the MPS is an eigenvector of `op` by saturation of the
/// Cauchy-Schwarz inequality `|<psi|O|psi>|^2 <= <psi|O^dag O|psi> <psi|psi>`.
pub fn check_mps_symmetric(mps: &MpsTensor, op: &MpoOperator, tol: f64) -> Result<MpsSymmetryCheck> {
    let l = op.length();
    let n = mps_overlap(mps, mps, l)?.re;
    if !(n > 0.0) {
        return Err(Error::InvalidInput("state has zero norm".into()));
    }
    let o_psi = mps.apply(op)?;
    let m = transfer::overlap(mps.layer(), o_psi.layer(), l);
    let q = transfer::overlap(o_psi.layer(), o_psi.layer(), l);
    // || O psi - lambda psi ||^2 = q - |m|^2 / n, combined in extended precision
    let n_dd = transfer::overlap(mps.layer(), mps.layer(), l);
    let m_sq = m.re * m.re + m.im * m.im;
    let gap = q.re - m_sq / n_dd.re;
    let (q, gap) = (f64::from(q.re), f64::from(gap).max(0.0));
    let residual = if q > 0.0 { (gap / q).sqrt() } else { 0.0 };
    let is_eigen = residual <= tol;
    let lambda = is_eigen.then(|| transfer::round(m) / n);
    Ok(MpsSymmetryCheck { residual, is_eigen, lambda })
}
