use crate::error::{Error, Result};
use crate::numerics::{frob_residual, kron, CMatrix, C64, DEFAULT_DENSE_CAP, ZERO};
use crate::wha::Representation;

use super::transfer::{self, Layer};

/// Local MPO tensor `t[a, b, i, j]`: left bond `a`, right bond `b`,
/// physical output `i`, physical input `j`.
#[derive(Clone, Debug, PartialEq)]
pub struct MpoTensor {
    phys_dim: usize,
    bond_dim: usize,
    data: Vec<C64>,
}

impl MpoTensor {
    pub fn new(phys_dim: usize, bond_dim: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != phys_dim * phys_dim * bond_dim * bond_dim {
            return Err(Error::Shape(format!(
                "MPO tensor data of length {} for phys {phys_dim}, bond {bond_dim}",
                data.len()
            )));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidInput("non-finite MPO tensor entry".into()));
        }
        Ok(Self { phys_dim, bond_dim, data })
    }

    /// Bond dimension 1, identity on the physical space.
    pub fn identity(phys_dim: usize) -> Self {
        let data = (0..phys_dim * phys_dim)
            .map(|k| if k / phys_dim == k % phys_dim { C64::new(1.0, 0.0) } else { ZERO })
            .collect();
        Self { phys_dim, bond_dim: 1, data }
    }

    pub fn phys_dim(&self) -> usize {
        self.phys_dim
    }

    pub fn bond_dim(&self) -> usize {
        self.bond_dim
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    fn pos(&self, a: usize, b: usize, i: usize, j: usize) -> usize {
        ((a * self.bond_dim + b) * self.phys_dim + i) * self.phys_dim + j
    }

    pub fn get(&self, a: usize, b: usize, i: usize, j: usize) -> C64 {
        self.data[self.pos(a, b, i, j)]
    }

    /// Physical operator carried by the bond transition `a -> b`.
    pub fn phys_block(&self, a: usize, b: usize) -> CMatrix {
        let d = self.phys_dim;
        let start = self.pos(a, b, 0, 0);
        CMatrix::new(d, d, self.data[start..start + d * d].to_vec()).expect("block shape")
    }

    /// Bond matrix for the physical transition `j -> i`.
    pub fn bond_block(&self, i: usize, j: usize) -> CMatrix {
        CMatrix::from_fn(self.bond_dim, self.bond_dim, |a, b| self.get(a, b, i, j))
    }

    /// Tensor of the adjoint operator: `conj(t[a, b, j, i])`.
    pub fn dagger(&self) -> Self {
        let d = self.phys_dim;
        let mut data = vec![ZERO; self.data.len()];
        for a in 0..self.bond_dim {
            for b in 0..self.bond_dim {
                for i in 0..d {
                    for j in 0..d {
                        data[self.pos(a, b, i, j)] = self.get(a, b, j, i).conj();
                    }
                }
            }
        }
        Self { data, ..*self }
    }

    /// Tensor of the operator product: `sum_j t1[a1, b1, i, j] t2[a2, b2, j, k]`
    /// with bonds `(a1, a2)` and `(b1, b2)` in row-major order.
    pub fn product(&self, other: &MpoTensor) -> Result<Self> {
        if self.phys_dim != other.phys_dim {
            return Err(Error::Shape("product of MPO tensors with different physical dimensions".into()));
        }
        let d = self.phys_dim;
        let (d1, d2) = (self.bond_dim, other.bond_dim);
        let bond = d1 * d2;
        let mut data = vec![ZERO; bond * bond * d * d];
        for a1 in 0..d1 {
            for b1 in 0..d1 {
                let m1 = self.phys_block(a1, b1);
                for a2 in 0..d2 {
                    for b2 in 0..d2 {
                        let m = &m1 * &other.phys_block(a2, b2);
                        let start = (((a1 * d2 + a2) * bond + b1 * d2 + b2) * d) * d;
                        data[start..start + d * d].copy_from_slice(m.data());
                    }
                }
            }
        }
        Ok(Self { phys_dim: d, bond_dim: bond, data })
    }

    /// `t (x) 1_ancilla` on the physical index `(i, k)` -> `i * anc + k`.
    pub fn with_ancilla(&self, ancilla_dim: usize) -> Self {
        let eye = CMatrix::identity(ancilla_dim);
        let d = self.phys_dim * ancilla_dim;
        let mut data = Vec::with_capacity(self.bond_dim * self.bond_dim * d * d);
        for a in 0..self.bond_dim {
            for b in 0..self.bond_dim {
                data.extend(kron(&self.phys_block(a, b), &eye).expect("small kron").into_data());
            }
        }
        Self { phys_dim: d, bond_dim: self.bond_dim, data }
    }

    /// Multiplies every physical block by `m` from the right.
    pub fn times_physical(&self, m: &CMatrix) -> Result<Self> {
        if m.rows() != self.phys_dim || m.cols() != self.phys_dim {
            return Err(Error::Shape("physical factor shape".into()));
        }
        let mut data = Vec::with_capacity(self.data.len());
        for a in 0..self.bond_dim {
            for b in 0..self.bond_dim {
                data.extend((&self.phys_block(a, b) * m).into_data());
            }
        }
        Ok(Self { data, ..*self })
    }

    pub(crate) fn layer<'a>(&'a self, boundary: &'a CMatrix) -> Layer<'a> {
        Layer { data: &self.data, bond: self.bond_dim, d_out: self.phys_dim, d_in: self.phys_dim, boundary }
    }
}

/// `T[a, b, i, j] = sum_x Psi(delta_x)[a, b] Phi(x)[i, j]`.
pub fn build_symmetry_tensor(phi: &Representation, psi: &Representation) -> Result<MpoTensor> {
    if phi.len() != psi.len() {
        return Err(Error::InvalidInput(format!(
            "physical representation has {} basis matrices, virtual one {}",
            phi.len(),
            psi.len()
        )));
    }
    let (d, bond) = (phi.dim(), psi.dim());
    let mut data = vec![ZERO; bond * bond * d * d];
    for (p, q) in phi.mats().iter().zip(psi.mats()) {
        for a in 0..bond {
            for b in 0..bond {
                let w = q[(a, b)];
                if w == ZERO {
                    continue;
                }
                let start = ((a * bond + b) * d) * d;
                for (slot, v) in data[start..start + d * d].iter_mut().zip(p.data()) {
                    *slot += w * v;
                }
            }
        }
    }
    MpoTensor::new(d, bond, data)
}

/// Translation-invariant MPO `O(X) = sum X[b, a] (T ... T)[a, b]` on
/// `length` sites.
#[derive(Clone, Debug)]
pub struct MpoOperator {
    tensor: MpoTensor,
    boundary: CMatrix,
    length: usize,
}

impl MpoOperator {
    pub fn new(tensor: MpoTensor, boundary: CMatrix, length: usize) -> Result<Self> {
        if boundary.rows() != tensor.bond_dim || boundary.cols() != tensor.bond_dim {
            return Err(Error::Shape("boundary does not match the bond dimension".into()));
        }
        if length == 0 {
            return Err(Error::InvalidInput("MPO length must be positive".into()));
        }
        Ok(Self { tensor, boundary, length })
    }

    /// As `new`, additionally requiring the boundary to commute with every
    /// bond matrix of the tensor.
    pub fn from_boundary(tensor: MpoTensor, boundary: CMatrix, length: usize, tol: f64) -> Result<Self> {
        let op = Self::new(tensor, boundary, length)?;
        let d = op.tensor.phys_dim;
        let scale = op.boundary.frob_norm().max(1.0);
        for i in 0..d {
            for j in 0..d {
                let b = op.tensor.bond_block(i, j);
                let r = op.boundary.commutator(&b).frob_norm();
                if r > tol * scale * b.frob_norm().max(1.0) {
                    return Err(Error::InvalidInput(format!(
                        "boundary does not commute with the bond algebra (residual {r:e})"
                    )));
                }
            }
        }
        Ok(op)
    }

    pub fn tensor(&self) -> &MpoTensor {
        &self.tensor
    }

    pub fn boundary(&self) -> &CMatrix {
        &self.boundary
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn phys_dim(&self) -> usize {
        self.tensor.phys_dim
    }

    pub fn with_length(&self, length: usize) -> Result<Self> {
        Self::new(self.tensor.clone(), self.boundary.clone(), length)
    }

    pub fn dagger(&self) -> Self {
        Self { tensor: self.tensor.dagger(), boundary: self.boundary.conj(), length: self.length }
    }

    /// The MPO of `self * other`.
    pub fn product(&self, other: &MpoOperator) -> Result<Self> {
        if self.length != other.length {
            return Err(Error::Shape("product of MPOs of different lengths".into()));
        }
        Self::new(self.tensor.product(&other.tensor)?, kron(&self.boundary, &other.boundary)?, self.length)
    }

    pub fn with_ancilla(&self, ancilla_dim: usize) -> Self {
        Self { tensor: self.tensor.with_ancilla(ancilla_dim), ..self.clone() }
    }

    pub(crate) fn layer(&self) -> Layer<'_> {
        self.tensor.layer(&self.boundary)
    }
}

/// Dense `phys_dim^L` matrix of the operator, within the default cap.
pub fn assemble_dense(op: &MpoOperator) -> Result<CMatrix> {
    assemble_dense_capped(op, DEFAULT_DENSE_CAP)
}

pub fn assemble_dense_capped(op: &MpoOperator, cap: usize) -> Result<CMatrix> {
    let d = op.phys_dim();
    let dim = d
        .checked_pow(op.length as u32)
        .filter(|n| n.checked_mul(*n).is_some_and(|e| e <= cap))
        .ok_or(Error::Size { entries: usize::MAX, cap })?;
    let bond = op.tensor.bond_dim;
    let blocks: Vec<Vec<CMatrix>> =
        (0..bond).map(|a| (0..bond).map(|b| op.tensor.phys_block(a, b)).collect()).collect();
    let parts = crate::par::map_range(bond, |a| {
        // row[b] = (T ... T)[a, b] on the sites built so far
        let mut row: Vec<CMatrix> = blocks[a].clone();
        for _ in 1..op.length {
            row = (0..bond)
                .map(|c| {
                    let mut acc = CMatrix::zeros(row[0].rows() * d, row[0].cols() * d);
                    for (b, r) in row.iter().enumerate() {
                        if r.max_abs() == 0.0 || blocks[b][c].max_abs() == 0.0 {
                            continue;
                        }
                        acc.add_scaled(&kron(r, &blocks[b][c]).expect("within cap"), C64::new(1.0, 0.0));
                    }
                    acc
                })
                .collect();
        }
        let mut out = CMatrix::zeros(dim, dim);
        for (b, r) in row.iter().enumerate() {
            let x = op.boundary[(b, a)];
            if x != ZERO {
                out.add_scaled(r, x);
            }
        }
        out
    });
    let mut total = CMatrix::zeros(dim, dim);
    for p in &parts {
        total.add_scaled(p, C64::new(1.0, 0.0));
    }
    Ok(total)
}

/// `tr[op1^dagger op2]` by transfer-matrix contraction; cost linear in
/// the length.
pub fn hs_inner(op1: &MpoOperator, op2: &MpoOperator) -> Result<C64> {
    check_compatible(op1, op2)?;
    Ok(transfer::round(transfer::overlap(op1.layer(), op2.layer(), op1.length)))
}

/// `|| sum_k c_k O_k ||_HS^2`, with all overlaps combined in extended
/// precision before rounding.
pub fn hs_norm_sq(terms: &[(C64, &MpoOperator)]) -> Result<f64> {
    let Some((_, first)) = terms.first() else { return Ok(0.0) };
    for (_, op) in terms {
        check_compatible(first, op)?;
    }
    let layers: Vec<_> = terms.iter().map(|(c, op)| (*c, op.layer())).collect();
    Ok(transfer::combination_norm_sq(&layers, first.length).max(0.0))
}

/// `|| op1 - op2 ||_HS / || op1 ||_HS`.
pub fn hs_relative_distance(op1: &MpoOperator, op2: &MpoOperator) -> Result<f64> {
    let one = C64::new(1.0, 0.0);
    let num = hs_norm_sq(&[(one, op1), (-one, op2)])?;
    let den = hs_norm_sq(&[(one, op1)])?;
    if den == 0.0 {
        return Ok(num.sqrt());
    }
    Ok((num / den).sqrt())
}

fn check_compatible(op1: &MpoOperator, op2: &MpoOperator) -> Result<()> {
    if op1.phys_dim() != op2.phys_dim() || op1.length != op2.length {
        return Err(Error::Shape("MPOs differ in physical dimension or length".into()));
    }
    Ok(())
}

/// Dense-oracle relative distance, for cross-checks.
pub fn dense_relative_distance(op1: &MpoOperator, op2: &MpoOperator) -> Result<f64> {
    let (a, b) = (assemble_dense(op1)?, assemble_dense(op2)?);
    let n = a.frob_norm();
    let r = frob_residual(&a, &b)?;
    Ok(if n == 0.0 { r } else { r / n })
}
