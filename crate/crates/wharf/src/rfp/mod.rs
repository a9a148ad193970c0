//! Zero-correlation-length MPDO fixed points `rho_m = O(Pi_m) Omega^{(x)L} / N_m`
//! and the checks of their fixed-point properties.

mod characters;
mod checks;

pub use characters::{
    build_central_idempotent, character_residual, find_1d_irreps, fusion_product, CentralIdempotent,
};
pub use checks::{
    PurificationReport, RfpIntegrity, StrongSymmetryReport, TraceOutReport, TransferPair, DENSE_MAX_LENGTH,
};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::mpo::{assemble_dense, hs_inner, MpoOperator, MpoTensor};
use crate::numerics::{eig_spectrum, rank, CMatrix, C64, ONE};
use crate::symmetry::{MpoSymmetry, DEFAULT_SEED};

/// `Omega = sum_alpha (delta_alpha / D^2) Q_alpha` on the physical space.
#[derive(Clone, Debug)]
pub struct Omega {
    pub matrix: CMatrix,
    /// `delta_alpha / D^2` per irrep of the algebra.
    pub coefficients: Vec<f64>,
    pub projectors: Vec<CMatrix>,
}

impl Omega {
    pub fn new(projectors: &[CMatrix], deltas: &[f64]) -> Result<Self> {
        if projectors.len() != deltas.len() || projectors.is_empty() {
            return Err(Error::InvalidInput(format!(
                "{} irrep projectors but {} quantum dimensions",
                projectors.len(),
                deltas.len()
            )));
        }
        if let Some(d) = deltas.iter().find(|d| !(**d > 0.0) || !d.is_finite()) {
            return Err(Error::InvalidInput(format!("quantum dimension {d} is not positive")));
        }
        let d2: f64 = deltas.iter().map(|d| d * d).sum();
        let coefficients: Vec<f64> = deltas.iter().map(|d| d / d2).collect();
        Ok(Self { matrix: combine(projectors, &coefficients), coefficients, projectors: projectors.to_vec() })
    }

    /// Blockwise square root from the scalar coefficients.
    pub fn sqrt(&self) -> Result<CMatrix> {
        if self.coefficients.iter().any(|c| *c < 0.0) {
            return Err(Error::InvalidInput("Omega has a negative eigenvalue".into()));
        }
        let roots: Vec<f64> = self.coefficients.iter().map(|c| c.sqrt()).collect();
        Ok(combine(&self.projectors, &roots))
    }
}

fn combine(projectors: &[CMatrix], coeffs: &[f64]) -> CMatrix {
    let n = projectors[0].rows();
    let mut m = CMatrix::zeros(n, n);
    for (q, c) in projectors.iter().zip(coeffs) {
        m.add_scaled(q, C64::new(*c, 0.0));
    }
    m
}

pub fn build_omega(sym: &MpoSymmetry) -> Result<Omega> {
    Omega::new(&sym.q, sym.deltas())
}

/// The canonical regular element `theta = sum_x delta_x tr[Omega Phi(x)]`
/// and the transfer matrix `E = Psi(theta)` with its per-irrep blocks.
#[derive(Clone, Debug)]
pub struct TransferData {
    pub theta: Vec<C64>,
    pub e_matrix: CMatrix,
    pub blocks: Vec<CMatrix>,
    pub diagnostics: TransferDiagnostics,
}

#[derive(Clone, Debug, Serialize)]
pub struct TransferDiagnostics {
    /// `||E^2 - E||_F`.
    pub idempotency: f64,
    /// Rank of the unit block `Psi_I(theta)`.
    pub unit_rank: usize,
    /// `tr Psi_I(theta)`.
    pub unit_trace: f64,
    /// Largest `||Psi_a(theta)||_F` over `a != I`.
    pub other_blocks: f64,
    pub spectrum: Vec<C64>,
    /// Largest distance of an eigenvalue of `E` from `{0, 1}`.
    pub spectrum_gap: f64,
}

pub fn transfer_data(omega: &Omega, sym: &MpoSymmetry) -> Result<TransferData> {
    let theta: Vec<C64> = sym.phi.mats().iter().map(|m| (&omega.matrix * m).trace()).collect();
    let e_matrix = sym.psi.evaluate(&theta);
    let blocks: Vec<CMatrix> = sym.psi_irreps.iter().map(|r| r.evaluate(&theta)).collect();
    let unit = sym.ring.unit();
    let idempotency = (&(&e_matrix * &e_matrix) - &e_matrix).frob_norm();
    let other_blocks = blocks
        .iter()
        .enumerate()
        .filter(|(a, _)| *a != unit)
        .map(|(_, b)| b.frob_norm())
        .fold(0.0, f64::max);
    let spectrum = eig_spectrum(&e_matrix, 1e-9)?.eigenvalues;
    let spectrum_gap = spectrum.iter().map(|z| z.norm().min((z - ONE).norm())).fold(0.0, f64::max);
    let diagnostics = TransferDiagnostics {
        idempotency,
        unit_rank: rank(&blocks[unit], 1e-8),
        unit_trace: blocks[unit].trace().re,
        other_blocks,
        spectrum,
        spectrum_gap,
    };
    Ok(TransferData { theta, e_matrix, blocks, diagnostics })
}

/// Everything needed to build and test the fixed points of one symmetry.
#[derive(Clone, Debug)]
pub struct RfpLab {
    pub sym: MpoSymmetry,
    pub omega: Omega,
    pub transfer: TransferData,
    /// Characters `lambda_ma` of the MPO fusion ring.
    pub irreps_1d: Vec<Vec<C64>>,
    pub idempotents: Vec<CentralIdempotent>,
}

/// `rho_m^(L) = O(Pi_m) Omega^{(x)L} / N_m` in tensor form.
#[derive(Clone, Debug)]
pub struct MpdoRfp {
    pub m: usize,
    pub length: usize,
    /// `N_m = Pi_m^(I) tr Psi_I(theta)`.
    pub norm: f64,
    /// `O(Pi_m)`.
    pub projector: MpoOperator,
    pub rho: MpoOperator,
}

impl MpdoRfp {
    pub fn dense(&self) -> Result<CMatrix> {
        assemble_dense(&self.rho)
    }
}

impl RfpLab {
    pub fn new(sym: MpoSymmetry, tol: f64) -> Result<Self> {
        let omega = build_omega(&sym)?;
        let transfer = transfer_data(&omega, &sym)?;
        let irreps_1d = find_1d_irreps(&sym.ring, tol)?;
        let idempotents = (0..irreps_1d.len())
            .map(|m| build_central_idempotent(&sym.ring, &irreps_1d, m, DEFAULT_SEED))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { sym, omega, transfer, irreps_1d, idempotents })
    }

    pub fn fibonacci(tol: f64) -> Result<Self> {
        Self::new(MpoSymmetry::fibonacci(tol)?, tol)
    }

    fn idempotent(&self, m: usize) -> Result<&CentralIdempotent> {
        self.idempotents
            .get(m)
            .ok_or_else(|| Error::InvalidInput(format!("no fixed point with index {m}")))
    }

    /// `N_m`, computed once from the transfer data and never refitted.
    pub fn normalization(&self, m: usize) -> Result<f64> {
        let pi = self.idempotent(m)?;
        let unit = self.sym.ring.unit();
        let n = pi.coefficients[unit] * self.transfer.blocks[unit].trace();
        if n.im.abs() > 1e-9 * n.norm() || !(n.re > 0.0) {
            return Err(Error::InvalidInput(format!("normalization N_{m} = {n} is not positive")));
        }
        Ok(n.re)
    }

    /// `O(Pi_m)` on `length` sites.
    pub fn projector(&self, m: usize, length: usize) -> Result<MpoOperator> {
        self.sym.operator_with(&self.idempotent(m)?.coefficients, length)
    }

    /// `Omega^{(x)L}` as a bond-dimension-1 MPO.
    pub fn omega_power(&self, length: usize) -> Result<MpoOperator> {
        let d = self.sym.phys_dim();
        MpoOperator::new(MpoTensor::new(d, 1, self.omega.matrix.data().to_vec())?, CMatrix::identity(1), length)
    }

    pub fn identity(&self, length: usize) -> Result<MpoOperator> {
        MpoOperator::new(MpoTensor::identity(self.sym.phys_dim()), CMatrix::identity(1), length)
    }

    pub fn build_rfp(&self, m: usize, length: usize) -> Result<MpdoRfp> {
        let norm = self.normalization(m)?;
        let projector = self.projector(m, length)?;
        let tensor = projector.tensor().times_physical(&self.omega.matrix)?;
        let boundary = projector.boundary().scale_real(1.0 / norm);
        let rho = MpoOperator::new(tensor, boundary, length)?;
        Ok(MpdoRfp { m, length, norm, projector, rho })
    }

    /// `tr rho` by contraction against the identity MPO.
    pub fn trace(&self, rho: &MpoOperator) -> Result<C64> {
        hs_inner(&self.identity(rho.length())?, rho)
    }
}
