use serde::Serialize;

use super::RfpLab;
use crate::error::{Error, Result};
use crate::mpo::{assemble_dense, check_mps_symmetric, hs_inner, hs_norm_sq, MpoOperator, MpsSymmetryCheck, MpsTensor};
use crate::numerics::{eig_spectrum, frob_residual, hermitian_eigen, multiset_distance, partial_trace, CMatrix, C64, ONE, ZERO};

/// Largest length for which dense objects are formed.
pub const DENSE_MAX_LENGTH: usize = 3;

/// Moves the first `k` of `n` tensor factors (each of dimension `d`) of an
/// operator to the end.
fn rotate_sites(m: &CMatrix, d: usize, n: usize, k: usize) -> CMatrix {
    let tail = d.pow((n - k) as u32);
    let head = d.pow(k as u32);
    let map = |i: usize| (i % head) * tail + i / head;
    CMatrix::from_fn(m.rows(), m.cols(), |r, c| m[(map(r), map(c))])
}

fn relative(num_sq: f64, den_sq: f64) -> f64 {
    if den_sq > 0.0 {
        (num_sq / den_sq).sqrt()
    } else {
        num_sq.sqrt()
    }
}

/// `|| X - Y ||_HS / || X ||_HS`.
fn hs_gap(x: &MpoOperator, y: &MpoOperator) -> Result<f64> {
    Ok(relative(hs_norm_sq(&[(ONE, x), (-ONE, y)])?, hs_norm_sq(&[(ONE, x)])?))
}

#[derive(Clone, Debug, Serialize)]
pub struct RfpIntegrity {
    pub m: usize,
    pub length: usize,
    pub norm: f64,
    /// `|tr rho - 1|`.
    pub trace_error: f64,
    /// `|| rho - rho^dagger || / || rho ||`.
    pub hermiticity: f64,
    /// Smallest eigenvalue of the dense `rho`, when formed.
    pub min_eigenvalue: Option<f64>,
    /// `|| P^2 - P || / || P ||` for `P = O(Pi_m)`.
    pub projector_idempotency: f64,
    pub projector_hermiticity: f64,
    /// `|| [P, Omega^{(x)L}] || / || P Omega^{(x)L} ||`.
    pub omega_commutator: f64,
    pub tol: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct StrongSymmetryReport {
    pub m: usize,
    pub a: String,
    pub length: usize,
    /// `tr[rho^dagger O_a rho] / tr[rho^dagger rho]`.
    pub lambda: C64,
    /// The character value `lambda_ma`.
    pub expected: C64,
    /// `|| O_a rho - lambda rho || / || O_a rho ||`.
    pub residual: f64,
    pub tol: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct TraceOutReport {
    pub m: usize,
    pub length: usize,
    /// `|| tr_s rho_m - O^(L-1)(P_I E) Omega^{(x)(L-1)} / tr Psi_I(theta) ||_F`
    /// per site `s`: the traced site contributes the transfer matrix `E`,
    /// which survives only on the unit block.
    pub site_residuals: Vec<f64>,
    /// The same against `O_I^(L-1) Omega^{(x)(L-1)} / tr Psi_I(theta)`, i.e.
    /// with the rank-one boundary `Psi_I(theta)` replaced by `P_I`. Reported
    /// for comparison; not part of `pass`.
    pub unit_operator_residuals: Vec<f64>,
    pub reduced_trace: f64,
    /// `|| tr_0 rho_m - tr_0 rho_k ||_F` for every fixed point `k`.
    pub indistinguishability: Vec<f64>,
    pub tol: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct TransferPair {
    pub a: String,
    pub b: String,
    pub spectrum: Vec<C64>,
    /// `⊎_c N_ab^c spec Psi_c(theta)`, zero-padded to the size of `E_ab`.
    pub expected: Vec<C64>,
    pub distance: f64,
    pub unit_multiplicity: usize,
    pub expected_unit_multiplicity: u32,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct PurificationReport {
    pub m: usize,
    pub length: usize,
    /// `|| tr_anc |Psi_m><Psi_m| - rho_m ||_F`, when dense.
    pub state_residual: Option<f64>,
    /// Symmetry of the purification under `O_a (x) 1_anc`, per label.
    pub symmetry: Vec<(String, MpsSymmetryCheck)>,
    pub pairs: Vec<TransferPair>,
    pub tol: f64,
    pub pass: bool,
}

impl RfpLab {
    /// Trace, hermiticity, positivity and projector checks of `rho_m^(L)`.
    pub fn check_integrity(&self, m: usize, length: usize, tol: f64) -> Result<RfpIntegrity> {
        let rfp = self.build_rfp(m, length)?;
        let trace_error = (self.trace(&rfp.rho)? - ONE).norm();
        let hermiticity = hs_gap(&rfp.rho, &rfp.rho.dagger())?;
        let min_eigenvalue = if length <= DENSE_MAX_LENGTH {
            Some(hermitian_eigen(&rfp.dense()?)?.0[0])
        } else {
            None
        };
        let p = &rfp.projector;
        let projector_idempotency = hs_gap(p, &p.product(p)?)?;
        let projector_hermiticity = hs_gap(p, &p.dagger())?;
        let w = self.omega_power(length)?;
        let omega_commutator = hs_gap(&p.product(&w)?, &w.product(p)?)?;
        let pass = trace_error <= tol
            && hermiticity <= tol
            && min_eigenvalue.is_none_or(|e| e >= -tol)
            && projector_idempotency <= tol
            && projector_hermiticity <= tol
            && omega_commutator <= tol;
        Ok(RfpIntegrity {
            m,
            length,
            norm: rfp.norm,
            trace_error,
            hermiticity,
            min_eigenvalue,
            projector_idempotency,
            projector_hermiticity,
            omega_commutator,
            tol,
            pass,
        })
    }

    /// `O_a rho_m = lambda_ma rho_m`, with `lambda` extracted by HS projection.
    pub fn check_strong_symmetry(&self, m: usize, a: &str, length: usize, tol: f64) -> Result<StrongSymmetryReport> {
        let ia = self.sym.label(a)?;
        let rho = self.build_rfp(m, length)?.rho;
        let o_rho = self.sym.operator(ia, length)?.product(&rho)?;
        let lambda = hs_inner(&rho, &o_rho)? / hs_inner(&rho, &rho)?;
        let residual = relative(hs_norm_sq(&[(ONE, &o_rho), (-lambda, &rho)])?, hs_norm_sq(&[(ONE, &o_rho)])?);
        let expected = self.irreps_1d[m][ia];
        let pass = residual <= tol && (lambda - expected).norm() <= tol;
        Ok(StrongSymmetryReport { m, a: a.to_string(), length, lambda, expected, residual, tol, pass })
    }

    /// `|| [O_a, rho_m] || / || O_a rho_m ||`.
    pub fn check_weak_symmetry(&self, m: usize, a: &str, length: usize) -> Result<f64> {
        let o = self.sym.operator(self.sym.label(a)?, length)?;
        let rho = self.build_rfp(m, length)?.rho;
        hs_gap(&o.product(&rho)?, &rho.product(&o)?)
    }

    /// Partial traces of the dense `rho_m^(L)` over every site, against the
    /// `m`-independent state `O^(L-1)(P_I E) Omega^{(x)(L-1)} / tr Psi_I(theta)`.
    pub fn trace_out_site(&self, m: usize, length: usize, tol: f64) -> Result<TraceOutReport> {
        if !(2..=DENSE_MAX_LENGTH + 1).contains(&length) {
            return Err(Error::InvalidInput(format!("trace-out needs 2 <= L <= {}", DENSE_MAX_LENGTH + 1)));
        }
        let d = self.sym.phys_dim();
        let dims = vec![d; length];
        let reduce = |k: usize, site: usize| -> Result<CMatrix> {
            partial_trace(&self.build_rfp(k, length)?.dense()?, &dims, site)
        };
        let unit = self.sym.ring.unit();
        let w = self.omega_power(length - 1)?;
        let scale = 1.0 / self.transfer.diagnostics.unit_trace;
        let target = {
            let x = &self.sym.p[unit] * &self.transfer.e_matrix;
            let o = MpoOperator::new(self.sym.tensor()?, x, length - 1)?.product(&w)?;
            assemble_dense(&o)?.scale_real(scale)
        };
        let unit_target = assemble_dense(&self.sym.operator(unit, length - 1)?.product(&w)?)?.scale_real(scale);
        let mut site_residuals = Vec::with_capacity(length);
        let mut unit_operator_residuals = Vec::with_capacity(length);
        let mut first = None;
        for site in 0..length {
            // remaining sites come out as (0..site, site+1..L); put them in
            // cyclic order starting after the traced one
            let r = rotate_sites(&reduce(m, site)?, d, length - 1, site);
            site_residuals.push(frob_residual(&r, &target)?);
            unit_operator_residuals.push(frob_residual(&r, &unit_target)?);
            first.get_or_insert(r);
        }
        let first = first.expect("at least two sites");
        let reduced_trace = first.trace().re;
        let indistinguishability = (0..self.idempotents.len())
            .map(|k| frob_residual(&first, &reduce(k, 0)?))
            .collect::<Result<Vec<f64>>>()?;
        let pass = site_residuals.iter().chain(&indistinguishability).all(|r| *r <= tol)
            && (reduced_trace - 1.0).abs() <= tol;
        Ok(TraceOutReport { m, length, site_residuals, unit_operator_residuals, reduced_trace, indistinguishability, tol, pass })
    }

    /// MPS `|Psi_m> = O(Pi_m) sqrt(Omega)^{(x)L} / sqrt(N_m)` on the doubled
    /// physical space (system index first).
    pub fn purification(&self, m: usize) -> Result<MpsTensor> {
        let norm = self.normalization(m)?;
        let root = self.omega.sqrt()?;
        let p = self.projector(m, 1)?;
        let t = p.tensor().times_physical(&root)?;
        MpsTensor::from_operator_tensor(&t, p.boundary().scale_real(1.0 / norm.sqrt()))
    }

    /// Mixed transfer matrix `E_ab = sum_ij A_a^{ij} (x) conj(A_bbar^{ij})`
    /// with `A_a = T_a sqrt(Omega)`.
    pub fn mixed_transfer(&self, a: usize, b: usize) -> Result<CMatrix> {
        let root = self.omega.sqrt()?;
        let ta = self.sym.irrep_tensor(a)?.times_physical(&root)?;
        let tb = self.sym.irrep_tensor(self.sym.ring.dual(b))?.times_physical(&root)?;
        let (da, db, d) = (ta.bond_dim(), tb.bond_dim(), ta.phys_dim());
        Ok(CMatrix::from_fn(da * db, da * db, |row, col| {
            let (a1, a2, b1, b2) = (row / db, row % db, col / db, col % db);
            let mut acc = ZERO;
            for i in 0..d {
                for j in 0..d {
                    acc += ta.get(a1, b1, i, j) * tb.get(a2, b2, i, j).conj();
                }
            }
            acc
        }))
    }

    pub fn purification_check(&self, m: usize, length: usize, tol: f64) -> Result<PurificationReport> {
        let mps = self.purification(m)?;
        let d = self.sym.phys_dim();
        let state_residual = if length <= DENSE_MAX_LENGTH {
            let psi = mps.dense(length)?;
            let dim = d.pow(length as u32);
            // psi indexed by sites (i_s, j_s); regroup as (system, ancilla)
            let mut amp = CMatrix::zeros(dim, dim);
            for (idx, v) in psi.iter().enumerate() {
                let (mut r, mut sys, mut anc, mut place) = (idx, 0, 0, 1);
                for _ in 0..length {
                    let pair = r % (d * d);
                    r /= d * d;
                    sys += (pair / d) * place;
                    anc += (pair % d) * place;
                    place *= d;
                }
                amp[(sys, anc)] = *v;
            }
            let reduced = &amp * &amp.adjoint();
            Some(frob_residual(&reduced, &self.build_rfp(m, length)?.dense()?)?)
        } else {
            None
        };
        let k = self.sym.ring.rank();
        let mut symmetry = Vec::with_capacity(k);
        let mut sym_ok = true;
        for a in 0..k {
            let op = self.sym.operator(a, length)?.with_ancilla(d);
            let check = check_mps_symmetric(&mps, &op, tol)?;
            sym_ok &= check.lambda.is_some_and(|l| (l - self.irreps_1d[m][a]).norm() <= tol);
            symmetry.push((self.sym.ring.label(a).to_string(), check));
        }
        let block_spectra = self
            .transfer
            .blocks
            .iter()
            .map(|b| Ok(eig_spectrum(b, 1e-9)?.eigenvalues))
            .collect::<Result<Vec<_>>>()?;
        let mut pairs = Vec::with_capacity(k * k);
        for a in 0..k {
            for b in 0..k {
                let e = self.mixed_transfer(a, b)?;
                let spectrum = eig_spectrum(&e, 1e-9)?.eigenvalues;
                let mut expected: Vec<C64> = Vec::new();
                for (c, spec) in block_spectra.iter().enumerate() {
                    for _ in 0..self.sym.ring.n(a, b, c) {
                        expected.extend(spec);
                    }
                }
                if expected.len() > spectrum.len() {
                    return Err(Error::InvalidInput("fusion channels exceed the mixed transfer dimension".into()));
                }
                expected.resize(spectrum.len(), ZERO);
                let distance = multiset_distance(&spectrum, &expected);
                let unit_multiplicity = spectrum.iter().filter(|z| (*z - ONE).norm() <= tol).count();
                let expected_unit_multiplicity = self.sym.ring.n(a, b, self.sym.ring.unit());
                let pass = distance <= tol && unit_multiplicity == expected_unit_multiplicity as usize;
                pairs.push(TransferPair {
                    a: self.sym.ring.label(a).to_string(),
                    b: self.sym.ring.label(b).to_string(),
                    spectrum,
                    expected,
                    distance,
                    unit_multiplicity,
                    expected_unit_multiplicity,
                    pass,
                });
            }
        }
        let pass = state_residual.is_none_or(|r| r <= tol) && sym_ok && pairs.iter().all(|p| p.pass);
        Ok(PurificationReport { m, length, state_residual, symmetry, pairs, tol, pass })
    }
}
