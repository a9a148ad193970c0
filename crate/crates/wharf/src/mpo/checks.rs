use serde::Serialize;

use super::tensor::{hs_norm_sq, hs_relative_distance};
use crate::category::FusionRing;
use crate::error::{Error, Result};
use crate::numerics::C64;
use crate::symmetry::MpoSymmetry;

#[derive(Clone, Debug, Serialize)]
pub struct FusionReport {
    pub a: String,
    pub b: String,
    /// Fusion channels `(c, N_ab^c)` that were tested.
    pub channels: Vec<(String, u32)>,
    pub lengths: Vec<usize>,
    /// `|| O_a O_b - sum_c N_ab^c O_c ||_HS / || O_a O_b ||_HS` per length.
    pub residuals: Vec<f64>,
    pub tol: f64,
    pub pass: bool,
}

/// Checks `O_a O_b = sum_c N_ab^c O_c` at every length, with `N` taken
/// from `ring`. Labels are names in the symmetry's own ring; `ring` must
/// list the same labels in the same order.
pub fn check_fusion(
    sym: &MpoSymmetry,
    ring: &FusionRing,
    a: &str,
    b: &str,
    lengths: &[usize],
    tol: f64,
) -> Result<FusionReport> {
    if ring.labels() != sym.ring.labels() {
        return Err(Error::InvalidInput("fusion ring labels differ from the symmetry's".into()));
    }
    let (ia, ib) = (sym.label(a)?, sym.label(b)?);
    let channels: Vec<(&str, u32)> =
        (0..ring.rank()).map(|c| (ring.label(c), ring.n(ia, ib, c))).filter(|&(_, n)| n > 0).collect();
    check_fusion_channels(sym, a, b, &channels, lengths, tol)
}

/// As [`check_fusion`] with the right-hand side `sum_c n_c O_c` given
/// explicitly, so that arbitrary (also wrong) fusion rules can be tested.
pub fn check_fusion_channels(
    sym: &MpoSymmetry,
    a: &str,
    b: &str,
    channels: &[(&str, u32)],
    lengths: &[usize],
    tol: f64,
) -> Result<FusionReport> {
    let (ia, ib) = (sym.label(a)?, sym.label(b)?);
    let idx: Vec<(usize, u32)> = channels.iter().map(|&(c, n)| Ok((sym.label(c)?, n))).collect::<Result<_>>()?;
    let residuals = crate::par::map(lengths, |&l| -> Result<f64> {
        let prod = sym.operator(ia, l)?.product(&sym.operator(ib, l)?)?;
        let ops: Vec<_> = idx.iter().map(|&(c, _)| sym.operator(c, l)).collect::<Result<_>>()?;
        let one = C64::new(1.0, 0.0);
        let mut terms = vec![(one, &prod)];
        terms.extend(idx.iter().zip(&ops).map(|(&(_, n), op)| (C64::new(-f64::from(n), 0.0), op)));
        let num = hs_norm_sq(&terms)?;
        let den = hs_norm_sq(&[(one, &prod)])?;
        Ok(if den > 0.0 { (num / den).sqrt() } else { num.sqrt() })
    })
    .into_iter()
    .collect::<Result<Vec<f64>>>()?;
    let pass = residuals.iter().all(|r| *r <= tol);
    Ok(FusionReport {
        a: a.to_string(),
        b: b.to_string(),
        channels: channels.iter().map(|&(c, n)| (c.to_string(), n)).collect(),
        lengths: lengths.to_vec(),
        residuals,
        tol,
        pass,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct DaggerReport {
    pub a: String,
    pub dual: String,
    pub lengths: Vec<usize>,
    /// `|| O_abar - O_a^dagger ||_HS / || O_a ||_HS` per length.
    pub residuals: Vec<f64>,
    pub tol: f64,
    pub pass: bool,
}

/// Checks that the operator of the dual label is the adjoint.
pub fn check_dagger_dual(sym: &MpoSymmetry, a: &str, lengths: &[usize], tol: f64) -> Result<DaggerReport> {
    let ia = sym.label(a)?;
    let ibar = sym.ring.dual(ia);
    let residuals = crate::par::map(lengths, |&l| -> Result<f64> {
        let oa = sym.operator(ia, l)?;
        hs_relative_distance(&oa.dagger(), &sym.operator(ibar, l)?)
    })
    .into_iter()
    .collect::<Result<Vec<f64>>>()?;
    let pass = residuals.iter().all(|r| *r <= tol);
    Ok(DaggerReport {
        a: a.to_string(),
        dual: sym.ring.label(ibar).to_string(),
        lengths: lengths.to_vec(),
        residuals,
        tol,
        pass,
    })
}
