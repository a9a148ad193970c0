//! Computable anomaly criteria: integrality of Frobenius-Perron dimensions
//! and the periodicity of symmetry-eigenvalue sequences.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::category::FusionRing;
use crate::error::{Error, Result};
use crate::numerics::{eig_spectrum, solve_least_squares, vec_norm, CMatrix, C64, ONE, ZERO};

/// Tolerance for recognizing an integer dimension. Looser than the linear
/// algebra tolerance since the dimensions come out of eigensolves.
pub const INTEGER_TOL: f64 = 1e-6;

/// Largest eigenvalue of each fusion matrix `N_a`, keyed by label.
///
/// `N_a` is non-negative, so the Perron root is real and dominates every
/// other eigenvalue in modulus.
pub fn fp_dimensions(ring: &FusionRing) -> Result<BTreeMap<String, f64>> {
    let mut out = BTreeMap::new();
    for a in 0..ring.rank() {
        let spec = eig_spectrum(&ring.fusion_matrix(a), 1e-12)?;
        let d = spec.eigenvalues.iter().map(|z| z.norm()).fold(0.0, f64::max);
        out.insert(ring.label(a).to_string(), d);
    }
    Ok(out)
}

/// `max_{a,b} |d_a d_b - sum_c N_ab^c d_c|`.
pub fn dimension_consistency(ring: &FusionRing, dims: &BTreeMap<String, f64>) -> f64 {
    let d = |a: usize| dims[ring.label(a)];
    let k = ring.rank();
    let mut worst: f64 = 0.0;
    for a in 0..k {
        for b in 0..k {
            let rhs: f64 = (0..k).map(|c| f64::from(ring.n(a, b, c)) * d(c)).sum();
            worst = worst.max((d(a) * d(b) - rhs).abs());
        }
    }
    worst
}

#[derive(Clone, Debug, Serialize)]
pub struct AnomalyVerdict {
    pub fp_dims: BTreeMap<String, f64>,
    pub integral: BTreeMap<String, bool>,
    /// Some simple object has a non-integer dimension, so no on-site,
    /// ancilla-free realization of the symmetry exists.
    pub anomalous: bool,
    pub consistency_residual: f64,
    pub tol: f64,
}

fn near_integer(x: f64, tol: f64) -> bool {
    (x - x.round()).abs() <= tol
}

pub fn integrality_verdict(ring: &FusionRing, tol: f64) -> Result<AnomalyVerdict> {
    let fp_dims = fp_dimensions(ring)?;
    let consistency_residual = dimension_consistency(ring, &fp_dims);
    let integral: BTreeMap<String, bool> = fp_dims.iter().map(|(l, d)| (l.clone(), near_integer(*d, tol))).collect();
    let anomalous = integral.values().any(|ok| !ok);
    Ok(AnomalyVerdict { fp_dims, integral, anomalous, consistency_residual, tol })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SequenceVerdict {
    /// Every characteristic root is a root of unity: the sequence is periodic.
    FiniteImage,
    /// Some root is off the unit circle or not recognizably a root of unity
    /// with denominator at most the number of samples.
    NotFiniteAtHorizon,
}

/// Minimal linear recurrence `sum_{t=0}^{s} C_t F(L + s - t) = 0`, `C_0 = 1`.
#[derive(Clone, Debug, Serialize)]
pub struct SequenceRecurrence {
    pub order: usize,
    /// `C_0 .. C_s`.
    pub coefficients: Vec<C64>,
    /// Roots of `P(z) = sum_t C_t z^(s - t)`.
    pub roots: Vec<C64>,
    /// Denominator `q` of each root `exp(2 pi i p / q)`, when recognized.
    pub root_orders: Vec<Option<usize>>,
    pub period: Option<usize>,
    pub verdict: SequenceVerdict,
    /// `max_L |sum_t C_t F(L + s - t)|` relative to the sequence scale.
    pub fit_residual: f64,
}

fn hankel_fit(values: &[C64], s: usize) -> Result<(Vec<C64>, f64)> {
    let rows = values.len() - s;
    // unknowns C_1..C_s; F(L + s) = -sum_t C_t F(L + s - t)
    let h = CMatrix::from_fn(rows, s, |l, t| values[l + s - 1 - t]);
    let rhs: Vec<C64> = (0..rows).map(|l| -values[l + s]).collect();
    let c = solve_least_squares(&h, &rhs)?;
    let mut coeffs = vec![ONE];
    coeffs.extend(c);
    Ok((coeffs.clone(), recurrence_residual(values, &coeffs)))
}

/// `max_L |sum_t C_t F(L + s - t)| / max |F|`.
pub fn recurrence_residual(values: &[C64], coeffs: &[C64]) -> f64 {
    let s = coeffs.len() - 1;
    let scale = values.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return 0.0;
    }
    (0..values.len() - s)
        .map(|l| coeffs.iter().enumerate().map(|(t, c)| c * values[l + s - t]).sum::<C64>().norm())
        .fold(0.0, f64::max)
        / scale
}

fn companion_roots(coeffs: &[C64]) -> Result<Vec<C64>> {
    let s = coeffs.len() - 1;
    let m = CMatrix::from_fn(s, s, |r, c| {
        if r == 0 {
            -coeffs[c + 1]
        } else if r == c + 1 {
            ONE
        } else {
            ZERO
        }
    });
    Ok(eig_spectrum(&m, 0.0)?.eigenvalues)
}

/// Continued-fraction convergents `p/q` of `x` with `q <= max_den`.
pub fn convergents(x: f64, max_den: usize) -> Vec<(i64, usize)> {
    let (mut p0, mut q0, mut p1, mut q1) = (0i64, 1usize, 1i64, 0usize);
    let mut r = x;
    let mut out = Vec::new();
    for _ in 0..64 {
        let a = r.floor();
        let (p, q) = (a as i64 * p1 + p0, a as usize * q1 + q0);
        if q > max_den {
            break;
        }
        out.push((p, q));
        let frac = r - a;
        if frac < 1e-15 {
            break;
        }
        (p0, q0, p1, q1) = (p1, q1, p, q);
        r = 1.0 / frac;
    }
    out
}

/// Order `q` of `z` as a root of unity `exp(2 pi i p / q)`, `q <= max_den`,
/// when `z` lies within `tol` of one.
pub fn root_of_unity_order(z: C64, max_den: usize, tol: f64) -> Option<usize> {
    if (z.norm() - 1.0).abs() > tol {
        return None;
    }
    let x = z.arg().rem_euclid(std::f64::consts::TAU) / std::f64::consts::TAU;
    convergents(x, max_den).into_iter().find_map(|(p, q)| {
        let w = C64::from_polar(1.0, std::f64::consts::TAU * p as f64 / q as f64);
        ((z - w).norm() <= tol).then_some(q)
    })
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 { a } else { gcd(b, a % b) }
}

/// Minimal recurrence, characteristic roots and period of `F(1..K)`.
pub fn analyze_sequence(values: &[C64], max_order: usize, tol: f64) -> Result<SequenceRecurrence> {
    let k = values.len();
    if max_order == 0 || k < 2 * max_order {
        return Err(Error::InvalidInput(format!("{k} samples cannot pin down a recurrence of order {max_order}")));
    }
    if values.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::InvalidInput("non-finite sequence value".into()));
    }
    if vec_norm(values) == 0.0 {
        return Ok(SequenceRecurrence {
            order: 0,
            coefficients: vec![ONE],
            roots: vec![],
            root_orders: vec![],
            period: Some(1),
            verdict: SequenceVerdict::FiniteImage,
            fit_residual: 0.0,
        });
    }
    let (coefficients, fit_residual) = (1..=max_order)
        .map(|s| hankel_fit(values, s))
        .find(|r| r.as_ref().map_or(true, |(_, res)| *res <= tol))
        .ok_or(Error::OrderExceeded { max_order })??;
    let roots = companion_roots(&coefficients)?;
    let root_orders: Vec<Option<usize>> = roots.iter().map(|z| root_of_unity_order(*z, k, tol)).collect();
    let period = root_orders
        .iter()
        .try_fold(1usize, |acc, q| q.map(|q| acc / gcd(acc, q) * q));
    let verdict = if period.is_some() { SequenceVerdict::FiniteImage } else { SequenceVerdict::NotFiniteAtHorizon };
    Ok(SequenceRecurrence { order: coefficients.len() - 1, coefficients, roots, root_orders, period, verdict, fit_residual })
}

/// With a detected period `l`, a non-anomalous symmetry forces every
/// eigenvalue at lengths `L = 0 mod l` to be a non-negative integer.
/// `values[i]` is taken at `L = i + 1`. `None` if no such length is sampled.
pub fn integral_at_period(values: &[C64], period: usize, tol: f64) -> Option<bool> {
    let picked: Vec<C64> = values.iter().enumerate().filter(|(i, _)| (i + 1) % period == 0).map(|(_, z)| *z).collect();
    if picked.is_empty() {
        return None;
    }
    Some(picked.iter().all(|z| z.im.abs() <= tol && z.re >= -tol && near_integer(z.re, tol)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn convergents_of_a_rational() {
        assert_eq!(convergents(5.0 / 12.0, 100).last(), Some(&(5, 12)));
        assert_eq!(convergents(0.0, 10), vec![(0, 1)]);
    }

    #[test]
    fn recognizes_roots_of_unity() {
        let z = C64::from_polar(1.0, std::f64::consts::TAU * 2.0 / 5.0);
        assert_eq!(root_of_unity_order(z, 30, 1e-9), Some(5));
        assert_eq!(root_of_unity_order(ONE, 30, 1e-9), Some(1));
        assert_eq!(root_of_unity_order(-ONE, 30, 1e-9), Some(2));
        assert_eq!(root_of_unity_order(C64::new(2.0, 0.0), 30, 1e-9), None);
        // golden-angle rotation is not of finite order
        let g = C64::from_polar(1.0, std::f64::consts::PI * (3.0 - 5f64.sqrt()));
        assert_eq!(root_of_unity_order(g, 30, 1e-9), None);
    }
}
