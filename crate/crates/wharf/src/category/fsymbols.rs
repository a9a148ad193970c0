use std::collections::BTreeMap;

use serde::Serialize;

use super::ring::FusionRing;
use crate::error::{Error, Result};
use crate::numerics::{frob_residual, CMatrix, C64, ZERO};

/// Key `(a, b, c, d, e, f)` of `F^{abc}_d[e, f]`, defined by
/// `((a b)_e c)_d = sum_f F^{abc}_d[e, f] (a (b c)_f)_d`.
pub type FKey = [usize; 6];

/// Associator data of a multiplicity-free fusion category.
#[derive(Clone, Debug)]
pub struct FSymbols {
    ring: FusionRing,
    f: BTreeMap<FKey, C64>,
    kappa: Vec<C64>,
    kappa_given: bool,
}

impl FSymbols {
    /// `kappa = None` derives the Frobenius-Schur indicators from the
    /// F-data; given values are compared against the derived ones during
    /// validation.
    pub fn new(ring: FusionRing, f: BTreeMap<FKey, C64>, kappa: Option<Vec<C64>>) -> Result<Self> {
        let k = ring.rank();
        for (key, v) in &f {
            if key.iter().any(|&i| i >= k) {
                return Err(Error::InvalidInput(format!("F-symbol key {key:?} out of range")));
            }
            if !admissible(&ring, key) {
                return Err(Error::InvalidInput(format!("F-symbol {} has inadmissible labels", key_label(&ring, key))));
            }
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(Error::InvalidInput("non-finite F-symbol".into()));
            }
        }
        let mut out = Self { ring, f, kappa: vec![], kappa_given: kappa.is_some() };
        out.kappa = match kappa {
            Some(v) if v.len() == k => v,
            Some(_) => return Err(Error::InvalidInput("one indicator per label is required".into())),
            None => out.derived_kappa(),
        };
        Ok(out)
    }

    pub fn ring(&self) -> &FusionRing {
        &self.ring
    }

    pub fn kappa(&self) -> &[C64] {
        &self.kappa
    }

    pub fn entries(&self) -> &BTreeMap<FKey, C64> {
        &self.f
    }

    /// `F^{abc}_d[e, f]`, zero when not stored.
    pub fn get(&self, a: usize, b: usize, c: usize, d: usize, e: usize, f: usize) -> C64 {
        self.f.get(&[a, b, c, d, e, f]).copied().unwrap_or(ZERO)
    }

    /// `kappa_a = d_a F^{a abar a}_a[I, I]` for self-dual `a`, 1 otherwise.
    pub fn derived_kappa(&self) -> Vec<C64> {
        let r = &self.ring;
        let i = r.unit();
        (0..r.rank())
            .map(|a| {
                if r.dual(a) == a {
                    self.get(a, a, a, a, i, i) * r.dim(a)
                } else {
                    C64::new(1.0, 0.0)
                }
            })
            .collect()
    }

    /// Channels `(rows e, cols f)` of the matrix `F^{abc}_d`.
    pub fn channels(&self, a: usize, b: usize, c: usize, d: usize) -> (Vec<usize>, Vec<usize>) {
        let r = &self.ring;
        let k = r.rank();
        let rows = (0..k).filter(|&e| r.n(a, b, e) > 0 && r.n(e, c, d) > 0).collect();
        let cols = (0..k).filter(|&f| r.n(b, c, f) > 0 && r.n(a, f, d) > 0).collect();
        (rows, cols)
    }

    pub fn matrix(&self, a: usize, b: usize, c: usize, d: usize) -> CMatrix {
        let (rows, cols) = self.channels(a, b, c, d);
        CMatrix::from_fn(rows.len(), cols.len(), |i, j| self.get(a, b, c, d, rows[i], cols[j]))
    }

    /// Fibonacci data with `F^{tau tau tau}_tau = [[1/phi, 1/sqrt(phi)], [1/sqrt(phi), -1/phi]]`.
    pub fn fibonacci() -> Self {
        let ring = FusionRing::fibonacci();
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        let mut f = all_admissible_ones(&ring);
        let t = 1;
        let (i, tau) = (0, 1);
        f.insert([t, t, t, t, i, i], C64::new(1.0 / phi, 0.0));
        f.insert([t, t, t, t, i, tau], C64::new(phi.powf(-0.5), 0.0));
        f.insert([t, t, t, t, tau, i], C64::new(phi.powf(-0.5), 0.0));
        f.insert([t, t, t, t, tau, tau], C64::new(-1.0 / phi, 0.0));
        Self::new(ring, f, None).expect("valid data")
    }

    /// `Vec_{Z2}` with associator `(-1)^{abc}` when `twisted`, trivial otherwise.
    pub fn z2(twisted: bool) -> Self {
        let ring = FusionRing::z2();
        let mut f = BTreeMap::new();
        for a in 0..2 {
            for b in 0..2 {
                for c in 0..2 {
                    let sign = if twisted && a * b * c == 1 { -1.0 } else { 1.0 };
                    f.insert([a, b, c, (a + b + c) % 2, (a + b) % 2, (b + c) % 2], C64::new(sign, 0.0));
                }
            }
        }
        Self::new(ring, f, None).expect("valid data")
    }

    /// Applies a vertex gauge `u(a, b; c)` (unit-modulus, 1 when any label
    /// is the unit): `F' = F u(a,b;e) u(e,c;d) / (u(b,c;f) u(a,f;d))`.
    pub fn gauge_transformed(&self, u: impl Fn(usize, usize, usize) -> C64) -> Self {
        let f = self
            .f
            .iter()
            .map(|(key, v)| {
                let [a, b, c, d, e, f] = *key;
                (*key, v * u(a, b, e) * u(e, c, d) / (u(b, c, f) * u(a, f, d)))
            })
            .collect();
        Self::new(self.ring.clone(), f, None).expect("gauge keeps admissibility")
    }
}

fn admissible(ring: &FusionRing, key: &FKey) -> bool {
    let [a, b, c, d, e, f] = *key;
    ring.n(a, b, e) > 0 && ring.n(e, c, d) > 0 && ring.n(b, c, f) > 0 && ring.n(a, f, d) > 0
}

fn all_admissible_ones(ring: &FusionRing) -> BTreeMap<FKey, C64> {
    let k = ring.rank();
    let mut f = BTreeMap::new();
    for a in 0..k {
        for b in 0..k {
            for c in 0..k {
                for d in 0..k {
                    for e in 0..k {
                        for g in 0..k {
                            if admissible(ring, &[a, b, c, d, e, g]) {
                                f.insert([a, b, c, d, e, g], C64::new(1.0, 0.0));
                            }
                        }
                    }
                }
            }
        }
    }
    f
}

pub(crate) fn key_label(ring: &FusionRing, key: &FKey) -> String {
    let [a, b, c, d, e, f] = key.map(|i| ring.label(i).to_string());
    format!("F^{{{a} {b} {c}}}_{{{d}}}[{e},{f}]")
}

/// Residuals of the categorical consistency conditions.
#[derive(Clone, Debug, Serialize)]
pub struct CategoryValidation {
    pub tol: f64,
    pub pentagon: f64,
    pub unitarity: f64,
    pub triangle: f64,
    pub dimensions: f64,
    pub indicators: f64,
    pub pass: bool,
}

impl CategoryValidation {
    pub fn residuals(&self) -> [(&'static str, f64); 5] {
        [
            ("pentagon", self.pentagon),
            ("unitarity", self.unitarity),
            ("triangle", self.triangle),
            ("dimensions", self.dimensions),
            ("indicators", self.indicators),
        ]
    }
}

/// Checks the pentagon equation
/// `F^{fcd}_e[g,l] F^{abl}_e[f,k] = sum_h F^{abc}_g[f,h] F^{ahd}_e[g,k] F^{bcd}_k[h,l]`
/// on every admissible tuple, unitarity of every `F^{abc}_d`, triviality of
/// moves involving the unit, `d_a d_b = sum_c N_ab^c d_c`, and the
/// Frobenius-Schur indicators.
pub fn validate_category(data: &FSymbols, tol: f64) -> CategoryValidation {
    let r = &data.ring;
    let k = r.rank();
    let pentagon = crate::par::max_range(k, |a| {
        let mut worst: f64 = 0.0;
        for b in 0..k {
            for c in 0..k {
                for d in 0..k {
                    for e in 0..k {
                        for f in (0..k).filter(|&f| r.n(a, b, f) > 0) {
                            for g in (0..k).filter(|&g| r.n(f, c, g) > 0 && r.n(g, d, e) > 0) {
                                for l in (0..k).filter(|&l| r.n(c, d, l) > 0 && r.n(f, l, e) > 0) {
                                    for kk in (0..k).filter(|&kk| r.n(b, l, kk) > 0 && r.n(a, kk, e) > 0) {
                                        let lhs = data.get(f, c, d, e, g, l) * data.get(a, b, l, e, f, kk);
                                        let rhs: C64 = (0..k)
                                            .map(|h| {
                                                data.get(a, b, c, g, f, h)
                                                    * data.get(a, h, d, e, g, kk)
                                                    * data.get(b, c, d, kk, h, l)
                                            })
                                            .sum();
                                        worst = worst.max((lhs - rhs).norm());
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        worst
    });
    let mut unitarity: f64 = 0.0;
    let mut triangle: f64 = 0.0;
    let i = r.unit();
    for a in 0..k {
        for b in 0..k {
            for c in 0..k {
                for d in 0..k {
                    let (rows, cols) = data.channels(a, b, c, d);
                    if rows.is_empty() && cols.is_empty() {
                        continue;
                    }
                    if rows.len() != cols.len() {
                        unitarity = f64::INFINITY;
                        continue;
                    }
                    let m = data.matrix(a, b, c, d);
                    let res = frob_residual(&(&m * &m.adjoint()), &CMatrix::identity(rows.len())).unwrap_or(f64::INFINITY);
                    unitarity = unitarity.max(res);
                    if a == i || b == i || c == i {
                        triangle = triangle.max(frob_residual(&m, &CMatrix::identity(rows.len())).unwrap_or(f64::INFINITY));
                    }
                }
            }
        }
    }
    let derived = data.derived_kappa();
    let mut indicators: f64 = 0.0;
    for (a, da) in derived.iter().enumerate() {
        indicators = indicators.max((da.norm() - 1.0).abs());
        if data.kappa_given {
            indicators = indicators.max((da - data.kappa[a]).norm());
        }
    }
    let dimensions = r.dimension_residual();
    let pass = [pentagon, unitarity, triangle, dimensions, indicators].iter().all(|x| *x <= tol);
    CategoryValidation { tol, pentagon, unitarity, triangle, dimensions, indicators, pass }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fibonacci_matrix_shape() {
        let f = FSymbols::fibonacci();
        assert_eq!(f.matrix(1, 1, 1, 1).rows(), 2);
        assert_eq!(f.matrix(1, 1, 1, 0).rows(), 1);
        assert!((f.kappa()[1] - C64::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn twisted_z2_indicator_is_negative() {
        let f = FSymbols::z2(true);
        assert!((f.kappa()[1] + C64::new(1.0, 0.0)).norm() < 1e-15);
        assert!(validate_category(&f, 1e-12).pass);
    }

    #[test]
    fn wrong_indicator_fails() {
        let f = FSymbols::z2(true);
        let bad = FSymbols::new(f.ring().clone(), f.entries().clone(), Some(vec![C64::new(1.0, 0.0); 2])).unwrap();
        let v = validate_category(&bad, 1e-9);
        assert!(!v.pass);
        assert!(v.indicators > 1.0);
    }

    #[test]
    fn inadmissible_entry_is_rejected() {
        let ring = FusionRing::z2();
        let f = BTreeMap::from([([0, 0, 0, 1, 0, 0], C64::new(1.0, 0.0))]);
        assert!(FSymbols::new(ring, f, None).is_err());
    }
}
