use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::numerics::{CMatrix, C64, DEFAULT_DENSE_CAP, ZERO};

/// Coefficients of an algebra element in the table's basis.
pub type Coeffs = Vec<C64>;

/// Structure constants of a finite-dimensional weak Hopf algebra with a
/// star operation.
///
/// * `x * y = sum_z mult(x, y, z) e_z`
/// * `Delta(e_z) = sum_{x,y} comult(z, x, y) e_x (x) e_y`
/// * column `x` of `antipode` holds the coefficients of `S(e_x)`
/// * `star` is applied after coefficient conjugation: `v* = star * conj(v)`
#[derive(Clone, Debug, PartialEq)]
pub struct WhaTable {
    basis: Vec<String>,
    // products[x * dim + y] = [(z, coeff)]
    products: Vec<Vec<(usize, C64)>>,
    // coproducts[z] = [(x, y, coeff)]
    coproducts: Vec<Vec<(usize, usize, C64)>>,
    unit: Coeffs,
    counit: Coeffs,
    antipode: CMatrix,
    star: CMatrix,
}

fn check_index(i: usize, dim: usize, what: &str) -> Result<()> {
    if i >= dim {
        return Err(Error::InvalidInput(format!("{what} index {i} out of range for dimension {dim}")));
    }
    Ok(())
}

fn finite(z: C64) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

impl WhaTable {
    /// Assembles a table from sparse entries. Duplicate entries are summed
    /// and exact zeros dropped.
    pub fn new(
        basis: Vec<String>,
        mult: &[(usize, usize, usize, C64)],
        comult: &[(usize, usize, usize, C64)],
        unit: Coeffs,
        counit: Coeffs,
        antipode: CMatrix,
        star: CMatrix,
    ) -> Result<Self> {
        let dim = basis.len();
        if unit.len() != dim || counit.len() != dim {
            return Err(Error::Shape(format!(
                "unit/counit lengths {}/{} for dimension {dim}",
                unit.len(),
                counit.len()
            )));
        }
        for (m, name) in [(&antipode, "antipode"), (&star, "star")] {
            if m.rows() != dim || m.cols() != dim {
                return Err(Error::Shape(format!("{name} is {}x{}, expected {dim}x{dim}", m.rows(), m.cols())));
            }
        }
        let mut mt: BTreeMap<(usize, usize, usize), C64> = BTreeMap::new();
        for &(x, y, z, v) in mult {
            check_index(x, dim, "mult")?;
            check_index(y, dim, "mult")?;
            check_index(z, dim, "mult")?;
            if !finite(v) {
                return Err(Error::InvalidInput("non-finite multiplication constant".into()));
            }
            *mt.entry((x, y, z)).or_insert(ZERO) += v;
        }
        let mut ct: BTreeMap<(usize, usize, usize), C64> = BTreeMap::new();
        for &(z, x, y, v) in comult {
            check_index(x, dim, "comult")?;
            check_index(y, dim, "comult")?;
            check_index(z, dim, "comult")?;
            if !finite(v) {
                return Err(Error::InvalidInput("non-finite comultiplication constant".into()));
            }
            *ct.entry((z, x, y)).or_insert(ZERO) += v;
        }
        if !unit.iter().chain(&counit).all(|&z| finite(z)) {
            return Err(Error::InvalidInput("non-finite unit or counit".into()));
        }
        let mut products = vec![Vec::new(); dim * dim];
        for ((x, y, z), v) in mt {
            if v != ZERO {
                products[x * dim + y].push((z, v));
            }
        }
        let mut coproducts = vec![Vec::new(); dim];
        for ((z, x, y), v) in ct {
            if v != ZERO {
                coproducts[z].push((x, y, v));
            }
        }
        Ok(Self { basis, products, coproducts, unit, counit, antipode, star })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[String] {
        &self.basis
    }

    pub fn unit(&self) -> &[C64] {
        &self.unit
    }

    pub fn counit(&self) -> &[C64] {
        &self.counit
    }

    pub fn antipode(&self) -> &CMatrix {
        &self.antipode
    }

    pub fn star(&self) -> &CMatrix {
        &self.star
    }

    /// Nonzero `(z, coeff)` with `e_x e_y = sum coeff e_z`.
    pub fn product_of(&self, x: usize, y: usize) -> &[(usize, C64)] {
        &self.products[x * self.dim() + y]
    }

    /// Nonzero `(x, y, coeff)` with `Delta(e_z) = sum coeff e_x (x) e_y`.
    pub fn coproduct_of(&self, z: usize) -> &[(usize, usize, C64)] {
        &self.coproducts[z]
    }

    /// All multiplication constants as `(x, y, z, coeff)`, sorted.
    pub fn mult_entries(&self) -> Vec<(usize, usize, usize, C64)> {
        let d = self.dim();
        let mut out = Vec::new();
        for x in 0..d {
            for y in 0..d {
                for &(z, v) in self.product_of(x, y) {
                    out.push((x, y, z, v));
                }
            }
        }
        out
    }

    /// All comultiplication constants as `(z, x, y, coeff)`, sorted.
    pub fn comult_entries(&self) -> Vec<(usize, usize, usize, C64)> {
        let mut out = Vec::new();
        for (z, list) in self.coproducts.iter().enumerate() {
            for &(x, y, v) in list {
                out.push((z, x, y, v));
            }
        }
        out
    }

    pub fn basis_vector(&self, x: usize) -> Coeffs {
        let mut v = vec![ZERO; self.dim()];
        v[x] = C64::new(1.0, 0.0);
        v
    }

    fn check_len(&self, v: &[C64]) -> Result<()> {
        if v.len() != self.dim() {
            return Err(Error::Shape(format!("vector of length {} for dimension {}", v.len(), self.dim())));
        }
        Ok(())
    }

    /// Bilinear extension of the multiplication.
    pub fn multiply(&self, u: &[C64], v: &[C64]) -> Result<Coeffs> {
        self.check_len(u)?;
        self.check_len(v)?;
        Ok(self.mul(u, v))
    }

    pub(crate) fn mul(&self, u: &[C64], v: &[C64]) -> Coeffs {
        let d = self.dim();
        let mut out = vec![ZERO; d];
        for (x, &ux) in u.iter().enumerate() {
            if ux == ZERO {
                continue;
            }
            for (y, &vy) in v.iter().enumerate() {
                if vy == ZERO {
                    continue;
                }
                let s = ux * vy;
                for &(z, c) in self.product_of(x, y) {
                    out[z] += s * c;
                }
            }
        }
        out
    }

    pub fn mul_basis(&self, x: usize, y: usize) -> Coeffs {
        let mut out = vec![ZERO; self.dim()];
        for &(z, c) in self.product_of(x, y) {
            out[z] += c;
        }
        out
    }

    /// `Delta(v)` as a dense `dim x dim` array, index `x * dim + y`.
    pub fn coproduct(&self, v: &[C64]) -> Coeffs {
        let d = self.dim();
        let mut out = vec![ZERO; d * d];
        for (z, &vz) in v.iter().enumerate() {
            if vz == ZERO {
                continue;
            }
            for &(x, y, c) in self.coproduct_of(z) {
                out[x * d + y] += vz * c;
            }
        }
        out
    }

    /// Iterated comultiplication into the `n`-fold tensor power
    /// (`n = 1` returns the input). Index order is big-endian over factors.
    pub fn comultiply(&self, v: &[C64], n: usize) -> Result<Coeffs> {
        self.check_len(v)?;
        if n == 0 {
            return Err(Error::InvalidInput("tensor power must be at least 1".into()));
        }
        let d = self.dim();
        let entries = (0..n).try_fold(1usize, |acc, _| acc.checked_mul(d));
        match entries {
            Some(e) if e <= DEFAULT_DENSE_CAP => {}
            _ => {
                return Err(Error::Size { entries: entries.unwrap_or(usize::MAX), cap: DEFAULT_DENSE_CAP });
            }
        }
        let mut cur = v.to_vec();
        for k in 1..n {
            // expand the last factor of a k-fold tensor
            let head = d.pow(k as u32 - 1);
            let mut next = vec![ZERO; head * d * d];
            for h in 0..head {
                for z in 0..d {
                    let c0 = cur[h * d + z];
                    if c0 == ZERO {
                        continue;
                    }
                    for &(x, y, c) in self.coproduct_of(z) {
                        next[(h * d + x) * d + y] += c0 * c;
                    }
                }
            }
            cur = next;
        }
        Ok(cur)
    }

    pub fn counit_of(&self, v: &[C64]) -> C64 {
        v.iter().zip(&self.counit).map(|(a, b)| a * b).sum()
    }

    pub fn antipode_of(&self, v: &[C64]) -> Coeffs {
        self.antipode.apply(v)
    }

    /// Antilinear star: `star * conj(v)`.
    pub fn star_of(&self, v: &[C64]) -> Coeffs {
        let cv: Vec<C64> = v.iter().map(|z| z.conj()).collect();
        self.star.apply(&cv)
    }

    /// Matrix of left multiplication by `v`: column `y` holds `v * e_y`.
    pub fn left_regular(&self, v: &[C64]) -> CMatrix {
        let d = self.dim();
        let mut m = CMatrix::zeros(d, d);
        for (x, &vx) in v.iter().enumerate() {
            if vx == ZERO {
                continue;
            }
            for y in 0..d {
                for &(z, c) in self.product_of(x, y) {
                    m[(z, y)] += vx * c;
                }
            }
        }
        m
    }

    /// Matrix of right multiplication by `v`: column `y` holds `e_y * v`.
    pub fn right_regular(&self, v: &[C64]) -> CMatrix {
        let d = self.dim();
        let mut m = CMatrix::zeros(d, d);
        for (x, &vx) in v.iter().enumerate() {
            if vx == ZERO {
                continue;
            }
            for y in 0..d {
                for &(z, c) in self.product_of(y, x) {
                    m[(z, y)] += vx * c;
                }
            }
        }
        m
    }

    /// The dual algebra on the dual basis `delta_x`: products come from the
    /// comultiplication and vice versa, the unit is the counit functional,
    /// the counit is evaluation at 1, the antipode is the transpose and the
    /// star is `f*(x) = conj(f(S(x)*))`.
    pub fn dual(&self) -> Result<WhaTable> {
        let d = self.dim();
        if crate::numerics::rank(&self.antipode, 1e-10) < d {
            return Err(Error::InvalidInput("antipode is singular; dual star undefined".into()));
        }
        let mult: Vec<_> = self.comult_entries().into_iter().map(|(z, x, y, v)| (x, y, z, v)).collect();
        let comult: Vec<_> = self.mult_entries().into_iter().map(|(x, y, z, v)| (z, x, y, v)).collect();
        let antipode = self.antipode.transpose();
        // column z of the dual star: coefficients of delta_z*, i.e. row z of conj(star) * S
        let star = (&self.star.conj() * &self.antipode).transpose();
        let basis = self.basis.iter().map(|b| format!("d({b})")).collect();
        WhaTable::new(basis, &mult, &comult, self.counit.clone(), self.unit.clone(), antipode, star)
    }

    /// Same structure with new basis labels.
    pub fn with_basis_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.dim() {
            return Err(Error::Shape("label count differs from dimension".into()));
        }
        self.basis = labels;
        Ok(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::c;

    fn z2_group() -> WhaTable {
        // basis {1, g}
        let mult = [(0, 0, 0, c(1.0)), (0, 1, 1, c(1.0)), (1, 0, 1, c(1.0)), (1, 1, 0, c(1.0))];
        let comult = [(0, 0, 0, c(1.0)), (1, 1, 1, c(1.0))];
        WhaTable::new(
            vec!["1".into(), "g".into()],
            &mult,
            &comult,
            vec![c(1.0), c(0.0)],
            vec![c(1.0), c(1.0)],
            CMatrix::identity(2),
            CMatrix::identity(2),
        )
        .unwrap()
    }

    #[test]
    fn multiply_and_shape_errors() {
        let a = z2_group();
        let g = a.basis_vector(1);
        assert_eq!(a.multiply(&g, &g).unwrap(), a.basis_vector(0));
        assert!(a.multiply(&g, &[c(1.0)]).is_err());
    }

    #[test]
    fn comultiply_grouplike() {
        let a = z2_group();
        let g = a.basis_vector(1);
        let t = a.comultiply(&g, 3).unwrap();
        assert_eq!(t.len(), 8);
        assert_eq!(t[7], c(1.0));
        assert_eq!(t.iter().filter(|z| **z != ZERO).count(), 1);
        assert_eq!(a.comultiply(&g, 1).unwrap(), g);
    }

    #[test]
    fn duplicate_entries_sum_and_zeros_drop() {
        let t = WhaTable::new(
            vec!["1".into()],
            &[(0, 0, 0, c(0.5)), (0, 0, 0, c(0.5))],
            &[(0, 0, 0, c(1.0)), (0, 0, 0, c(0.0))],
            vec![c(1.0)],
            vec![c(1.0)],
            CMatrix::identity(1),
            CMatrix::identity(1),
        )
        .unwrap();
        assert_eq!(t.mult_entries(), vec![(0, 0, 0, c(1.0))]);
        assert_eq!(t.comult_entries().len(), 1);
    }

    #[test]
    fn dual_of_group_algebra_is_function_algebra() {
        let d = z2_group().dual().unwrap();
        // pointwise product: delta_x delta_y = delta_{xy} delta_x
        assert_eq!(d.mul_basis(0, 0), d.basis_vector(0));
        assert_eq!(d.mul_basis(1, 1), d.basis_vector(1));
        assert!(d.mul_basis(0, 1).iter().all(|z| *z == ZERO));
        assert_eq!(d.unit(), &[c(1.0), c(1.0)]);
    }
}
