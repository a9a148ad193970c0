use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::table::WhaTable;
use crate::error::{Error, Result};
use crate::numerics::{
    cholesky_upper, frob_residual, hermitian_eigen, inverse, kron, null_space, rank, CMatrix, C64,
    ZERO,
};
use crate::par;

/// Default singular-value threshold for intertwiner and commutant solves.
pub const NULL_THRESHOLD: f64 = 1e-8;

/// Basis-indexed matrices `rho(e_x)` of an algebra representation.
#[derive(Clone, Debug, PartialEq)]
pub struct Representation {
    dim: usize,
    mats: Vec<CMatrix>,
}

/// Verification residuals of a representation against its algebra.
#[derive(Clone, Debug, Serialize)]
pub struct RepFlags {
    pub multiplicative_residual: f64,
    pub star_residual: f64,
    pub unital_residual: f64,
    /// Rank of the `n x dim^2` coefficient matrix of the basis images.
    pub image_rank: usize,
    pub is_rep: bool,
    pub is_star: bool,
    pub is_unital: bool,
    pub is_faithful: bool,
}

impl Representation {
    pub fn new(mats: Vec<CMatrix>) -> Result<Self> {
        let dim = mats.first().map(|m| m.rows()).unwrap_or(0);
        for m in &mats {
            if m.rows() != dim || m.cols() != dim {
                return Err(Error::Shape(format!(
                    "representation matrix is {}x{}, expected {dim}x{dim}",
                    m.rows(),
                    m.cols()
                )));
            }
        }
        Ok(Self { dim, mats })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.mats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mats.is_empty()
    }

    pub fn mats(&self) -> &[CMatrix] {
        &self.mats
    }

    pub fn mat(&self, x: usize) -> &CMatrix {
        &self.mats[x]
    }

    /// `rho(v)` for a coefficient vector.
    pub fn evaluate(&self, v: &[C64]) -> CMatrix {
        assert_eq!(v.len(), self.mats.len(), "coefficient length");
        let mut out = CMatrix::zeros(self.dim, self.dim);
        for (m, &c) in self.mats.iter().zip(v) {
            out.add_scaled(m, c);
        }
        out
    }

    /// Character: `tr rho(e_x)` for every basis element.
    pub fn character(&self) -> Vec<C64> {
        self.mats.iter().map(|m| m.trace()).collect()
    }

    /// `V^dagger rho V` for an isometry `V` onto an invariant subspace.
    pub fn restrict(&self, v: &CMatrix) -> Representation {
        let vd = v.adjoint();
        let mats = self.mats.iter().map(|m| &(&vd * m) * v).collect();
        Representation { dim: v.cols(), mats }
    }

    /// Block-diagonal sum, together with the orthogonal projectors onto the
    /// summands.
    pub fn direct_sum(reps: &[Representation]) -> Result<(Representation, Vec<CMatrix>)> {
        let n = reps.first().map(|r| r.len()).unwrap_or(0);
        if reps.iter().any(|r| r.len() != n) {
            return Err(Error::Shape("summands over different bases".into()));
        }
        let total: usize = reps.iter().map(|r| r.dim).sum();
        let mut mats = vec![CMatrix::zeros(total, total); n];
        let mut projectors = Vec::with_capacity(reps.len());
        let mut offset = 0;
        for r in reps {
            for (x, m) in r.mats.iter().enumerate() {
                mats[x].set_block(offset, offset, m);
            }
            let mut p = CMatrix::zeros(total, total);
            p.set_block(offset, offset, &CMatrix::identity(r.dim));
            projectors.push(p);
            offset += r.dim;
        }
        Ok((Representation { dim: total, mats }, projectors))
    }

    /// Checks multiplicativity on all basis pairs, the star property,
    /// unitality and faithfulness.
    pub fn check(&self, alg: &WhaTable, tol: f64) -> RepFlags {
        let d = alg.dim();
        assert_eq!(self.mats.len(), d, "representation over a different basis");
        let multiplicative_residual = par::max_range(d, |x| {
            let mut worst: f64 = 0.0;
            for y in 0..d {
                let lhs = self.evaluate(&alg.mul_basis(x, y));
                let rhs = &self.mats[x] * &self.mats[y];
                worst = worst.max(frob_residual(&lhs, &rhs).unwrap_or(f64::INFINITY));
            }
            worst
        });
        let star_residual = par::max_range(d, |x| {
            let lhs = self.evaluate(&alg.star_of(&alg.basis_vector(x)));
            frob_residual(&lhs, &self.mats[x].adjoint()).unwrap_or(f64::INFINITY)
        });
        let unital_residual =
            frob_residual(&self.evaluate(alg.unit()), &CMatrix::identity(self.dim)).unwrap_or(f64::INFINITY);
        let image_rank = rank(&self.coefficient_matrix(), 1e-10);
        RepFlags {
            multiplicative_residual,
            star_residual,
            unital_residual,
            image_rank,
            is_rep: multiplicative_residual <= tol,
            is_star: star_residual <= tol,
            is_unital: unital_residual <= tol,
            is_faithful: image_rank == d,
        }
    }

    /// Row `x` holds the flattened matrix `rho(e_x)`.
    pub fn coefficient_matrix(&self) -> CMatrix {
        let d2 = self.dim * self.dim;
        CMatrix::from_fn(self.mats.len(), d2, |x, k| self.mats[x].data()[k])
    }
}

/// `(r1 (x) r2) o Delta`, kept on the full tensor-product space.
pub fn monoidal_product(alg: &WhaTable, r1: &Representation, r2: &Representation) -> Result<Representation> {
    let d = alg.dim();
    if r1.len() != d || r2.len() != d {
        return Err(Error::Shape("factors are not representations of this algebra".into()));
    }
    let n = r1.dim * r2.dim;
    let mats = par::map_range(d, |x| -> Result<CMatrix> {
        let mut m = CMatrix::zeros(n, n);
        for &(a, b, c) in alg.coproduct_of(x) {
            m.add_scaled(&kron(&r1.mats[a], &r2.mats[b])?, c);
        }
        Ok(m)
    });
    Representation::new(mats.into_iter().collect::<Result<Vec<_>>>()?)
}

/// Solutions `W` (`irrep.dim x rep.dim`) of `W rho(x) = psi(x) W` for all
/// basis `x`.
pub fn intertwiners(rep: &Representation, irrep: &Representation, threshold: f64) -> Vec<CMatrix> {
    let (big, small) = (rep.dim, irrep.dim);
    let unknowns = small * big;
    let mut rows: Vec<C64> = Vec::new();
    let mut nrows = 0;
    for (rho, psi) in rep.mats.iter().zip(&irrep.mats) {
        if rho.max_abs() == 0.0 && psi.max_abs() == 0.0 {
            continue;
        }
        for i in 0..small {
            for j in 0..big {
                let mut row = vec![ZERO; unknowns];
                for k in 0..big {
                    row[i * big + k] += rho[(k, j)];
                }
                for k in 0..small {
                    row[k * big + j] -= psi[(i, k)];
                }
                rows.extend(row);
                nrows += 1;
            }
        }
    }
    let system = CMatrix::new(nrows, unknowns, rows).expect("finite system");
    null_space(&system, threshold)
        .into_iter()
        .map(|v| CMatrix::new(small, big, v).expect("intertwiner shape"))
        .collect()
}

#[derive(Clone, Debug)]
pub struct IrrepBlock {
    /// Index into the irreps list passed to [`decompose`].
    pub irrep: usize,
    pub multiplicity: usize,
    /// `rep.dim x (multiplicity * irrep.dim)`, copy-major columns.
    pub isometry: CMatrix,
}

#[derive(Clone, Debug)]
pub struct IrrepDecomposition {
    pub blocks: Vec<IrrepBlock>,
    pub residual: f64,
}

impl IrrepDecomposition {
    /// Multiplicity of every irrep in the input list (zeros included).
    pub fn multiplicities(&self, n_irreps: usize) -> Vec<usize> {
        let mut m = vec![0; n_irreps];
        for b in &self.blocks {
            m[b.irrep] = b.multiplicity;
        }
        m
    }
}

/// Decomposes a *-representation into the given pairwise inequivalent
/// *-irreps. Multiplicities are intertwiner-space dimensions; the residual
/// covers both column orthonormality of the stacked isometries and the
/// reconstruction of every `rho(x)`. A kernel (non-unital part) is allowed.
pub fn decompose(rep: &Representation, irreps: &[Representation], tol: f64) -> Result<IrrepDecomposition> {
    decompose_with_threshold(rep, irreps, tol, NULL_THRESHOLD)
}

pub fn decompose_with_threshold(
    rep: &Representation,
    irreps: &[Representation],
    tol: f64,
    threshold: f64,
) -> Result<IrrepDecomposition> {
    for irr in irreps {
        if irr.len() != rep.len() {
            return Err(Error::Shape("irrep over a different basis".into()));
        }
    }
    let found = par::map(irreps, |irr| intertwiners(rep, irr, threshold));
    let mut blocks = Vec::new();
    let mut columns: Vec<Vec<C64>> = Vec::new();
    for (c, ws) in found.into_iter().enumerate() {
        if ws.is_empty() {
            continue;
        }
        let dc = irreps[c].dim as f64;
        let m = ws.len();
        let gram = CMatrix::from_fn(m, m, |i, j| (&ws[i] * &ws[j].adjoint()).trace() / dc);
        let (vals, vecs) = hermitian_eigen(&gram)?;
        if vals.iter().any(|&v| v <= 0.0) {
            return Err(Error::Decomposition { residual: f64::INFINITY });
        }
        let inv_sqrt = {
            let d = CMatrix::diag_real(&vals.iter().map(|v| 1.0 / v.sqrt()).collect::<Vec<_>>());
            &(&vecs * &d) * &vecs.adjoint()
        };
        let mut iso_cols = Vec::new();
        for i in 0..m {
            let mut w = CMatrix::zeros(irreps[c].dim, rep.dim);
            for (j, wj) in ws.iter().enumerate() {
                w.add_scaled(wj, inv_sqrt[(i, j)]);
            }
            let wd = w.adjoint();
            for col in 0..wd.cols() {
                iso_cols.push(wd.column(col));
            }
        }
        columns.extend(iso_cols.iter().cloned());
        blocks.push(IrrepBlock {
            irrep: c,
            multiplicity: m,
            isometry: CMatrix::from_columns(rep.dim, &iso_cols),
        });
    }
    let stacked = CMatrix::from_columns(rep.dim, &columns);
    let ortho = frob_residual(&(&stacked.adjoint() * &stacked), &CMatrix::identity(columns.len()))?;
    let recon = par::max_range(rep.len(), |x| {
        let mut m = CMatrix::zeros(rep.dim, rep.dim);
        for b in &blocks {
            let dc = irreps[b.irrep].dim;
            for copy in 0..b.multiplicity {
                let cols: Vec<usize> = (copy * dc..(copy + 1) * dc).collect();
                let all: Vec<usize> = (0..rep.dim).collect();
                let v = b.isometry.submatrix(&all, &cols);
                m = &m + &(&(&v * irreps[b.irrep].mat(x)) * &v.adjoint());
            }
        }
        let scale = rep.mat(x).frob_norm().max(1.0);
        frob_residual(&m, rep.mat(x)).unwrap_or(f64::INFINITY) / scale
    });
    let residual = ortho.max(recon);
    if !(residual <= tol) {
        return Err(Error::Decomposition { residual });
    }
    Ok(IrrepDecomposition { blocks, residual })
}

/// Faithful *-representation obtained from the left regular representation
/// by orthonormalizing with the tracial form `<u, v> = Tr L(u* v)`.
pub fn regular_star_rep(alg: &WhaTable) -> Result<Representation> {
    let d = alg.dim();
    let traces: Vec<C64> = (0..d).map(|z| alg.left_regular(&alg.basis_vector(z)).trace()).collect();
    let stars: Vec<Vec<C64>> = (0..d).map(|x| alg.star_of(&alg.basis_vector(x))).collect();
    let gram = CMatrix::from_fn(d, d, |x, y| {
        let prod = alg.mul(&stars[x], &alg.basis_vector(y));
        prod.iter().zip(&traces).map(|(a, b)| a * b).sum()
    });
    let c = cholesky_upper(&gram).map_err(|_| {
        Error::InvalidInput("trace form is not positive definite; no C*-structure for this star".into())
    })?;
    let ci = inverse(&c)?;
    let mats = (0..d)
        .map(|x| &(&c * &alg.left_regular(&alg.basis_vector(x))) * &ci)
        .collect();
    Representation::new(mats)
}

/// Orthonormal basis of the commutant `{K : [rho(x), K] = 0}`.
pub fn commutant(rep: &Representation, threshold: f64) -> Vec<CMatrix> {
    let n = rep.dim;
    let unknowns = n * n;
    let mut rows = Vec::new();
    let mut nrows = 0;
    for rho in &rep.mats {
        if rho.max_abs() == 0.0 {
            continue;
        }
        for i in 0..n {
            for j in 0..n {
                let mut row = vec![ZERO; unknowns];
                // (rho K)_{ij} - (K rho)_{ij}
                for k in 0..n {
                    row[k * n + j] += rho[(i, k)];
                    row[i * n + k] -= rho[(k, j)];
                }
                rows.extend(row);
                nrows += 1;
            }
        }
    }
    if nrows == 0 {
        return (0..unknowns).map(|k| CMatrix::unit(n, k / n, k % n)).collect();
    }
    let system = CMatrix::new(nrows, unknowns, rows).expect("finite system");
    null_space(&system, threshold)
        .into_iter()
        .map(|v| CMatrix::new(n, n, v).expect("commutant shape"))
        .collect()
}

fn clusters(vals: &[f64], gap: f64) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = Vec::new();
    for (i, &v) in vals.iter().enumerate() {
        match out.last_mut() {
            Some(cur) if (v - vals[*cur.last().unwrap()]).abs() <= gap => cur.push(i),
            _ => out.push(vec![i]),
        }
    }
    out
}

fn invariance_residual(rep: &Representation, v: &CMatrix, sub: &Representation) -> f64 {
    rep.mats
        .iter()
        .zip(&sub.mats)
        .map(|(m, s)| frob_residual(&(m * v), &(v * s)).unwrap_or(f64::INFINITY))
        .fold(0.0, f64::max)
}

/// Pairwise inequivalent irreducible constituents of a *-representation.
/// Eigenspaces of a seeded random Hermitian commutant element are
/// invariant and (generically) irreducible; classes are identified by
/// characters. The zero representation on the kernel is dropped. The
/// result is in order of first appearance.
pub fn irreducible_components(rep: &Representation, tol: f64, seed: u64) -> Result<Vec<Representation>> {
    let basis = commutant(rep, NULL_THRESHOLD);
    let mut last_residual = f64::INFINITY;
    for attempt in 0..8u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(attempt));
        let mut h = CMatrix::zeros(rep.dim, rep.dim);
        for k in &basis {
            let z = C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5);
            h.add_scaled(k, z);
        }
        let h = &h + &h.adjoint();
        let (vals, vecs) = hermitian_eigen(&h)?;
        let spread = vals.iter().fold(0.0f64, |a, v| a.max(v.abs())).max(1e-300);
        let groups = clusters(&vals, 1e-7 * spread);
        let all_rows: Vec<usize> = (0..rep.dim).collect();
        let mut found: Vec<Representation> = Vec::new();
        let mut chars: Vec<Vec<C64>> = Vec::new();
        let mut worst: f64 = 0.0;
        let mut irreducible = true;
        for g in groups {
            let v = vecs.submatrix(&all_rows, &g);
            let sub = rep.restrict(&v);
            worst = worst.max(invariance_residual(rep, &v, &sub));
            if sub.mats.iter().all(|m| m.max_abs() <= tol) {
                continue;
            }
            if commutant(&sub, NULL_THRESHOLD).len() != 1 {
                irreducible = false;
                break;
            }
            let ch = sub.character();
            let scale = ch.iter().map(|z| z.norm()).fold(1.0, f64::max);
            let known = chars.iter().any(|c| {
                c.iter().zip(&ch).all(|(a, b)| (a - b).norm() <= 1e-6 * scale)
            });
            if !known {
                chars.push(ch);
                found.push(sub);
            }
        }
        last_residual = worst;
        if irreducible && worst <= tol.max(1e-9) * rep.dim as f64 {
            return Ok(found);
        }
    }
    Err(Error::Decomposition { residual: last_residual })
}

/// Multiplicities `N_ab^c` of `irreps[c]` in `irreps[a] (x) irreps[b]`
/// (monoidal product through `alg`'s comultiplication).
pub fn fusion_multiplicities(alg: &WhaTable, irreps: &[Representation], tol: f64) -> Result<Vec<Vec<Vec<usize>>>> {
    let k = irreps.len();
    let pairs: Vec<(usize, usize)> = (0..k).flat_map(|a| (0..k).map(move |b| (a, b))).collect();
    let results = par::map(&pairs, |&(a, b)| -> Result<Vec<usize>> {
        let prod = monoidal_product(alg, &irreps[a], &irreps[b])?;
        Ok(decompose(&prod, irreps, tol)?.multiplicities(k))
    });
    let mut n = vec![vec![vec![0; k]; k]; k];
    for (&(a, b), r) in pairs.iter().zip(results) {
        n[a][b] = r?;
    }
    Ok(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::c;

    fn z2_group() -> WhaTable {
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

    fn sign_rep(s: f64) -> Representation {
        Representation::new(vec![CMatrix::identity(1), CMatrix::identity(1).scale_real(s)]).unwrap()
    }

    #[test]
    fn regular_rep_splits_into_characters() {
        let a = z2_group();
        let reg = regular_star_rep(&a).unwrap();
        let flags = reg.check(&a, 1e-12);
        assert!(flags.is_rep && flags.is_star && flags.is_unital && flags.is_faithful);
        let irr = irreducible_components(&reg, 1e-10, 7).unwrap();
        assert_eq!(irr.len(), 2);
        assert!(irr.iter().all(|r| r.dim() == 1));
    }

    #[test]
    fn sign_times_sign_is_trivial() {
        let a = z2_group();
        let irreps = [sign_rep(1.0), sign_rep(-1.0)];
        let n = fusion_multiplicities(&a, &irreps, 1e-10).unwrap();
        assert_eq!(n[1][1], vec![1, 0]);
        assert_eq!(n[0][1], vec![0, 1]);
    }

    #[test]
    fn product_with_counit_rep_keeps_spectrum() {
        // for a Hopf algebra the counit is a 1-dim representation
        let a = z2_group();
        let reg = regular_star_rep(&a).unwrap();
        let triv = sign_rep(1.0);
        let p = monoidal_product(&a, &reg, &triv).unwrap();
        for x in 0..2 {
            assert!(frob_residual(p.mat(x), reg.mat(x)).unwrap() < 1e-12);
        }
    }

    #[test]
    fn decompose_irrep_against_itself() {
        let r = sign_rep(-1.0);
        let d = decompose(&r, &[sign_rep(1.0), sign_rep(-1.0)], 1e-10).unwrap();
        assert_eq!(d.multiplicities(2), vec![0, 1]);
        assert!((d.blocks[0].isometry[(0, 0)].norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn incomplete_irrep_list_is_an_error() {
        let a = z2_group();
        let reg = regular_star_rep(&a).unwrap();
        let err = decompose(&reg, &[sign_rep(1.0)], 1e-8).unwrap_err();
        assert!(matches!(err, Error::Decomposition { residual } if residual > 0.1));
    }
}
