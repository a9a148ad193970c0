//! The 13-dimensional Fibonacci weak Hopf algebra `M2(C) + M3(C)`, its
//! self-pairing, and its canonical representations `Phi` (physical) and
//! `Psi` (virtual, of the dual algebra).
//!
//! Basis order: block `p = 1` (2x2 matrix units, row-major) then `p = 2`
//! (3x3 matrix units, row-major). Inside the 3x3 block the indices stand for
//! the label pairs 1:(I,tau), 2:(tau,I), 3:(tau,tau); inside the 2x2 block
//! they stand for 1:I, 2:tau. Every comultiplication term glues these labels
//! consistently.

use crate::error::{Error, Result};
use crate::numerics::{inverse, rank, CMatrix, C64, ZERO};
use crate::wha::{Representation, WhaTable};

pub const DIM: usize = 13;

/// `zeta = sqrt((sqrt(5) - 1) / 2)`.
pub fn zeta() -> f64 {
    ((5f64.sqrt() - 1.0) / 2.0).sqrt()
}

pub fn golden_ratio() -> f64 {
    (1.0 + 5f64.sqrt()) / 2.0
}

/// Matrix unit `e_{p,ij}` (1-based `p`, `i`, `j`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FibIndex {
    pub p: u8,
    pub i: u8,
    pub j: u8,
}

impl FibIndex {
    pub fn new(p: u8, i: u8, j: u8) -> Result<Self> {
        let n = block_size(p).ok_or_else(|| Error::InvalidInput(format!("no block {p}")))?;
        if i == 0 || j == 0 || i > n || j > n {
            return Err(Error::InvalidInput(format!("e_{{{p},{i}{j}}} is not a basis element")));
        }
        Ok(Self { p, i, j })
    }

    pub fn index(self) -> usize {
        match self.p {
            1 => (self.i as usize - 1) * 2 + (self.j as usize - 1),
            _ => 4 + (self.i as usize - 1) * 3 + (self.j as usize - 1),
        }
    }

    pub fn from_index(x: usize) -> Self {
        assert!(x < DIM, "basis index out of range");
        if x < 4 {
            Self { p: 1, i: (x / 2) as u8 + 1, j: (x % 2) as u8 + 1 }
        } else {
            let y = x - 4;
            Self { p: 2, i: (y / 3) as u8 + 1, j: (y % 3) as u8 + 1 }
        }
    }

    pub fn transposed(self) -> Self {
        Self { p: self.p, i: self.j, j: self.i }
    }

    pub fn label(self) -> String {
        format!("e{}_{}{}", self.p, self.i, self.j)
    }

    /// Position of `|p, i>` in the 5-dimensional block space.
    fn slot_row(self) -> usize {
        offset(self.p) + self.i as usize - 1
    }

    fn slot_col(self) -> usize {
        offset(self.p) + self.j as usize - 1
    }
}

fn block_size(p: u8) -> Option<u8> {
    match p {
        1 => Some(2),
        2 => Some(3),
        _ => None,
    }
}

fn offset(p: u8) -> usize {
    if p == 1 {
        0
    } else {
        2
    }
}

pub fn basis() -> Vec<FibIndex> {
    (0..DIM).map(FibIndex::from_index).collect()
}

fn e(p: u8, ij: u8) -> FibIndex {
    FibIndex::new(p, ij / 10, ij % 10).expect("valid literal")
}

/// `sign * zeta^power * left (x) right`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComultTerm {
    pub sign: f64,
    pub zeta_power: i32,
    pub left: FibIndex,
    pub right: FibIndex,
}

impl ComultTerm {
    pub fn coefficient(&self) -> f64 {
        self.sign * zeta().powi(self.zeta_power)
    }
}

/// `Delta(element) = sum of terms`.
#[derive(Clone, Debug, PartialEq)]
pub struct ComultLine {
    pub element: FibIndex,
    pub terms: Vec<ComultTerm>,
}

fn t(sign: f64, zeta_power: i32, left: FibIndex, right: FibIndex) -> ComultTerm {
    ComultTerm { sign, zeta_power, left, right }
}

/// Comultiplication of the nine elements from which the rest follow by the
/// star. Four right-hand factors differ from the commonly quoted form of
/// this table (`e1_11` -> `e2_11` in Delta(e1_22), `e1_11` -> `e1_22` in
/// Delta(e2_11), `e2_22` -> `e1_22` in Delta(e2_13), `e2_12` -> `e1_12` in
/// Delta(e2_23)); without them the label gluing breaks and the table is
/// neither coassociative nor counital.
pub fn comultiplication_lines() -> Vec<ComultLine> {
    vec![
        ComultLine {
            element: e(1, 11),
            terms: vec![t(1.0, 0, e(1, 11), e(1, 11)), t(1.0, 0, e(2, 11), e(2, 22))],
        },
        ComultLine {
            element: e(1, 12),
            terms: vec![
                t(1.0, 0, e(1, 12), e(1, 12)),
                t(1.0, 2, e(2, 12), e(2, 21)),
                t(1.0, 1, e(2, 13), e(2, 23)),
            ],
        },
        ComultLine {
            element: e(1, 22),
            terms: vec![
                t(1.0, 0, e(1, 22), e(1, 22)),
                t(1.0, 4, e(2, 22), e(2, 11)),
                t(1.0, 3, e(2, 23), e(2, 13)),
                t(1.0, 3, e(2, 32), e(2, 31)),
                t(1.0, 2, e(2, 33), e(2, 33)),
            ],
        },
        ComultLine {
            element: e(2, 11),
            terms: vec![
                t(1.0, 0, e(1, 11), e(2, 11)),
                t(1.0, 0, e(2, 11), e(1, 22)),
                t(1.0, 0, e(2, 11), e(2, 33)),
            ],
        },
        ComultLine {
            element: e(2, 12),
            terms: vec![
                t(1.0, 0, e(1, 12), e(2, 12)),
                t(1.0, 0, e(2, 12), e(1, 21)),
                t(1.0, 0, e(2, 13), e(2, 32)),
            ],
        },
        ComultLine {
            element: e(2, 13),
            terms: vec![
                t(1.0, 0, e(1, 12), e(2, 13)),
                t(1.0, 0, e(2, 13), e(1, 22)),
                t(1.0, 1, e(2, 12), e(2, 31)),
                t(-1.0, 2, e(2, 13), e(2, 33)),
            ],
        },
        ComultLine {
            element: e(2, 22),
            terms: vec![
                t(1.0, 0, e(1, 22), e(2, 22)),
                t(1.0, 0, e(2, 22), e(1, 11)),
                t(1.0, 0, e(2, 33), e(2, 22)),
            ],
        },
        ComultLine {
            element: e(2, 23),
            terms: vec![
                t(1.0, 0, e(1, 22), e(2, 23)),
                t(1.0, 0, e(2, 23), e(1, 12)),
                t(1.0, 1, e(2, 32), e(2, 21)),
                t(-1.0, 2, e(2, 33), e(2, 23)),
            ],
        },
        ComultLine {
            element: e(2, 33),
            terms: vec![
                t(1.0, 0, e(1, 22), e(2, 33)),
                t(1.0, 0, e(2, 33), e(1, 22)),
                t(1.0, 2, e(2, 22), e(2, 11)),
                t(-1.0, 3, e(2, 23), e(2, 13)),
                t(-1.0, 3, e(2, 32), e(2, 31)),
                t(1.0, 4, e(2, 33), e(2, 33)),
            ],
        },
    ]
}

/// Completes a partial comultiplication table with `Delta(x*) =
/// (* (x) *) Delta(x)`. Since the star transposes matrix units and the
/// coefficients are real, each generated term is the transposed pair.
pub fn complete_by_star(lines: &[ComultLine]) -> Result<Vec<ComultLine>> {
    let mut out: Vec<ComultLine> = lines.to_vec();
    for line in lines {
        let target = line.element.transposed();
        if out.iter().any(|l| l.element == target) {
            continue;
        }
        let terms = line
            .terms
            .iter()
            .map(|t| ComultTerm { left: t.left.transposed(), right: t.right.transposed(), ..*t })
            .collect();
        out.push(ComultLine { element: target, terms });
    }
    for x in basis() {
        if !out.iter().any(|l| l.element == x) {
            return Err(Error::InvalidInput(format!("no comultiplication for {}", x.label())));
        }
    }
    out.sort_by_key(|l| l.element.index());
    Ok(out)
}

fn xi(i: u8) -> i32 {
    match i {
        1 => 1,
        2 => 3,
        _ => 2,
    }
}

fn pi(i: u8) -> u8 {
    match i {
        1 => 2,
        2 => 1,
        _ => 3,
    }
}

/// Column `x` holds the coefficients of `S(e_x)`.
pub fn antipode_matrix() -> CMatrix {
    let z = zeta();
    let mut s = CMatrix::zeros(DIM, DIM);
    for x in basis() {
        if x.p == 1 {
            s[(x.transposed().index(), x.index())] = C64::new(1.0, 0.0);
        } else {
            let target = FibIndex { p: 2, i: pi(x.j), j: pi(x.i) };
            s[(target.index(), x.index())] = C64::new(z.powi(xi(x.i) - xi(x.j)), 0.0);
        }
    }
    s
}

/// Builds the algebra with the given comultiplication lines (completed by
/// the star). Used directly for negative controls.
pub fn fib_wha_from_lines(lines: &[ComultLine]) -> Result<WhaTable> {
    let full = complete_by_star(lines)?;
    let mut mult = Vec::new();
    for x in basis() {
        for y in basis() {
            if x.p == y.p && x.j == y.i {
                let z = FibIndex { p: x.p, i: x.i, j: y.j };
                mult.push((x.index(), y.index(), z.index(), C64::new(1.0, 0.0)));
            }
        }
    }
    let mut comult = Vec::new();
    for line in &full {
        for t in &line.terms {
            comult.push((line.element.index(), t.left.index(), t.right.index(), C64::new(t.coefficient(), 0.0)));
        }
    }
    let mut unit = vec![ZERO; DIM];
    let mut counit = vec![ZERO; DIM];
    for x in basis() {
        if x.i == x.j {
            unit[x.index()] = C64::new(1.0, 0.0);
        }
        if x.p == 1 {
            counit[x.index()] = C64::new(1.0, 0.0);
        }
    }
    let mut star = CMatrix::zeros(DIM, DIM);
    for x in basis() {
        star[(x.transposed().index(), x.index())] = C64::new(1.0, 0.0);
    }
    let labels = basis().into_iter().map(|x| x.label()).collect();
    WhaTable::new(labels, &mult, &comult, unit, counit, antipode_matrix(), star)
}

pub fn build_fib_wha() -> WhaTable {
    fib_wha_from_lines(&comultiplication_lines()).expect("built-in table is complete")
}

/// The self-pairing `<e_x, e_y> = r_tilde[x, y]` and its inverse.
#[derive(Clone, Debug)]
pub struct PairingTables {
    pub r_tilde: CMatrix,
    pub r: CMatrix,
    pub zeta: f64,
}

type Entry = (u8, u8, u8, u8, f64);

fn table_from(entries: &[Entry]) -> CMatrix {
    let mut m = CMatrix::zeros(DIM, DIM);
    for &(p, ij, q, kl, v) in entries {
        m[(e(p, ij).index(), e(q, kl).index())] = C64::new(v, 0.0);
    }
    m
}

/// Nonzero entries of the pairing as `(p, ij, q, kl, value)` with
/// `<e_{p,ij}, e_{q,kl}> = value`.
pub fn pairing_entries() -> Vec<Entry> {
    let z = zeta();
    vec![
        (1, 11, 1, 11, 1.0),
        (2, 11, 1, 12, 1.0),
        (1, 12, 2, 11, 1.0),
        (2, 22, 1, 21, 1.0),
        (1, 21, 2, 22, 1.0),
        (2, 21, 2, 21, 1.0),
        (2, 31, 2, 23, 1.0),
        (2, 23, 2, 31, 1.0),
        (2, 32, 2, 32, 1.0 / z),
        (2, 13, 2, 13, 1.0 / z),
        (2, 12, 2, 12, z.powi(-2)),
        (1, 22, 2, 33, z * z),
        (2, 33, 1, 22, z * z),
        (2, 33, 2, 33, -z * z),
        (1, 22, 1, 22, z.powi(4)),
    ]
}

/// Nonzero entries of the inverse pairing matrix, same layout.
pub fn inverse_pairing_entries() -> Vec<Entry> {
    let z = zeta();
    vec![
        (1, 11, 1, 11, 1.0),
        (2, 11, 1, 12, 1.0),
        (1, 12, 2, 11, 1.0),
        (2, 22, 1, 21, 1.0),
        (1, 21, 2, 22, 1.0),
        (1, 22, 1, 22, 1.0),
        (2, 33, 1, 22, 1.0),
        (1, 22, 2, 33, 1.0),
        (2, 21, 2, 21, 1.0),
        (2, 31, 2, 23, 1.0),
        (2, 23, 2, 31, 1.0),
        (2, 13, 2, 13, z),
        (2, 32, 2, 32, z),
        (2, 12, 2, 12, z * z),
        (2, 33, 2, 33, -z * z),
    ]
}

pub fn pairing_tables() -> PairingTables {
    PairingTables {
        r_tilde: table_from(&pairing_entries()),
        r: table_from(&inverse_pairing_entries()),
        zeta: zeta(),
    }
}

/// Residuals of the six pairing identities over all basis tuples:
/// product/coproduct duality on both sides, unit/counit on both sides,
/// antipode symmetry and star compatibility.
pub fn pairing_residuals(alg: &WhaTable, pairing: &CMatrix) -> [f64; 6] {
    let d = alg.dim();
    let p = pairing;
    let bil = |u: &[C64], v: &[C64]| -> C64 {
        let pv = p.apply(v);
        u.iter().zip(&pv).map(|(a, b)| a * b).sum()
    };
    let mut r = [0.0f64; 6];
    for x in 0..d {
        for x2 in 0..d {
            let xx = alg.mul_basis(x, x2);
            for y in 0..d {
                let lhs = bil(&xx, &alg.basis_vector(y));
                let rhs: C64 = alg.coproduct_of(y).iter().map(|&(a, b, c)| c * p[(x, a)] * p[(x2, b)]).sum();
                r[0] = r[0].max((lhs - rhs).norm());
                // <y, x x2> = <Delta y, x (x) x2>
                let lhs = bil(&alg.basis_vector(y), &xx);
                let rhs: C64 = alg.coproduct_of(y).iter().map(|&(a, b, c)| c * p[(a, x)] * p[(b, x2)]).sum();
                r[2] = r[2].max((lhs - rhs).norm());
            }
        }
    }
    for y in 0..d {
        let ey = alg.basis_vector(y);
        r[1] = r[1].max((bil(alg.unit(), &ey) - alg.counit()[y]).norm());
        r[3] = r[3].max((bil(&ey, alg.unit()) - alg.counit()[y]).norm());
    }
    let s = alg.antipode();
    r[4] = crate::numerics::frob_residual(&(&s.transpose() * p), &(p * s)).unwrap_or(f64::INFINITY);
    for x in 0..d {
        let xs = alg.star_of(&alg.basis_vector(x));
        for y in 0..d {
            let lhs = bil(&xs, &alg.basis_vector(y));
            let sy = alg.star_of(&alg.antipode_of(&alg.basis_vector(y)));
            let rhs = bil(&alg.basis_vector(x), &sy).conj();
            r[5] = r[5].max((lhs - rhs).norm());
        }
    }
    r
}

/// A representation of the Fibonacci algebra (or its dual) on the
/// 5-dimensional block space, with the block projectors for the labels
/// I (2-dim, first) and tau (3-dim, second).
#[derive(Clone, Debug)]
pub struct BlockRepresentation {
    pub rep: Representation,
    pub projectors: Vec<CMatrix>,
    pub blocks: Vec<Representation>,
}

fn block_projectors() -> Vec<CMatrix> {
    vec![
        CMatrix::diag_real(&[1.0, 1.0, 0.0, 0.0, 0.0]),
        CMatrix::diag_real(&[0.0, 0.0, 1.0, 1.0, 1.0]),
    ]
}

fn with_blocks(rep: Representation) -> BlockRepresentation {
    let blocks = vec![
        rep.restrict(&CMatrix::from_fn(5, 2, |r, c| if r == c { C64::new(1.0, 0.0) } else { ZERO })),
        rep.restrict(&CMatrix::from_fn(5, 3, |r, c| if r == c + 2 { C64::new(1.0, 0.0) } else { ZERO })),
    ];
    BlockRepresentation { rep, projectors: block_projectors(), blocks }
}

fn matrix_unit(x: FibIndex) -> CMatrix {
    CMatrix::unit(5, x.slot_row(), x.slot_col())
}

/// `Phi(e_{p,ij}) = |p,i><p,j|`.
pub fn build_phi() -> BlockRepresentation {
    let mats = basis().into_iter().map(matrix_unit).collect();
    with_blocks(Representation::new(mats).expect("square matrices"))
}

/// `Psi(delta_x) = sum_y R[x, y] |y>` where `|y>` is the matrix unit of
/// `e_y`, i.e. the image of the dual basis under the inverse pairing.
pub fn build_psi_from(pairing: &PairingTables) -> Result<BlockRepresentation> {
    let r = &pairing.r;
    if rank(&pairing.r_tilde, 1e-12) < DIM {
        return Err(Error::InvalidInput("pairing matrix is singular".into()));
    }
    let check = crate::numerics::frob_residual(&inverse(&pairing.r_tilde)?, r)?;
    if check > 1e-10 {
        return Err(Error::InvalidInput(format!("inverse pairing table is inconsistent (residual {check:e})")));
    }
    let units: Vec<CMatrix> = basis().into_iter().map(matrix_unit).collect();
    let mats = (0..DIM)
        .map(|x| {
            let mut m = CMatrix::zeros(5, 5);
            for (y, u) in units.iter().enumerate() {
                m.add_scaled(u, r[(x, y)]);
            }
            m
        })
        .collect();
    Ok(with_blocks(Representation::new(mats)?))
}

pub fn build_psi() -> BlockRepresentation {
    build_psi_from(&pairing_tables()).expect("built-in pairing is nonsingular")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_round_trip() {
        for x in 0..DIM {
            assert_eq!(FibIndex::from_index(x).index(), x);
        }
        assert_eq!(basis().len(), 13);
        assert!(FibIndex::new(1, 3, 1).is_err());
        assert!(FibIndex::new(3, 1, 1).is_err());
    }

    #[test]
    fn matrix_unit_products() {
        let a = build_fib_wha();
        let p = a.mul_basis(e(1, 11).index(), e(1, 12).index());
        assert_eq!(p, a.basis_vector(e(1, 12).index()));
        let q = a.mul_basis(e(1, 12).index(), e(2, 11).index());
        assert!(q.iter().all(|z| *z == ZERO));
    }

    #[test]
    fn counit_star_antipode_values() {
        let a = build_fib_wha();
        assert_eq!(a.counit()[e(1, 12).index()], C64::new(1.0, 0.0));
        assert_eq!(a.counit()[e(2, 13).index()], ZERO);
        let s = a.star_of(&a.basis_vector(e(2, 13).index()));
        assert_eq!(s, a.basis_vector(e(2, 31).index()));
        let sx = a.antipode_of(&a.basis_vector(e(2, 12).index()));
        let expected = zeta().powi(-2);
        assert!((sx[e(2, 12).index()].re - expected).abs() < 1e-15);
        assert_eq!(sx.iter().filter(|z| **z != ZERO).count(), 1);
    }

    #[test]
    fn star_completion_generates_four_lines() {
        let full = complete_by_star(&comultiplication_lines()).unwrap();
        assert_eq!(full.len(), 13);
        let missing: Vec<_> = full
            .iter()
            .filter(|l| !comultiplication_lines().iter().any(|m| m.element == l.element))
            .map(|l| l.element.label())
            .collect();
        assert_eq!(missing, vec!["e1_21", "e2_21", "e2_31", "e2_32"]);
    }

    #[test]
    fn phi_matrix_unit() {
        let phi = build_phi();
        assert_eq!(phi.rep.mat(e(1, 12).index()), &CMatrix::unit(5, 0, 1));
        assert_eq!(phi.blocks[0].dim(), 2);
        assert_eq!(phi.blocks[1].dim(), 3);
    }

    #[test]
    fn psi_of_first_dual_element() {
        let psi = build_psi();
        assert_eq!(psi.rep.mat(0), &CMatrix::unit(5, 0, 0));
    }
}
