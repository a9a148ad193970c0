//! Reconstruction of a weak Hopf algebra from a multiplicity-free fusion
//! category, on the basis of "double ladder" diagrams `(a; c1, c2; d1, d2)`:
//! a strand `a` attached from the right to a top line `c2 -> c1` and to a
//! bottom line `d2 -> d1`.
//!
//! Every structure map reduces to the basis with at most one F-move and one
//! bubble or bend removal, so the coefficients are evaluated in closed form.

use std::collections::HashMap;

use super::fsymbols::{validate_category, FSymbols};
use super::ring::FusionRing;
use crate::error::{Error, Result};
use crate::numerics::{CMatrix, C64, ZERO};
use crate::wha::WhaTable;

/// Below this magnitude a bend coefficient is treated as singular.
const BEND_THRESHOLD: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DiagramBasisElement {
    pub a: usize,
    pub c1: usize,
    pub c2: usize,
    pub d1: usize,
    pub d2: usize,
}

impl DiagramBasisElement {
    pub fn label(&self, ring: &FusionRing) -> String {
        let l = |i: usize| ring.label(i);
        format!("({};{},{};{},{})", l(self.a), l(self.c1), l(self.c2), l(self.d1), l(self.d2))
    }
}

/// All `(a; c1, c2; d1, d2)` with `N_{c2 a}^{c1} = N_{d2 a}^{d1} = 1`,
/// ordered by `a`, then `(c1, c2)`, then `(d1, d2)`.
pub fn enumerate_basis(ring: &FusionRing) -> Result<Vec<DiagramBasisElement>> {
    if !ring.is_multiplicity_free() {
        let (a, b, c, n) = ring.entries().into_iter().find(|e| e.3 > 1).expect("some multiplicity");
        return Err(Error::Unsupported(format!(
            "fusion multiplicity N_{{{},{}}}^{} = {n} > 1",
            ring.label(a),
            ring.label(b),
            ring.label(c)
        )));
    }
    let k = ring.rank();
    let mut out = Vec::new();
    for a in 0..k {
        for c1 in 0..k {
            for c2 in 0..k {
                if ring.n(c2, a, c1) == 0 {
                    continue;
                }
                for d1 in 0..k {
                    for d2 in 0..k {
                        if ring.n(d2, a, d1) == 1 {
                            out.push(DiagramBasisElement { a, c1, c2, d1, d2 });
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// `epsilon(a; c1, c2; d1, d2) = delta_{c1 d1} delta_{c2 d2} sqrt(d_a d_{c2} / d_{c1})`.
pub fn counit_closed_form(ring: &FusionRing, x: &DiagramBasisElement) -> C64 {
    if x.c1 == x.d1 && x.c2 == x.d2 {
        C64::new((ring.dim(x.a) * ring.dim(x.c2) / ring.dim(x.c1)).sqrt(), 0.0)
    } else {
        ZERO
    }
}

/// Coefficient for bending the `a` strand of the vertex `c2 (x) a -> c1`
/// into `c1 (x) abar -> c2`.
fn bend(data: &FSymbols, c2: usize, a: usize, c1: usize) -> C64 {
    let r = data.ring();
    data.get(c2, a, r.dual(a), c2, c1, r.unit()).conj() * (r.dim(c2) * r.dim(a) / r.dim(c1)).sqrt()
}

/// Builds the algebra of `data`, after checking the categorical input at
/// `tol`.
pub fn compile(data: &FSymbols, tol: f64) -> Result<WhaTable> {
    let v = validate_category(data, tol);
    if !v.pass {
        let detail: Vec<String> = v.residuals().iter().map(|(n, r)| format!("{n} {r:.3e}")).collect();
        return Err(Error::InvalidInput(format!("category data failed validation ({})", detail.join(", "))));
    }
    let ring = data.ring();
    let basis = enumerate_basis(ring)?;
    let n = basis.len();
    let index: HashMap<DiagramBasisElement, usize> = basis.iter().enumerate().map(|(i, b)| (*b, i)).collect();
    let dim = |i: usize| ring.dim(i);
    let k = ring.rank();

    // product: stack the diagrams, fuse the two a-strands with one F-move
    // on each line and remove the bubble
    let rows = crate::par::map_range(n, |x| {
        let bx = basis[x];
        let mut out = Vec::new();
        for (y, by) in basis.iter().enumerate() {
            if by.c1 != bx.c2 || by.d1 != bx.d2 {
                continue;
            }
            for e in 0..k {
                if ring.n(by.a, bx.a, e) == 0 {
                    continue;
                }
                let target = DiagramBasisElement { a: e, c1: bx.c1, c2: by.c2, d1: bx.d1, d2: by.d2 };
                let Some(&z) = index.get(&target) else { continue };
                let coeff = (dim(bx.a) * dim(by.a) / dim(e)).sqrt()
                    * data.get(by.c2, by.a, bx.a, bx.c1, bx.c2, e)
                    * data.get(by.d2, by.a, bx.a, bx.d1, bx.d2, e).conj();
                if coeff != ZERO {
                    out.push((x, y, z, coeff));
                }
            }
        }
        out
    });
    let mult: Vec<_> = rows.into_iter().flatten().collect();

    let mut unit = vec![ZERO; n];
    for c in 0..k {
        for d in 0..k {
            let u = DiagramBasisElement { a: ring.unit(), c1: c, c2: c, d1: d, d2: d };
            unit[index[&u]] = C64::new(1.0, 0.0);
        }
    }

    // coproduct: cut the middle line, sum over its labels
    let mut comult = Vec::new();
    for (z, bz) in basis.iter().enumerate() {
        for e1 in 0..k {
            for e2 in 0..k {
                if ring.n(e2, bz.a, e1) == 0 {
                    continue;
                }
                let left = DiagramBasisElement { a: bz.a, c1: e1, c2: e2, d1: bz.d1, d2: bz.d2 };
                let right = DiagramBasisElement { a: bz.a, c1: bz.c1, c2: bz.c2, d1: e1, d2: e2 };
                let coeff = (dim(e1) / (dim(bz.a) * dim(e2))).sqrt();
                comult.push((z, index[&left], index[&right], C64::new(coeff, 0.0)));
            }
        }
    }

    let counit: Vec<C64> = basis.iter().map(|b| counit_closed_form(ring, b)).collect();

    let mut antipode = CMatrix::zeros(n, n);
    let mut star = CMatrix::zeros(n, n);
    for (x, b) in basis.iter().enumerate() {
        let top = bend(data, b.c2, b.a, b.c1);
        let bottom = bend(data, b.d2, b.a, b.d1);
        for (coeff, which) in [(top, "top"), (bottom, "bottom")] {
            if coeff.norm() < BEND_THRESHOLD {
                return Err(Error::Compile {
                    diagram: b.label(ring),
                    reason: format!("{which} bend coefficient vanishes"),
                });
            }
        }
        let abar = ring.dual(b.a);
        let s_target = DiagramBasisElement { a: abar, c1: b.d2, c2: b.d1, d1: b.c2, d2: b.c1 };
        let t_target = DiagramBasisElement { a: abar, c1: b.c2, c2: b.c1, d1: b.d2, d2: b.d1 };
        let (Some(&s), Some(&t)) = (index.get(&s_target), index.get(&t_target)) else {
            return Err(Error::Compile { diagram: b.label(ring), reason: "rotated diagram is not admissible".into() });
        };
        antipode[(s, x)] = top.conj() * bottom * (dim(b.d2) / dim(b.d1));
        star[(t, x)] = top * bottom.conj() * (dim(b.c2) / dim(b.c1));
    }

    let labels = basis.iter().map(|b| b.label(ring)).collect();
    WhaTable::new(labels, &mult, &comult, unit, counit, antipode, star)
}
