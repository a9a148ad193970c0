use serde::Serialize;

use super::table::{Coeffs, WhaTable};
use crate::numerics::{vec_max_diff, C64, ZERO};
use crate::par;

/// One identity of the weak Hopf *-algebra axiom suite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Axiom {
    Associativity,
    Unit,
    Coassociativity,
    Counit,
    Multiplicativity,
    WeakUnit,
    WeakCounit,
    AntipodeSource,
    AntipodeTarget,
    AntipodeSandwich,
    StarInvolution,
    StarAntihomomorphism,
    StarCohomomorphism,
    StarAntipode,
}

impl Axiom {
    pub const ALL: [Axiom; 14] = [
        Axiom::Associativity,
        Axiom::Unit,
        Axiom::Coassociativity,
        Axiom::Counit,
        Axiom::Multiplicativity,
        Axiom::WeakUnit,
        Axiom::WeakCounit,
        Axiom::AntipodeSource,
        Axiom::AntipodeTarget,
        Axiom::AntipodeSandwich,
        Axiom::StarInvolution,
        Axiom::StarAntihomomorphism,
        Axiom::StarCohomomorphism,
        Axiom::StarAntipode,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Axiom::Associativity => "associativity",
            Axiom::Unit => "unit",
            Axiom::Coassociativity => "coassociativity",
            Axiom::Counit => "counit",
            Axiom::Multiplicativity => "multiplicativity",
            Axiom::WeakUnit => "weak_unit",
            Axiom::WeakCounit => "weak_counit",
            Axiom::AntipodeSource => "antipode_source",
            Axiom::AntipodeTarget => "antipode_target",
            Axiom::AntipodeSandwich => "antipode_sandwich",
            Axiom::StarInvolution => "star_involution",
            Axiom::StarAntihomomorphism => "star_antihomomorphism",
            Axiom::StarCohomomorphism => "star_cohomomorphism",
            Axiom::StarAntipode => "star_antipode",
        }
    }

    /// The identity in words, for reports.
    pub fn statement(self) -> &'static str {
        match self {
            Axiom::Associativity => "(xy)z = x(yz)",
            Axiom::Unit => "1x = x = x1",
            Axiom::Coassociativity => "(Delta (x) id)Delta = (id (x) Delta)Delta",
            Axiom::Counit => "(eps (x) id)Delta = id = (id (x) eps)Delta",
            Axiom::Multiplicativity => "Delta(xy) = Delta(x)Delta(y)",
            Axiom::WeakUnit => "Delta^2(1) = (Delta(1) (x) 1)(1 (x) Delta(1)) = (1 (x) Delta(1))(Delta(1) (x) 1)",
            Axiom::WeakCounit => "eps(xyz) = eps(x y1) eps(y2 z) = eps(x y2) eps(y1 z)",
            Axiom::AntipodeSource => "S(x1) x2 = 1_(1) eps(x 1_(2))",
            Axiom::AntipodeTarget => "x1 S(x2) = eps(1_(1) x) 1_(2)",
            Axiom::AntipodeSandwich => "S(x1) x2 S(x3) = S(x)",
            Axiom::StarInvolution => "(x*)* = x",
            Axiom::StarAntihomomorphism => "(xy)* = y* x*",
            Axiom::StarCohomomorphism => "Delta(x*) = (* (x) *)Delta(x)",
            Axiom::StarAntipode => "S(S(x)*)* = x",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AxiomResidual {
    pub axiom: Axiom,
    pub residual: f64,
}

/// Per-axiom maximum absolute residuals.
#[derive(Clone, Debug, Serialize)]
pub struct AxiomReport {
    pub tol: f64,
    pub residuals: Vec<AxiomResidual>,
    pub pass: bool,
}

impl AxiomReport {
    pub fn residual(&self, axiom: Axiom) -> f64 {
        self.residuals
            .iter()
            .find(|r| r.axiom == axiom)
            .map(|r| r.residual)
            .unwrap_or(f64::NAN)
    }

    pub fn failed(&self) -> Vec<Axiom> {
        self.residuals
            .iter()
            .filter(|r| !(r.residual <= self.tol))
            .map(|r| r.axiom)
            .collect()
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().map(|r| r.residual).fold(0.0, f64::max)
    }
}

type Sparse2 = Vec<(usize, usize, C64)>;

fn nonzeros2(v: &[C64], d: usize) -> Sparse2 {
    v.iter()
        .enumerate()
        .filter(|(_, z)| **z != ZERO)
        .map(|(i, &z)| (i / d, i % d, z))
        .collect()
}

/// Product in A (x) A of two elements given by their nonzero terms.
fn mul2(alg: &WhaTable, u: &Sparse2, v: &Sparse2) -> Coeffs {
    let d = alg.dim();
    let mut out = vec![ZERO; d * d];
    for &(a, b, cu) in u {
        for &(c, e, cv) in v {
            let s = cu * cv;
            for &(p, c1) in alg.product_of(a, c) {
                for &(q, c2) in alg.product_of(b, e) {
                    out[p * d + q] += s * c1 * c2;
                }
            }
        }
    }
    out
}

type Sparse3 = Vec<([usize; 3], C64)>;

fn mul3(alg: &WhaTable, u: &Sparse3, v: &Sparse3) -> Coeffs {
    let d = alg.dim();
    let mut out = vec![ZERO; d * d * d];
    for &(a, cu) in u {
        for &(b, cv) in v {
            let s = cu * cv;
            for &(p, c1) in alg.product_of(a[0], b[0]) {
                for &(q, c2) in alg.product_of(a[1], b[1]) {
                    for &(r, c3) in alg.product_of(a[2], b[2]) {
                        out[(p * d + q) * d + r] += s * c1 * c2 * c3;
                    }
                }
            }
        }
    }
    out
}

fn left_basis_mul(alg: &WhaTable, x: usize, u: &[C64]) -> Coeffs {
    let mut out = vec![ZERO; alg.dim()];
    for (y, &uy) in u.iter().enumerate() {
        if uy == ZERO {
            continue;
        }
        for &(z, c) in alg.product_of(x, y) {
            out[z] += uy * c;
        }
    }
    out
}

fn right_basis_mul(alg: &WhaTable, u: &[C64], y: usize) -> Coeffs {
    let mut out = vec![ZERO; alg.dim()];
    for (x, &ux) in u.iter().enumerate() {
        if ux == ZERO {
            continue;
        }
        for &(z, c) in alg.product_of(x, y) {
            out[z] += ux * c;
        }
    }
    out
}

fn diff(a: &[C64], b: &[C64]) -> f64 {
    vec_max_diff(a, b)
}

fn associativity(alg: &WhaTable) -> f64 {
    let d = alg.dim();
    par::max_range(d, |x| {
        let mut worst: f64 = 0.0;
        for y in 0..d {
            let xy = alg.mul_basis(x, y);
            for z in 0..d {
                let lhs = right_basis_mul(alg, &xy, z);
                let rhs = left_basis_mul(alg, x, &alg.mul_basis(y, z));
                worst = worst.max(diff(&lhs, &rhs));
            }
        }
        worst
    })
}

fn unit(alg: &WhaTable) -> f64 {
    let one = alg.unit();
    par::max_range(alg.dim(), |x| {
        let ex = alg.basis_vector(x);
        diff(&alg.mul(one, &ex), &ex).max(diff(&alg.mul(&ex, one), &ex))
    })
}

fn coassociativity(alg: &WhaTable) -> f64 {
    let d = alg.dim();
    par::max_range(d, |x| {
        let mut left = vec![ZERO; d * d * d];
        let mut right = vec![ZERO; d * d * d];
        for &(p, q, c) in alg.coproduct_of(x) {
            for &(a, b, c2) in alg.coproduct_of(p) {
                left[(a * d + b) * d + q] += c * c2;
            }
            for &(b, e, c2) in alg.coproduct_of(q) {
                right[(p * d + b) * d + e] += c * c2;
            }
        }
        diff(&left, &right)
    })
}

fn counit(alg: &WhaTable) -> f64 {
    let d = alg.dim();
    let eps = alg.counit();
    par::max_range(d, |x| {
        let mut left = vec![ZERO; d];
        let mut right = vec![ZERO; d];
        for &(a, b, c) in alg.coproduct_of(x) {
            left[b] += c * eps[a];
            right[a] += c * eps[b];
        }
        let ex = alg.basis_vector(x);
        diff(&left, &ex).max(diff(&right, &ex))
    })
}

fn multiplicativity(alg: &WhaTable) -> f64 {
    let d = alg.dim();
    let deltas: Vec<Sparse2> = (0..d).map(|x| alg.coproduct_of(x).to_vec()).collect();
    par::max_range(d, |x| {
        let mut worst: f64 = 0.0;
        for y in 0..d {
            let lhs = alg.coproduct(&alg.mul_basis(x, y));
            let rhs = mul2(alg, &deltas[x], &deltas[y]);
            worst = worst.max(diff(&lhs, &rhs));
        }
        worst
    })
}

fn weak_unit(alg: &WhaTable) -> f64 {
    let d = alg.dim();
    let one = alg.unit();
    let delta1 = nonzeros2(&alg.coproduct(one), d);
    let one_terms: Vec<(usize, C64)> = one.iter().enumerate().filter(|(_, z)| **z != ZERO).map(|(i, &z)| (i, z)).collect();
    let mut left_factor: Sparse3 = Vec::new(); // Delta(1) (x) 1
    let mut right_factor: Sparse3 = Vec::new(); // 1 (x) Delta(1)
    for &(a, b, c) in &delta1 {
        for &(u, cu) in &one_terms {
            left_factor.push(([a, b, u], c * cu));
            right_factor.push(([u, a, b], c * cu));
        }
    }
    let delta2 = alg.comultiply(one, 3).expect("small tensor power");
    let p1 = mul3(alg, &left_factor, &right_factor);
    let p2 = mul3(alg, &right_factor, &left_factor);
    diff(&delta2, &p1).max(diff(&delta2, &p2))
}

fn counit_products(alg: &WhaTable) -> Vec<Vec<C64>> {
    let d = alg.dim();
    (0..d)
        .map(|x| (0..d).map(|y| alg.counit_of(&alg.mul_basis(x, y))).collect())
        .collect()
}

fn weak_counit(alg: &WhaTable) -> f64 {
    let d = alg.dim();
    let e = counit_products(alg);
    par::max_range(d, |x| {
        let mut worst: f64 = 0.0;
        for y in 0..d {
            let xy = alg.mul_basis(x, y);
            for z in 0..d {
                let lhs: C64 = xy.iter().enumerate().map(|(w, &c)| c * e[w][z]).sum();
                let mut r1 = ZERO;
                let mut r2 = ZERO;
                for &(a, b, c) in alg.coproduct_of(y) {
                    r1 += c * e[x][a] * e[b][z];
                    r2 += c * e[x][b] * e[a][z];
                }
                worst = worst.max((lhs - r1).norm()).max((lhs - r2).norm());
            }
        }
        worst
    })
}

fn antipode_columns(alg: &WhaTable) -> Vec<Coeffs> {
    (0..alg.dim()).map(|x| alg.antipode().column(x)).collect()
}

fn antipode_source(alg: &WhaTable) -> f64 {
    let d = alg.dim();
    let s = antipode_columns(alg);
    let e = counit_products(alg);
    let delta1 = nonzeros2(&alg.coproduct(alg.unit()), d);
    par::max_range(d, |x| {
        let mut lhs = vec![ZERO; d];
        for &(a, b, c) in alg.coproduct_of(x) {
            for (z, v) in right_basis_mul(alg, &s[a], b).into_iter().enumerate() {
                lhs[z] += c * v;
            }
        }
        let mut rhs = vec![ZERO; d];
        for &(p, q, c) in &delta1 {
            rhs[p] += c * e[x][q];
        }
        diff(&lhs, &rhs)
    })
}

fn antipode_target(alg: &WhaTable) -> f64 {
    let d = alg.dim();
    let s = antipode_columns(alg);
    let e = counit_products(alg);
    let delta1 = nonzeros2(&alg.coproduct(alg.unit()), d);
    par::max_range(d, |x| {
        let mut lhs = vec![ZERO; d];
        for &(a, b, c) in alg.coproduct_of(x) {
            for (z, v) in left_basis_mul(alg, a, &s[b]).into_iter().enumerate() {
                lhs[z] += c * v;
            }
        }
        let mut rhs = vec![ZERO; d];
        for &(p, q, c) in &delta1 {
            rhs[q] += c * e[p][x];
        }
        diff(&lhs, &rhs)
    })
}

fn antipode_sandwich(alg: &WhaTable) -> f64 {
    let d = alg.dim();
    let s = antipode_columns(alg);
    par::max_range(d, |x| {
        let t = alg.comultiply(&alg.basis_vector(x), 3).expect("small tensor power");
        let mut lhs = vec![ZERO; d];
        for (i, &c) in t.iter().enumerate() {
            if c == ZERO {
                continue;
            }
            let (a, b, e) = (i / (d * d), (i / d) % d, i % d);
            let sab = right_basis_mul(alg, &s[a], b);
            let prod = alg.mul(&sab, &s[e]);
            for (z, v) in prod.into_iter().enumerate() {
                lhs[z] += c * v;
            }
        }
        diff(&lhs, &s[x])
    })
}

fn star_involution(alg: &WhaTable) -> f64 {
    par::max_range(alg.dim(), |x| {
        let ex = alg.basis_vector(x);
        diff(&alg.star_of(&alg.star_of(&ex)), &ex)
    })
}

fn star_antihomomorphism(alg: &WhaTable) -> f64 {
    let d = alg.dim();
    let stars: Vec<Coeffs> = (0..d).map(|x| alg.star_of(&alg.basis_vector(x))).collect();
    par::max_range(d, |x| {
        let mut worst: f64 = 0.0;
        for y in 0..d {
            let lhs = alg.star_of(&alg.mul_basis(x, y));
            let rhs = alg.mul(&stars[y], &stars[x]);
            worst = worst.max(diff(&lhs, &rhs));
        }
        worst
    })
}

fn star_cohomomorphism(alg: &WhaTable) -> f64 {
    let d = alg.dim();
    let stars: Vec<Coeffs> = (0..d).map(|x| alg.star_of(&alg.basis_vector(x))).collect();
    par::max_range(d, |x| {
        let lhs = alg.coproduct(&stars[x]);
        let mut rhs = vec![ZERO; d * d];
        for &(a, b, c) in alg.coproduct_of(x) {
            let cc = c.conj();
            for (p, &sp) in stars[a].iter().enumerate() {
                if sp == ZERO {
                    continue;
                }
                for (q, &sq) in stars[b].iter().enumerate() {
                    rhs[p * d + q] += cc * sp * sq;
                }
            }
        }
        diff(&lhs, &rhs)
    })
}

fn star_antipode(alg: &WhaTable) -> f64 {
    par::max_range(alg.dim(), |x| {
        let ex = alg.basis_vector(x);
        let v = alg.star_of(&alg.antipode_of(&alg.star_of(&alg.antipode_of(&ex))));
        diff(&v, &ex)
    })
}

/// Evaluates every axiom on all basis elements (pairs, triples where the
/// identity requires them). Always returns a report.
pub fn verify_axioms(alg: &WhaTable, tol: f64) -> AxiomReport {
    let residuals: Vec<AxiomResidual> = Axiom::ALL
        .iter()
        .map(|&axiom| {
            let residual = match axiom {
                Axiom::Associativity => associativity(alg),
                Axiom::Unit => unit(alg),
                Axiom::Coassociativity => coassociativity(alg),
                Axiom::Counit => counit(alg),
                Axiom::Multiplicativity => multiplicativity(alg),
                Axiom::WeakUnit => weak_unit(alg),
                Axiom::WeakCounit => weak_counit(alg),
                Axiom::AntipodeSource => antipode_source(alg),
                Axiom::AntipodeTarget => antipode_target(alg),
                Axiom::AntipodeSandwich => antipode_sandwich(alg),
                Axiom::StarInvolution => star_involution(alg),
                Axiom::StarAntihomomorphism => star_antihomomorphism(alg),
                Axiom::StarCohomomorphism => star_cohomomorphism(alg),
                Axiom::StarAntipode => star_antipode(alg),
            };
            AxiomResidual { axiom, residual }
        })
        .collect();
    let pass = residuals.iter().all(|r| r.residual <= tol);
    AxiomReport { tol, residuals, pass }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{c, CMatrix};

    fn group_algebra_z2() -> WhaTable {
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
    fn hopf_group_algebra_passes() {
        let r = verify_axioms(&group_algebra_z2(), 1e-12);
        assert!(r.pass, "{r:?}");
        assert_eq!(r.max_residual(), 0.0);
    }

    #[test]
    fn dual_of_group_algebra_passes() {
        let r = verify_axioms(&group_algebra_z2().dual().unwrap(), 1e-12);
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn wrong_antipode_is_caught() {
        let a = group_algebra_z2();
        let bad = WhaTable::new(
            a.basis().to_vec(),
            &a.mult_entries(),
            &a.comult_entries(),
            a.unit().to_vec(),
            a.counit().to_vec(),
            CMatrix::identity(2).scale_real(2.0),
            CMatrix::identity(2),
        )
        .unwrap();
        let r = verify_axioms(&bad, 1e-12);
        assert!(!r.pass);
        assert!(r.failed().contains(&Axiom::AntipodeSource));
        assert!(!r.failed().contains(&Axiom::Associativity));
    }
}
