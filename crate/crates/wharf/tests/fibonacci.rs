use wharf::fib::{
    build_fib_wha, build_phi, build_psi, comultiplication_lines, fib_wha_from_lines, pairing_residuals,
    pairing_tables, zeta, ComultLine, FibIndex, DIM,
};
use wharf::numerics::{frob_residual, inverse, CMatrix, C64};
use wharf::wha::{verify_axioms, Axiom, WhaTable};

fn idx(p: u8, i: u8, j: u8) -> FibIndex {
    FibIndex::new(p, i, j).unwrap()
}

fn replace_right(lines: &mut [ComultLine], element: FibIndex, left: FibIndex, old: FibIndex, new: FibIndex) {
    let line = lines.iter_mut().find(|l| l.element == element).unwrap();
    let term = line.terms.iter_mut().find(|t| t.left == left && t.right == old).unwrap();
    term.right = new;
}

/// The table as usually printed, with four mislabeled right factors.
fn literal_lines() -> Vec<ComultLine> {
    let mut lines = comultiplication_lines();
    replace_right(&mut lines, idx(1, 2, 2), idx(2, 2, 2), idx(2, 1, 1), idx(1, 1, 1));
    replace_right(&mut lines, idx(2, 1, 1), idx(2, 1, 1), idx(1, 2, 2), idx(1, 1, 1));
    replace_right(&mut lines, idx(2, 1, 3), idx(2, 1, 3), idx(1, 2, 2), idx(2, 2, 2));
    replace_right(&mut lines, idx(2, 2, 3), idx(2, 2, 3), idx(1, 1, 2), idx(2, 1, 2));
    lines
}

#[test]
fn axioms_hold_at_machine_precision() {
    let a = build_fib_wha();
    let report = verify_axioms(&a, 1e-12);
    assert!(report.pass, "failed: {:?}", report.failed());
    assert_eq!(report.residuals.len(), Axiom::ALL.len());
}

#[test]
fn dual_axioms_hold() {
    let d = build_fib_wha().dual().unwrap();
    let report = verify_axioms(&d, 1e-12);
    assert!(report.pass, "failed: {:?}", report.failed());
}

#[test]
fn literal_table_is_rejected() {
    let a = fib_wha_from_lines(&literal_lines()).unwrap();
    let report = verify_axioms(&a, 1e-9);
    assert!(!report.pass);
    assert!(report.residual(Axiom::Coassociativity) > 1e-3);
    assert!(report.residual(Axiom::Counit) > 1e-3);
}

#[test]
fn sign_flip_breaks_multiplicativity() {
    let mut lines = comultiplication_lines();
    let line = lines.iter_mut().find(|l| l.element == idx(2, 3, 3)).unwrap();
    line.terms.last_mut().unwrap().sign = -1.0;
    let a = fib_wha_from_lines(&lines).unwrap();
    let report = verify_axioms(&a, 1e-9);
    assert!(report.failed().contains(&Axiom::Multiplicativity));
}

#[test]
fn pairing_identities_hold() {
    let a = build_fib_wha();
    let p = pairing_tables();
    for (k, r) in pairing_residuals(&a, &p.r_tilde).iter().enumerate() {
        assert!(*r < 1e-12, "pairing identity {k}: {r:e}");
    }
    let prod = &p.r_tilde * &p.r;
    assert!(frob_residual(&prod, &CMatrix::identity(DIM)).unwrap() < 1e-13);
}

#[test]
fn pairing_detects_literal_table() {
    let a = fib_wha_from_lines(&literal_lines()).unwrap();
    let r = pairing_residuals(&a, &pairing_tables().r_tilde);
    assert!(r[0] > 1e-3 || r[2] > 1e-3);
}

/// Comultiplication reconstructed purely from the pairing and the matrix
/// product: `P C_y P^T = M_y` with `M_y[x, x'] = <x x', y>`.
fn comultiplication_from_pairing(a: &WhaTable, p: &CMatrix) -> Vec<CMatrix> {
    let pinv = inverse(p).unwrap();
    (0..DIM)
        .map(|y| {
            let m = CMatrix::from_fn(DIM, DIM, |x, x2| {
                let xx = a.mul_basis(x, x2);
                (0..DIM).map(|z| xx[z] * p[(z, y)]).sum()
            });
            &(&pinv * &m) * &pinv.transpose()
        })
        .collect()
}

#[test]
fn table_matches_pairing_oracle() {
    let a = build_fib_wha();
    let oracle = comultiplication_from_pairing(&a, &pairing_tables().r_tilde);
    for (y, c) in oracle.iter().enumerate() {
        let mut table = CMatrix::zeros(DIM, DIM);
        for &(l, r, v) in a.coproduct_of(y) {
            table[(l, r)] += v;
        }
        assert!(frob_residual(&table, c).unwrap() < 1e-12, "{}", a.basis()[y]);
    }
}

#[test]
fn zeta_value() {
    let z = zeta();
    assert!((z * z - (5f64.sqrt() - 1.0) / 2.0).abs() < 1e-15);
    assert!((z.powi(4) + z * z - 1.0).abs() < 1e-15);
}

#[test]
fn phi_is_faithful_unital_star_rep() {
    let a = build_fib_wha();
    let phi = build_phi();
    let flags = phi.rep.check(&a, 1e-12);
    assert!(flags.is_rep && flags.is_star && flags.is_unital && flags.is_faithful, "{flags:?}");
    assert_eq!(flags.image_rank, 13);
    let sum = &phi.projectors[0] + &phi.projectors[1];
    assert!(frob_residual(&sum, &CMatrix::identity(5)).unwrap() < 1e-15);
}

#[test]
fn psi_is_faithful_unital_star_rep_of_dual() {
    let d = build_fib_wha().dual().unwrap();
    let psi = build_psi();
    let flags = psi.rep.check(&d, 1e-12);
    assert!(flags.is_rep && flags.is_star && flags.is_unital && flags.is_faithful, "{flags:?}");
    // projectors commute with the image
    for m in psi.rep.mats() {
        for q in &psi.projectors {
            assert!(m.commutator(q).max_abs() < 1e-14);
        }
    }
}

#[test]
fn counit_on_unit_is_total_dimension() {
    let a = build_fib_wha();
    let e = a.counit_of(a.unit());
    assert!((e - C64::new(2.0, 0.0)).norm() < 1e-15);
}
