use wharf::category::{compile, FSymbols, FusionRing};
use wharf::mpo::assemble_dense;
use wharf::numerics::{frob_residual, kron, CMatrix, C64, ONE};
use wharf::rfp::{build_central_idempotent, character_residual, find_1d_irreps, fusion_product, Omega, RfpLab};
use wharf::symmetry::{MpoSymmetry, DEFAULT_SEED};

fn sqrt5() -> f64 {
    5f64.sqrt()
}

fn phi() -> f64 {
    (1.0 + sqrt5()) / 2.0
}

fn lab() -> RfpLab {
    RfpLab::fibonacci(1e-9).unwrap()
}

fn close(a: C64, b: f64, tol: f64) -> bool {
    (a - C64::new(b, 0.0)).norm() < tol
}

#[test]
fn fibonacci_omega_coefficients() {
    let l = lab();
    let c = &l.omega.coefficients;
    assert!((c[0] - 2.0 / (5.0 + sqrt5())).abs() < 1e-15);
    assert!((c[1] - 1.0 / sqrt5()).abs() < 1e-15);
    // Omega is a positive multiple of the identity on each physical block
    let root = l.omega.sqrt().unwrap();
    assert!(frob_residual(&(&root * &root), &l.omega.matrix).unwrap() < 1e-15);
    // sum_alpha (delta_alpha / D^2) dim(alpha) = tr Omega
    let expected = 2.0 * c[0] + 3.0 * c[1];
    assert!((l.omega.matrix.trace().re - expected).abs() < 1e-14);
}

#[test]
fn trivial_omega_is_one() {
    let o = Omega::new(&[CMatrix::identity(1)], &[1.0]).unwrap();
    assert_eq!(o.matrix[(0, 0)], ONE);
    assert!(Omega::new(&[CMatrix::identity(1)], &[-1.0]).is_err());
    assert!(Omega::new(&[CMatrix::identity(1)], &[1.0, 2.0]).is_err());
}

#[test]
fn one_dimensional_irreps() {
    let fib = find_1d_irreps(&FusionRing::fibonacci(), 1e-9).unwrap();
    assert_eq!(fib.len(), 2);
    assert!(close(fib[0][0], 1.0, 1e-12) && close(fib[0][1], phi(), 1e-12));
    assert!(close(fib[1][0], 1.0, 1e-12) && close(fib[1][1], 1.0 - phi(), 1e-12));
    let z2 = find_1d_irreps(&FusionRing::z2(), 1e-9).unwrap();
    assert_eq!(z2.len(), 2);
    assert!(close(z2[0][1], 1.0, 1e-12) && close(z2[1][1], -1.0, 1e-12));
    assert_eq!(find_1d_irreps(&FusionRing::trivial(), 1e-9).unwrap(), vec![vec![ONE]]);
    for n in 2..7 {
        let r = FusionRing::cyclic(n);
        let chars = find_1d_irreps(&r, 1e-9).unwrap();
        assert_eq!(chars.len(), n);
        assert!(chars.iter().all(|c| character_residual(&r, c) < 1e-10));
    }
}

/// Closed form `Pi_m = sum_a conj(chi_m(a)) a / sum_a |chi_m(a)|^2`, valid for
/// characters of unitary fusion rings.
fn character_idempotent(chi: &[C64]) -> Vec<C64> {
    let w: f64 = chi.iter().map(|z| z.norm_sqr()).sum();
    chi.iter().map(|z| z.conj() / w).collect()
}

#[test]
fn fibonacci_central_idempotents() {
    let l = lab();
    let p0 = &l.idempotents[0].coefficients;
    let p1 = &l.idempotents[1].coefficients;
    assert!(close(p0[0], 2.0 / (5.0 + sqrt5()), 1e-12) && close(p0[1], 1.0 / sqrt5(), 1e-12));
    assert!(close(p1[0], 2.0 / (5.0 - sqrt5()), 1e-12) && close(p1[1], -1.0 / sqrt5(), 1e-12));
    // they sum to the boundary of O_I
    assert!(close(p0[0] + p1[0], 1.0, 1e-12) && close(p0[1] + p1[1], 0.0, 1e-12));
    assert!(l.idempotents.iter().all(|e| e.residual < 1e-12));
}

#[test]
fn spectral_and_character_idempotents_agree() {
    for r in [FusionRing::fibonacci(), FusionRing::z2(), FusionRing::cyclic(3), FusionRing::cyclic(5)] {
        let chars = find_1d_irreps(&r, 1e-9).unwrap();
        for (m, chi) in chars.iter().enumerate() {
            let pi = build_central_idempotent(&r, &chars, m, DEFAULT_SEED).unwrap();
            let oracle = character_idempotent(chi);
            assert!(pi.coefficients.iter().zip(&oracle).all(|(a, b)| (a - b).norm() < 1e-10));
            // Pi a = lambda_ma Pi
            for a in 0..r.rank() {
                let mut e = vec![C64::new(0.0, 0.0); r.rank()];
                e[a] = ONE;
                let lhs = fusion_product(&r, &e, &pi.coefficients);
                assert!(lhs.iter().zip(&pi.coefficients).all(|(x, y)| (x - chi[a] * y).norm() < 1e-10));
            }
        }
        assert!(build_central_idempotent(&r, &chars, chars.len(), DEFAULT_SEED).is_err());
    }
}

#[test]
fn transfer_structure() {
    let d = lab().transfer.diagnostics;
    assert!(d.idempotency < 1e-10);
    assert_eq!(d.unit_rank, 1);
    assert!(d.other_blocks < 1e-10);
    assert!(d.spectrum_gap < 1e-8);
    assert!((d.unit_trace - 1.0).abs() < 1e-12);
}

#[test]
fn rfp_integrity_for_small_lengths() {
    let l = lab();
    for m in 0..2 {
        let n = l.normalization(m).unwrap();
        for len in 1..=3 {
            let r = l.check_integrity(m, len, 1e-9).unwrap();
            assert!(r.pass, "{r:?}");
            assert_eq!(r.norm, n);
        }
    }
    // trace stays 1 far beyond the dense regime
    let r = l.check_integrity(1, 24, 1e-9).unwrap();
    assert!(r.pass && r.min_eigenvalue.is_none(), "{r:?}");
}

#[test]
fn dense_rfp_matches_explicit_formula() {
    let l = lab();
    for m in 0..2 {
        let rho = l.build_rfp(m, 2).unwrap();
        let p = assemble_dense(&l.projector(m, 2).unwrap()).unwrap();
        let w = kron(&l.omega.matrix, &l.omega.matrix).unwrap();
        let expected = (&p * &w).scale_real(1.0 / rho.norm);
        assert!(frob_residual(&rho.dense().unwrap(), &expected).unwrap() < 1e-13);
        assert!((rho.dense().unwrap().trace() - ONE).norm() < 1e-12);
    }
}

#[test]
fn strong_symmetry_eigenvalues() {
    let l = lab();
    let cases = [(0, "tau", 3, phi()), (0, "tau", 2, phi()), (1, "tau", 2, 1.0 - phi()), (1, "tau", 3, 1.0 - phi())];
    for (m, a, len, expected) in cases {
        let r = l.check_strong_symmetry(m, a, len, 1e-9).unwrap();
        assert!(r.pass, "{r:?}");
        assert!(close(r.lambda, expected, 1e-9));
    }
    for m in 0..2 {
        for len in [1, 2, 3, 10] {
            let r = l.check_strong_symmetry(m, "I", len, 1e-10).unwrap();
            assert!(r.pass && close(r.lambda, 1.0, 1e-10), "{r:?}");
        }
    }
}

#[test]
fn dense_strong_symmetry_cross_check() {
    let l = lab();
    let rho = l.build_rfp(1, 2).unwrap().dense().unwrap();
    let o = assemble_dense(&l.sym.operator(1, 2).unwrap()).unwrap();
    let lhs = &o * &rho;
    assert!(frob_residual(&lhs, &rho.scale_real(1.0 - phi())).unwrap() < 1e-12);
}

#[test]
fn weak_symmetry_of_every_fixed_point() {
    let l = lab();
    for m in 0..2 {
        for len in [2, 3, 6] {
            assert!(l.check_weak_symmetry(m, "tau", len).unwrap() < 1e-10);
        }
    }
}

#[test]
fn trace_out_collapses_both_fixed_points() {
    let l = lab();
    for m in 0..2 {
        let r = l.trace_out_site(m, 3, 1e-9).unwrap();
        assert!(l.trace_out_site(m, 4, 1e-9).unwrap().pass);
        assert!(r.pass, "{r:?}");
        assert_eq!(r.site_residuals.len(), 3);
        assert!(r.indistinguishability.iter().all(|x| *x < 1e-9));
        // the rank-one boundary Psi_I(theta) does not act like P_I at finite L
        assert!(r.unit_operator_residuals.iter().all(|x| (x - (5f64.sqrt() - 1.0) / 5.0).abs() < 1e-12), "{r:?}");
    }
    assert!(l.trace_out_site(0, 1, 1e-9).is_err());
}

#[test]
fn purification() {
    let l = lab();
    for m in 0..2 {
        let r = l.purification_check(m, 2, 1e-8).unwrap();
        assert!(r.pass, "{r:#?}");
        assert!(r.state_residual.unwrap() < 1e-9);
        let tau = &r.symmetry[1].1;
        let expected = if m == 0 { phi() } else { 1.0 - phi() };
        assert!(tau.is_eigen && close(tau.lambda.unwrap(), expected, 1e-9));
    }
    let r = l.purification_check(0, 2, 1e-8).unwrap();
    let tt = r.pairs.iter().find(|p| p.a == "tau" && p.b == "tau").unwrap();
    assert_eq!(tt.spectrum.len(), 9);
    assert_eq!(tt.unit_multiplicity, 1);
    let it = r.pairs.iter().find(|p| p.a == "I" && p.b == "tau").unwrap();
    assert_eq!(it.unit_multiplicity, 0);
}

#[test]
fn compiled_z2_fixed_points_carry_signs() {
    for twisted in [false, true] {
        let alg = compile(&FSymbols::z2(twisted), 1e-9).unwrap();
        let sym = MpoSymmetry::from_algebra(alg, 1e-9, DEFAULT_SEED).unwrap();
        assert_eq!(sym.ring.rank(), 2);
        let l = RfpLab::new(sym, 1e-9).unwrap();
        let lambdas: Vec<f64> = l.irreps_1d.iter().map(|c| c[1].re).collect();
        assert_eq!(lambdas.len(), 2);
        assert!((lambdas[0] - 1.0).abs() < 1e-10 && (lambdas[1] + 1.0).abs() < 1e-10);
        for m in 0..2 {
            for len in [2, 3] {
                let r = l.check_strong_symmetry(m, l.sym.ring.label(1), len, 1e-9).unwrap();
                assert!(r.pass, "twisted={twisted}: {r:?}");
                assert!(l.check_integrity(m, len, 1e-9).unwrap().pass);
            }
        }
    }
}
