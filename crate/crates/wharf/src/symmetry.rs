//! The data behind an MPO symmetry: an algebra `A`, its dual, a faithful
//! physical representation `Phi` of `A` split into irreps with projectors
//! `Q_alpha`, a faithful virtual representation `Psi` of the dual split into
//! irreps `Psi_a` with projectors `P_a`, and the fusion rings of both sides.

use crate::category::FusionRing;
use crate::error::{Error, Result};
use crate::fib;
use crate::mpo::{build_symmetry_tensor, MpoOperator, MpoTensor};
use crate::numerics::{CMatrix, C64};
use crate::wha::{
    fusion_multiplicities, irreducible_components, regular_star_rep, Representation, WhaTable,
};

/// Seed used for the randomized commutant split.
pub const DEFAULT_SEED: u64 = 0x77_68_61_72_66;

#[derive(Clone, Debug)]
pub struct MpoSymmetry {
    pub alg: WhaTable,
    pub dual: WhaTable,
    /// Physical representation of `A` and its irrep projectors `Q_alpha`.
    pub phi: Representation,
    pub q: Vec<CMatrix>,
    pub phi_irreps: Vec<Representation>,
    /// Fusion ring of the irreps of `A`; its dimensions are the `delta_alpha`.
    pub phi_ring: FusionRing,
    /// Virtual representation of the dual and its irrep projectors `P_a`.
    pub psi: Representation,
    pub p: Vec<CMatrix>,
    pub psi_irreps: Vec<Representation>,
    /// Fusion ring of the MPO symmetry, labelling the `P_a`.
    pub ring: FusionRing,
}

impl MpoSymmetry {
    /// The hard-coded Fibonacci data with labels `I`, `tau` on both sides.
    /// The fusion rings are computed from the representations, not assumed.
    pub fn fibonacci(tol: f64) -> Result<Self> {
        let alg = fib::build_fib_wha();
        let dual = alg.dual()?;
        let phi = fib::build_phi();
        let psi = fib::build_psi();
        let labels = vec!["I".to_string(), "tau".to_string()];
        let phi_ring = FusionRing::from_tensor(labels.clone(), &fusion_multiplicities(&alg, &phi.blocks, tol)?)?;
        let ring = FusionRing::from_tensor(labels, &fusion_multiplicities(&dual, &psi.blocks, tol)?)?;
        let out = Self {
            alg,
            dual,
            phi: phi.rep,
            q: phi.projectors,
            phi_irreps: phi.blocks,
            phi_ring,
            psi: psi.rep,
            p: psi.projectors,
            psi_irreps: psi.blocks,
            ring,
        };
        out.check_total_dimensions()?;
        Ok(out)
    }

    /// Generic construction for any finite-dimensional C*-weak Hopf algebra:
    /// irreps are split out of the orthonormalized regular representations
    /// of `A` and its dual. Labels are `I, q1, q2, ...` on the physical side
    /// and `I, a1, a2, ...` on the virtual side, unit first, then by
    /// dimension and character.
    pub fn from_algebra(alg: WhaTable, tol: f64, seed: u64) -> Result<Self> {
        let dual = alg.dual()?;
        let (phi_irreps, phi_ring) = split(&alg, "q", tol, seed)?;
        let (psi_irreps, ring) = split(&dual, "a", tol, seed)?;
        let (phi, q) = Representation::direct_sum(&phi_irreps)?;
        let (psi, p) = Representation::direct_sum(&psi_irreps)?;
        let out = Self { alg, dual, phi, q, phi_irreps, phi_ring, psi, p, psi_irreps, ring };
        out.check_total_dimensions()?;
        Ok(out)
    }

    /// Irreps of `A` and of its dual have the same total quantum dimension.
    fn check_total_dimensions(&self) -> Result<()> {
        let (a, b) = (self.phi_ring.total_dim_sq(), self.ring.total_dim_sq());
        if (a - b).abs() > 1e-8 * a.max(1.0) {
            return Err(Error::InvalidInput(format!(
                "total quantum dimensions of the two sides differ ({a} vs {b})"
            )));
        }
        Ok(())
    }

    pub fn phys_dim(&self) -> usize {
        self.phi.dim()
    }

    pub fn bond_dim(&self) -> usize {
        self.psi.dim()
    }

    /// Label index in the MPO fusion ring.
    pub fn label(&self, name: &str) -> Result<usize> {
        self.ring
            .index_of(name)
            .ok_or_else(|| Error::InvalidInput(format!("unknown symmetry label '{name}'")))
    }

    /// `delta_alpha`, quantum dimensions of the irreps of `A`.
    pub fn deltas(&self) -> &[f64] {
        self.phi_ring.dims()
    }

    /// `T = sum_x Phi(x) (x) Psi(delta_x)` on the full virtual space.
    pub fn tensor(&self) -> Result<MpoTensor> {
        build_symmetry_tensor(&self.phi, &self.psi)
    }

    /// `T_a = sum_x Phi(x) (x) Psi_a(delta_x)` on the irreducible block.
    pub fn irrep_tensor(&self, a: usize) -> Result<MpoTensor> {
        let psi_a = self
            .psi_irreps
            .get(a)
            .ok_or_else(|| Error::InvalidInput(format!("no virtual irrep with index {a}")))?;
        build_symmetry_tensor(&self.phi, psi_a)
    }

    /// `O_a` on `length` sites: the irreducible tensor closed by a trace.
    pub fn operator(&self, a: usize, length: usize) -> Result<MpoOperator> {
        let t = self.irrep_tensor(a)?;
        let bond = t.bond_dim();
        MpoOperator::new(t, CMatrix::identity(bond), length)
    }

    /// `O(sum_a x_a P_a)` on the full virtual space.
    pub fn operator_with(&self, coeffs: &[C64], length: usize) -> Result<MpoOperator> {
        if coeffs.len() != self.p.len() {
            return Err(Error::Shape(format!("{} boundary coefficients for {} irreps", coeffs.len(), self.p.len())));
        }
        MpoOperator::new(self.tensor()?, self.boundary(coeffs), length)
    }

    /// Boundary `sum_a x_a P_a`.
    pub fn boundary(&self, coeffs: &[C64]) -> CMatrix {
        let mut b = CMatrix::zeros(self.bond_dim(), self.bond_dim());
        for (pa, c) in self.p.iter().zip(coeffs) {
            b.add_scaled(pa, *c);
        }
        b
    }
}

fn split(alg: &WhaTable, prefix: &str, tol: f64, seed: u64) -> Result<(Vec<Representation>, FusionRing)> {
    let reg = regular_star_rep(alg)?;
    let irreps = irreducible_components(&reg, tol, seed)?;
    let n = fusion_multiplicities(alg, &irreps, tol)?;
    let k = irreps.len();
    let unit = (0..k)
        .find(|&u| (0..k).all(|b| (0..k).all(|c| n[u][b][c] == usize::from(b == c))))
        .ok_or_else(|| Error::InvalidInput("no unit among the irreducible representations".into()))?;
    let key = |i: usize| -> (bool, usize, Vec<(i64, i64)>) {
        let ch = irreps[i].character().iter().map(|z| ((z.re * 1e6).round() as i64, (z.im * 1e6).round() as i64)).collect();
        (i != unit, irreps[i].dim(), ch)
    };
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by_key(|&i| key(i));
    let sorted: Vec<Representation> = order.iter().map(|&i| irreps[i].clone()).collect();
    let n_sorted: Vec<Vec<Vec<usize>>> = order
        .iter()
        .map(|&a| order.iter().map(|&b| order.iter().map(|&c| n[a][b][c]).collect()).collect())
        .collect();
    let labels = (0..k).map(|i| if i == 0 { "I".to_string() } else { format!("{prefix}{i}") }).collect();
    Ok((sorted, FusionRing::from_tensor(labels, &n_sorted)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fibonacci_rings_are_fibonacci() {
        let s = MpoSymmetry::fibonacci(1e-9).unwrap();
        assert_eq!(s.ring, FusionRing::fibonacci());
        assert_eq!(s.phi_ring, FusionRing::fibonacci());
        assert_eq!((s.phys_dim(), s.bond_dim()), (5, 5));
    }
}
