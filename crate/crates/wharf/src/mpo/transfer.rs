//! Periodic transfer-matrix contraction in double-double arithmetic.
//!
//! Identity checks expand `|| A - B ||^2` bilinearly into overlaps that are
//! individually of size `||A||^2` and cancel to zero. In plain doubles that
//! caps the relative residual near `sqrt(eps) ~ 1e-8`; accumulating the
//! overlaps and their combination in double-double pushes the floor down to
//! the rounding of the input tensors themselves.

use num_complex::Complex;
use twofloat::TwoFloat;

use crate::numerics::{CMatrix, C64};
use crate::par;

pub(crate) type Dd = Complex<TwoFloat>;

pub(crate) fn dd(z: C64) -> Dd {
    Complex::new(TwoFloat::from(z.re), TwoFloat::from(z.im))
}

pub(crate) fn dd_zero() -> Dd {
    dd(C64::new(0.0, 0.0))
}

pub(crate) fn round(z: Dd) -> C64 {
    C64::new(f64::from(z.re), f64::from(z.im))
}

pub(crate) fn dd_conj(z: Dd) -> Dd {
    Complex::new(z.re, -z.im)
}

#[derive(Clone)]
struct DdMatrix {
    n: usize,
    data: Vec<Dd>,
}

impl DdMatrix {
    fn mul(&self, other: &DdMatrix) -> DdMatrix {
        let n = self.n;
        let rows = par::map_range(n, |r| {
            let mut row = vec![dd_zero(); n];
            for k in 0..n {
                let a = self.data[r * n + k];
                if a.re.hi() == 0.0 && a.im.hi() == 0.0 {
                    continue;
                }
                for (c, out) in row.iter_mut().enumerate() {
                    *out += a * other.data[k * n + c];
                }
            }
            row
        });
        DdMatrix { n, data: rows.into_iter().flatten().collect() }
    }

    /// `tr(self * other)`.
    fn trace_product(&self, other: &DdMatrix) -> Dd {
        let n = self.n;
        let mut acc = dd_zero();
        for r in 0..n {
            for k in 0..n {
                acc += self.data[r * n + k] * other.data[k * n + r];
            }
        }
        acc
    }

    fn power(&self, mut l: usize) -> DdMatrix {
        let mut base = self.clone();
        let mut acc: Option<DdMatrix> = None;
        while l > 0 {
            if l & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => a.mul(&base),
                });
            }
            l >>= 1;
            if l > 0 {
                base = base.mul(&base);
            }
        }
        acc.expect("positive power")
    }
}

/// One layer of a periodic network: local tensor `t[((a * bond + b) * d_out
/// + i) * d_in + j]` closed by `sum X[b, a]` over the bond loop.
#[derive(Clone, Copy)]
pub(crate) struct Layer<'a> {
    pub data: &'a [C64],
    pub bond: usize,
    pub d_out: usize,
    pub d_in: usize,
    pub boundary: &'a CMatrix,
}

/// `sum_{i,j} conj(layer1) layer2` summed over `length` sites with both
/// bond loops closed by the boundaries: the Hilbert-Schmidt inner product
/// of the two operators (or the overlap of two states when `d_in = 1`).
pub(crate) fn overlap(l1: Layer<'_>, l2: Layer<'_>, length: usize) -> Dd {
    assert_eq!((l1.d_out, l1.d_in), (l2.d_out, l2.d_in), "layer shapes");
    let (d1, d2) = (l1.bond, l2.bond);
    let n = d1 * d2;
    let phys = l1.d_out * l1.d_in;
    let at = |l: &Layer<'_>, a: usize, b: usize, k: usize| l.data[(a * l.bond + b) * phys + k];
    let rows = par::map_range(n, |row| {
        let (a1, a2) = (row / d2, row % d2);
        let mut out = vec![dd_zero(); n];
        for b1 in 0..d1 {
            for b2 in 0..d2 {
                let mut acc = dd_zero();
                for k in 0..phys {
                    let x = at(&l1, a1, b1, k);
                    let y = at(&l2, a2, b2, k);
                    if x.re == 0.0 && x.im == 0.0 || y.re == 0.0 && y.im == 0.0 {
                        continue;
                    }
                    acc += dd(x.conj()) * dd(y);
                }
                out[b1 * d2 + b2] = acc;
            }
        }
        out
    });
    let e = DdMatrix { n, data: rows.into_iter().flatten().collect() };
    // z[(b1 b2), (a1 a2)] = conj(X1[b1, a1]) X2[b2, a2]
    let mut z = vec![dd_zero(); n * n];
    for b1 in 0..d1 {
        for b2 in 0..d2 {
            for a1 in 0..d1 {
                for a2 in 0..d2 {
                    z[(b1 * d2 + b2) * n + a1 * d2 + a2] =
                        dd(l1.boundary[(b1, a1)].conj()) * dd(l2.boundary[(b2, a2)]);
                }
            }
        }
    }
    let z = DdMatrix { n, data: z };
    e.power(length).trace_product(&z)
}

/// `|| sum_k c_k A_k ||^2` from the pairwise overlaps, combined before
/// rounding.
pub(crate) fn combination_norm_sq(layers: &[(C64, Layer<'_>)], length: usize) -> f64 {
    let mut acc = dd_zero();
    for (k, (ck, lk)) in layers.iter().enumerate() {
        for (l, (cl, ll)) in layers.iter().enumerate().skip(k) {
            // coefficient products in double-double too: |c|^2 rounded in f64
            // would reintroduce an eps-relative error before the cancellation
            let o = overlap(*lk, *ll, length) * (dd_conj(dd(*ck)) * dd(*cl));
            if l == k {
                acc += o;
            } else {
                // the (l, k) term is the conjugate
                acc += o + dd_conj(o);
            }
        }
    }
    f64::from(acc.re)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_matches_repeated_product() {
        let m = DdMatrix { n: 2, data: vec![dd(C64::new(1.0, 0.5)), dd(C64::new(0.25, 0.0)), dd(C64::new(0.0, -1.0)), dd(C64::new(0.5, 0.0))] };
        let p5 = m.power(5);
        let mut q = m.clone();
        for _ in 0..4 {
            q = q.mul(&m);
        }
        for (a, b) in p5.data.iter().zip(&q.data) {
            assert!((round(*a) - round(*b)).norm() < 1e-14);
        }
    }

    #[test]
    fn cancellation_below_double_precision() {
        // ||A - A||^2 for a tensor with awkward entries is zero to far
        // better than sqrt(eps) relative
        let data: Vec<C64> = (0..16).map(|k| C64::new((k as f64 * 0.731).sin(), (k as f64 * 1.37).cos() / 3.0)).collect();
        let x = CMatrix::identity(2);
        let l = Layer { data: &data, bond: 2, d_out: 2, d_in: 2, boundary: &x };
        let norm = combination_norm_sq(&[(C64::new(1.0, 0.0), l)], 12);
        let diff = combination_norm_sq(&[(C64::new(1.0, 0.0), l), (C64::new(-1.0, 0.0), l)], 12);
        assert!(norm > 1.0);
        assert!(diff.abs() / norm < 1e-28, "{}", diff.abs() / norm);
    }
}
