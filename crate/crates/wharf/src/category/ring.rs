use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::numerics::{eig_spectrum, CMatrix, C64};

/// A fusion ring: labels, unit, duals, structure constants `N_ab^c` and
/// quantum dimensions.
#[derive(Clone, Debug, PartialEq)]
pub struct FusionRing {
    labels: Vec<String>,
    unit: usize,
    dual: Vec<usize>,
    /// `n[(a * k + b) * k + c] = N_ab^c`.
    n: Vec<u32>,
    dims: Vec<f64>,
}

impl FusionRing {
    /// Builds and validates a ring. When `dims` is `None` the
    /// Frobenius-Perron dimensions are used.
    pub fn new(
        labels: Vec<String>,
        unit: &str,
        dual: &BTreeMap<String, String>,
        entries: &[(String, String, String, u32)],
        dims: Option<&BTreeMap<String, f64>>,
    ) -> Result<Self> {
        let k = labels.len();
        if k == 0 {
            return Err(Error::InvalidInput("fusion ring has no labels".into()));
        }
        let find = |s: &str| {
            labels
                .iter()
                .position(|l| l == s)
                .ok_or_else(|| Error::InvalidInput(format!("unknown label '{s}'")))
        };
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::InvalidInput(format!("duplicate label '{l}'")));
            }
        }
        let unit = find(unit)?;
        let mut dual_idx = vec![usize::MAX; k];
        for (a, b) in dual {
            dual_idx[find(a)?] = find(b)?;
        }
        if let Some(a) = dual_idx.iter().position(|&d| d == usize::MAX) {
            return Err(Error::InvalidInput(format!("no dual given for '{}'", labels[a])));
        }
        let mut n = vec![0u32; k * k * k];
        for (a, b, c, v) in entries {
            let (a, b, c) = (find(a)?, find(b)?, find(c)?);
            n[(a * k + b) * k + c] = *v;
        }
        let mut ring = Self { labels, unit, dual: dual_idx, n, dims: vec![1.0; k] };
        ring.check_axioms()?;
        ring.dims = match dims {
            Some(map) => {
                let mut out = vec![0.0; k];
                for (i, l) in ring.labels.iter().enumerate() {
                    out[i] = *map
                        .get(l)
                        .ok_or_else(|| Error::InvalidInput(format!("no dimension given for '{l}'")))?;
                }
                out
            }
            None => perron_dims(&ring)?,
        };
        if let Some(d) = ring.dims.iter().find(|d| !(**d > 0.0)) {
            return Err(Error::InvalidInput(format!("quantum dimension {d} is not positive")));
        }
        Ok(ring)
    }

    fn check_axioms(&self) -> Result<()> {
        let k = self.rank();
        for a in 0..k {
            if self.dual[self.dual[a]] != a {
                return Err(Error::InvalidInput(format!("dual of '{}' is not an involution", self.labels[a])));
            }
            for b in 0..k {
                let delta = u32::from(a == b);
                if self.n(self.unit, a, b) != delta || self.n(a, self.unit, b) != delta {
                    return Err(Error::InvalidInput(format!(
                        "unit does not fuse trivially with '{}'",
                        self.labels[a]
                    )));
                }
                if self.n(a, b, self.unit) != u32::from(b == self.dual[a]) {
                    return Err(Error::InvalidInput(format!(
                        "N_{{{},{}}}^I disagrees with the dual map",
                        self.labels[a], self.labels[b]
                    )));
                }
                for c in 0..k {
                    for d in 0..k {
                        let left: u32 = (0..k).map(|e| self.n(a, b, e) * self.n(e, c, d)).sum();
                        let right: u32 = (0..k).map(|f| self.n(b, c, f) * self.n(a, f, d)).sum();
                        if left != right {
                            return Err(Error::InvalidInput(format!(
                                "fusion rules are not associative at ({}, {}, {}) -> {}",
                                self.labels[a], self.labels[b], self.labels[c], self.labels[d]
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn dual(&self, a: usize) -> usize {
        self.dual[a]
    }

    pub fn n(&self, a: usize, b: usize, c: usize) -> u32 {
        let k = self.rank();
        self.n[(a * k + b) * k + c]
    }

    pub fn dims(&self) -> &[f64] {
        &self.dims
    }

    pub fn dim(&self, a: usize) -> f64 {
        self.dims[a]
    }

    /// `D^2 = sum_a d_a^2`.
    pub fn total_dim_sq(&self) -> f64 {
        self.dims.iter().map(|d| d * d).sum()
    }

    pub fn is_multiplicity_free(&self) -> bool {
        self.n.iter().all(|&v| v <= 1)
    }

    /// `(N_a)[b][c] = N_ab^c`.
    pub fn fusion_matrix(&self, a: usize) -> CMatrix {
        let k = self.rank();
        CMatrix::from_fn(k, k, |b, c| C64::new(self.n(a, b, c) as f64, 0.0))
    }

    /// Sparse `(a, b, c, N)` entries with `N > 0`, in index order.
    pub fn entries(&self) -> Vec<(usize, usize, usize, u32)> {
        let k = self.rank();
        let mut out = Vec::new();
        for a in 0..k {
            for b in 0..k {
                for c in 0..k {
                    if self.n(a, b, c) > 0 {
                        out.push((a, b, c, self.n(a, b, c)));
                    }
                }
            }
        }
        out
    }

    /// Max of `|d_a d_b - sum_c N_ab^c d_c|`.
    pub fn dimension_residual(&self) -> f64 {
        let k = self.rank();
        let mut r: f64 = 0.0;
        for a in 0..k {
            for b in 0..k {
                let rhs: f64 = (0..k).map(|c| self.n(a, b, c) as f64 * self.dims[c]).sum();
                r = r.max((self.dims[a] * self.dims[b] - rhs).abs());
            }
        }
        r
    }

    /// Same ring with labels permuted: new label `i` is old label `perm[i]`.
    pub fn relabeled(&self, perm: &[usize]) -> Result<Self> {
        let k = self.rank();
        let mut seen = vec![false; k];
        if perm.len() != k || perm.iter().any(|&p| p >= k || std::mem::replace(&mut seen[p], true)) {
            return Err(Error::InvalidInput("relabeling is not a permutation".into()));
        }
        let mut inv = vec![0; k];
        for (i, &p) in perm.iter().enumerate() {
            inv[p] = i;
        }
        let mut n = vec![0u32; k * k * k];
        for a in 0..k {
            for b in 0..k {
                for c in 0..k {
                    n[(a * k + b) * k + c] = self.n(perm[a], perm[b], perm[c]);
                }
            }
        }
        Ok(Self {
            labels: perm.iter().map(|&p| self.labels[p].clone()).collect(),
            unit: inv[self.unit],
            dual: perm.iter().map(|&p| inv[self.dual[p]]).collect(),
            n,
            dims: perm.iter().map(|&p| self.dims[p]).collect(),
        })
    }

    /// Builds a ring from a dense tensor `n[a][b][c]` with label 0 as unit,
    /// as produced by representation-theoretic fusion computations.
    pub fn from_tensor(labels: Vec<String>, n: &[Vec<Vec<usize>>]) -> Result<Self> {
        let k = labels.len();
        if n.len() != k || n.iter().any(|r| r.len() != k || r.iter().any(|c| c.len() != k)) {
            return Err(Error::Shape("fusion tensor does not match the label count".into()));
        }
        let mut dual = BTreeMap::new();
        for a in 0..k {
            let b = (0..k)
                .find(|&b| n[a][b][0] == 1)
                .ok_or_else(|| Error::InvalidInput(format!("label '{}' has no dual", labels[a])))?;
            dual.insert(labels[a].clone(), labels[b].clone());
        }
        let mut entries = Vec::new();
        for a in 0..k {
            for b in 0..k {
                for c in 0..k {
                    if n[a][b][c] > 0 {
                        entries.push((labels[a].clone(), labels[b].clone(), labels[c].clone(), n[a][b][c] as u32));
                    }
                }
            }
        }
        let unit = labels[0].clone();
        Self::new(labels, &unit, &dual, &entries, None)
    }

    /// `{I, tau}` with `tau x tau = I + tau`.
    pub fn fibonacci() -> Self {
        let s = |x: &str| x.to_string();
        let dual = BTreeMap::from([(s("I"), s("I")), (s("tau"), s("tau"))]);
        let entries = vec![
            (s("I"), s("I"), s("I"), 1),
            (s("I"), s("tau"), s("tau"), 1),
            (s("tau"), s("I"), s("tau"), 1),
            (s("tau"), s("tau"), s("I"), 1),
            (s("tau"), s("tau"), s("tau"), 1),
        ];
        Self::new(vec![s("I"), s("tau")], "I", &dual, &entries, None).expect("valid ring")
    }

    /// Group ring of `Z_n` with labels `"0".."n-1"`.
    pub fn cyclic(order: usize) -> Self {
        let labels: Vec<String> = (0..order).map(|g| g.to_string()).collect();
        let dual = (0..order).map(|g| (labels[g].clone(), labels[(order - g) % order].clone())).collect();
        let mut entries = Vec::new();
        for a in 0..order {
            for b in 0..order {
                entries.push((labels[a].clone(), labels[b].clone(), labels[(a + b) % order].clone(), 1));
            }
        }
        Self::new(labels, "0", &dual, &entries, None).expect("valid ring")
    }

    pub fn z2() -> Self {
        Self::cyclic(2)
    }

    /// The trivial ring `{I}`.
    pub fn trivial() -> Self {
        let dual = BTreeMap::from([("I".to_string(), "I".to_string())]);
        let entries = vec![("I".to_string(), "I".to_string(), "I".to_string(), 1)];
        Self::new(vec!["I".to_string()], "I", &dual, &entries, None).expect("valid ring")
    }
}

/// Largest eigenvalue of each fusion matrix.
pub(crate) fn perron_dims(ring: &FusionRing) -> Result<Vec<f64>> {
    (0..ring.rank())
        .map(|a| {
            let spec = eig_spectrum(&ring.fusion_matrix(a), 1e-9)?;
            Ok(spec.eigenvalues.iter().map(|z| z.norm()).fold(0.0, f64::max))
        })
        .collect()
}
