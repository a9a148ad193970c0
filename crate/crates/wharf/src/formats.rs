//! On-disk formats: `wha.json`, `fusion.json`, `fsymbols.json`, dense
//! `.ctf` tensor dumps and plain-text sequence files.
//!
//! JSON lists are sparse, 0-based and sorted so golden files diff cleanly.
//! Complex numbers are written as two doubles `re, im`.

use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::category::{FKey, FSymbols, FusionRing};
use crate::error::{Error, Result};
use crate::numerics::{CMatrix, C64, ZERO};
use crate::wha::WhaTable;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WhaJson {
    pub dim: usize,
    pub basis: Vec<String>,
    /// `[x, y, z, re, im]`: coefficient of `e_z` in `e_x e_y`.
    pub mult: Vec<(usize, usize, usize, f64, f64)>,
    /// `[z, x, y, re, im]`: coefficient of `e_x (x) e_y` in `Delta(e_z)`.
    pub comult: Vec<(usize, usize, usize, f64, f64)>,
    pub unit: Vec<(usize, f64, f64)>,
    pub counit: Vec<(usize, f64, f64)>,
    /// `[x, y, re, im]`: matrix entry `(x, y)`, i.e. the coefficient of
    /// `e_x` in `S(e_y)`.
    pub antipode: Vec<(usize, usize, f64, f64)>,
    /// `[x, y, re, im]`: matrix entry `(x, y)` of the star, applied to
    /// conjugated coefficients.
    pub star: Vec<(usize, usize, f64, f64)>,
    /// Free-form record of how the table was produced and checked.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verification: Option<serde_json::Value>,
}

fn sparse_vec(v: &[C64]) -> Vec<(usize, f64, f64)> {
    v.iter().enumerate().filter(|(_, z)| **z != ZERO).map(|(i, z)| (i, z.re, z.im)).collect()
}

fn sparse_mat(m: &CMatrix) -> Vec<(usize, usize, f64, f64)> {
    let mut out = Vec::new();
    for x in 0..m.rows() {
        for y in 0..m.cols() {
            let z = m[(x, y)];
            if z != ZERO {
                out.push((x, y, z.re, z.im));
            }
        }
    }
    out
}

fn dense_vec(dim: usize, entries: &[(usize, f64, f64)], what: &str) -> Result<Vec<C64>> {
    let mut v = vec![ZERO; dim];
    for &(i, re, im) in entries {
        *v.get_mut(i).ok_or_else(|| Error::InvalidInput(format!("{what} index {i} out of range")))? += C64::new(re, im);
    }
    Ok(v)
}

fn dense_mat(dim: usize, entries: &[(usize, usize, f64, f64)], what: &str) -> Result<CMatrix> {
    let mut m = CMatrix::zeros(dim, dim);
    for &(x, y, re, im) in entries {
        if x >= dim || y >= dim {
            return Err(Error::InvalidInput(format!("{what} index ({x}, {y}) out of range")));
        }
        m[(x, y)] += C64::new(re, im);
    }
    Ok(m)
}

impl WhaJson {
    pub fn from_table(alg: &WhaTable) -> Self {
        let mut mult: Vec<_> = alg.mult_entries().into_iter().map(|(x, y, z, v)| (x, y, z, v.re, v.im)).collect();
        let mut comult: Vec<_> = alg.comult_entries().into_iter().map(|(z, x, y, v)| (z, x, y, v.re, v.im)).collect();
        mult.sort_by_key(|e| (e.0, e.1, e.2));
        comult.sort_by_key(|e| (e.0, e.1, e.2));
        Self {
            dim: alg.dim(),
            basis: alg.basis().to_vec(),
            mult,
            comult,
            unit: sparse_vec(alg.unit()),
            counit: sparse_vec(alg.counit()),
            antipode: sparse_mat(alg.antipode()),
            star: sparse_mat(alg.star()),
            verification: None,
        }
    }

    pub fn to_table(&self) -> Result<WhaTable> {
        let d = self.dim;
        if self.basis.len() != d {
            return Err(Error::InvalidInput(format!("{} basis names for dimension {d}", self.basis.len())));
        }
        let mult: Vec<_> = self.mult.iter().map(|&(x, y, z, re, im)| (x, y, z, C64::new(re, im))).collect();
        let comult: Vec<_> = self.comult.iter().map(|&(z, x, y, re, im)| (z, x, y, C64::new(re, im))).collect();
        WhaTable::new(
            self.basis.clone(),
            &mult,
            &comult,
            dense_vec(d, &self.unit, "unit")?,
            dense_vec(d, &self.counit, "counit")?,
            dense_mat(d, &self.antipode, "antipode")?,
            dense_mat(d, &self.star, "star")?,
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FusionJson {
    pub labels: Vec<String>,
    pub unit: String,
    pub dual: BTreeMap<String, String>,
    /// `[a, b, c, N_ab^c]`, nonzero entries only.
    #[serde(rename = "N")]
    pub n: Vec<(String, String, String, u32)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dims: Option<BTreeMap<String, f64>>,
}

impl FusionJson {
    pub fn from_ring(ring: &FusionRing) -> Self {
        let l = |a: usize| ring.label(a).to_string();
        Self {
            labels: ring.labels().to_vec(),
            unit: l(ring.unit()),
            dual: (0..ring.rank()).map(|a| (l(a), l(ring.dual(a)))).collect(),
            n: ring.entries().into_iter().map(|(a, b, c, v)| (l(a), l(b), l(c), v)).collect(),
            dims: None,
        }
    }

    pub fn to_ring(&self) -> Result<FusionRing> {
        FusionRing::new(self.labels.clone(), &self.unit, &self.dual, &self.n, self.dims.as_ref())
    }
}

/// `(a, b, c, d, e, f, re, im)`.
pub type FSymbolEntry = (String, String, String, String, String, String, f64, f64);

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FSymbolsJson {
    /// `[a, b, c, d, e, f, re, im]` for `F^{abc}_d[e, f]`.
    pub entries: Vec<FSymbolEntry>,
    /// Frobenius-Schur indicators; derived from the F-data when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa: Option<BTreeMap<String, f64>>,
}

impl FSymbolsJson {
    pub fn from_fsymbols(data: &FSymbols) -> Self {
        let ring = data.ring();
        let l = |a: usize| ring.label(a).to_string();
        let entries = data
            .entries()
            .iter()
            .map(|(k, v)| (l(k[0]), l(k[1]), l(k[2]), l(k[3]), l(k[4]), l(k[5]), v.re, v.im))
            .collect();
        Self { entries, kappa: None }
    }

    pub fn to_fsymbols(&self, ring: FusionRing) -> Result<FSymbols> {
        let idx = |s: &str| ring.index_of(s).ok_or_else(|| Error::InvalidInput(format!("unknown label '{s}' in F-symbols")));
        let mut f: BTreeMap<FKey, C64> = BTreeMap::new();
        for (a, b, c, d, e, g, re, im) in &self.entries {
            let key = [idx(a)?, idx(b)?, idx(c)?, idx(d)?, idx(e)?, idx(g)?];
            if f.insert(key, C64::new(*re, *im)).is_some() {
                return Err(Error::InvalidInput(format!("duplicate F-symbol F^{{{a}{b}{c}}}_{d}[{e},{g}]")));
            }
        }
        let kappa = match &self.kappa {
            None => None,
            Some(map) => Some(
                ring.labels()
                    .iter()
                    .map(|l| {
                        map.get(l)
                            .map(|k| C64::new(*k, 0.0))
                            .ok_or_else(|| Error::InvalidInput(format!("no indicator for '{l}'")))
                    })
                    .collect::<Result<Vec<_>>>()?,
            ),
        };
        FSymbols::new(ring, f, kappa)
    }
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

/// Indented JSON with a trailing newline. Arrays of scalars stay on one
/// line, so every sparse entry is one diff line.
pub fn to_json_string<T: Serialize>(value: &T) -> Result<String> {
    let mut out = String::new();
    write_value(&mut out, &serde_json::to_value(value)?, 0)?;
    out.push('\n');
    Ok(out)
}

fn write_value(out: &mut String, v: &serde_json::Value, indent: usize) -> Result<()> {
    use serde_json::Value;
    let pad = |n: usize| "  ".repeat(n);
    match v {
        Value::Array(items) if items.iter().all(|x| !x.is_array() && !x.is_object()) => {
            out.push_str(&serde_json::to_string(v)?);
        }
        Value::Array(items) => {
            out.push_str("[\n");
            for (i, x) in items.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                write_value(out, x, indent + 1)?;
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push(']');
        }
        Value::Object(map) if !map.is_empty() => {
            out.push_str("{\n");
            for (i, (k, x)) in map.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                out.push_str(&serde_json::to_string(k)?);
                out.push_str(": ");
                write_value(out, x, indent + 1)?;
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push('}');
        }
        _ => out.push_str(&serde_json::to_string(v)?),
    }
    Ok(())
}

pub fn read_wha(path: &Path) -> Result<WhaTable> {
    read_json::<WhaJson>(path)?.to_table()
}

pub fn write_wha(path: &Path, alg: &WhaTable) -> Result<()> {
    Ok(std::fs::write(path, to_json_string(&WhaJson::from_table(alg))?)?)
}

pub fn read_fusion(path: &Path) -> Result<FusionRing> {
    read_json::<FusionJson>(path)?.to_ring()
}

pub fn read_fsymbols(path: &Path, ring: FusionRing) -> Result<FSymbols> {
    read_json::<FSymbolsJson>(path)?.to_fsymbols(ring)
}

pub const CTF_MAGIC: [u8; 16] = *b"WHARF-CTF\0\0\0\0\0\0\x01";

/// Dense complex tensor in row-major order.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseTensor {
    pub dims: Vec<usize>,
    pub data: Vec<C64>,
}

impl DenseTensor {
    pub fn new(dims: Vec<usize>, data: Vec<C64>) -> Result<Self> {
        let n = dims.iter().try_fold(1usize, |acc, &d| acc.checked_mul(d));
        if n != Some(data.len()) {
            return Err(Error::Shape(format!("{} entries for dims {dims:?}", data.len())));
        }
        Ok(Self { dims, data })
    }

    pub fn from_matrix(m: &CMatrix) -> Self {
        Self { dims: vec![m.rows(), m.cols()], data: m.data().to_vec() }
    }

    pub fn to_matrix(&self) -> Result<CMatrix> {
        match self.dims[..] {
            [r, c] => CMatrix::new(r, c, self.data.clone()),
            _ => Err(Error::Shape(format!("rank-{} tensor is not a matrix", self.dims.len()))),
        }
    }
}

pub fn write_ctf(w: &mut impl Write, t: &DenseTensor) -> Result<()> {
    let u32_of = |x: usize| u32::try_from(x).map_err(|_| Error::InvalidInput(format!("{x} does not fit in u32")));
    w.write_all(&CTF_MAGIC)?;
    w.write_all(&u32_of(t.dims.len())?.to_le_bytes())?;
    for &d in &t.dims {
        w.write_all(&u32_of(d)?.to_le_bytes())?;
    }
    let mut buf = Vec::with_capacity(16 * t.data.len());
    for z in &t.data {
        buf.extend_from_slice(&z.re.to_le_bytes());
        buf.extend_from_slice(&z.im.to_le_bytes());
    }
    w.write_all(&buf)?;
    Ok(())
}

pub fn read_ctf(r: &mut impl Read) -> Result<DenseTensor> {
    let mut magic = [0u8; 16];
    r.read_exact(&mut magic)?;
    if magic != CTF_MAGIC {
        return Err(Error::InvalidInput("not a .ctf tensor dump (bad magic)".into()));
    }
    let mut word = [0u8; 4];
    let mut next_u32 = |r: &mut dyn Read| -> Result<usize> {
        r.read_exact(&mut word)?;
        Ok(u32::from_le_bytes(word) as usize)
    };
    let rank = next_u32(r)?;
    let dims = (0..rank).map(|_| next_u32(r)).collect::<Result<Vec<_>>>()?;
    let n = dims
        .iter()
        .try_fold(1usize, |acc, &d| acc.checked_mul(d))
        .filter(|n| *n <= crate::numerics::DEFAULT_DENSE_CAP)
        .ok_or_else(|| Error::InvalidInput(format!("tensor dims {dims:?} too large")))?;
    let mut bytes = vec![0u8; 16 * n];
    r.read_exact(&mut bytes)?;
    let f = |c: &[u8]| f64::from_le_bytes(c.try_into().expect("8 bytes"));
    let data = bytes.chunks_exact(16).map(|c| C64::new(f(&c[..8]), f(&c[8..]))).collect();
    if r.read(&mut [0u8; 1])? != 0 {
        return Err(Error::InvalidInput("trailing bytes after tensor data".into()));
    }
    DenseTensor::new(dims, data)
}

/// One value per line, `re im` or just `re`. Blank lines and `#` comments
/// are skipped.
pub fn parse_sequence(text: &str) -> Result<Vec<C64>> {
    let mut out = Vec::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let bad = || Error::InvalidInput(format!("sequence line {}: expected 're im', got '{line}'", no + 1));
        let parts: Vec<&str> = line.split_whitespace().collect();
        let num = |s: &str| s.parse::<f64>().map_err(|_| bad());
        let z = match parts[..] {
            [re] => C64::new(num(re)?, 0.0),
            [re, im] => C64::new(num(re)?, num(im)?),
            _ => return Err(bad()),
        };
        out.push(z);
    }
    Ok(out)
}

pub fn format_sequence(values: &[C64]) -> String {
    values.iter().map(|z| format!("{:?} {:?}\n", z.re, z.im)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sequence_lines() {
        let v = parse_sequence("# header\n1 0\n\n-2.5 1e-3  # trailing\n3\n").unwrap();
        assert_eq!(v, vec![C64::new(1.0, 0.0), C64::new(-2.5, 1e-3), C64::new(3.0, 0.0)]);
        assert!(parse_sequence("1 2 3").is_err());
        assert!(parse_sequence("x").is_err());
        assert_eq!(parse_sequence(&format_sequence(&v)).unwrap(), v);
    }

    #[test]
    fn ctf_rejects_bad_magic_and_trailing_bytes() {
        let t = DenseTensor::new(vec![1, 2], vec![C64::new(1.0, -1.0), ZERO]).unwrap();
        let mut buf = Vec::new();
        write_ctf(&mut buf, &t).unwrap();
        assert_eq!(buf.len(), 16 + 4 + 8 + 32);
        assert_eq!(read_ctf(&mut buf.as_slice()).unwrap(), t);
        let mut extra = buf.clone();
        extra.push(0);
        assert!(read_ctf(&mut extra.as_slice()).is_err());
        buf[0] = b'X';
        assert!(read_ctf(&mut buf.as_slice()).is_err());
    }
}
