use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

#[derive(Clone, Debug, Serialize)]
pub struct InputDigest {
    pub role: String,
    pub path: String,
    pub sha256: String,
}

impl InputDigest {
    pub fn new(role: &str, path: &str, bytes: &[u8]) -> Self {
        Self { role: role.into(), path: path.into(), sha256: hex::encode(Sha256::digest(bytes)) }
    }
}

/// One verified identity. `anchor` states the identity being checked.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub anchor: String,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Machine-readable outcome of one command. Carries no timestamp, so equal
/// inputs and flags give byte-identical JSON.
#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub tool_version: String,
    pub command: String,
    pub inputs: Vec<InputDigest>,
    pub checks: Vec<Check>,
    pub values: BTreeMap<String, Value>,
    pub result: Option<Value>,
    pub overall: bool,
}

impl VerificationReport {
    pub fn new(command: &str) -> Self {
        Self {
            tool_version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            inputs: Vec::new(),
            checks: Vec::new(),
            values: BTreeMap::new(),
            result: None,
            overall: true,
        }
    }

    /// Records a residual check; NaN never passes.
    pub fn check(&mut self, name: impl Into<String>, anchor: impl Into<String>, residual: f64, tolerance: f64) -> bool {
        self.check_with(name, anchor, residual, tolerance, residual <= tolerance)
    }

    /// Records a check whose pass flag is decided by the caller.
    pub fn check_with(
        &mut self,
        name: impl Into<String>,
        anchor: impl Into<String>,
        residual: f64,
        tolerance: f64,
        pass: bool,
    ) -> bool {
        self.overall &= pass;
        self.checks.push(Check { name: name.into(), anchor: anchor.into(), residual, tolerance, pass });
        pass
    }

    pub fn value(&mut self, key: &str, v: impl Serialize) {
        self.values.insert(key.into(), serde_json::to_value(v).unwrap_or(Value::Null));
    }

    pub fn to_json(&self) -> wharf::Result<String> {
        wharf::formats::to_json_string(self)
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "wharf {} {}", self.tool_version, self.command);
        for i in &self.inputs {
            let _ = writeln!(out, "  {:<10} {} sha256:{}", i.role, i.path, &i.sha256[..16]);
        }
        let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
        for c in &self.checks {
            let _ = writeln!(
                out,
                "  [{}] {:<width$}  {:>10.3e} <= {:<8.1e}  {}",
                if c.pass { "PASS" } else { "FAIL" },
                c.name,
                c.residual,
                c.tolerance,
                c.anchor,
            );
        }
        for (k, v) in &self.values {
            let _ = writeln!(out, "  {k} = {v}");
        }
        if let Some(r) = &self.result {
            let _ = writeln!(out, "  result = {r}");
        }
        let _ = writeln!(out, "overall: {}", if self.overall { "PASS" } else { "FAIL" });
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overall_is_the_conjunction() {
        let mut r = VerificationReport::new("t");
        assert!(r.overall);
        r.check("a", "x = x", 0.0, 1e-9);
        assert!(r.overall);
        r.check("b", "y = y", f64::NAN, 1e-9);
        assert!(!r.overall);
        r.check("c", "z = z", 0.0, 1e-9);
        assert!(!r.overall);
    }

    #[test]
    fn digest_is_sha256_hex() {
        let d = InputDigest::new("algebra", "a.json", b"abc");
        assert_eq!(d.sha256, "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    }
}
