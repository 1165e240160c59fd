use serde::{Deserialize, Serialize};

use crate::prepotential::PointSample;

pub const SCHEMA: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    PassWithWarnings,
    Fail,
}

impl Verdict {
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Pass => 0,
            Verdict::PassWithWarnings => 2,
            Verdict::Fail => 1,
        }
    }
}

// Non-finite residuals serialize as `null` and come back as NaN.
mod nullable {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        if x.is_finite() {
            s.serialize_f64(*x)
        } else {
            s.serialize_none()
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::NAN))
    }
}

// Clearances with nothing to clear are infinite; `null` in JSON.
pub(crate) mod unbounded {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        super::nullable::serialize(x, s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::INFINITY))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    #[serde(with = "nullable")]
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl CheckResult {
    pub fn new(name: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        Self { name: name.into(), residual, tolerance, pass: residual.is_finite() && residual <= tolerance, error: None }
    }

    /// A check that could not be evaluated.
    pub fn failed(name: impl Into<String>, error: impl ToString, tolerance: f64) -> Self {
        Self { name: name.into(), residual: f64::INFINITY, tolerance, pass: false, error: Some(error.to_string()) }
    }

    /// Pass when the residual exceeds the threshold (negative controls).
    pub fn above(name: impl Into<String>, residual: f64, threshold: f64) -> Self {
        Self { name: name.into(), residual, tolerance: threshold, pass: residual > threshold, error: None }
    }
}

/// A hypothesis behind a check. A failed hypothesis only downgrades the
/// verdict to a warning.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Hypothesis {
    pub name: String,
    #[serde(with = "nullable")]
    pub value: f64,
    pub ok: bool,
}

impl Hypothesis {
    pub fn new(name: impl Into<String>, value: f64, ok: bool) -> Self {
        Self { name: name.into(), value, ok }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub schema: u32,
    pub target: String,
    pub digest: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<String>,
    pub checks: Vec<CheckResult>,
    pub hypotheses: Vec<Hypothesis>,
    pub points: Vec<PointSample>,
    pub verdict: Verdict,
}

impl CheckReport {
    pub fn new(target: impl Into<String>, digest: impl Into<String>) -> Self {
        Self {
            schema: SCHEMA,
            target: target.into(),
            digest: digest.into(),
            params: None,
            checks: vec![],
            hypotheses: vec![],
            points: vec![],
            verdict: Verdict::Pass,
        }
    }

    pub fn push(&mut self, check: CheckResult) {
        self.checks.push(check);
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Recompute the overall verdict from the checks and hypotheses.
    pub fn finish(&mut self) {
        self.verdict = if !self.checks.iter().all(|c| c.pass) {
            Verdict::Fail
        } else if !self.hypotheses.iter().all(|h| h.ok) {
            Verdict::PassWithWarnings
        } else {
            Verdict::Pass
        };
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn human(&self) -> String {
        let mut out = format!("{}  [{}]\n", self.target, &self.digest[..self.digest.len().min(12)]);
        if let Some(p) = &self.params {
            out += &format!("  params: {p}\n");
        }
        for c in &self.checks {
            let status = if c.pass { "ok  " } else { "FAIL" };
            match &c.error {
                Some(e) => out += &format!("  {status} {:<22} error: {e}\n", c.name),
                None => out += &format!("  {status} {:<22} {:.3e} (tol {:.1e})\n", c.name, c.residual, c.tolerance),
            }
        }
        for h in &self.hypotheses {
            let status = if h.ok { "ok  " } else { "warn" };
            out += &format!("  {status} {:<22} {:.3e}\n", h.name, h.value);
        }
        out += &format!("  verdict: {:?}\n", self.verdict);
        out
    }
}
