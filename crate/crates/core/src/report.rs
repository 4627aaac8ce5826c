//! Structured outcome of one verification suite.
//!
//! Every case carries its residual and the bound it was judged against. Most cases
//! assert an identity (`residual < bound`); control cases assert that an identity
//! breaks (`residual > bound`).

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub const SCHEMA: &str = "bellkit-report/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Expect {
    Below,
    Above,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Case {
    pub id: String,
    pub residual: f64,
    pub bound: f64,
    pub expect: Expect,
    pub pass: bool,
}

impl Case {
    pub fn new(id: impl Into<String>, residual: f64, bound: f64, expect: Expect) -> Self {
        let pass = match expect {
            Expect::Below => residual < bound,
            Expect::Above => residual > bound,
        };
        Self { id: id.into(), residual, bound, expect, pass }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub suite: String,
    pub params: BTreeMap<String, String>,
    pub tolerance: f64,
    pub seed: Option<u64>,
    pub cases: Vec<Case>,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<u64>,
}

impl Report {
    pub fn new(suite: impl Into<String>, tolerance: f64) -> Self {
        Self {
            schema: SCHEMA.to_string(),
            suite: suite.into(),
            params: BTreeMap::new(),
            tolerance,
            seed: None,
            cases: Vec::new(),
            pass: true,
            wall_ms: None,
        }
    }

    pub fn with_param(mut self, key: &str, value: impl ToString) -> Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn push(&mut self, case: Case) {
        self.pass &= case.pass;
        self.cases.push(case);
    }

    /// Records an identity that must hold to the report tolerance.
    pub fn check(&mut self, id: impl Into<String>, residual: f64) {
        let tol = self.tolerance;
        self.push(Case::new(id, residual, tol, Expect::Below));
    }

    pub fn check_below(&mut self, id: impl Into<String>, residual: f64, bound: f64) {
        self.push(Case::new(id, residual, bound, Expect::Below));
    }

    /// Records a control whose residual must exceed `floor`.
    pub fn check_above(&mut self, id: impl Into<String>, residual: f64, floor: f64) {
        self.push(Case::new(id, residual, floor, Expect::Above));
    }

    /// Appends another report's cases, prefixing their ids.
    pub fn absorb(&mut self, prefix: &str, other: Report) {
        for mut case in other.cases {
            case.id = format!("{prefix}/{}", case.id);
            self.push(case);
        }
    }

    pub fn passed(&self) -> bool {
        self.pass && self.cases.iter().all(|c| c.pass)
    }

    pub fn max_residual(&self) -> f64 {
        self.cases
            .iter()
            .filter(|c| c.expect == Expect::Below)
            .map(|c| c.residual)
            .fold(0.0, f64::max)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Case> {
        self.cases.iter().filter(|c| !c.pass)
    }

    pub fn case(&self, id: &str) -> Option<&Case> {
        self.cases.iter().find(|c| c.id == id)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_is_conjunction() {
        let mut r = Report::new("t", 1e-12);
        r.check("a", 0.0);
        assert!(r.passed());
        r.check_above("control", 0.6, 0.5);
        assert!(r.passed());
        r.check("b", 1e-3);
        assert!(!r.passed());
        assert_eq!(r.failures().count(), 1);
    }

    #[test]
    fn nan_never_passes() {
        assert!(!Case::new("x", f64::NAN, 1.0, Expect::Below).pass);
        assert!(!Case::new("x", f64::NAN, 1.0, Expect::Above).pass);
    }

    #[test]
    fn json_roundtrip_and_no_timing_by_default() {
        let mut r = Report::new("gram", 1e-12).with_param("d", 3).with_seed(7);
        r.check("c", 1.5e-16);
        let text = r.to_json();
        assert!(text.contains("\"schema\": \"bellkit-report/1\""));
        assert!(!text.contains("wall_ms"));
        let back: Report = serde_json::from_str(&text).unwrap();
        assert_eq!(back, r);
    }
}
