use std::collections::BTreeMap;

use serde::Serialize;

/// How a report decides pass/fail.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PassRule {
    /// `rhs − lhs ≥ −tol`.
    Inequality { tol: f64 },
    /// `|rhs − lhs| ≤ tol`.
    Identity { tol: f64 },
    /// `lhs / rhs ≤ cap`, with `0/0` passing.
    RatioCap { cap: f64 },
    /// Recorded, never failed.
    Informational,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InequalityReport {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
    pub ratio: Option<f64>,
    pub rule: PassRule,
    pub pass: bool,
    pub tags: Vec<String>,
    pub terms: BTreeMap<String, f64>,
}

pub const NON_SOLUTION_TAG: &str = "non-solution input";

/// `lhs / rhs`: `0/0 = 0`, `x/0 = ∞` for `x > 0`.
pub fn safe_ratio(lhs: f64, rhs: f64) -> f64 {
    if rhs > 0.0 {
        lhs / rhs
    } else if lhs == 0.0 {
        0.0
    } else {
        f64::INFINITY
    }
}

impl InequalityReport {
    pub fn new(name: impl Into<String>, lhs: f64, rhs: f64, rule: PassRule) -> Self {
        let residual = rhs - lhs;
        let ratio = (rhs > 0.0 || lhs == 0.0).then(|| safe_ratio(lhs, rhs));
        let finite = lhs.is_finite() && rhs.is_finite();
        let pass = finite
            && match rule {
                PassRule::Inequality { tol } => residual >= -tol,
                PassRule::Identity { tol } => residual.abs() <= tol,
                PassRule::RatioCap { cap } => safe_ratio(lhs, rhs) <= cap,
                PassRule::Informational => true,
            };
        Self {
            name: name.into(),
            lhs,
            rhs,
            residual,
            ratio,
            rule,
            pass,
            tags: Vec::new(),
            terms: BTreeMap::new(),
        }
    }

    pub fn tag(mut self, tag: impl Into<String>) -> Self {
        self.tags.push(tag.into());
        self
    }

    pub fn tag_if(self, cond: bool, tag: &str) -> Self {
        if cond {
            self.tag(tag)
        } else {
            self
        }
    }

    pub fn term(mut self, name: &str, value: f64) -> Self {
        self.terms.insert(name.to_string(), value);
        self
    }

    /// Tolerance or cap of the rule (NaN for informational).
    pub fn tolerance(&self) -> f64 {
        match self.rule {
            PassRule::Inequality { tol } | PassRule::Identity { tol } => tol,
            PassRule::RatioCap { cap } => cap,
            PassRule::Informational => f64::NAN,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("reports serialize")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rules() {
        assert!(InequalityReport::new("a", 1.0, 1.0 - 1e-13, PassRule::Inequality { tol: 1e-12 }).pass);
        assert!(!InequalityReport::new("a", 1.0, 0.5, PassRule::Inequality { tol: 1e-12 }).pass);
        assert!(InequalityReport::new("b", 0.0, 0.0, PassRule::RatioCap { cap: 1.0 }).pass);
        let r = InequalityReport::new("c", 1.0, 0.0, PassRule::RatioCap { cap: 1.0 });
        assert!(!r.pass && r.ratio.is_none());
        assert!(!InequalityReport::new("d", 1.0, 1.1, PassRule::Identity { tol: 0.05 }).pass);
        assert!(InequalityReport::new("e", f64::MAX, 0.0, PassRule::Informational).pass);
        let json = InequalityReport::new("f", 1.0, 2.0, PassRule::RatioCap { cap: 3.0 })
            .tag(NON_SOLUTION_TAG)
            .to_json();
        assert!(json.contains("\"kind\":\"ratio_cap\""));
        assert!(json.contains("non-solution"));
    }
}
