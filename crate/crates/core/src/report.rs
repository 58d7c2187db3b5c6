//! Structured outcomes of verification checks.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::expr::Point;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Holds,
    Fails,
    /// Symbolic simplification did not reach zero but every numeric sample
    /// did; the claim rests on numeric evidence only.
    Inconclusive,
}

impl Verdict {
    pub fn holds(self) -> bool {
        self == Verdict::Holds
    }

    /// Conjunction: any failure wins, then any inconclusive.
    pub fn and(self, other: Verdict) -> Verdict {
        match (self, other) {
            (Verdict::Fails, _) | (_, Verdict::Fails) => Verdict::Fails,
            (Verdict::Inconclusive, _) | (_, Verdict::Inconclusive) => Verdict::Inconclusive,
            _ => Verdict::Holds,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Holds => "holds",
            Verdict::Fails => "fails",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Evidence {
    Symbolic,
    Numeric,
}

/// A component where a residual was observed.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Witness {
    pub component: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expr: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub point: Option<BTreeMap<String, f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
}

impl Witness {
    pub fn symbolic(component: impl Into<String>, expr: String) -> Self {
        Witness {
            component: component.into(),
            expr: Some(expr),
            point: None,
            residual: None,
        }
    }

    pub fn numeric(component: impl Into<String>, point: &Point, residual: f64) -> Self {
        Witness {
            component: component.into(),
            expr: None,
            point: Some(point.iter().map(|(k, v)| (k.to_string(), v)).collect()),
            residual: Some(residual),
        }
    }
}

/// One named sub-claim of a check.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Condition {
    pub name: String,
    pub verdict: Verdict,
    pub evidence: Evidence,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Condition {
    pub fn new(
        name: impl Into<String>,
        verdict: Verdict,
        evidence: Evidence,
        witnesses: Vec<Witness>,
    ) -> Self {
        assert!(
            verdict != Verdict::Fails || !witnesses.is_empty(),
            "a failing condition needs a witness"
        );
        Condition {
            name: name.into(),
            verdict,
            evidence,
            witnesses,
            note: None,
        }
    }

    pub fn holds(&self) -> bool {
        self.verdict.holds()
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub verdict: Verdict,
    /// Whether the observed verdicts agree with the asserted statement.
    pub consistent: bool,
    pub conditions: Vec<Condition>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub metadata: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

impl CheckReport {
    /// Report whose verdict is the conjunction of its conditions and which
    /// is consistent exactly when that conjunction holds.
    pub fn conjunction(check: impl Into<String>, conditions: Vec<Condition>) -> Self {
        let verdict = conditions
            .iter()
            .fold(Verdict::Holds, |v, c| v.and(c.verdict));
        CheckReport {
            check: check.into(),
            verdict,
            consistent: verdict != Verdict::Fails,
            conditions,
            metadata: BTreeMap::new(),
            notes: Vec::new(),
            elapsed_ms: None,
        }
    }

    pub fn with_meta(mut self, key: &str, value: impl ToString) -> Self {
        self.metadata.insert(key.to_string(), value.to_string());
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn condition(&self, name: &str) -> Option<&Condition> {
        self.conditions.iter().find(|c| c.name == name)
    }

    pub fn witnesses(&self) -> impl Iterator<Item = &Witness> {
        self.conditions.iter().flat_map(|c| c.witnesses.iter())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conjunction_prefers_failure() {
        assert_eq!(
            Verdict::Holds.and(Verdict::Inconclusive),
            Verdict::Inconclusive
        );
        assert_eq!(Verdict::Inconclusive.and(Verdict::Fails), Verdict::Fails);
        assert_eq!(Verdict::Holds.and(Verdict::Holds), Verdict::Holds);
    }

    #[test]
    #[should_panic]
    fn failure_without_witness_is_rejected() {
        Condition::new("c", Verdict::Fails, Evidence::Symbolic, vec![]);
    }

    #[test]
    fn serializes_kebab_case() {
        let c = Condition::new("c", Verdict::Inconclusive, Evidence::Numeric, vec![]);
        let json = serde_json::to_string(&c).unwrap();
        assert_eq!(
            json,
            r#"{"name":"c","verdict":"inconclusive","evidence":"numeric"}"#
        );
    }
}
