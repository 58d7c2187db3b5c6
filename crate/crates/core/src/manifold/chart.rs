use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::expr::{Expr, DEFAULT_NODE_BUDGET};

/// Closed sampling interval for one coordinate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        Interval { lo, hi }
    }

    pub fn contains(&self, v: f64) -> bool {
        self.lo <= v && v <= self.hi
    }
}

/// A single coordinate chart with a box-shaped sampling domain.
///
/// Singular loci are declared as `exclusions`: expressions whose zero sets
/// the sampler keeps away from.
#[derive(Clone, Debug, PartialEq)]
pub struct Chart {
    names: Vec<String>,
    domain: Vec<Interval>,
    exclusions: Vec<Expr>,
    node_budget: usize,
}

fn valid_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        && !matches!(s, "sin" | "cos" | "exp")
}

impl Chart {
    pub fn new<S: AsRef<str>>(names: &[S], domain: &[Interval]) -> Result<Chart> {
        if names.is_empty() {
            return Err(Error::InvalidChart("dimension must be at least 1".into()));
        }
        if names.len() != domain.len() {
            return Err(Error::InvalidChart(format!(
                "{} coordinate names but {} intervals",
                names.len(),
                domain.len()
            )));
        }
        let mut seen = BTreeSet::new();
        for n in names {
            let n = n.as_ref();
            if !valid_identifier(n) {
                return Err(Error::InvalidChart(format!(
                    "'{n}' is not a valid coordinate name"
                )));
            }
            if !seen.insert(n) {
                return Err(Error::InvalidChart(format!(
                    "duplicate coordinate name '{n}'"
                )));
            }
        }
        for (n, iv) in names.iter().zip(domain) {
            if !(iv.lo.is_finite() && iv.hi.is_finite() && iv.lo <= iv.hi) {
                return Err(Error::InvalidChart(format!(
                    "empty sampling interval [{}, {}] for '{}'",
                    iv.lo,
                    iv.hi,
                    n.as_ref()
                )));
            }
        }
        Ok(Chart {
            names: names.iter().map(|s| s.as_ref().to_string()).collect(),
            domain: domain.to_vec(),
            exclusions: Vec::new(),
            node_budget: DEFAULT_NODE_BUDGET,
        })
    }

    /// Chart with every coordinate sampled from the same interval.
    pub fn uniform<S: AsRef<str>>(names: &[S], interval: Interval) -> Result<Chart> {
        Chart::new(names, &vec![interval; names.len()])
    }

    /// Keep samples at distance at least `1e-3` from the zero set of each
    /// expression.
    pub fn with_exclusions(mut self, exclusions: Vec<Expr>) -> Result<Chart> {
        for e in &exclusions {
            for v in e.variables() {
                if !self.names.contains(&v) {
                    return Err(Error::UnknownIdentifier { name: v, pos: 0 });
                }
            }
        }
        self.exclusions = exclusions;
        Ok(self)
    }

    pub fn with_node_budget(mut self, budget: usize) -> Chart {
        self.node_budget = budget;
        self
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn name_refs(&self) -> Vec<&str> {
        self.names.iter().map(String::as_str).collect()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn domain(&self) -> &[Interval] {
        &self.domain
    }

    pub fn exclusions(&self) -> &[Expr] {
        &self.exclusions
    }

    pub fn node_budget(&self) -> usize {
        self.node_budget
    }

    pub fn coordinate(&self, i: usize) -> Expr {
        Expr::var(&self.names[i])
    }

    /// Fail with a resource error if any expression exceeds the budget.
    pub fn check_budget<'a>(&self, exprs: impl IntoIterator<Item = &'a Expr>) -> Result<()> {
        for e in exprs {
            let size = e.node_count();
            if size > self.node_budget {
                return Err(Error::Resource {
                    size,
                    budget: self.node_budget,
                });
            }
        }
        Ok(())
    }

    /// Same coordinates in the same order.
    pub fn compatible(&self, other: &Chart) -> bool {
        self.names == other.names
    }

    pub(crate) fn ensure_compatible(&self, other: &Chart) -> Result<()> {
        if self.compatible(other) {
            Ok(())
        } else {
            Err(Error::ChartMismatch(format!("{self} vs {other}")))
        }
    }
}

impl fmt::Display for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.names.join(", "))
    }
}
