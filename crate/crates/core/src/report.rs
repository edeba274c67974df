//! Structured pass/fail output shared by every check.

use std::collections::BTreeMap;
use std::fmt;

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
    Skipped,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Inconclusive => "inconclusive",
            Status::Skipped => "skipped",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckEntry {
    pub name: String,
    pub status: Status,
    pub witness: Value,
}

/// A list of named checks. Witness payloads carry enough data to recompute each verdict.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct VerificationReport {
    pub checks: Vec<CheckEntry>,
}

impl VerificationReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, name: impl Into<String>, status: Status, witness: Value) {
        self.checks.push(CheckEntry { name: name.into(), status, witness });
    }

    pub fn check(&mut self, name: impl Into<String>, ok: bool, witness: Value) {
        self.push(name, if ok { Status::Pass } else { Status::Fail }, witness);
    }

    pub fn extend(&mut self, other: VerificationReport) {
        self.checks.extend(other.checks);
    }

    pub fn get(&self, name: &str) -> Option<&CheckEntry> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.status == Status::Pass)
    }

    pub fn any_fail(&self) -> bool {
        self.checks.iter().any(|c| c.status == Status::Fail)
    }

    /// Fail dominates inconclusive, which dominates pass; skipped entries are neutral.
    pub fn overall(&self) -> Status {
        if self.any_fail() {
            Status::Fail
        } else if self.checks.iter().any(|c| c.status == Status::Inconclusive) {
            Status::Inconclusive
        } else {
            Status::Pass
        }
    }
}

/// Cohomology dimensions of one complex, keyed by degree. Only nonzero entries are stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DimTable(BTreeMap<i64, usize>);

impl DimTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (i64, usize)>) -> Self {
        let mut t = Self::new();
        for (deg, n) in pairs {
            t.add(deg, n);
        }
        t
    }

    pub fn add(&mut self, degree: i64, n: usize) {
        if n > 0 {
            *self.0.entry(degree).or_insert(0) += n;
        }
    }

    pub fn get(&self, degree: i64) -> usize {
        self.0.get(&degree).copied().unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> usize {
        self.0.values().sum()
    }

    pub fn euler(&self) -> i64 {
        self.0.iter().map(|(d, n)| if d % 2 == 0 { *n as i64 } else { -(*n as i64) }).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, usize)> + '_ {
        self.0.iter().map(|(d, n)| (*d, *n))
    }

    /// Table of `V[n]`: the entry in degree `k` moves to degree `k - n`.
    pub fn shifted(&self, n: i64) -> Self {
        Self(self.0.iter().map(|(d, c)| (d - n, *c)).collect())
    }

    /// Table of the linear dual: degrees are negated.
    pub fn dual(&self) -> Self {
        Self(self.0.iter().map(|(d, c)| (-d, *c)).collect())
    }

    pub fn sum(&self, other: &DimTable) -> Self {
        let mut t = self.clone();
        for (d, n) in other.iter() {
            t.add(d, n);
        }
        t
    }

    /// True when every class sits in degree zero.
    pub fn concentrated_in_zero(&self) -> bool {
        self.0.keys().all(|&d| d == 0)
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).unwrap()
    }
}

impl Serialize for DimTable {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(self.0.len()))?;
        for (d, n) in &self.0 {
            m.serialize_entry(&d.to_string(), n)?;
        }
        m.end()
    }
}

impl fmt::Display for DimTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, (d, n)) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{d}:{n}")?;
        }
        f.write_str("}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shift_moves_degrees_down() {
        let t = DimTable::from_pairs([(0, 1), (1, 1)]);
        assert_eq!(t.shifted(2), DimTable::from_pairs([(-2, 1), (-1, 1)]));
        assert_eq!(t.shifted(-1).to_string(), "{1:1, 2:1}");
        assert_eq!(t.euler(), 0);
    }

    #[test]
    fn overall_status() {
        let mut r = VerificationReport::new();
        r.check("a", true, Value::Null);
        assert_eq!(r.overall(), Status::Pass);
        r.push("b", Status::Inconclusive, Value::Null);
        assert_eq!(r.overall(), Status::Inconclusive);
        r.check("c", false, Value::Null);
        assert_eq!(r.overall(), Status::Fail);
    }
}
