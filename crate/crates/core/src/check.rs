//! Outcome type for predicates that carry a counterexample on failure.

use serde::Serialize;

/// Result of checking a property: either it holds, or it fails with a
/// constructive witness. Witnesses are always the lexicographically first
/// one the scan encounters, so repeated runs produce identical output.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "outcome", content = "witness")]
pub enum Check<W> {
    Holds,
    Fails(W),
}

impl<W> Check<W> {
    pub fn holds(&self) -> bool {
        matches!(self, Check::Holds)
    }

    pub fn witness(&self) -> Option<&W> {
        match self {
            Check::Holds => None,
            Check::Fails(w) => Some(w),
        }
    }

    pub fn into_witness(self) -> Option<W> {
        match self {
            Check::Holds => None,
            Check::Fails(w) => Some(w),
        }
    }

    pub fn map<V>(self, f: impl FnOnce(W) -> V) -> Check<V> {
        match self {
            Check::Holds => Check::Holds,
            Check::Fails(w) => Check::Fails(f(w)),
        }
    }
}

/// Serializes a failed identity to the line form `VIOLATION op=<name> args=<ids>`.
pub fn violation_line(op: &str, args: &[usize]) -> String {
    let ids: Vec<String> = args.iter().map(|a| a.to_string()).collect();
    format!("VIOLATION op={} args={}", op, ids.join(","))
}
