//! Constructors for the standard lattice families used as fixtures, plus
//! dualization and direct products.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::lattice::FiniteLattice;

/// A named lattice family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Boolean,
    Chain,
    Divisor,
    Partition,
    NoncrossingPartition,
    N5,
    M3,
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Boolean => "boolean",
            Family::Chain => "chain",
            Family::Divisor => "divisor",
            Family::Partition => "partition",
            Family::NoncrossingPartition => "noncrossing_partition",
            Family::N5 => "n5",
            Family::M3 => "m3",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "boolean" => Ok(Family::Boolean),
            "chain" => Ok(Family::Chain),
            "divisor" => Ok(Family::Divisor),
            "partition" => Ok(Family::Partition),
            "noncrossing_partition" => Ok(Family::NoncrossingPartition),
            "n5" => Ok(Family::N5),
            "m3" => Ok(Family::M3),
            other => Err(format!(
                "unknown family `{other}` (expected boolean, chain, divisor, partition, \
                 noncrossing_partition, n5, or m3)"
            )),
        }
    }
}

/// A family together with its size parameter (ignored for `n5`/`m3`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FamilySpec {
    pub family: Family,
    pub parameter: u64,
}

/// Request exceeds the documented size limits.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("size guard: {0}")]
pub struct SizeGuard(pub String);

const MAX_ELEMENTS: u64 = 1 << 16;

/// Builds the requested lattice with its documented canonical element
/// ordering: subsets in binary-counter order, partitions in
/// restricted-growth-string lexicographic order, divisors ascending.
pub fn make_family(spec: &FamilySpec) -> Result<FiniteLattice, SizeGuard> {
    let p = spec.parameter;
    match spec.family {
        Family::Boolean => {
            if p > 16 {
                return Err(SizeGuard(format!("boolean parameter {p} exceeds 16")));
            }
            Ok(boolean(p as usize))
        }
        Family::Chain => {
            if p == 0 {
                return Err(SizeGuard("chain needs at least one element".into()));
            }
            if p > MAX_ELEMENTS {
                return Err(SizeGuard(format!(
                    "chain parameter {p} exceeds {MAX_ELEMENTS}"
                )));
            }
            Ok(chain(p as usize))
        }
        Family::Divisor => {
            if p == 0 {
                return Err(SizeGuard("divisor parameter must be positive".into()));
            }
            if p > 1_000_000_000_000 {
                return Err(SizeGuard(format!("divisor parameter {p} exceeds 10^12")));
            }
            Ok(divisor(p))
        }
        Family::Partition => {
            if p > 7 {
                return Err(SizeGuard(format!("partition parameter {p} exceeds 7")));
            }
            Ok(partition(p as usize, false))
        }
        Family::NoncrossingPartition => {
            if p > 7 {
                return Err(SizeGuard(format!(
                    "noncrossing_partition parameter {p} exceeds 7"
                )));
            }
            Ok(partition(p as usize, true))
        }
        Family::N5 => Ok(pentagon_lattice()),
        Family::M3 => Ok(diamond_lattice()),
    }
}

/// The pentagon: bottom 0, long side 1 ⋖ 2, short side 3, top 4.
pub fn pentagon_lattice() -> FiniteLattice {
    FiniteLattice::from_covers(5, &[(0, 1), (1, 2), (2, 4), (0, 3), (3, 4)]).unwrap()
}

/// The diamond: bottom 0, atoms 1, 2, 3, top 4.
pub fn diamond_lattice() -> FiniteLattice {
    FiniteLattice::from_covers(5, &[(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)]).unwrap()
}

fn boolean(k: usize) -> FiniteLattice {
    let n = 1usize << k;
    let mut edges = Vec::new();
    for s in 0..n {
        for a in 0..k {
            if s & (1 << a) == 0 {
                edges.push((s, s | 1 << a));
            }
        }
    }
    let labels = (0..n)
        .map(|s| {
            let atoms: Vec<String> = (0..k)
                .filter(|a| s >> a & 1 == 1)
                .map(|a| (a + 1).to_string())
                .collect();
            Some(format!("{{{}}}", atoms.join(",")))
        })
        .collect();
    FiniteLattice::from_covers(n, &edges)
        .unwrap()
        .with_labels(labels)
}

fn chain(k: usize) -> FiniteLattice {
    let edges: Vec<(usize, usize)> = (1..k).map(|i| (i - 1, i)).collect();
    FiniteLattice::from_covers(k, &edges).unwrap()
}

fn divisor(v: u64) -> FiniteLattice {
    let mut divs = Vec::new();
    let mut d = 1;
    while d * d <= v {
        if v.is_multiple_of(d) {
            divs.push(d);
            if d * d != v {
                divs.push(v / d);
            }
        }
        d += 1;
    }
    divs.sort_unstable();
    // Divisibility pairs; the builder absorbs the non-covers.
    let mut edges = Vec::new();
    for i in 0..divs.len() {
        for j in i + 1..divs.len() {
            if divs[j] % divs[i] == 0 {
                edges.push((i, j));
            }
        }
    }
    let labels = divs.iter().map(|d| Some(d.to_string())).collect();
    FiniteLattice::from_covers(divs.len(), &edges)
        .unwrap()
        .with_labels(labels)
}

/// All restricted-growth strings of length `k` in lexicographic order; one
/// per set partition of `{1..k}`.
pub(crate) fn partitions_rgs(k: usize) -> Vec<Vec<u8>> {
    fn rec(k: usize, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        let max = cur.iter().copied().max().map_or(0, |m| m + 1);
        for v in 0..=max {
            cur.push(v);
            rec(k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k == 0 {
        out.push(Vec::new());
        return out;
    }
    rec(k, &mut vec![0u8], &mut out);
    out
}

fn normalize_rgs(q: &mut [u8]) {
    let mut map = [u8::MAX; 16];
    let mut next = 0u8;
    for v in q.iter_mut() {
        if map[*v as usize] == u8::MAX {
            map[*v as usize] = next;
            next += 1;
        }
        *v = map[*v as usize];
    }
}

fn merge_blocks(p: &[u8], a: u8, b: u8) -> Vec<u8> {
    let mut q: Vec<u8> = p.iter().map(|&v| if v == b { a } else { v }).collect();
    normalize_rgs(&mut q);
    q
}

/// 1-based members of each block, concatenated, blocks joined by `|`.
fn partition_label(p: &[u8]) -> String {
    let blocks = p.iter().copied().max().map_or(0, |m| m as usize + 1);
    let mut parts = Vec::with_capacity(blocks);
    for b in 0..blocks as u8 {
        let members: String = p
            .iter()
            .enumerate()
            .filter(|&(_, &v)| v == b)
            .map(|(i, _)| (i + 1).to_string())
            .collect();
        parts.push(members);
    }
    parts.join("|")
}

fn is_crossing(p: &[u8]) -> bool {
    let k = p.len();
    for a in 0..k {
        for b in a + 1..k {
            if p[b] == p[a] {
                continue;
            }
            for c in b + 1..k {
                if p[c] != p[a] {
                    continue;
                }
                for d in c + 1..k {
                    if p[d] == p[b] {
                        return true;
                    }
                }
            }
        }
    }
    false
}

/// `x` refines `y`: every block of `x` lies inside a block of `y`.
fn refines(x: &[u8], y: &[u8]) -> bool {
    let k = x.len();
    for i in 0..k {
        for j in i + 1..k {
            if x[i] == x[j] && y[i] != y[j] {
                return false;
            }
        }
    }
    true
}

fn partition(k: usize, noncrossing_only: bool) -> FiniteLattice {
    let mut parts = partitions_rgs(k);
    if noncrossing_only {
        parts.retain(|p| !is_crossing(p));
    }
    let index: HashMap<Vec<u8>, usize> = parts
        .iter()
        .enumerate()
        .map(|(i, p)| (p.clone(), i))
        .collect();
    let mut edges = Vec::new();
    if noncrossing_only {
        // Induced refinement order; the builder reduces it to covers.
        for (i, p) in parts.iter().enumerate() {
            for (j, q) in parts.iter().enumerate() {
                if i != j && refines(p, q) {
                    edges.push((i, j));
                }
            }
        }
    } else {
        // Covers of the full partition lattice merge exactly two blocks.
        for (i, p) in parts.iter().enumerate() {
            let blocks = p.iter().copied().max().map_or(0, |m| m + 1);
            for a in 0..blocks {
                for b in a + 1..blocks {
                    let q = merge_blocks(p, a, b);
                    edges.push((i, index[&q]));
                }
            }
        }
    }
    let labels = parts
        .iter()
        .map(|p| {
            if p.is_empty() {
                None
            } else {
                Some(partition_label(p))
            }
        })
        .collect();
    FiniteLattice::from_covers(parts.len(), &edges)
        .unwrap()
        .with_labels(labels)
}

/// Order-reversed lattice on the same element ids: meets and joins swap,
/// bottom and top swap, labels carry over.
pub fn dual(l: &FiniteLattice) -> FiniteLattice {
    let edges: Vec<(usize, usize)> = l.covers().iter().map(|&(i, j)| (j, i)).collect();
    FiniteLattice::from_covers(l.len(), &edges)
        .expect("dual of a lattice is a lattice")
        .with_labels(l.labels().to_vec())
}

/// Componentwise product; `(x1, x2)` gets id `x1 * l2.len() + x2`.
pub fn direct_product(l1: &FiniteLattice, l2: &FiniteLattice) -> Result<FiniteLattice, SizeGuard> {
    let (n1, n2) = (l1.len(), l2.len());
    if (n1 as u64) * (n2 as u64) > MAX_ELEMENTS {
        return Err(SizeGuard(format!(
            "product size {} exceeds {MAX_ELEMENTS}",
            n1 as u64 * n2 as u64
        )));
    }
    let mut edges = Vec::new();
    for &(a, b) in l1.covers() {
        for y in 0..n2 {
            edges.push((a * n2 + y, b * n2 + y));
        }
    }
    for x in 0..n1 {
        for &(c, d) in l2.covers() {
            edges.push((x * n2 + c, x * n2 + d));
        }
    }
    let labels = (0..n1 * n2)
        .map(|id| match (l1.label(id / n2), l2.label(id % n2)) {
            (Some(a), Some(b)) => Some(format!("({a},{b})")),
            _ => None,
        })
        .collect();
    Ok(FiniteLattice::from_covers(n1 * n2, &edges)
        .expect("product of lattices is a lattice")
        .with_labels(labels))
}
