//! Chief chains, supersolvability certificates, and the equivalence of the
//! characterizations.
//!
//! A maximal chain is a *chief chain* when the sublattice it generates with
//! any other chain is distributive; a lattice admitting one is
//! *supersolvable*. The certifier's production path tests the equivalent
//! chain-modularity condition, which only needs pentagon scans against the
//! chain's own elements and cover pairs; the distributivity definition is
//! kept behind the `oracle` flag as an independent confirmation.

use std::collections::BTreeSet;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::check::{violation_line, Check};
use crate::enumerate::{candidate_space, enumerate_lattices, enumerate_lattices_large};
use crate::families::SizeGuard;
use crate::lattice::{Chain, DistributivityViolation, FiniteLattice, RankFunction};
use crate::modularity::{
    fast_chain_modular, find_pentagon, is_chain_modular, is_left_modular, is_rank_modular,
    ChainModularityFailure, NotMaximal, PentagonConstraint,
};

/// Left-modularity of every element, indexed by id.
pub fn left_modular_flags(l: &FiniteLattice) -> Vec<bool> {
    if l.len() >= 256 {
        (0..l.len())
            .into_par_iter()
            .map(|m| is_left_modular(l, m).holds())
            .collect()
    } else {
        l.elements()
            .map(|m| is_left_modular(l, m).holds())
            .collect()
    }
}

/// The sets from Birkhoff's closure argument: joins of pairwise meets,
/// meets of pairwise joins, and the generated sublattice, for two chains
/// with bottom and top adjoined.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BirkhoffSets {
    /// Joins of elements `m_i ∧ c_j`, ascending.
    pub joins_of_meets: Vec<usize>,
    /// Meets of elements `m_i ∨ c_j`, ascending.
    pub meets_of_joins: Vec<usize>,
    /// Sublattice closure of the two chains, ascending.
    pub closure: Vec<usize>,
}

fn adjoin_bounds(l: &FiniteLattice, chain: &Chain) -> Vec<usize> {
    let mut out = Vec::with_capacity(chain.len() + 2);
    if chain.elements().first() != Some(&l.bottom()) {
        out.push(l.bottom());
    }
    out.extend_from_slice(chain.elements());
    if chain.elements().last() != Some(&l.top()) {
        out.push(l.top());
    }
    out
}

fn close_under(l: &FiniteLattice, seed: &BTreeSet<usize>, join: bool) -> Vec<usize> {
    let mut set = seed.clone();
    loop {
        let mut added = Vec::new();
        for &a in &set {
            for &b in &set {
                let v = if join { l.join(a, b) } else { l.meet(a, b) };
                if !set.contains(&v) {
                    added.push(v);
                }
            }
        }
        if added.is_empty() {
            return set.into_iter().collect();
        }
        set.extend(added);
    }
}

/// Computes [`BirkhoffSets`] for the chains `m` and `c`; bottom and top are
/// adjoined to both before taking products.
pub fn birkhoff_sets(l: &FiniteLattice, m: &Chain, c: &Chain) -> BirkhoffSets {
    let ma = adjoin_bounds(l, m);
    let ca = adjoin_bounds(l, c);
    let mut meets = BTreeSet::new();
    let mut joins = BTreeSet::new();
    for &mi in &ma {
        for &cj in &ca {
            meets.insert(l.meet(mi, cj));
            joins.insert(l.join(mi, cj));
        }
    }
    let mut union: Vec<usize> = ma;
    union.extend(ca);
    BirkhoffSets {
        joins_of_meets: close_under(l, &meets, true),
        meets_of_joins: close_under(l, &joins, false),
        closure: l.sublattice_closure(&union),
    }
}

/// Witness that a maximal chain is not chief: another maximal chain whose
/// generated sublattice violates distributivity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChiefWitness {
    pub other_chain: Chain,
    pub violation: DistributivityViolation,
}

impl fmt::Display for ChiefWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "chain {} generates a non-distributive sublattice: {}",
            self.other_chain, self.violation
        )
    }
}

fn chief_against(l: &FiniteLattice, m: &Chain, others: &[Chain]) -> Check<ChiefWitness> {
    for c in others {
        let mut union = m.elements().to_vec();
        union.extend_from_slice(c.elements());
        let closure = l.sublattice_closure(&union);
        let outcome = l
            .is_distributive(&closure)
            .expect("sublattice closure is closed");
        if let Check::Fails(violation) = outcome {
            return Check::Fails(ChiefWitness {
                other_chain: c.clone(),
                violation,
            });
        }
    }
    Check::Holds
}

/// The defining property, decided directly: `m` is chief iff the sublattice
/// generated by `m` and any other chain is distributive. Quantifying over
/// maximal chains suffices, since every chain extends to a maximal one and
/// sublattices of distributive lattices are distributive.
pub fn is_chief_chain(l: &FiniteLattice, m: &Chain) -> Result<Check<ChiefWitness>, NotMaximal> {
    if !m.is_maximal(l) {
        return Err(NotMaximal(m.clone()));
    }
    let chains: Vec<Chain> = l.maximal_chains().collect();
    Ok(chief_against(l, m, &chains))
}

/// A monotone selection pair violating one of the two closure identities.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BirkhoffViolation {
    /// 1 for `(b₁∨a₁)∧⋯∧(b_r∨a_r) = b₁∨(a₁∧b₂)∨⋯∨(a_{r-1}∧b_r)∨a_r`,
    /// 2 for the dual identity.
    pub equation: u8,
    /// Weakly decreasing selection from the chain-modular chain.
    pub a: Vec<usize>,
    /// Weakly increasing selection from the other chain.
    pub b: Vec<usize>,
    pub lhs: usize,
    pub rhs: usize,
}

impl fmt::Display for BirkhoffViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ids: Vec<usize> = self.a.iter().chain(self.b.iter()).copied().collect();
        f.write_str(&violation_line(
            &format!("birkhoff_eq{}", self.equation),
            &ids,
        ))
    }
}

/// The hypothesis of an operation requires a chain-modular chain.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("chain is not chain-modular: {0}")]
pub struct ChainNotModular(pub ChainModularityFailure);

/// Calls `f` on every weakly increasing sequence of length `r` over
/// `0..k`; `f` returns `false` to stop early.
fn for_each_weakly_increasing(k: usize, r: usize, f: &mut impl FnMut(&[usize]) -> bool) -> bool {
    let mut seq = vec![0usize; r];
    loop {
        if !f(&seq) {
            return false;
        }
        // Next multiset in lexicographic order.
        let mut i = r;
        loop {
            if i == 0 {
                return true;
            }
            i -= 1;
            if seq[i] + 1 < k {
                let v = seq[i] + 1;
                for s in seq.iter_mut().skip(i) {
                    *s = v;
                }
                break;
            }
        }
    }
}

/// Verifies both closure identities for every weakly decreasing selection
/// `a₁ ≥ … ≥ a_r` from `m` and weakly increasing `b₁ ≤ … ≤ b_r` from `c`,
/// for `1 ≤ r ≤ max_r` (default `min(|m|,|c|) + 1` after adjoining bottom
/// and top). Requires `m` to be chain-modular.
pub fn verify_birkhoff_identities(
    l: &FiniteLattice,
    m: &Chain,
    c: &Chain,
    max_r: Option<usize>,
) -> Result<Check<BirkhoffViolation>, ChainNotModular> {
    if let Check::Fails(fail) = is_chain_modular(l, m) {
        return Err(ChainNotModular(fail));
    }
    let ma = adjoin_bounds(l, m);
    let ca = adjoin_bounds(l, c);
    let cap = max_r.unwrap_or(ma.len().min(ca.len()) + 1);

    let mut violation = None;
    for r in 1..=cap {
        let proceed = for_each_weakly_increasing(ma.len(), r, &mut |a_rev| {
            // Reversed, so the selection from m is weakly decreasing.
            let a: Vec<usize> = a_rev.iter().rev().map(|&i| ma[i]).collect();
            for_each_weakly_increasing(ca.len(), r, &mut |b_idx| {
                let b: Vec<usize> = b_idx.iter().map(|&j| ca[j]).collect();

                let mut lhs1 = l.join(b[0], a[0]);
                for i in 1..r {
                    lhs1 = l.meet(lhs1, l.join(b[i], a[i]));
                }
                let mut rhs1 = b[0];
                for i in 0..r - 1 {
                    rhs1 = l.join(rhs1, l.meet(a[i], b[i + 1]));
                }
                rhs1 = l.join(rhs1, a[r - 1]);
                if lhs1 != rhs1 {
                    violation = Some(BirkhoffViolation {
                        equation: 1,
                        a: a.clone(),
                        b: b.clone(),
                        lhs: lhs1,
                        rhs: rhs1,
                    });
                    return false;
                }

                let mut lhs2 = l.meet(a[0], b[0]);
                for i in 1..r {
                    lhs2 = l.join(lhs2, l.meet(a[i], b[i]));
                }
                let mut rhs2 = a[0];
                for i in 0..r - 1 {
                    rhs2 = l.meet(rhs2, l.join(b[i], a[i + 1]));
                }
                rhs2 = l.meet(rhs2, b[r - 1]);
                if lhs2 != rhs2 {
                    violation = Some(BirkhoffViolation {
                        equation: 2,
                        a: a.clone(),
                        b,
                        lhs: lhs2,
                        rhs: rhs2,
                    });
                    return false;
                }
                true
            })
        });
        if !proceed {
            break;
        }
    }
    Ok(match violation {
        None => Check::Holds,
        Some(v) => Check::Fails(v),
    })
}

/// Errors from [`rank_from_chain`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RankFromChainError {
    #[error(transparent)]
    NotMaximal(#[from] NotMaximal),
    #[error("chain is not chain-modular: {0}")]
    NotChainModular(ChainModularityFailure),
}

/// The rank function built from a chain-modular maximal chain by counting
/// meet increments: `ρ(y) = #{i : m_{i+1}∧y > m_i∧y}`. For a chain-modular
/// chain this is the rank function of the (necessarily graded) lattice and
/// makes every chain element rank modular.
pub fn rank_from_chain(l: &FiniteLattice, m: &Chain) -> Result<RankFunction, RankFromChainError> {
    match fast_chain_modular(l, m)? {
        Check::Fails(fail) => Err(RankFromChainError::NotChainModular(fail)),
        Check::Holds => Ok(rank_from_chain_unchecked(l, m)),
    }
}

/// The raw counting formula, for any chain; nothing is promised unless the
/// chain is a chain-modular maximal chain.
pub fn rank_from_chain_unchecked(l: &FiniteLattice, m: &Chain) -> RankFunction {
    let elems = m.elements();
    let ranks = (0..l.len())
        .map(|y| {
            elems
                .windows(2)
                .filter(|w| l.meet(w[1], y) != l.meet(w[0], y))
                .count()
        })
        .collect();
    RankFunction::from_ranks(ranks)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Supersolvable,
    NotSupersolvable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Fast,
    Oracle,
    Both,
}

/// One sampled maximal chain together with its chain-modularity failure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainFailure {
    pub chain: Chain,
    pub failure: ChainModularityFailure,
}

/// Outcome of [`certify_supersolvable`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SupersolvabilityCertificate {
    pub verdict: Verdict,
    /// First chain-modular maximal chain in enumeration order, if any.
    pub chief_chain: Option<Chain>,
    pub method: Method,
    /// For negative verdicts: failure witnesses for the sampled chains.
    pub failures: Vec<ChainFailure>,
    /// True when `failures` covers only a sample of the maximal chains.
    pub truncated: bool,
}

impl fmt::Display for SupersolvabilityCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.verdict {
            Verdict::Supersolvable => writeln!(f, "verdict supersolvable")?,
            Verdict::NotSupersolvable => writeln!(f, "verdict not_supersolvable")?,
        }
        let method = match self.method {
            Method::Fast => "fast",
            Method::Oracle => "oracle",
            Method::Both => "both",
        };
        writeln!(f, "method {method}")?;
        if let Some(chain) = &self.chief_chain {
            writeln!(f, "chief_chain {chain}")?;
        }
        if self.verdict == Verdict::NotSupersolvable {
            writeln!(
                f,
                "failures {} truncated={}",
                self.failures.len(),
                self.truncated
            )?;
            for fail in &self.failures {
                writeln!(f, "chain {}: {}", fail.chain, fail.failure)?;
            }
        }
        Ok(())
    }
}

/// How many failing chains a negative certificate stores before flagging
/// truncation.
pub const FAILURE_SAMPLE_LIMIT: usize = 100;

/// Decides supersolvability. The search walks the cover graph restricted to
/// left-modular elements and to cover pairs that are not the long side of
/// any pentagon; a bottom-to-top path through that subgraph is exactly a
/// maximal chain passing [`fast_chain_modular`], and the walk picks the
/// lexicographically first one. With `use_oracle` the chief chain is
/// additionally confirmed against the distributivity definition.
pub fn certify_supersolvable(l: &FiniteLattice, use_oracle: bool) -> SupersolvabilityCertificate {
    let left_modular = left_modular_flags(l);
    let edge_ok = |a: usize, b: usize| {
        find_pentagon(l, PentagonConstraint::LongSideCover { lower: a, upper: b })
            .expect("upper_covers yields cover pairs")
            .is_none()
    };

    // Elements from which the top stays reachable through admissible edges.
    let order = topo_order(l);
    let mut good = vec![false; l.len()];
    for &v in order.iter().rev() {
        if !left_modular[v] {
            continue;
        }
        good[v] = v == l.top() || l.upper_covers(v).iter().any(|&w| good[w] && edge_ok(v, w));
    }

    if good[l.bottom()] {
        let mut elems = vec![l.bottom()];
        let mut cur = l.bottom();
        while cur != l.top() {
            let next = l
                .upper_covers(cur)
                .iter()
                .copied()
                .find(|&w| good[w] && edge_ok(cur, w))
                .expect("good elements reach the top");
            elems.push(next);
            cur = next;
        }
        let chain = Chain::new(l, elems).expect("cover path is a chain");
        debug_assert!(fast_chain_modular(l, &chain).unwrap().holds());
        let method = if use_oracle {
            let confirmed = is_chief_chain(l, &chain).expect("certified chain is maximal");
            assert!(
                confirmed.holds(),
                "chain-modular maximal chain failed the distributivity oracle: \
                 this contradicts a proven equivalence and indicates a bug"
            );
            Method::Both
        } else {
            Method::Fast
        };
        return SupersolvabilityCertificate {
            verdict: Verdict::Supersolvable,
            chief_chain: Some(chain),
            method,
            failures: Vec::new(),
            truncated: false,
        };
    }

    let mut failures = Vec::new();
    let mut truncated = false;
    for chain in l.maximal_chains() {
        if failures.len() == FAILURE_SAMPLE_LIMIT {
            truncated = true;
            break;
        }
        let failure = fast_chain_modular(l, &chain)
            .expect("stream yields maximal chains")
            .into_witness()
            .expect("no admissible path exists, so every chain fails");
        failures.push(ChainFailure { chain, failure });
    }
    SupersolvabilityCertificate {
        verdict: Verdict::NotSupersolvable,
        chief_chain: None,
        method: Method::Fast,
        failures,
        truncated,
    }
}

fn topo_order(l: &FiniteLattice) -> Vec<usize> {
    let mut indeg: Vec<usize> = (0..l.len()).map(|v| l.lower_covers(v).len()).collect();
    let mut queue = vec![l.bottom()];
    let mut order = Vec::with_capacity(l.len());
    while let Some(v) = queue.pop() {
        order.push(v);
        for &w in l.upper_covers(v) {
            indeg[w] -= 1;
            if indeg[w] == 0 {
                queue.push(w);
            }
        }
    }
    order
}

/// The four characterizations evaluated on one maximal chain.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainConditions {
    pub chain: Chain,
    /// C1: the chain is chief (distributivity definition).
    pub chief: bool,
    /// C3: the lattice is graded and the chain is left-modular.
    pub graded_left_modular: bool,
    /// C4: the chain is chain-modular.
    pub chain_modular: bool,
    /// C5: the lattice is graded and the chain is rank modular.
    pub rank_modular: bool,
}

impl ChainConditions {
    pub fn all_equal(&self) -> bool {
        self.chief == self.graded_left_modular
            && self.chief == self.chain_modular
            && self.chief == self.rank_modular
    }
}

/// Per-chain condition bits for a whole lattice.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EquivalenceReport {
    pub lattice_id: String,
    pub chains: Vec<ChainConditions>,
    /// All four bits equal on every maximal chain. Always true by the
    /// equivalence theorems; a false value is a bug-or-counterexample alarm.
    pub agreement: bool,
}

/// Stable one-line encoding of a lattice for reports.
pub fn lattice_id(l: &FiniteLattice) -> String {
    let covers: Vec<String> = l
        .covers()
        .iter()
        .map(|&(i, j)| format!("{i}-{j}"))
        .collect();
    format!("n={};covers={}", l.len(), covers.join(","))
}

/// Evaluates conditions 1, 3, 4, 5 on every maximal chain. Materializes the
/// chain list, so this is for desk-scale lattices.
pub fn verify_condition_equivalence(l: &FiniteLattice) -> EquivalenceReport {
    let chains: Vec<Chain> = l.maximal_chains().collect();
    let rho = l.rank_function().ok();
    let left_modular = left_modular_flags(l);
    let conditions: Vec<ChainConditions> = chains
        .iter()
        .map(|m| {
            let chief = chief_against(l, m, &chains).holds();
            let graded_left_modular = rho.is_some() && m.iter().all(|&e| left_modular[e]);
            let chain_modular = is_chain_modular(l, m).holds();
            let rank_modular = rho
                .as_ref()
                .is_some_and(|rho| m.iter().all(|&e| is_rank_modular(l, rho, e).holds()));
            ChainConditions {
                chain: m.clone(),
                chief,
                graded_left_modular,
                chain_modular,
                rank_modular,
            }
        })
        .collect();
    let agreement = conditions.iter().all(ChainConditions::all_equal);
    EquivalenceReport {
        lattice_id: lattice_id(l),
        chains: conditions,
        agreement,
    }
}

/// Aggregate of an exhaustive equivalence run for one size.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SizeSummary {
    pub n: usize,
    /// Relation candidates scanned.
    pub candidates: u64,
    /// Candidates that survived as lattices.
    pub lattices: u64,
    /// Maximal chains examined across all survivors.
    pub chains: u64,
    /// Reports with disagreeing condition bits; empty by the theorems.
    pub disagreements: Vec<EquivalenceReport>,
}

/// Aggregate of an exhaustive equivalence run over sizes `1..=max_n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilySummary {
    pub sizes: Vec<SizeSummary>,
}

impl FamilySummary {
    pub fn agreement(&self) -> bool {
        self.sizes.iter().all(|s| s.disagreements.is_empty())
    }

    pub fn total_lattices(&self) -> u64 {
        self.sizes.iter().map(|s| s.lattices).sum()
    }
}

/// Runs [`verify_condition_equivalence`] over every lattice (or every
/// isomorphism class, with `canonical`) on `1..=max_n` elements, scanning
/// relation-mask chunks in parallel. `max_n` is capped at 7; size 8 is
/// behind [`verify_equivalence_family_large`].
pub fn verify_equivalence_family(
    max_n: usize,
    canonical: bool,
) -> Result<FamilySummary, SizeGuard> {
    if !(1..=7).contains(&max_n) {
        return Err(SizeGuard(format!(
            "family bound {max_n} outside 1..=7 (size 8 needs the long-runtime entry point)"
        )));
    }
    Ok(family_summary(max_n, canonical))
}

/// Like [`verify_equivalence_family`] with the size-8 scan (268M candidates)
/// allowed.
pub fn verify_equivalence_family_large(
    max_n: usize,
    canonical: bool,
) -> Result<FamilySummary, SizeGuard> {
    if !(1..=8).contains(&max_n) {
        return Err(SizeGuard(format!("family bound {max_n} outside 1..=8")));
    }
    Ok(family_summary(max_n, canonical))
}

fn family_summary(max_n: usize, canonical: bool) -> FamilySummary {
    let sizes = (1..=max_n)
        .map(|n| {
            let space = candidate_space(n);
            let chunk_count = space.min(512);
            let chunk_len = space.div_ceil(chunk_count);
            let parts: Vec<SizeSummary> = (0..chunk_count)
                .into_par_iter()
                .map(|i| {
                    let range = i * chunk_len..space.min((i + 1) * chunk_len);
                    let enumeration = if n <= 7 {
                        enumerate_lattices(n)
                    } else {
                        enumerate_lattices_large(n)
                    }
                    .expect("size checked by caller");
                    let enumeration = if canonical {
                        enumeration.canonical_only().over_masks(range)
                    } else {
                        enumeration.over_masks(range)
                    };
                    let mut part = SizeSummary {
                        n,
                        candidates: 0,
                        lattices: 0,
                        chains: 0,
                        disagreements: Vec::new(),
                    };
                    for l in enumeration {
                        part.lattices += 1;
                        let report = verify_condition_equivalence(&l);
                        part.chains += report.chains.len() as u64;
                        if !report.agreement {
                            part.disagreements.push(report);
                        }
                    }
                    part
                })
                .collect();
            let mut total = SizeSummary {
                n,
                candidates: space,
                lattices: 0,
                chains: 0,
                disagreements: Vec::new(),
            };
            for p in parts {
                total.lattices += p.lattices;
                total.chains += p.chains;
                total.disagreements.extend(p.disagreements);
            }
            total
        })
        .collect();
    FamilySummary { sizes }
}
