//! Modularity predicates on elements and chains, and pentagon search.
//!
//! Everything here reduces to instances of the modular identity
//! `x∨(z∧y) = (x∨z)∧y` for `x < y`. An element is left-modular exactly when
//! it is never the short side of a pentagon sublattice, which is the
//! production test; the definitional modular-pair scan is kept as a
//! cross-check in the test suites.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::check::{violation_line, Check};
use crate::lattice::{Chain, FiniteLattice, RankFunction};

/// Five elements forming a pentagon sublattice: `bot < x < y < top` on the
/// long side, `z` on the short side, with `z∧x = z∧y = bot` and
/// `z∨x = z∨y = top`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PentagonWitness {
    pub x: usize,
    pub y: usize,
    pub z: usize,
    pub bot: usize,
    pub top: usize,
}

impl PentagonWitness {
    fn from_parts(l: &FiniteLattice, x: usize, y: usize, z: usize) -> Self {
        let w = PentagonWitness {
            x,
            y,
            z,
            bot: l.meet(z, x),
            top: l.join(z, x),
        };
        debug_assert!(l.lt(x, y));
        debug_assert!(!l.comparable(z, x) && !l.comparable(z, y));
        debug_assert_eq!(l.meet(z, y), w.bot);
        debug_assert_eq!(l.join(z, y), w.top);
        w
    }
}

impl fmt::Display for PentagonWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "PENTAGON x={} y={} z={} bot={} top={}",
            self.x, self.y, self.z, self.bot, self.top
        )
    }
}

/// Restricts what [`find_pentagon`] searches for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PentagonConstraint {
    Any,
    /// Pentagons whose short side is the given element.
    ShortSide(usize),
    /// Pentagons whose long side is the given cover pair.
    LongSideCover {
        lower: usize,
        upper: usize,
    },
}

/// The pair handed to `LongSideCover` is not a cover relation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("({lower},{upper}) is not a cover pair")]
pub struct NotACover {
    pub lower: usize,
    pub upper: usize,
}

/// The chain handed to an operation that needs a maximal chain is not one.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("chain {0} is not a maximal chain")]
pub struct NotMaximal(pub Chain);

#[inline]
fn pentagon_at(l: &FiniteLattice, z: usize, x: usize, y: usize) -> bool {
    // For x < y the two equalities force z incomparable to both, so the
    // five elements are distinct and form a pentagon.
    l.lt(x, y) && l.meet(z, x) == l.meet(z, y) && l.join(z, x) == l.join(z, y)
}

/// First pentagon sublattice in lexicographic `(z, x, y)` order satisfying
/// the constraint, if any.
pub fn find_pentagon(
    l: &FiniteLattice,
    constraint: PentagonConstraint,
) -> Result<Option<PentagonWitness>, NotACover> {
    match constraint {
        PentagonConstraint::Any => {
            for z in l.elements() {
                if let Some(w) = pentagon_with_short_side(l, z) {
                    return Ok(Some(w));
                }
            }
            Ok(None)
        }
        PentagonConstraint::ShortSide(z) => Ok(pentagon_with_short_side(l, z)),
        PentagonConstraint::LongSideCover { lower, upper } => {
            if !l.is_cover(lower, upper) {
                return Err(NotACover { lower, upper });
            }
            for z in l.elements() {
                if pentagon_at(l, z, lower, upper) {
                    return Ok(Some(PentagonWitness::from_parts(l, lower, upper, z)));
                }
            }
            Ok(None)
        }
    }
}

fn pentagon_with_short_side(l: &FiniteLattice, z: usize) -> Option<PentagonWitness> {
    for x in l.elements() {
        for y in l.elements() {
            if pentagon_at(l, z, x, y) {
                return Some(PentagonWitness::from_parts(l, x, y, z));
            }
        }
    }
    None
}

/// Every pentagon sublattice, in lexicographic `(z, x, y)` order.
pub fn all_pentagons(l: &FiniteLattice) -> Vec<PentagonWitness> {
    let mut out = Vec::new();
    for z in l.elements() {
        for x in l.elements() {
            for y in l.elements() {
                if pentagon_at(l, z, x, y) {
                    out.push(PentagonWitness::from_parts(l, x, y, z));
                }
            }
        }
    }
    out
}

/// A violation of `x∨(z∧y) = (x∨z)∧y` for a specific `(z, y)` pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ModularPairViolation {
    pub z: usize,
    pub y: usize,
    pub x: usize,
    pub lhs: usize,
    pub rhs: usize,
}

impl fmt::Display for ModularPairViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&violation_line("modular_pair", &[self.z, self.y, self.x]))
    }
}

/// `(z, y)` is a modular pair when `x∨(z∧y) = (x∨z)∧y` for every `x < y`.
pub fn is_modular_pair(l: &FiniteLattice, z: usize, y: usize) -> Check<ModularPairViolation> {
    for x in l.elements() {
        if !l.lt(x, y) {
            continue;
        }
        let lhs = l.join(x, l.meet(z, y));
        let rhs = l.meet(l.join(x, z), y);
        if lhs != rhs {
            return Check::Fails(ModularPairViolation { z, y, x, lhs, rhs });
        }
    }
    Check::Holds
}

/// `m` is left-modular when `(m, y)` is a modular pair for every `y`;
/// equivalently, when `m` is never the short side of a pentagon. The
/// pentagon scan is the production path and the witness is the pentagon.
pub fn is_left_modular(l: &FiniteLattice, m: usize) -> Check<PentagonWitness> {
    match pentagon_with_short_side(l, m) {
        None => Check::Holds,
        Some(w) => Check::Fails(w),
    }
}

/// `m` is right-modular when `(z, m)` is a modular pair for every `z`.
/// The witness reports the violating `(z, x)`.
pub fn is_right_modular(l: &FiniteLattice, m: usize) -> Check<ModularPairViolation> {
    for z in l.elements() {
        if let Check::Fails(v) = is_modular_pair(l, z, m) {
            return Check::Fails(v);
        }
    }
    Check::Holds
}

/// Left- and right-modular both.
pub fn is_two_sided_modular(l: &FiniteLattice, m: usize) -> bool {
    is_left_modular(l, m).holds() && is_right_modular(l, m).holds()
}

/// A violation of `ρ(m∨x) + ρ(m∧x) = ρ(m) + ρ(x)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RankModularViolation {
    pub m: usize,
    pub x: usize,
    /// `ρ(m∨x) + ρ(m∧x)`
    pub bound_ranks: usize,
    /// `ρ(m) + ρ(x)`
    pub element_ranks: usize,
}

impl fmt::Display for RankModularViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&violation_line("rank_modular", &[self.m, self.x]))
    }
}

/// `m` is rank modular when `ρ(m∨x) + ρ(m∧x) = ρ(m) + ρ(x)` for every `x`.
pub fn is_rank_modular(
    l: &FiniteLattice,
    rho: &RankFunction,
    m: usize,
) -> Check<RankModularViolation> {
    for x in l.elements() {
        let (meet, join) = l.bounds(m, x);
        let bound_ranks = rho.rank(join) + rho.rank(meet);
        let element_ranks = rho.rank(m) + rho.rank(x);
        if bound_ranks != element_ranks {
            return Check::Fails(RankModularViolation {
                m,
                x,
                bound_ranks,
                element_ranks,
            });
        }
    }
    Check::Holds
}

/// A violation of the modular identity for a pair drawn from a chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RightChainViolation {
    pub x: usize,
    pub y: usize,
    pub z: usize,
    pub lhs: usize,
    pub rhs: usize,
}

impl fmt::Display for RightChainViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&violation_line(
            "right_chain_modular",
            &[self.x, self.y, self.z],
        ))
    }
}

/// A chain is right chain-modular when `x∨(z∧y) = (x∨z)∧y` for every pair
/// `x < y` drawn from it and every `z` in the lattice.
pub fn is_right_chain_modular(l: &FiniteLattice, chain: &Chain) -> Check<RightChainViolation> {
    let elems = chain.elements();
    for i in 0..elems.len() {
        for j in i + 1..elems.len() {
            let (x, y) = (elems[i], elems[j]);
            for z in l.elements() {
                let lhs = l.join(x, l.meet(z, y));
                let rhs = l.meet(l.join(x, z), y);
                if lhs != rhs {
                    return Check::Fails(RightChainViolation { x, y, z, lhs, rhs });
                }
            }
        }
    }
    Check::Holds
}

/// Why a chain fails to be chain-modular.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum ChainModularityFailure {
    /// A chain element is the short side of a pentagon.
    NotLeftModular {
        element: usize,
        pentagon: PentagonWitness,
    },
    /// The modular identity fails for a pair from the chain.
    RightChainViolation(RightChainViolation),
    /// A cover pair of the chain is the long side of a pentagon.
    LongSidePentagon {
        lower: usize,
        upper: usize,
        pentagon: PentagonWitness,
    },
}

impl fmt::Display for ChainModularityFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChainModularityFailure::NotLeftModular { element, pentagon } => {
                write!(f, "element {element} not left-modular: {pentagon}")
            }
            ChainModularityFailure::RightChainViolation(v) => write!(f, "{v}"),
            ChainModularityFailure::LongSidePentagon {
                lower,
                upper,
                pentagon,
            } => {
                write!(
                    f,
                    "cover {lower}<{upper} is a pentagon long side: {pentagon}"
                )
            }
        }
    }
}

/// A chain is chain-modular when every element is left-modular and the
/// chain is right chain-modular. Left-modularity is checked first, in chain
/// order.
pub fn is_chain_modular(l: &FiniteLattice, chain: &Chain) -> Check<ChainModularityFailure> {
    for &m in chain.iter() {
        if let Check::Fails(p) = is_left_modular(l, m) {
            return Check::Fails(ChainModularityFailure::NotLeftModular {
                element: m,
                pentagon: p,
            });
        }
    }
    is_right_chain_modular(l, chain).map(ChainModularityFailure::RightChainViolation)
}

/// Chain-modularity test for a maximal chain that only examines the chain's
/// own cover relations: every element must avoid being a pentagon short
/// side, and every cover pair must avoid being a pentagon long side.
/// Agrees with [`is_chain_modular`] on every maximal chain.
pub fn fast_chain_modular(
    l: &FiniteLattice,
    chain: &Chain,
) -> Result<Check<ChainModularityFailure>, NotMaximal> {
    if !chain.is_maximal(l) {
        return Err(NotMaximal(chain.clone()));
    }
    for &m in chain.iter() {
        if let Check::Fails(p) = is_left_modular(l, m) {
            return Ok(Check::Fails(ChainModularityFailure::NotLeftModular {
                element: m,
                pentagon: p,
            }));
        }
    }
    for w in chain.elements().windows(2) {
        let (lower, upper) = (w[0], w[1]);
        let found = find_pentagon(l, PentagonConstraint::LongSideCover { lower, upper })
            .expect("maximal chains step along covers");
        if let Some(pentagon) = found {
            return Ok(Check::Fails(ChainModularityFailure::LongSidePentagon {
                lower,
                upper,
                pentagon,
            }));
        }
    }
    Ok(Check::Holds)
}
