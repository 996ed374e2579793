//! Exhaustive enumeration of the lattices on `{0..n}` whose order relation
//! is compatible with the natural order of the ids.
//!
//! Candidates are the `2^(n(n-1)/2)` subsets of the pairs `(i, j)` with
//! `i < j`; a subset survives when it is transitive and every pair of
//! elements has a least upper and greatest lower bound. Element 0 is forced
//! to be the bottom and `n-1` the top. Every lattice on `n` elements is
//! isomorphic to at least one survivor, so scanning the survivors covers
//! all isomorphism classes.

use itertools::Itertools;

use crate::families::SizeGuard;
use crate::lattice::FiniteLattice;

/// Hard ceiling: 8 elements means a 28-bit candidate space.
const MAX_N: usize = 8;

/// Number of relation candidates scanned for size `n`.
pub fn candidate_space(n: usize) -> u64 {
    1u64 << (n * (n - 1) / 2)
}

fn pair_list(n: usize) -> Vec<(usize, usize)> {
    let mut pairs = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            pairs.push((i, j));
        }
    }
    pairs
}

/// Builds the lattice for a surviving relation mask, or `None` if the mask
/// fails the transitivity or bound filters.
pub fn lattice_from_mask(n: usize, mask: u64) -> Option<FiniteLattice> {
    debug_assert!((1..=MAX_N).contains(&n));
    let pairs = pair_list(n);
    let mut up = [0u16; MAX_N];
    let mut down = [0u16; MAX_N];
    for i in 0..n {
        up[i] = 1 << i;
        down[i] = 1 << i;
    }
    for (k, &(i, j)) in pairs.iter().enumerate() {
        if mask >> k & 1 == 1 {
            up[i] |= 1 << j;
            down[j] |= 1 << i;
        }
    }
    for (k, &(i, j)) in pairs.iter().enumerate() {
        if mask >> k & 1 == 1 && up[j] & !up[i] != 0 {
            return None; // not transitive
        }
    }
    for &(i, j) in &pairs {
        let u = up[i] & up[j];
        if u == 0 {
            return None;
        }
        // The relation respects id order, so a least upper bound is the
        // lowest id among the upper bounds; dually for the meet.
        let c = u.trailing_zeros() as usize;
        if u & !up[c] != 0 {
            return None;
        }
        let d = down[i] & down[j];
        if d == 0 {
            return None;
        }
        let c = 15 - d.leading_zeros() as usize;
        if d & !down[c] != 0 {
            return None;
        }
    }
    // Reduce to covers and run the full validating constructor.
    let mut covers = Vec::new();
    let mut strict = [0u16; MAX_N];
    for i in 0..n {
        strict[i] = up[i] & !(1 << i);
    }
    for i in 0..n {
        let mut red = strict[i];
        let mut rest = strict[i];
        while rest != 0 {
            let k = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            red &= !strict[k];
        }
        while red != 0 {
            let j = red.trailing_zeros() as usize;
            red &= red - 1;
            covers.push((i, j));
        }
    }
    Some(FiniteLattice::from_covers(n, &covers).expect("filtered mask is a lattice"))
}

/// Stream of every lattice on `{0..n}` with order compatible with the id
/// order, ascending by relation mask. With [`canonical_only`] the stream
/// keeps one representative per isomorphism class.
///
/// [`canonical_only`]: LatticeEnumeration::canonical_only
pub struct LatticeEnumeration {
    n: usize,
    next: u64,
    end: u64,
    canonical: bool,
}

impl LatticeEnumeration {
    /// Restricts the stream to one representative per isomorphism class:
    /// the lattice whose relation encoding is lexicographically least among
    /// all order-compatible relabelings.
    pub fn canonical_only(mut self) -> Self {
        self.canonical = true;
        self
    }

    /// Restricts the scan to a subrange of the relation-mask space, for
    /// partitioning work across threads. Masks run in `0..candidate_space(n)`.
    pub fn over_masks(mut self, range: std::ops::Range<u64>) -> Self {
        self.next = range.start;
        self.end = range.end.min(candidate_space(self.n));
        self
    }
}

impl Iterator for LatticeEnumeration {
    type Item = FiniteLattice;

    fn next(&mut self) -> Option<FiniteLattice> {
        while self.next < self.end {
            let mask = self.next;
            self.next += 1;
            if let Some(l) = lattice_from_mask(self.n, mask) {
                if !self.canonical || is_canonical(&l) {
                    return Some(l);
                }
            }
        }
        None
    }
}

/// Lattices on 1 to 7 elements; see [`enumerate_lattices_large`] for 8.
pub fn enumerate_lattices(n: usize) -> Result<LatticeEnumeration, SizeGuard> {
    if !(1..=7).contains(&n) {
        return Err(SizeGuard(format!(
            "enumeration size {n} outside 1..=7 (size 8 needs enumerate_lattices_large)"
        )));
    }
    Ok(LatticeEnumeration {
        n,
        next: 0,
        end: candidate_space(n),
        canonical: false,
    })
}

/// Like [`enumerate_lattices`] but admits `n = 8`, a 268M-candidate scan.
pub fn enumerate_lattices_large(n: usize) -> Result<LatticeEnumeration, SizeGuard> {
    if !(1..=MAX_N).contains(&n) {
        return Err(SizeGuard(format!(
            "enumeration size {n} outside 1..={MAX_N}"
        )));
    }
    Ok(LatticeEnumeration {
        n,
        next: 0,
        end: candidate_space(n),
        canonical: false,
    })
}

fn encode_under(l: &FiniteLattice, perm: &[usize]) -> u64 {
    let n = l.len();
    let mut code = 0u64;
    for x in 0..n {
        for y in 0..n {
            if l.lt(x, y) {
                code |= 1 << (perm[x] * n + perm[y]);
            }
        }
    }
    code
}

/// Isomorphism invariant for lattices on at most 8 elements: the least
/// relation encoding over all relabelings that keep the order compatible
/// with the id order. Two lattices are isomorphic iff their keys agree.
pub fn canonical_key(l: &FiniteLattice) -> Option<u64> {
    let n = l.len();
    if n > MAX_N {
        return None;
    }
    (0..n)
        .permutations(n)
        .filter(|perm| l.covers().iter().all(|&(i, j)| perm[i] < perm[j]))
        .map(|perm| encode_under(l, &perm))
        .min()
}

fn is_canonical(l: &FiniteLattice) -> bool {
    let own = encode_under(l, &(0..l.len()).collect::<Vec<_>>());
    canonical_key(l) == Some(own)
}
