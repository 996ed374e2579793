//! Finite lattices with precomputed order, meet, and join tables.
//!
//! A [`FiniteLattice`] is built once from a cover relation (redundant edges
//! are absorbed) and is immutable afterwards; every query is a table lookup
//! or a pure scan, so shared read access from multiple threads is safe.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::check::{violation_line, Check};

/// Row-major bit matrix over `n × n` cells.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct BitMatrix {
    n: usize,
    words: usize,
    bits: Vec<u64>,
}

impl BitMatrix {
    pub(crate) fn new(n: usize) -> Self {
        let words = n.div_ceil(64);
        BitMatrix {
            n,
            words,
            bits: vec![0; n * words],
        }
    }

    #[inline]
    pub(crate) fn get(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.words + j / 64] >> (j % 64) & 1 == 1
    }

    #[inline]
    pub(crate) fn set(&mut self, i: usize, j: usize) {
        self.bits[i * self.words + j / 64] |= 1 << (j % 64);
    }

    #[inline]
    pub(crate) fn row(&self, i: usize) -> &[u64] {
        &self.bits[i * self.words..(i + 1) * self.words]
    }

    /// row[dst] |= row[src]
    pub(crate) fn or_row_into(&mut self, src: usize, dst: usize) {
        if src == dst {
            return;
        }
        let w = self.words;
        for k in 0..w {
            let v = self.bits[src * w + k];
            self.bits[dst * w + k] |= v;
        }
    }
}

/// Iterates the set-bit positions of a word slice, ascending.
pub(crate) fn bits_of(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(w, &word)| {
        std::iter::successors((word != 0).then_some(word), |&m| {
            let rest = m & (m - 1);
            (rest != 0).then_some(rest)
        })
        .map(move |m| w * 64 + m.trailing_zeros() as usize)
    })
}

fn highest_bit(words: &[u64]) -> Option<usize> {
    for (w, &word) in words.iter().enumerate().rev() {
        if word != 0 {
            return Some(w * 64 + 63 - word.leading_zeros() as usize);
        }
    }
    None
}

fn lowest_bit(words: &[u64]) -> Option<usize> {
    for (w, &word) in words.iter().enumerate() {
        if word != 0 {
            return Some(w * 64 + word.trailing_zeros() as usize);
        }
    }
    None
}

fn is_subset(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

/// Errors from lattice construction.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("element {id} out of range for lattice of size {n}")]
    ElementOutOfRange { id: usize, n: usize },
    #[error("the input relation contains a cycle")]
    CycleDetected,
    #[error("elements {x} and {y} have no unique meet or join")]
    NotALattice { x: usize, y: usize },
    #[error("poset has no unique bottom or top element")]
    NoBoundedStructure,
}

/// Errors from chain validation.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChainError {
    #[error("chains must contain at least one element")]
    Empty,
    #[error("chain element {id} out of range for lattice of size {n}")]
    ElementOutOfRange { id: usize, n: usize },
    #[error("chain is not strictly increasing at {a},{b}")]
    NotIncreasing { a: usize, b: usize },
}

/// A finite lattice on elements `0..n`.
///
/// The order table is the reflexive-transitive closure of the input edges
/// and `covers` is its transitive reduction; meet and join tables are
/// precomputed at build time. Labels are display metadata only.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteLattice {
    n: usize,
    covers: Vec<(usize, usize)>,
    leq: BitMatrix,
    meet_table: Vec<u32>,
    join_table: Vec<u32>,
    bottom: usize,
    top: usize,
    up_covers: Vec<Vec<usize>>,
    down_covers: Vec<Vec<usize>>,
    labels: Vec<Option<String>>,
}

impl FiniteLattice {
    /// Builds a lattice from an acyclic relation given as `i strictly below j`
    /// pairs. The relation is transitively closed and then reduced, so
    /// redundant non-cover edges are accepted and silently absorbed.
    pub fn from_covers(n: usize, edges: &[(usize, usize)]) -> Result<Self, LatticeError> {
        if n == 0 {
            return Err(LatticeError::NoBoundedStructure);
        }
        for &(i, j) in edges {
            let id = if i >= n { i } else { j };
            if id >= n {
                return Err(LatticeError::ElementOutOfRange { id, n });
            }
        }

        // Deduplicated out-edge adjacency.
        let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut indeg = vec![0usize; n];
        {
            let mut seen = BitMatrix::new(n);
            for &(i, j) in edges {
                if !seen.get(i, j) {
                    seen.set(i, j);
                    out[i].push(j);
                    indeg[j] += 1;
                }
            }
        }

        // Kahn's algorithm: a topological order doubles as the linear
        // extension used to locate meets and joins below.
        let mut topo = Vec::with_capacity(n);
        let mut queue: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
        while let Some(v) = queue.pop() {
            topo.push(v);
            for &w in &out[v] {
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    queue.push(w);
                }
            }
        }
        if topo.len() < n {
            return Err(LatticeError::CycleDetected);
        }
        let mut pos = vec![0usize; n];
        for (p, &v) in topo.iter().enumerate() {
            pos[v] = p;
        }

        // Strict up-sets in reverse topological order.
        let mut up_strict = BitMatrix::new(n);
        for &v in topo.iter().rev() {
            let succs = out[v].clone();
            for w in succs {
                up_strict.set(v, w);
                up_strict.or_row_into(w, v);
            }
        }

        // Order tables in both id coordinates (queries) and topo coordinates
        // (meet/join search: the extremum of a bounded set is its extreme
        // topo position).
        let mut leq = BitMatrix::new(n);
        let mut up_topo = BitMatrix::new(n);
        let mut down_topo = BitMatrix::new(n);
        for i in 0..n {
            leq.set(i, i);
            up_topo.set(i, pos[i]);
            down_topo.set(i, pos[i]);
            for j in bits_of(up_strict.row(i)) {
                leq.set(i, j);
                up_topo.set(i, pos[j]);
                down_topo.set(j, pos[i]);
            }
        }

        fn and_rows(dst: &mut [u64], a: &[u64], b: &[u64]) {
            for (d, (x, y)) in dst.iter_mut().zip(a.iter().zip(b)) {
                *d = x & y;
            }
        }

        let words = n.div_ceil(64);
        let mut meet_table = vec![0u32; n * n];
        let mut join_table = vec![0u32; n * n];
        let mut scratch = vec![0u64; words];
        for x in 0..n {
            for y in x..n {
                and_rows(&mut scratch, down_topo.row(x), down_topo.row(y));
                let meet = highest_bit(&scratch)
                    .map(|p| topo[p])
                    .filter(|&m| is_subset(&scratch, down_topo.row(m)))
                    .ok_or(LatticeError::NotALattice { x, y })?;
                and_rows(&mut scratch, up_topo.row(x), up_topo.row(y));
                let join = lowest_bit(&scratch)
                    .map(|p| topo[p])
                    .filter(|&j| is_subset(&scratch, up_topo.row(j)))
                    .ok_or(LatticeError::NotALattice { x, y })?;
                meet_table[x * n + y] = meet as u32;
                meet_table[y * n + x] = meet as u32;
                join_table[x * n + y] = join as u32;
                join_table[y * n + x] = join as u32;
            }
        }

        // Every pair has bounds, so folding reaches the global extremes.
        let bottom = (1..n).fold(0, |acc, x| meet_table[acc * n + x] as usize);
        let top = (1..n).fold(0, |acc, x| join_table[acc * n + x] as usize);

        // Transitive reduction: j covers i iff nothing above i reaches j.
        let mut covers = Vec::new();
        for i in 0..n {
            scratch.copy_from_slice(up_strict.row(i));
            for k in bits_of(up_strict.row(i)).collect::<Vec<_>>() {
                for (s, r) in scratch.iter_mut().zip(up_strict.row(k)) {
                    *s &= !r;
                }
            }
            for j in bits_of(&scratch) {
                covers.push((i, j));
            }
        }
        covers.sort_unstable();
        // Sorted covers keep both adjacency lists ascending.
        let mut up_covers: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut down_covers: Vec<Vec<usize>> = vec![Vec::new(); n];
        for &(i, j) in &covers {
            up_covers[i].push(j);
            down_covers[j].push(i);
        }

        Ok(FiniteLattice {
            n,
            covers,
            leq,
            meet_table,
            join_table,
            bottom,
            top,
            up_covers,
            down_covers,
            labels: vec![None; n],
        })
    }

    /// Attaches display labels; `labels` must have one entry per element.
    pub fn with_labels(mut self, labels: Vec<Option<String>>) -> Self {
        assert_eq!(labels.len(), self.n, "one label slot per element");
        self.labels = labels;
        self
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false // n >= 1 by construction
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.n
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    /// Cover pairs `(i, j)` with `i ⋖ j`, sorted.
    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    /// Elements covering `x`, ascending.
    pub fn upper_covers(&self, x: usize) -> &[usize] {
        &self.up_covers[x]
    }

    /// Elements covered by `x`, ascending.
    pub fn lower_covers(&self, x: usize) -> &[usize] {
        &self.down_covers[x]
    }

    pub fn label(&self, x: usize) -> Option<&str> {
        self.labels[x].as_deref()
    }

    pub fn labels(&self) -> &[Option<String>] {
        &self.labels
    }

    #[inline]
    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.leq.get(x, y)
    }

    #[inline]
    pub fn lt(&self, x: usize, y: usize) -> bool {
        x != y && self.leq.get(x, y)
    }

    pub fn comparable(&self, x: usize, y: usize) -> bool {
        self.leq.get(x, y) || self.leq.get(y, x)
    }

    pub fn is_cover(&self, x: usize, y: usize) -> bool {
        self.up_covers[x].binary_search(&y).is_ok()
    }

    #[inline]
    pub fn meet(&self, x: usize, y: usize) -> usize {
        self.meet_table[x * self.n + y] as usize
    }

    #[inline]
    pub fn join(&self, x: usize, y: usize) -> usize {
        self.join_table[x * self.n + y] as usize
    }

    /// `(meet, join)` of the pair.
    pub fn bounds(&self, x: usize, y: usize) -> (usize, usize) {
        (self.meet(x, y), self.join(x, y))
    }

    /// Rank function when the lattice is graded, otherwise two maximal
    /// chains of different lengths (the lexicographically first of each
    /// length encountered).
    pub fn rank_function(&self) -> Result<RankFunction, NotGraded> {
        // Longest cover path from bottom; graded iff every cover steps by 1.
        let mut rho = vec![0usize; self.n];
        let order = self.topo_order();
        for &v in &order {
            for &w in &self.up_covers[v] {
                rho[w] = rho[w].max(rho[v] + 1);
            }
        }
        let graded = self.covers.iter().all(|&(i, j)| rho[j] == rho[i] + 1);
        if graded {
            return Ok(RankFunction { ranks: rho });
        }
        let mut chains = self.maximal_chains();
        let first = chains.next().expect("bounded lattice has a maximal chain");
        let second = chains
            .find(|c| c.len() != first.len())
            .expect("non-graded lattice has chains of two lengths");
        Err(NotGraded {
            chain_a: first,
            chain_b: second,
        })
    }

    fn topo_order(&self) -> Vec<usize> {
        let mut indeg: Vec<usize> = (0..self.n).map(|v| self.down_covers[v].len()).collect();
        let mut queue = vec![self.bottom];
        let mut order = Vec::with_capacity(self.n);
        while let Some(v) = queue.pop() {
            order.push(v);
            for &w in &self.up_covers[v] {
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    queue.push(w);
                }
            }
        }
        order
    }

    /// Streams every bottom-to-top cover path exactly once, in lexicographic
    /// order of element ids. Lazy: large lattices have factorially many
    /// maximal chains, so consumers should avoid materializing the stream.
    pub fn maximal_chains(&self) -> MaximalChains<'_> {
        MaximalChains {
            lat: self,
            stack: vec![(self.bottom, 0)],
            done: false,
        }
    }

    /// Smallest superset of `seed` closed under meet and join, ascending.
    pub fn sublattice_closure(&self, seed: &[usize]) -> Vec<usize> {
        let words = self.n.div_ceil(64);
        let mut member = vec![0u64; words];
        let mut current: Vec<usize> = Vec::new();
        for &s in seed {
            assert!(s < self.n, "element {s} out of range");
            if member[s / 64] >> (s % 64) & 1 == 0 {
                member[s / 64] |= 1 << (s % 64);
                current.push(s);
            }
        }
        // Fixed point over pairwise meets and joins.
        let mut frontier = current.clone();
        while !frontier.is_empty() {
            let mut added = Vec::new();
            for &a in &frontier {
                for &b in &current {
                    for v in [self.meet(a, b), self.join(a, b)] {
                        if member[v / 64] >> (v % 64) & 1 == 0 {
                            member[v / 64] |= 1 << (v % 64);
                            added.push(v);
                        }
                    }
                }
            }
            current.extend_from_slice(&added);
            frontier = added;
        }
        current.sort_unstable();
        current
    }

    /// Tests the distributive law `x∧(y∨z) = (x∧y)∨(x∧z)` over all triples
    /// of `subset`, which must be closed under meet and join. The first
    /// violating triple in ascending id order is returned as witness.
    pub fn is_distributive(
        &self,
        subset: &[usize],
    ) -> Result<Check<DistributivityViolation>, NotClosed> {
        let mut elems: Vec<usize> = subset.to_vec();
        elems.sort_unstable();
        elems.dedup();
        for &e in &elems {
            assert!(e < self.n, "element {e} out of range");
        }
        for &a in &elems {
            for &b in &elems {
                let (m, j) = self.bounds(a, b);
                for v in [m, j] {
                    if elems.binary_search(&v).is_err() {
                        return Err(NotClosed {
                            x: a,
                            y: b,
                            missing: v,
                        });
                    }
                }
            }
        }
        for &x in &elems {
            for &y in &elems {
                for &z in &elems {
                    let lhs = self.meet(x, self.join(y, z));
                    let rhs = self.join(self.meet(x, y), self.meet(x, z));
                    if lhs != rhs {
                        return Ok(Check::Fails(DistributivityViolation { x, y, z, lhs, rhs }));
                    }
                }
            }
        }
        Ok(Check::Holds)
    }
}

/// Witness that `x∧(y∨z) ≠ (x∧y)∨(x∧z)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DistributivityViolation {
    pub x: usize,
    pub y: usize,
    pub z: usize,
    pub lhs: usize,
    pub rhs: usize,
}

impl fmt::Display for DistributivityViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&violation_line("distributive", &[self.x, self.y, self.z]))
    }
}

/// The queried subset is not a sublattice: `x` and `y` have a meet or join
/// outside it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("subset is not closed: pair ({x},{y}) has bound {missing} outside it")]
pub struct NotClosed {
    pub x: usize,
    pub y: usize,
    pub missing: usize,
}

/// Proof that a lattice is not graded.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("not graded: maximal chains {chain_a} and {chain_b} have different lengths")]
pub struct NotGraded {
    pub chain_a: Chain,
    pub chain_b: Chain,
}

/// Per-element ranks of a graded lattice.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct RankFunction {
    ranks: Vec<usize>,
}

impl RankFunction {
    pub(crate) fn from_ranks(ranks: Vec<usize>) -> Self {
        RankFunction { ranks }
    }

    #[inline]
    pub fn rank(&self, x: usize) -> usize {
        self.ranks[x]
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }
}

/// A strictly increasing (in lattice order) sequence of elements.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct Chain {
    elements: Vec<usize>,
}

impl Chain {
    /// Validates that `elements` is nonempty and strictly increasing in the
    /// order of `lat`.
    pub fn new(lat: &FiniteLattice, elements: Vec<usize>) -> Result<Self, ChainError> {
        if elements.is_empty() {
            return Err(ChainError::Empty);
        }
        for &e in &elements {
            if e >= lat.len() {
                return Err(ChainError::ElementOutOfRange {
                    id: e,
                    n: lat.len(),
                });
            }
        }
        for w in elements.windows(2) {
            if !lat.lt(w[0], w[1]) {
                return Err(ChainError::NotIncreasing { a: w[0], b: w[1] });
            }
        }
        Ok(Chain { elements })
    }

    pub(crate) fn from_raw(elements: Vec<usize>) -> Self {
        Chain { elements }
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, usize> {
        self.elements.iter()
    }

    /// A maximal chain runs from bottom to top entirely along covers.
    pub fn is_maximal(&self, lat: &FiniteLattice) -> bool {
        self.elements.first() == Some(&lat.bottom())
            && self.elements.last() == Some(&lat.top())
            && self.elements.windows(2).all(|w| lat.is_cover(w[0], w[1]))
    }
}

impl fmt::Display for Chain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for e in &self.elements {
            if !first {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
            first = false;
        }
        Ok(())
    }
}

/// Lazy depth-first stream over maximal chains; see
/// [`FiniteLattice::maximal_chains`].
pub struct MaximalChains<'a> {
    lat: &'a FiniteLattice,
    stack: Vec<(usize, usize)>,
    done: bool,
}

impl Iterator for MaximalChains<'_> {
    type Item = Chain;

    fn next(&mut self) -> Option<Chain> {
        if self.done {
            return None;
        }
        loop {
            let &(cur, idx) = self.stack.last()?;
            if cur == self.lat.top() {
                let chain = Chain::from_raw(self.stack.iter().map(|&(e, _)| e).collect());
                self.stack.pop();
                if self.stack.is_empty() {
                    self.done = true;
                }
                return Some(chain);
            }
            let kids = self.lat.upper_covers(cur);
            if idx < kids.len() {
                let child = kids[idx];
                self.stack.last_mut().unwrap().1 += 1;
                self.stack.push((child, 0));
            } else {
                self.stack.pop();
                if self.stack.is_empty() {
                    self.done = true;
                    return None;
                }
            }
        }
    }
}
