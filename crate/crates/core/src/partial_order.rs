//! Universal partial order (UPO) on synthetic-channel indices.
//!
//! The Addition rule (`...1...` is less reliable than `...0...` turned into
//! `...1...`, i.e. setting a bit never hurts) and the Left-swap rule (moving a
//! one towards the most significant end never hurts) generate a partial order
//! that holds for every binary-input symmetric channel. Its closed form is a
//! dominance test on suffix counts: `x ⪯ y` iff for every position `k`, the
//! number of ones of `x` at positions `≥ k` is at most that of `y`.

use std::collections::VecDeque;

use crate::error::{domain, Error, Result};
use crate::MAX_WIDTH;

/// Largest width accepted by the exhaustive (quadratic) routines.
pub const MAX_EXHAUSTIVE_WIDTH: u32 = 12;

/// A synthetic-channel index together with its bit-width.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ChannelIndex {
    value: u32,
    width: u32,
}

impl ChannelIndex {
    pub fn new(value: u32, width: u32) -> Result<Self> {
        if width == 0 || width > MAX_WIDTH {
            return domain(format!("width {width} outside 1..={MAX_WIDTH}"));
        }
        if u64::from(value) >= 1u64 << width {
            return domain(format!("index {value} does not fit in {width} bits"));
        }
        Ok(Self { value, width })
    }

    /// Builds an index from its expansion, most significant bit first.
    pub fn from_bits(bits: &[u8]) -> Result<Self> {
        let width = u32::try_from(bits.len()).map_err(|_| Error::Domain("too many bits".into()))?;
        let mut value = 0u32;
        for &b in bits {
            if b > 1 {
                return domain(format!("bit value {b} is not 0 or 1"));
            }
            value = value.checked_shl(1).unwrap_or(0) | u32::from(b);
        }
        Self::new(value, width)
    }

    pub fn value(self) -> u32 {
        self.value
    }

    pub fn width(self) -> u32 {
        self.width
    }

    /// Bit at position `i` (position 0 is the least significant bit).
    pub fn bit(self, i: u32) -> u8 {
        ((self.value >> i) & 1) as u8
    }

    /// Binary expansion `(b_{n-1}, ..., b_1, b_0)`, most significant bit first.
    pub fn bits(self) -> Vec<u8> {
        (0..self.width).rev().map(|i| self.bit(i)).collect()
    }

    /// The symmetric node `2^n - 1 - x`.
    pub fn mirror(self) -> Self {
        Self {
            value: !self.value & mask(self.width),
            width: self.width,
        }
    }

    /// The same index viewed at a larger width (zero extension).
    pub fn widen(self, width: u32) -> Result<Self> {
        if width < self.width {
            return domain(format!("cannot narrow width {} to {width}", self.width));
        }
        Self::new(self.value, width)
    }
}

/// [`ChannelIndex::new`] under the operation's name.
pub fn binary_expansion(value: u32, width: u32) -> Result<ChannelIndex> {
    ChannelIndex::new(value, width)
}

pub(crate) fn mask(width: u32) -> u32 {
    if width >= 32 {
        u32::MAX
    } else {
        (1u32 << width) - 1
    }
}

/// Outcome of comparing two indices under the UPO.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UpoOrdering {
    /// `x ≺ y`: `x` is less reliable on every channel.
    Less,
    Greater,
    Equal,
    /// Neither rule, nor any combination of them, orders the pair.
    Incomparable,
}

/// `x ⪯ y` by the suffix-count dominance test.
#[inline]
pub fn dominated(x: u32, y: u32, width: u32) -> bool {
    let (mut cx, mut cy) = (0u32, 0u32);
    for k in (0..width).rev() {
        cx += (x >> k) & 1;
        cy += (y >> k) & 1;
        if cx > cy {
            return false;
        }
    }
    true
}

/// Raw-value form of [`upo_compare`].
pub fn compare_values(x: u32, y: u32, width: u32) -> UpoOrdering {
    if x == y {
        return UpoOrdering::Equal;
    }
    match (dominated(x, y, width), dominated(y, x, width)) {
        (true, _) => UpoOrdering::Less,
        (_, true) => UpoOrdering::Greater,
        _ => UpoOrdering::Incomparable,
    }
}

pub fn upo_compare(x: ChannelIndex, y: ChannelIndex) -> Result<UpoOrdering> {
    if x.width != y.width {
        return domain(format!("width mismatch: {} vs {}", x.width, y.width));
    }
    Ok(compare_values(x.value, y.value, x.width))
}

/// Dense boolean relation on `[0, size)`, one bitset row per element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    size: usize,
    words: usize,
    rows: Vec<u64>,
}

impl Relation {
    pub fn empty(size: usize) -> Self {
        let words = size.div_ceil(64);
        Self {
            size,
            words,
            rows: vec![0; size * words],
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn insert(&mut self, x: usize, y: usize) {
        self.rows[x * self.words + y / 64] |= 1u64 << (y % 64);
    }

    pub fn contains(&self, x: usize, y: usize) -> bool {
        self.rows[x * self.words + y / 64] >> (y % 64) & 1 == 1
    }

    pub fn row(&self, x: usize) -> &[u64] {
        &self.rows[x * self.words..(x + 1) * self.words]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::empty(self.size);
        for x in 0..self.size {
            for y in self.iter_row(x) {
                t.insert(y, x);
            }
        }
        t
    }

    pub fn iter_row(&self, x: usize) -> impl Iterator<Item = usize> + '_ {
        self.row(x).iter().enumerate().flat_map(|(w, &word)| {
            let mut bits = word;
            std::iter::from_fn(move || {
                if bits == 0 {
                    return None;
                }
                let b = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(w * 64 + b)
            })
        })
    }

    /// Number of related pairs, reflexive ones included.
    pub fn count(&self) -> usize {
        self.rows.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Reflexive-transitive closure of an edge list, by depth-first reachability.
    pub fn closure_of(size: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut succ = vec![Vec::new(); size];
        for (a, b) in edges {
            succ[a].push(b);
        }
        let mut rel = Self::empty(size);
        let mut stack = Vec::new();
        for start in 0..size {
            rel.insert(start, start);
            stack.push(start);
            while let Some(v) = stack.pop() {
                for &w in &succ[v] {
                    if !rel.contains(start, w) {
                        rel.insert(start, w);
                        stack.push(w);
                    }
                }
            }
        }
        rel
    }
}

fn exhaustive_size(n: u32) -> Result<usize> {
    if n == 0 {
        return domain("width must be at least 1");
    }
    if n > MAX_EXHAUSTIVE_WIDTH {
        return Err(Error::Resource(format!(
            "width {n} exceeds exhaustive limit {MAX_EXHAUSTIVE_WIDTH}"
        )));
    }
    Ok(1usize << n)
}

/// Reflexive-transitive closure of the elementary moves, computed by
/// breadth-first search: set one zero bit, or turn an adjacent `(0, 1)` pair
/// (higher position first) into `(1, 0)`. Multi-bit Addition and
/// non-adjacent Left-swap are expected to emerge from the closure.
///
/// Test oracle; independent of [`dominated`].
pub fn upo_closure_oracle(n: u32) -> Result<Relation> {
    let size = exhaustive_size(n)?;
    let mut rel = Relation::empty(size);
    let mut queue = VecDeque::new();
    for start in 0..size {
        rel.insert(start, start);
        queue.push_back(start as u32);
        while let Some(v) = queue.pop_front() {
            let moves = (0..n)
                .filter(|&k| v >> k & 1 == 0)
                .map(|k| v | 1 << k)
                // bit k+1 is 0 and bit k is 1: swap them leftwards
                .chain(
                    (0..n - 1)
                        .filter(|&k| v >> (k + 1) & 1 == 0 && v >> k & 1 == 1)
                        .map(|k| v ^ (0b11 << k)),
                );
            for w in moves.collect::<Vec<_>>() {
                if !rel.contains(start, w as usize) {
                    rel.insert(start, w as usize);
                    queue.push_back(w);
                }
            }
        }
    }
    Ok(rel)
}

/// The full UPO relation at width `n` from the dominance test.
pub fn upo_relation(n: u32) -> Result<Relation> {
    let size = exhaustive_size(n)?;
    let mut rel = Relation::empty(size);
    for x in 0..size {
        for y in 0..size {
            if dominated(x as u32, y as u32, n) {
                rel.insert(x, y);
            }
        }
    }
    Ok(rel)
}

/// Hasse-diagram edge `lo ≺ hi` with nothing in between.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoverEdge {
    pub lo: u32,
    pub hi: u32,
}

impl CoverEdge {
    pub fn new(lo: u32, hi: u32) -> Self {
        Self { lo, hi }
    }
}

impl From<(u32, u32)> for CoverEdge {
    fn from((lo, hi): (u32, u32)) -> Self {
        Self { lo, hi }
    }
}

/// The minimal edge set `UPO_n` whose closure is the UPO at width `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialOrderSet {
    width: u32,
    edges: Vec<CoverEdge>,
}

impl PartialOrderSet {
    /// Validates that every edge lies in range and is a UPO relation;
    /// edges are sorted and deduplicated.
    pub fn new(width: u32, edges: impl IntoIterator<Item = CoverEdge>) -> Result<Self> {
        if width == 0 || width > MAX_WIDTH {
            return domain(format!("width {width} outside 1..={MAX_WIDTH}"));
        }
        let top = mask(width);
        let mut edges: Vec<CoverEdge> = edges.into_iter().collect();
        for e in &edges {
            if e.lo > top || e.hi > top {
                return domain(format!("edge {{{}, {}}} outside width {width}", e.lo, e.hi));
            }
            if compare_values(e.lo, e.hi, width) != UpoOrdering::Less {
                return domain(format!("edge {{{}, {}}} is not a UPO relation", e.lo, e.hi));
            }
        }
        edges.sort_unstable();
        edges.dedup();
        Ok(Self { width, edges })
    }

    /// `UPO_1 = {{0, 1}}`.
    pub fn base() -> Self {
        Self {
            width: 1,
            edges: vec![CoverEdge::new(0, 1)],
        }
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn edges(&self) -> &[CoverEdge] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn contains(&self, lo: u32, hi: u32) -> bool {
        self.edges.binary_search(&CoverEdge::new(lo, hi)).is_ok()
    }

    /// Reflexive-transitive closure of the edge set.
    pub fn closure(&self) -> Result<Relation> {
        let size = exhaustive_size(self.width)?;
        Ok(Relation::closure_of(
            size,
            self.edges.iter().map(|e| (e.lo as usize, e.hi as usize)),
        ))
    }
}

/// Edges `(x, y)`, `x ≠ y`, of `rel` that admit no intermediate `z`.
///
/// `rel` must be reflexive and transitive.
pub fn transitive_reduction(rel: &Relation) -> Vec<CoverEdge> {
    let pred = rel.transpose();
    let mut out = Vec::new();
    let mut scratch = vec![0u64; rel.row(0).len()];
    for x in 0..rel.size() {
        for y in rel.iter_row(x) {
            if x == y {
                continue;
            }
            for ((s, a), b) in scratch.iter_mut().zip(rel.row(x)).zip(pred.row(y)) {
                *s = a & b;
            }
            scratch[x / 64] &= !(1u64 << (x % 64));
            scratch[y / 64] &= !(1u64 << (y % 64));
            if scratch.iter().all(|&w| w == 0) {
                out.push(CoverEdge::new(x as u32, y as u32));
            }
        }
    }
    out.sort_unstable();
    out
}

/// `UPO_n` as the transitive reduction of the dominance relation.
pub fn cover_edges(n: u32) -> Result<PartialOrderSet> {
    let rel = upo_relation(n)?;
    Ok(PartialOrderSet {
        width: n,
        edges: transitive_reduction(&rel),
    })
}

/// Builds `UPO_n` from `UPO_{n-1}`: the inherited edges, their mirror images
/// `{N-1-hi, N-1-lo}` in the upper half, and the new edges
/// `{x, x + N/4}` for `x ∈ [N/4, N/2)` joining the halves.
pub fn recursive_construct(prev: &PartialOrderSet) -> Result<PartialOrderSet> {
    let prev = PartialOrderSet::new(prev.width, prev.edges.iter().copied())?;
    let n = prev.width + 1;
    if n > MAX_WIDTH {
        return domain(format!("width {n} exceeds {MAX_WIDTH}"));
    }
    let top = mask(n);
    let quarter = 1u32 << (n - 2);
    let inherited = prev.edges.iter().copied();
    let mirrored = prev
        .edges
        .iter()
        .map(|e| CoverEdge::new(top - e.hi, top - e.lo));
    let joining = (quarter..2 * quarter).map(|x| CoverEdge::new(x, x + quarter));
    PartialOrderSet::new(n, inherited.chain(mirrored).chain(joining).collect::<Vec<_>>())
}

/// Iterates [`recursive_construct`] from `UPO_1` up to width `n`.
pub fn construct_up_to(n: u32) -> Result<PartialOrderSet> {
    if n == 0 {
        return domain("width must be at least 1");
    }
    let mut set = PartialOrderSet::base();
    for _ in 1..n {
        set = recursive_construct(&set)?;
    }
    Ok(set)
}

/// All unordered pairs `(x, y)`, `x < y`, left open by the UPO, sorted by
/// `(x, y)`. With `cross_half_only`, only pairs with `x < 2^{n-1} ≤ y`.
pub fn incomparable_pairs(n: u32, cross_half_only: bool) -> Result<Vec<(u32, u32)>> {
    let size = exhaustive_size(n)? as u32;
    let half = size / 2;
    let mut out = Vec::new();
    for x in 0..size {
        let start = if cross_half_only { half.max(x + 1) } else { x + 1 };
        if cross_half_only && x >= half {
            break;
        }
        for y in start..size {
            if compare_values(x, y, n) == UpoOrdering::Incomparable {
                out.push((x, y));
            }
        }
    }
    Ok(out)
}
