//! Polarization weights as β-expansions of channel indices.
//!
//! Index `x` with bits `b_i` has weight `w(x) = Σ b_i β^i`; sorting weights
//! ranks channels. For `β > 1` the ranking respects the UPO, and it only
//! changes when `β` crosses a root of some difference `w(y) - w(x)`, a
//! polynomial with coefficients in {-1, 0, 1}. Those roots in (1, 2) form the
//! breakpoint set of a width; between adjacent breakpoints the order is
//! constant.

pub mod roots;

use std::collections::HashMap;
use std::fmt;

use rayon::prelude::*;

use crate::error::{domain, Error, Result};
use crate::partial_order::{self, mask, ChannelIndex};
use crate::MAX_WIDTH;
use roots::{roots_in, IntPoly};

/// Weights closer than this are a tie.
pub const TIE_TOL: f64 = 1e-9;

/// Breakpoints closer than this are the same algebraic number.
pub const DEDUP_TOL: f64 = 1e-8;

/// Polynomial with coefficients in {-1, 0, 1}, stored as the bit masks of
/// its positive and negative coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignedPolynomial {
    pos: u32,
    neg: u32,
}

impl SignedPolynomial {
    pub const ZERO: Self = Self { pos: 0, neg: 0 };

    pub fn from_masks(pos: u32, neg: u32) -> Result<Self> {
        if pos & neg != 0 {
            return domain("a coefficient cannot be both +1 and -1");
        }
        Ok(Self { pos, neg })
    }

    pub fn from_coeffs(coeffs: &[i8]) -> Result<Self> {
        if coeffs.len() > 32 {
            return domain("degree too large");
        }
        let (mut pos, mut neg) = (0u32, 0u32);
        for (i, &c) in coeffs.iter().enumerate() {
            match c {
                1 => pos |= 1 << i,
                -1 => neg |= 1 << i,
                0 => {}
                _ => return domain(format!("coefficient {c} not in {{-1, 0, 1}}")),
            }
        }
        Ok(Self { pos, neg })
    }

    pub fn positive_mask(self) -> u32 {
        self.pos
    }

    pub fn negative_mask(self) -> u32 {
        self.neg
    }

    pub fn is_zero(self) -> bool {
        self.pos == 0 && self.neg == 0
    }

    pub fn coeff(self, degree: u32) -> i8 {
        if degree >= 32 {
            return 0;
        }
        (self.pos >> degree & 1) as i8 - (self.neg >> degree & 1) as i8
    }

    pub fn degree(self) -> Option<u32> {
        let all = self.pos | self.neg;
        (all != 0).then(|| 31 - all.leading_zeros())
    }

    /// Coefficients indexed by degree, up to the leading one.
    pub fn coeffs(self) -> Vec<i8> {
        match self.degree() {
            Some(d) => (0..=d).map(|i| self.coeff(i)).collect(),
            None => Vec::new(),
        }
    }

    pub fn negate(self) -> Self {
        Self {
            pos: self.neg,
            neg: self.pos,
        }
    }

    /// The sign-normalized form with a positive leading coefficient.
    pub fn canonical(self) -> Self {
        if self.neg > self.pos {
            self.negate()
        } else {
            self
        }
    }

    pub fn eval(self, beta: f64) -> f64 {
        let mut acc = 0.0;
        for i in (0..=self.degree().unwrap_or(0)).rev() {
            acc = acc * beta + f64::from(self.coeff(i));
        }
        acc
    }

    fn int_poly(self) -> IntPoly {
        IntPoly::trimmed(self.coeffs().into_iter().map(i64::from).collect())
    }

    /// Real roots strictly inside `(lo, hi)`, ascending.
    pub fn roots_in(self, lo: f64, hi: f64) -> Vec<f64> {
        roots_in(&self.int_poly(), lo, hi)
    }
}

impl fmt::Display for SignedPolynomial {
    /// Signed monomials, highest degree first: `+x^3 -x -1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let Some(deg) = self.degree() else {
            return f.write_str("0");
        };
        let mut first = true;
        for i in (0..=deg).rev() {
            let c = self.coeff(i);
            if c == 0 {
                continue;
            }
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            f.write_str(if c > 0 { "+" } else { "-" })?;
            match i {
                0 => f.write_str("1")?,
                1 => f.write_str("x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

/// Real roots of `p` in the open interval (1, 2), where every breakpoint
/// lives, isolated to double precision.
pub fn roots_in_unit_to_two(p: SignedPolynomial) -> Result<Vec<f64>> {
    if p.is_zero() {
        return domain("the zero polynomial has no isolated roots");
    }
    Ok(p.roots_in(1.0, 2.0))
}

/// The β-expansion monomial set of an index: degree `i` present iff `b_i = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PolarizationWeight {
    index: ChannelIndex,
}

impl PolarizationWeight {
    pub fn index(self) -> ChannelIndex {
        self.index
    }

    /// Coefficients by degree (the index bits, least significant first).
    pub fn monomial(self) -> Vec<u8> {
        (0..self.index.width()).map(|i| self.index.bit(i)).collect()
    }

    pub fn degrees(self) -> Vec<u32> {
        (0..self.index.width()).filter(|&i| self.index.bit(i) == 1).collect()
    }

    pub fn as_polynomial(self) -> SignedPolynomial {
        SignedPolynomial {
            pos: self.index.value(),
            neg: 0,
        }
    }

    pub fn value(self, beta: f64) -> f64 {
        weight(self.index.value(), beta)
    }
}

pub fn pw_monomial(x: ChannelIndex) -> PolarizationWeight {
    PolarizationWeight { index: x }
}

#[inline]
fn weight(bits: u32, beta: f64) -> f64 {
    let mut sum = 0.0;
    let mut power = 1.0;
    let mut rest = bits;
    while rest != 0 {
        if rest & 1 == 1 {
            sum += power;
        }
        power *= beta;
        rest >>= 1;
    }
    sum
}

fn check_beta(beta: f64) -> Result<()> {
    if !(beta.is_finite() && beta > 1.0) {
        return domain(format!("beta must be a finite real above 1, got {beta}"));
    }
    Ok(())
}

fn check_width(n: u32) -> Result<()> {
    if n == 0 || n > MAX_WIDTH {
        return domain(format!("width {n} outside 1..={MAX_WIDTH}"));
    }
    Ok(())
}

pub fn pw_value(x: ChannelIndex, beta: f64) -> Result<f64> {
    check_beta(beta)?;
    Ok(pw_monomial(x).value(beta))
}

/// `w(y) - w(x)`: positive exactly where `y` outranks `x`.
pub fn diff_polynomial(x: ChannelIndex, y: ChannelIndex) -> Result<SignedPolynomial> {
    if x.width() != y.width() {
        return domain(format!("width mismatch: {} vs {}", x.width(), y.width()));
    }
    Ok(diff_values(x.value(), y.value()))
}

pub(crate) fn diff_values(x: u32, y: u32) -> SignedPolynomial {
    SignedPolynomial {
        pos: y & !x,
        neg: x & !y,
    }
}

/// A permutation of `[0, 2^n)` from least to most reliable.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ReliabilitySequence {
    width: u32,
    order: Vec<u32>,
}

impl ReliabilitySequence {
    pub fn new(width: u32, order: Vec<u32>) -> Result<Self> {
        check_width(width)?;
        let size = 1usize << width;
        if order.len() != size {
            return domain(format!("sequence has {} entries, expected {size}", order.len()));
        }
        let mut seen = vec![false; size];
        for &v in &order {
            let slot = seen
                .get_mut(v as usize)
                .ok_or_else(|| Error::Domain(format!("index {v} out of range")))?;
            if *slot {
                return domain(format!("index {v} appears twice"));
            }
            *slot = true;
        }
        Ok(Self { width, order })
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn order(&self) -> &[u32] {
        &self.order
    }

    pub fn into_order(self) -> Vec<u32> {
        self.order
    }

    /// Rank of every index: `positions()[x]` is where `x` appears.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.order.len()];
        for (rank, &x) in self.order.iter().enumerate() {
            pos[x as usize] = rank;
        }
        pos
    }

    /// The subsequence of indices below `2^width`.
    pub fn restrict(&self, width: u32) -> Result<Self> {
        if width > self.width {
            return domain("cannot restrict to a larger width");
        }
        let limit = 1u32 << width;
        Self::new(width, self.order.iter().copied().filter(|&x| x < limit).collect())
    }

    /// UPO pairs placed in the wrong order.
    pub fn upo_violations(&self) -> Vec<(u32, u32)> {
        let pos = self.positions();
        let size = self.order.len() as u32;
        let mut bad = Vec::new();
        for x in 0..size {
            for y in 0..size {
                if x != y && partial_order::dominated(x, y, self.width) && pos[x as usize] > pos[y as usize] {
                    bad.push((x, y));
                }
            }
        }
        bad
    }

    /// Consecutive `(less, more)` reliable pairs.
    pub fn adjacent(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.order.windows(2).map(|w| (w[0], w[1]))
    }
}

/// Sorts all `2^n` indices by polarization weight at `beta`.
///
/// Fails with [`Error::IllConditionedBeta`] when two weights coincide within
/// [`TIE_TOL`], naming the pair and the nearby breakpoint. Ties are never
/// broken silently.
pub fn rank_by_pw(n: u32, beta: f64) -> Result<ReliabilitySequence> {
    check_width(n)?;
    check_beta(beta)?;
    let size = 1u32 << n;
    let weights: Vec<f64> = (0..size).map(|x| weight(x, beta)).collect();
    let mut order: Vec<u32> = (0..size).collect();
    order.sort_by(|&a, &b| weights[a as usize].total_cmp(&weights[b as usize]).then(a.cmp(&b)));
    for w in order.windows(2) {
        let (a, b) = (w[0], w[1]);
        if (weights[b as usize] - weights[a as usize]).abs() < TIE_TOL {
            let p = diff_values(a, b);
            let breakpoint = p
                .roots_in((beta - 1e-3).max(1.0), beta + 1e-3)
                .into_iter()
                .min_by(|r, s| (r - beta).abs().total_cmp(&(s - beta).abs()));
            return Err(Error::IllConditionedBeta {
                beta,
                x: a.min(b),
                y: a.max(b),
                breakpoint,
            });
        }
    }
    Ok(ReliabilitySequence { width: n, order })
}

/// Open interval `(lo, hi)` of β values, `1 ≤ lo < hi ≤ +∞`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaInterval {
    lo: f64,
    hi: f64,
}

impl BetaInterval {
    /// `(1, +∞)`.
    pub const FULL: Self = Self {
        lo: 1.0,
        hi: f64::INFINITY,
    };

    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && lo >= 1.0 && hi > lo) {
            return domain(format!("invalid beta interval ({lo}, {hi})"));
        }
        Ok(Self { lo, hi })
    }

    pub fn lo(self) -> f64 {
        self.lo
    }

    pub fn hi(self) -> f64 {
        self.hi
    }

    pub fn contains(self, beta: f64) -> bool {
        beta > self.lo && beta < self.hi
    }

    pub fn is_within(self, outer: Self) -> bool {
        self.lo >= outer.lo && self.hi <= outer.hi
    }

    pub fn width(self) -> f64 {
        self.hi - self.lo
    }

    /// A β strictly inside: the midpoint, or `lo + 0.5` when unbounded.
    pub fn representative(self) -> f64 {
        if self.hi.is_infinite() {
            self.lo + 0.5
        } else {
            0.5 * (self.lo + self.hi)
        }
    }
}

impl fmt::Display for BetaInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.hi.is_infinite() {
            write!(f, "({:.6},inf)", self.lo)
        } else {
            write!(f, "({:.6},{:.6})", self.lo, self.hi)
        }
    }
}

/// One interior breakpoint and the lowest-degree polynomial producing it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Breakpoint {
    pub value: f64,
    pub polynomial: SignedPolynomial,
}

/// Ascending breakpoints `{1, a_1, ..., a_m, +∞}` of a width.
#[derive(Debug, Clone, PartialEq)]
pub struct BreakpointSet {
    width: u32,
    interior: Vec<Breakpoint>,
}

impl BreakpointSet {
    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn interior(&self) -> &[Breakpoint] {
        &self.interior
    }

    /// All values including the sentinels 1 and +∞.
    pub fn values(&self) -> Vec<f64> {
        std::iter::once(1.0)
            .chain(self.interior.iter().map(|b| b.value))
            .chain(std::iter::once(f64::INFINITY))
            .collect()
    }

    /// Open intervals between consecutive values.
    pub fn intervals(&self) -> Vec<BetaInterval> {
        self.values()
            .windows(2)
            .map(|w| BetaInterval { lo: w[0], hi: w[1] })
            .collect()
    }
}

/// Incomparable pairs grouped by their (sign-normalized) difference polynomial.
fn pairs_by_polynomial(n: u32) -> Result<HashMap<SignedPolynomial, Vec<(u32, u32)>>> {
    let pairs = partial_order::incomparable_pairs(n, false)?;
    let mut groups: HashMap<SignedPolynomial, Vec<(u32, u32)>> = HashMap::new();
    for (x, y) in pairs {
        groups.entry(diff_values(x, y).canonical()).or_default().push((x, y));
    }
    Ok(groups)
}

fn polynomial_rank(p: SignedPolynomial) -> (u32, u32, u32) {
    (p.degree().unwrap_or(0), (p.pos | p.neg).count_ones(), p.pos | p.neg)
}

/// Union of the (1, 2) roots of every incomparable pair's difference
/// polynomial at width `n`, deduplicated at [`DEDUP_TOL`].
pub fn breakpoints(n: u32) -> Result<BreakpointSet> {
    check_width(n)?;
    let groups = pairs_by_polynomial(n)?;
    let polys: Vec<SignedPolynomial> = groups.into_keys().collect();
    let mut found: Vec<Breakpoint> = polys
        .par_iter()
        .flat_map_iter(|&p| {
            p.roots_in(1.0, 2.0)
                .into_iter()
                .map(move |value| Breakpoint { value, polynomial: p })
        })
        .collect();
    found.sort_by(|a, b| a.value.total_cmp(&b.value));
    let mut interior: Vec<Breakpoint> = Vec::new();
    for bp in found {
        match interior.last_mut() {
            Some(last) if (bp.value - last.value).abs() < DEDUP_TOL => {
                if polynomial_rank(bp.polynomial) < polynomial_rank(last.polynomial) {
                    last.polynomial = bp.polynomial;
                }
            }
            _ => interior.push(bp),
        }
    }
    Ok(BreakpointSet { width: n, interior })
}

/// An incomparable pair whose order flips inside an interval.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstrainingPair {
    pub x: u32,
    pub y: u32,
    /// Roots of `w(y) - w(x)` strictly inside the interval, ascending.
    pub roots: Vec<f64>,
}

impl ConstrainingPair {
    pub fn root(&self) -> f64 {
        self.roots[0]
    }

    pub fn polynomial(&self) -> SignedPolynomial {
        diff_values(self.x, self.y)
    }
}

/// Incomparable pairs `(x, y)`, `x < y`, whose difference polynomial has a
/// root strictly inside `interval`, sorted by `(x, y)`.
pub fn constraining_pairs(n: u32, interval: BetaInterval) -> Result<Vec<ConstrainingPair>> {
    check_width(n)?;
    let groups = pairs_by_polynomial(n)?;
    let mut out: Vec<ConstrainingPair> = groups
        .into_par_iter()
        .flat_map_iter(|(p, pairs)| {
            let roots = p.roots_in(interval.lo, interval.hi);
            let hit = !roots.is_empty();
            pairs
                .into_iter()
                .filter(move |_| hit)
                .map(move |(x, y)| ConstrainingPair {
                    x,
                    y,
                    roots: roots.clone(),
                })
        })
        .collect();
    out.sort_by_key(|c| (c.x, c.y));
    Ok(out)
}

/// The total order shared by every β in `interval`.
///
/// Fails with [`Error::AmbiguousInterval`] when a breakpoint of width `n`
/// lies strictly inside.
pub fn order_for_interval(n: u32, interval: BetaInterval) -> Result<ReliabilitySequence> {
    let inside = constraining_pairs(n, interval)?;
    if let Some(bp) = inside
        .iter()
        .flat_map(|c| c.roots.iter().copied())
        .min_by(f64::total_cmp)
    {
        return Err(Error::AmbiguousInterval {
            lo: interval.lo,
            hi: interval.hi,
            breakpoint: bp,
        });
    }
    let seq = rank_by_pw(n, interval.representative())?;
    for (a, b) in seq.adjacent() {
        if let Some(&bp) = diff_values(a, b).roots_in(interval.lo, interval.hi).first() {
            return Err(Error::AmbiguousInterval {
                lo: interval.lo,
                hi: interval.hi,
                breakpoint: bp,
            });
        }
    }
    Ok(seq)
}

/// An oriented pair: `less` is less reliable than `greater`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Decision {
    pub less: u32,
    pub greater: u32,
}

impl Decision {
    pub fn new(less: u32, greater: u32) -> Self {
        Self { less, greater }
    }

    /// `(min, max)` of the two indices.
    pub fn pair(self) -> (u32, u32) {
        (self.less.min(self.greater), self.less.max(self.greater))
    }

    /// Positive exactly on the β values agreeing with this decision.
    pub fn polynomial(self) -> SignedPolynomial {
        diff_values(self.less, self.greater)
    }

    /// The orientation the polarization weight at `beta` gives the pair.
    pub fn from_beta(x: u32, y: u32, beta: f64) -> Self {
        if diff_values(x, y).eval(beta) > 0.0 {
            Self::new(x, y)
        } else {
            Self::new(y, x)
        }
    }
}

/// Shrinks `interval` to the largest open sub-interval on which every
/// decision's orientation holds.
///
/// The feasible set is cut at the roots of each decision polynomial; when
/// it splits into several pieces the widest one is returned. Fails with
/// [`Error::Infeasible`] listing the decisions violated by the least-violated
/// piece when no β satisfies them all.
pub fn refine_interval(n: u32, interval: BetaInterval, decisions: &[Decision]) -> Result<BetaInterval> {
    check_width(n)?;
    let top = mask(n);
    for d in decisions {
        if d.less > top || d.greater > top || d.less == d.greater {
            return domain(format!("decision {} < {} invalid at width {n}", d.less, d.greater));
        }
    }
    if decisions.is_empty() {
        return Ok(interval);
    }
    let polys: Vec<SignedPolynomial> = decisions.iter().map(|d| d.polynomial()).collect();
    let mut cuts: Vec<f64> = polys
        .iter()
        .flat_map(|p| p.roots_in(interval.lo, interval.hi))
        .collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup_by(|a, b| (*a - *b).abs() < roots::EDGE_TOL);
    let bounds: Vec<f64> = std::iter::once(interval.lo)
        .chain(cuts)
        .chain(std::iter::once(interval.hi))
        .collect();

    let mut best_feasible: Option<BetaInterval> = None;
    let mut least_violated: Option<Vec<(u32, u32)>> = None;
    for w in bounds.windows(2) {
        let cell = BetaInterval { lo: w[0], hi: w[1] };
        let probe = cell.representative();
        let violated: Vec<(u32, u32)> = decisions
            .iter()
            .zip(&polys)
            .filter(|(_, p)| p.eval(probe) <= 0.0)
            .map(|(d, _)| (d.less, d.greater))
            .collect();
        if violated.is_empty() {
            if best_feasible.is_none_or(|b| cell.width() > b.width()) {
                best_feasible = Some(cell);
            }
        } else if least_violated.as_ref().is_none_or(|v| violated.len() < v.len()) {
            least_violated = Some(violated);
        }
    }
    best_feasible.ok_or_else(|| Error::Infeasible {
        pairs: least_violated.unwrap_or_default(),
    })
}

/// Constraining pairs that are adjacent in `order`: the decisions that alone
/// pin the order down, since every other constraining pair follows from them
/// by transitivity.
pub fn decisive_pairs<'a>(
    order: &ReliabilitySequence,
    constraining: &'a [ConstrainingPair],
) -> Vec<&'a ConstrainingPair> {
    let lookup: HashMap<(u32, u32), &ConstrainingPair> =
        constraining.iter().map(|c| ((c.x, c.y), c)).collect();
    order
        .adjacent()
        .filter_map(|(a, b)| lookup.get(&(a.min(b), a.max(b))).copied())
        .collect()
}
