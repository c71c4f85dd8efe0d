//! Channel-dependent reliability oracles: the Gaussian approximation (GA) of
//! density evolution for the binary-input AWGN channel, and the exact
//! Bhattacharyya recursion for the binary erasure channel.
//!
//! Both recursions start from a single root value and, at each level, replace
//! every entry `v` by the pair `(worse(v), better(v))`. The first split is
//! the most significant index bit.

use std::cmp::Ordering;
use std::sync::OnceLock;

use crate::beta_expansion::{Decision, ReliabilitySequence};
use crate::error::{domain, Error, Result};
use crate::{BETA_QUARTER_ROOT_TWO, MAX_WIDTH};

/// Mean LLRs are clamped here; the channel is effectively perfect.
pub const LLR_MEAN_CLAMP: f64 = 1e4;

/// Default GA design SNR (Es/N0, dB).
pub const DEFAULT_DESIGN_SNR_DB: f64 = 2.0;

/// SNR grid over which pair orientations must be stable.
pub const SNR_GRID_DB: [f64; 5] = [-2.0, 0.0, 2.0, 4.0, 6.0];

const SMALL_BRANCH_END: f64 = 0.867861;

fn ln_phi_small(x: f64) -> f64 {
    0.0564 * x * x - 0.48560 * x
}

fn ln_phi_mid(x: f64) -> f64 {
    -0.4527 * x.powf(0.86) + 0.0218
}

fn ln_phi_large(x: f64) -> f64 {
    0.5 * (std::f64::consts::PI / x).ln() - 0.25 * x + (-10.0 / (7.0 * x)).ln_1p()
}

/// Where the middle and asymptotic branches meet, near 15.
fn large_branch_start() -> f64 {
    static START: OnceLock<f64> = OnceLock::new();
    *START.get_or_init(|| {
        let gap = |x: f64| ln_phi_mid(x) - ln_phi_large(x);
        let (mut a, mut b) = (10.0, 20.0);
        let fa = gap(a);
        for _ in 0..200 {
            let m = 0.5 * (a + b);
            if (gap(m) < 0.0) == (fa < 0.0) {
                a = m;
            } else {
                b = m;
            }
        }
        0.5 * (a + b)
    })
}

/// `ln φ(x)` for the usual piecewise GA approximation of
/// `φ(x) = 1 - E[tanh(L/2)]`, `L ~ N(x, 2x)`.
pub fn ln_phi(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x < SMALL_BRANCH_END {
        ln_phi_small(x)
    } else if x < large_branch_start() {
        ln_phi_mid(x)
    } else {
        ln_phi_large(x)
    }
}

pub fn phi(x: f64) -> f64 {
    ln_phi(x).exp()
}

/// Inverse of [`ln_phi`]: the mean `x ≥ 0` with `ln φ(x) = ly`.
pub fn ln_phi_inv(ly: f64) -> f64 {
    if ly >= 0.0 {
        return 0.0;
    }
    if ly > ln_phi_small(SMALL_BRANCH_END) {
        // 0.0564 x^2 - 0.4856 x - ly = 0, smaller root
        let (a, b) = (0.0564, -0.48560);
        return (-b - (b * b + 4.0 * a * ly).sqrt()) / (2.0 * a);
    }
    let start = large_branch_start();
    if ly > ln_phi_mid(start) {
        return ((0.0218 - ly) / 0.4527).powf(1.0 / 0.86);
    }
    let (mut a, mut b) = (start, 2.0 * start);
    while ln_phi_large(b) > ly {
        a = b;
        b *= 2.0;
    }
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        if ln_phi_large(m) > ly {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

pub fn phi_inv(y: f64) -> f64 {
    ln_phi_inv(y.ln())
}

/// Mean LLR of the worse child: `φ⁻¹(1 - (1 - φ(m))²)`.
///
/// Computed as `φ⁻¹(φ(m)(2 - φ(m)))` in the log domain; the direct form
/// cancels catastrophically once `φ(m)` is tiny.
fn check_node_mean(m: f64) -> f64 {
    let lp = ln_phi(m);
    ln_phi_inv(lp + (-lp.exp_m1()).ln_1p())
}

/// Common read-only view of an oracle's per-channel reliability.
pub trait Reliability {
    fn width(&self) -> u32;

    /// The raw per-index metric (LLR mean, Bhattacharyya parameter, ...).
    fn metric(&self) -> &[f64];

    /// A score that grows with reliability. Saturated entries share one score.
    fn score(&self, index: usize) -> f64;

    /// Whether the metric is saturated and no longer separates channels.
    fn saturated(&self, _index: usize) -> bool {
        false
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaReliability {
    width: u32,
    design_snr_db: f64,
    llr_means: Vec<f64>,
    /// Entries descending from a clamped mean.
    saturated: Vec<bool>,
}

impl GaReliability {
    pub fn design_snr_db(&self) -> f64 {
        self.design_snr_db
    }

    pub fn llr_means(&self) -> &[f64] {
        &self.llr_means
    }
}

impl Reliability for GaReliability {
    fn width(&self) -> u32 {
        self.width
    }

    fn metric(&self) -> &[f64] {
        &self.llr_means
    }

    fn score(&self, index: usize) -> f64 {
        if self.saturated[index] {
            LLR_MEAN_CLAMP
        } else {
            self.llr_means[index]
        }
    }

    fn saturated(&self, index: usize) -> bool {
        self.saturated[index]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BecReliability {
    width: u32,
    erasure_prob: f64,
    z: Vec<f64>,
}

impl BecReliability {
    pub fn erasure_prob(&self) -> f64 {
        self.erasure_prob
    }

    pub fn z(&self) -> &[f64] {
        &self.z
    }
}

impl Reliability for BecReliability {
    fn width(&self) -> u32 {
        self.width
    }

    fn metric(&self) -> &[f64] {
        &self.z
    }

    fn score(&self, index: usize) -> f64 {
        -self.z[index]
    }
}

fn check_width(n: u32) -> Result<()> {
    if n == 0 || n > MAX_WIDTH {
        return domain(format!("width {n} outside 1..={MAX_WIDTH}"));
    }
    Ok(())
}

fn split_levels<T: Copy>(n: u32, root: T, step: impl Fn(T) -> (T, T)) -> Vec<T> {
    let mut values = vec![root];
    for _ in 0..n {
        values = values
            .iter()
            .flat_map(|&v| {
                let (worse, better) = step(v);
                [worse, better]
            })
            .collect();
    }
    values
}

/// GA mean LLRs at design SNR `design_snr_db` (Es/N0 per real dimension).
/// The root mean is `4·Es/N0`.
///
/// Means are clamped at [`LLR_MEAN_CLAMP`]. Clamping does not commute with
/// the check-node update, so every descendant of a clamped mean is marked
/// saturated rather than trusted.
pub fn ga_reliability(n: u32, design_snr_db: f64) -> Result<GaReliability> {
    check_width(n)?;
    if !design_snr_db.is_finite() {
        return domain(format!("design SNR must be finite, got {design_snr_db}"));
    }
    let clamp = |m: f64, sat: bool| (m.min(LLR_MEAN_CLAMP), sat || m >= LLR_MEAN_CLAMP);
    let root = clamp(4.0 * 10f64.powf(design_snr_db / 10.0), false);
    let nodes = split_levels(n, root, |(m, sat)| (clamp(check_node_mean(m), sat), clamp(2.0 * m, sat)));
    let (llr_means, saturated) = nodes.into_iter().unzip();
    Ok(GaReliability {
        width: n,
        design_snr_db,
        llr_means,
        saturated,
    })
}

/// Bhattacharyya parameters of the BEC with erasure probability `eps`.
pub fn bec_reliability(n: u32, eps: f64) -> Result<BecReliability> {
    check_width(n)?;
    if !(eps > 0.0 && eps < 1.0) {
        return domain(format!("erasure probability must lie in (0, 1), got {eps}"));
    }
    let z = split_levels(n, eps, |z| (2.0 * z - z * z, z * z));
    Ok(BecReliability {
        width: n,
        erasure_prob: eps,
        z,
    })
}

/// An oracle's sequence and the number of adjacent ties it had to break.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleOrder {
    pub sequence: ReliabilitySequence,
    pub ties: usize,
}

fn quarter_root_weight(x: usize) -> f64 {
    let mut w = 0.0;
    let mut p = 1.0;
    let mut rest = x;
    while rest != 0 {
        if rest & 1 == 1 {
            w += p;
        }
        p *= BETA_QUARTER_ROOT_TWO;
        rest >>= 1;
    }
    w
}

/// Sorts indices by ascending reliability.
///
/// Exact ties among saturated entries fall back to the polarization-weight
/// order at `β = 2^{1/4}`; remaining ties go to the smaller index. Every tie
/// is counted.
pub fn oracle_order<R: Reliability + ?Sized>(rel: &R) -> OracleOrder {
    let size = rel.metric().len();
    let key = |i: usize| rel.score(i);
    let mut order: Vec<usize> = (0..size).collect();
    order.sort_by(|&a, &b| {
        key(a).total_cmp(&key(b)).then_with(|| {
            if rel.saturated(a) && rel.saturated(b) {
                quarter_root_weight(a).total_cmp(&quarter_root_weight(b))
            } else {
                Ordering::Equal
            }
            .then(a.cmp(&b))
        })
    });
    let ties = order.windows(2).filter(|w| key(w[0]) == key(w[1])).count();
    let sequence = ReliabilitySequence::new(rel.width(), order.into_iter().map(|i| i as u32).collect())
        .expect("oracle order is a permutation");
    OracleOrder { sequence, ties }
}

/// Orients each pair by the oracle metric.
pub fn decide_pairs<R: Reliability + ?Sized>(pairs: &[(u32, u32)], rel: &R) -> Result<Vec<Decision>> {
    let size = rel.metric().len();
    pairs
        .iter()
        .map(|&(x, y)| {
            if x as usize >= size || y as usize >= size {
                return domain(format!("pair ({x}, {y}) out of range"));
            }
            let (sx, sy) = (rel.score(x as usize), rel.score(y as usize));
            match sx.partial_cmp(&sy) {
                Some(Ordering::Less) => Ok(Decision::new(x, y)),
                Some(Ordering::Greater) => Ok(Decision::new(y, x)),
                _ => Err(Error::UndecidablePair { x, y }),
            }
        })
        .collect()
}

/// The orientation every oracle in `ga` agrees on, or `None` when they
/// disagree or one of them ties.
pub fn stable_decision(ga: &[GaReliability], x: u32, y: u32) -> Option<Decision> {
    let mut agreed: Option<Decision> = None;
    for rel in ga {
        let d = decide_pairs(&[(x, y)], rel).ok()?[0];
        match agreed {
            Some(prev) if prev != d => return None,
            _ => agreed = Some(d),
        }
    }
    agreed
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partial_order::dominated;

    #[test]
    fn phi_is_continuous_and_decreasing() {
        let mut prev = phi(0.0);
        assert_eq!(prev, 1.0);
        let mut x = 1e-4;
        while x < 2000.0 {
            let v = phi(x);
            assert!(v < prev, "phi not decreasing at {x}");
            prev = v;
            x *= 1.01;
        }
        let s = large_branch_start();
        assert!(s > 10.0 && s < 20.0);
        assert!((ln_phi_mid(s) - ln_phi_large(s)).abs() < 1e-12);
        assert!((ln_phi_small(SMALL_BRANCH_END) - ln_phi_mid(SMALL_BRANCH_END)).abs() < 1e-5);
    }

    #[test]
    fn phi_inverse_round_trip() {
        let mut m = 1e-3;
        while m <= 100.0 {
            let back = phi_inv(phi(m));
            assert!((back - m).abs() / m < 1e-6, "m={m} back={back}");
            m *= 1.05;
        }
        for m in [500.0, 2000.0, 9000.0] {
            assert!((ln_phi_inv(ln_phi(m)) - m).abs() / m < 1e-9);
        }
    }

    #[test]
    fn bec_small_cases() {
        assert_eq!(bec_reliability(1, 0.5).unwrap().z(), &[0.75, 0.25]);
        assert_eq!(bec_reliability(2, 0.5).unwrap().z(), &[0.9375, 0.5625, 0.4375, 0.0625]);
        let o = oracle_order(&bec_reliability(2, 0.5).unwrap());
        assert_eq!(o.sequence.order(), &[0, 1, 2, 3]);
        assert!(bec_reliability(3, 1.0).is_err());
        assert!(bec_reliability(3, 0.0).is_err());
    }

    #[test]
    fn bec_conserves_mean() {
        for n in 1..=10 {
            for eps in [0.2, 0.5, 0.8] {
                let z = bec_reliability(n, eps).unwrap();
                let mean = z.z().iter().sum::<f64>() / z.z().len() as f64;
                assert!((mean - eps).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn ga_single_split() {
        let g = ga_reliability(1, 1.0).unwrap();
        let root = 4.0 * 10f64.powf(0.1);
        assert!((g.llr_means()[1] - 2.0 * root).abs() < 1e-12);
        assert!(g.llr_means()[0] < root);
        assert_eq!(oracle_order(&g).sequence.order(), &[0, 1]);
    }

    #[test]
    fn ga_orders_small_undecided_pairs() {
        for s in SNR_GRID_DB {
            let g3 = ga_reliability(3, s).unwrap();
            assert_eq!(decide_pairs(&[(3, 4)], &g3).unwrap(), vec![Decision::new(4, 3)]);
            let g4 = ga_reliability(4, s).unwrap();
            let d = decide_pairs(&[(6, 9), (3, 8), (7, 12)], &g4).unwrap();
            assert_eq!(d, vec![Decision::new(6, 9), Decision::new(8, 3), Decision::new(12, 7)]);
        }
    }

    #[test]
    fn ga_sixteen_order() {
        let o = oracle_order(&ga_reliability(4, 2.0).unwrap());
        assert_eq!(o.sequence.order(), &[0, 1, 2, 4, 8, 3, 5, 6, 9, 10, 12, 7, 11, 13, 14, 15]);
        assert_eq!(o.ties, 0);
    }

    #[test]
    fn ga_high_snr_is_finite() {
        let g = ga_reliability(10, 30.0).unwrap();
        assert!(g.llr_means().iter().all(|m| m.is_finite() && *m >= 0.0 && *m <= LLR_MEAN_CLAMP));
        let o = oracle_order(&g);
        assert!(o.ties > 0);
        assert!(o.sequence.upo_violations().is_empty());
    }

    #[test]
    fn ga_grows_with_snr() {
        for n in [3, 6] {
            let grid: Vec<GaReliability> = SNR_GRID_DB.iter().map(|&s| ga_reliability(n, s).unwrap()).collect();
            for w in grid.windows(2) {
                for (a, b) in w[0].llr_means().iter().zip(w[1].llr_means()) {
                    assert!(b > a);
                }
            }
        }
    }

    #[test]
    fn oracles_respect_upo() {
        for n in 1..=8u32 {
            let mut rels: Vec<Box<dyn Reliability>> = Vec::new();
            for eps in [0.2, 0.5, 0.8] {
                rels.push(Box::new(bec_reliability(n, eps).unwrap()));
            }
            for s in SNR_GRID_DB {
                rels.push(Box::new(ga_reliability(n, s).unwrap()));
            }
            let size = 1u32 << n;
            for rel in &rels {
                for x in 0..size {
                    for y in 0..size {
                        if dominated(x, y, n) {
                            assert!(rel.score(x as usize) <= rel.score(y as usize), "n={n} {x}<{y}");
                        }
                    }
                }
                assert!(oracle_order(rel.as_ref()).sequence.upo_violations().is_empty());
            }
        }
    }

    #[test]
    fn undecidable_on_exact_tie() {
        let g = ga_reliability(8, 30.0).unwrap();
        assert_eq!(
            decide_pairs(&[(254, 255)], &g),
            Err(Error::UndecidablePair { x: 254, y: 255 })
        );
        assert!(decide_pairs(&[], &g).unwrap().is_empty());
    }
}
