//! AWGN Monte-Carlo BLER estimation and the β-interval convergence study.
//!
//! SNRs are Es/N0 per real dimension, in dB: each coded bit rides on one
//! unit-energy real dimension with noise variance `σ² = 1 / (2·Es/N0)`.
//! QPSK carries two bits per symbol on independent I/Q dimensions with Gray
//! mapping, so per-bit statistics match BPSK at the same per-dimension SNR.

use std::collections::HashSet;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::beta_expansion::{
    constraining_pairs, decisive_pairs, order_for_interval, refine_interval, BetaInterval, ConstrainingPair,
    Decision, ReliabilitySequence,
};
use crate::codec::{scl_decode_traced, CodeConfig, LLR_CLAMP};
use crate::error::{domain, Error, Result};
use crate::partial_order::{compare_values, UpoOrdering};
use crate::oracles::{ga_reliability, stable_decision, GaReliability, SNR_GRID_DB};
use crate::BETA_QUARTER_ROOT_TWO;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Modulation {
    #[default]
    Bpsk,
    Qpsk,
}

impl Modulation {
    pub fn bits_per_symbol(self) -> usize {
        match self {
            Modulation::Bpsk => 1,
            Modulation::Qpsk => 2,
        }
    }
}

impl fmt::Display for Modulation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Modulation::Bpsk => "bpsk",
            Modulation::Qpsk => "qpsk",
        })
    }
}

impl std::str::FromStr for Modulation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "bpsk" => Ok(Modulation::Bpsk),
            "qpsk" => Ok(Modulation::Qpsk),
            _ => domain(format!("unknown modulation {s:?}")),
        }
    }
}

/// Noise standard deviation per real dimension; zero for infinite SNR.
pub fn noise_sigma(snr_db: f64) -> f64 {
    if snr_db == f64::INFINITY {
        0.0
    } else {
        (0.5 / 10f64.powf(snr_db / 10.0)).sqrt()
    }
}

/// Eb/N0 of a rate-`rate` code at per-dimension Es/N0 `snr_db`.
pub fn es_n0_to_eb_n0(snr_db: f64, rate: f64) -> f64 {
    snr_db - 10.0 * rate.log10()
}

pub fn eb_n0_to_es_n0(eb_n0_db: f64, rate: f64) -> f64 {
    eb_n0_db + 10.0 * rate.log10()
}

/// Es/N0 per modulated symbol: per-dimension SNR plus 10·log10(bits/symbol).
pub fn symbol_es_n0(snr_db: f64, modulation: Modulation) -> f64 {
    snr_db + 10.0 * (modulation.bits_per_symbol() as f64).log10()
}

/// Maps `x` onto antipodal dimensions (`0 → +1`), adds noise and returns
/// per-bit LLRs `2y/σ²`. QPSK pairs consecutive bits as (I, Q).
pub fn transmit<R: Rng + ?Sized>(x: &[u8], snr_db: f64, modulation: Modulation, rng: &mut R) -> Vec<f64> {
    let sigma = noise_sigma(snr_db);
    let symbol = |b: u8| 1.0 - 2.0 * f64::from(b & 1);
    if sigma == 0.0 {
        return x.iter().map(|&b| symbol(b) * LLR_CLAMP).collect();
    }
    let scale = 2.0 / (sigma * sigma);
    let mut out = Vec::with_capacity(x.len());
    match modulation {
        Modulation::Bpsk => {
            for &b in x {
                let n: f64 = rng.sample(StandardNormal);
                out.push(scale * (symbol(b) + sigma * n));
            }
        }
        Modulation::Qpsk => {
            for pair in x.chunks(2) {
                // one complex noise sample per symbol
                let ni: f64 = rng.sample(StandardNormal);
                let nq: f64 = rng.sample(StandardNormal);
                out.push(scale * (symbol(pair[0]) + sigma * ni));
                if let Some(&q) = pair.get(1) {
                    out.push(scale * (symbol(q) + sigma * nq));
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub code: CodeConfig,
    pub modulation: Modulation,
    pub snr_points_db: Vec<f64>,
    pub max_trials: u64,
    pub target_errors: u64,
    pub seed: u64,
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_trials == 0 {
            return domain("max_trials must be at least 1");
        }
        if self.target_errors == 0 {
            return domain("target_errors must be at least 1");
        }
        if self.snr_points_db.is_empty() {
            return domain("no SNR points");
        }
        if let Some(s) = self.snr_points_db.iter().find(|s| s.is_nan() || **s == f64::NEG_INFINITY) {
            return domain(format!("invalid SNR point {s}"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlerPoint {
    pub snr_db: f64,
    pub trials: u64,
    pub block_errors: u64,
    pub bler: f64,
    /// 95% normal-approximation binomial half-width.
    pub half_width_95: f64,
    /// Block errors whose decoded word still passed the CRC.
    pub undetected_errors: u64,
}

impl BlerPoint {
    fn new(snr_db: f64, trials: u64, block_errors: u64, undetected_errors: u64) -> Self {
        let bler = if trials == 0 { 0.0 } else { block_errors as f64 / trials as f64 };
        let half_width_95 = if trials == 0 {
            0.0
        } else {
            1.96 * (bler * (1.0 - bler) / trials as f64).sqrt()
        };
        Self {
            snr_db,
            trials,
            block_errors,
            bler,
            half_width_95,
            undetected_errors,
        }
    }

    /// Whether the point reached its error target.
    pub fn is_resolved(&self, target_errors: u64) -> bool {
        self.block_errors >= target_errors
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// The independent stream of one trial.
pub fn trial_rng(seed: u64, snr_index: usize, trial: u64) -> ChaCha8Rng {
    let s = splitmix64(splitmix64(splitmix64(seed) ^ snr_index as u64) ^ trial);
    ChaCha8Rng::seed_from_u64(s)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct TrialOutcome {
    error: bool,
    undetected: bool,
}

fn run_trial(sim: &SimConfig, snr_db: f64, rng: &mut ChaCha8Rng) -> TrialOutcome {
    let code = &sim.code;
    let info: Vec<u8> = (0..code.info_count()).map(|_| rng.random_range(0..2u8)).collect();
    let word = code.encode_info(&info).expect("info length matches the code");
    let llr = transmit(&word.x, snr_db, sim.modulation, rng);
    let out = scl_decode_traced(&llr, code).expect("LLR length matches the code");
    let error = out.bits[..info.len()] != info[..];
    TrialOutcome {
        error,
        undetected: error && code.crc_bits() > 0 && out.crc_passed,
    }
}

const BATCH: u64 = 256;

/// Simulates every SNR point until `target_errors` block errors or
/// `max_trials` trials. Trials run in parallel batches and are then counted
/// in trial order, so the result does not depend on the thread count.
pub fn run_bler(sim: &SimConfig) -> Result<Vec<BlerPoint>> {
    sim.validate()?;
    let mut points = Vec::with_capacity(sim.snr_points_db.len());
    for (si, &snr_db) in sim.snr_points_db.iter().enumerate() {
        let (mut trials, mut errors, mut undetected) = (0u64, 0u64, 0u64);
        'batches: while trials < sim.max_trials {
            let end = (trials + BATCH).min(sim.max_trials);
            let outcomes: Vec<TrialOutcome> = (trials..end)
                .into_par_iter()
                .map(|t| run_trial(sim, snr_db, &mut trial_rng(sim.seed, si, t)))
                .collect();
            for o in outcomes {
                trials += 1;
                errors += u64::from(o.error);
                undetected += u64::from(o.undetected);
                if errors >= sim.target_errors {
                    break 'batches;
                }
            }
        }
        points.push(BlerPoint::new(snr_db, trials, errors, undetected));
    }
    Ok(points)
}

/// SNR at which the BLER curve crosses `target`, interpolated linearly in
/// `log(BLER)` between the bracketing points.
pub fn required_snr(points: &[BlerPoint], target: f64) -> Result<f64> {
    if !(target > 0.0 && target < 1.0) {
        return domain(format!("target BLER {target} outside (0, 1)"));
    }
    let mut sorted: Vec<&BlerPoint> = points.iter().collect();
    sorted.sort_by(|a, b| a.snr_db.total_cmp(&b.snr_db));
    if let Some(p) = sorted.iter().find(|p| p.bler == target) {
        return Ok(p.snr_db);
    }
    for w in sorted.windows(2) {
        let (a, b) = (w[0], w[1]);
        if a.bler > target && b.bler < target {
            if b.bler == 0.0 {
                return Err(Error::OutOfRange(format!(
                    "BLER drops from {} to 0 between {} and {} dB; cannot interpolate",
                    a.bler, a.snr_db, b.snr_db
                )));
            }
            let t = (target.ln() - a.bler.ln()) / (b.bler.ln() - a.bler.ln());
            return Ok(a.snr_db + t * (b.snr_db - a.snr_db));
        }
    }
    Err(Error::OutOfRange(format!("BLER curve never crosses {target}")))
}

/// Runs `sim` and interpolates the SNR at `target`.
pub fn required_snr_for(sim: &SimConfig, target: f64) -> Result<f64> {
    required_snr(&run_bler(sim)?, target)
}

/// Orientation of pairs the GA grid cannot orient consistently: keep
/// `target` inside the interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaPolicy {
    pub target: f64,
}

impl Default for BetaPolicy {
    fn default() -> Self {
        Self {
            target: BETA_QUARTER_ROOT_TWO,
        }
    }
}

/// What to do when GA-stable decisions admit no common β.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ConflictPolicy {
    /// Stop with [`Error::Infeasible`].
    #[default]
    Fail,
    /// Re-orient every decision disagreeing with the β policy.
    PreferBeta,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StudyConfig {
    pub n_max: u32,
    pub snr_grid_db: Vec<f64>,
    pub beta_policy: BetaPolicy,
    pub conflict: ConflictPolicy,
}

impl Default for StudyConfig {
    fn default() -> Self {
        Self {
            n_max: 10,
            snr_grid_db: SNR_GRID_DB.to_vec(),
            beta_policy: BetaPolicy::default(),
            conflict: ConflictPolicy::Fail,
        }
    }
}

/// One doubling step `N/2 -> N`.
#[derive(Debug, Clone, PartialEq)]
pub struct StudyRow {
    pub width: u32,
    pub interval: BetaInterval,
    /// Constraining pairs adjacent in the refined order.
    pub new_pairs: usize,
    /// All incomparable pairs whose order flips inside the previous interval.
    pub constraining: usize,
    /// Pairs oriented by the β policy because the grid disagreed.
    pub policy_oriented: usize,
    /// GA decisions overridden under [`ConflictPolicy::PreferBeta`].
    pub overridden: usize,
    /// Adjacent pairs of the refined order straddling the two halves and left
    /// open by the UPO, counted once per twin `(x, y) ~ (N-1-y, N-1-x)`.
    pub upo_unknown_classes: usize,
}

impl StudyRow {
    /// `"N/2->N"`.
    pub fn step(&self) -> String {
        format!("{}->{}", 1u64 << (self.width - 1), 1u64 << self.width)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Study {
    pub rows: Vec<StudyRow>,
    /// The width at which the study stopped, and why.
    pub failure: Option<(u32, Error)>,
}

impl Study {
    pub fn into_result(self) -> Result<Vec<StudyRow>> {
        match self.failure {
            Some((_, e)) => Err(e),
            None => Ok(self.rows),
        }
    }
}

/// Refines the β interval width by width, `n = 3..=n_max`, orienting each
/// constraining pair by GA across the SNR grid.
pub fn convergence_study(config: &StudyConfig) -> Result<Study> {
    if config.n_max > 12 {
        return domain(format!("n_max {} above 12", config.n_max));
    }
    if config.snr_grid_db.is_empty() {
        return domain("empty SNR grid");
    }
    let mut rows = Vec::new();
    let mut interval = BetaInterval::FULL;
    for n in 3..=config.n_max {
        match study_step(n, interval, config) {
            Ok(row) => {
                interval = row.interval;
                rows.push(row);
            }
            Err(e) => {
                return Ok(Study {
                    rows,
                    failure: Some((n, e)),
                })
            }
        }
    }
    Ok(Study { rows, failure: None })
}

fn study_step(n: u32, interval: BetaInterval, config: &StudyConfig) -> Result<StudyRow> {
    let cps: Vec<ConstrainingPair> = constraining_pairs(n, interval)?;
    let ga: Vec<GaReliability> = config
        .snr_grid_db
        .iter()
        .map(|&s| ga_reliability(n, s))
        .collect::<Result<_>>()?;
    let target = config.beta_policy.target;
    let mut policy_oriented = 0;
    let mut decisions: Vec<Decision> = cps
        .iter()
        .map(|c| {
            stable_decision(&ga, c.x, c.y).unwrap_or_else(|| {
                policy_oriented += 1;
                Decision::from_beta(c.x, c.y, target)
            })
        })
        .collect();

    let mut overridden = 0;
    let refined = match refine_interval(n, interval, &decisions) {
        Err(Error::Infeasible { .. }) if config.conflict == ConflictPolicy::PreferBeta => {
            for d in decisions.iter_mut() {
                let preferred = Decision::from_beta(d.less, d.greater, target);
                if preferred != *d {
                    *d = preferred;
                    overridden += 1;
                }
            }
            refine_interval(n, interval, &decisions)?
        }
        other => other?,
    };

    let order = order_for_interval(n, refined)?;
    Ok(StudyRow {
        width: n,
        interval: refined,
        new_pairs: decisive_pairs(&order, &cps).len(),
        constraining: cps.len(),
        policy_oriented,
        overridden,
        upo_unknown_classes: upo_unknown_classes(&order),
    })
}

fn upo_unknown_classes(order: &ReliabilitySequence) -> usize {
    let n = order.width();
    let top = (1u32 << n) - 1;
    let half = 1u32 << (n - 1);
    let classes: HashSet<(u32, u32)> = order
        .adjacent()
        .filter(|&(a, b)| (a < half) != (b < half))
        .filter(|&(a, b)| compare_values(a, b, n) == UpoOrdering::Incomparable)
        .map(|(a, b)| {
            let (x, y) = (a.min(b), a.max(b));
            (x, y).min((top - y, top - x))
        })
        .collect();
    classes.len()
}
