//! The `key = value` simulation config.

use std::collections::HashSet;

use betapolar::beta_expansion::rank_by_pw;
use betapolar::codec::select_frozen;
use betapolar::oracles::{bec_reliability, ga_reliability, oracle_order};
use betapolar::{Modulation, ReliabilitySequence, SimConfig};

use crate::CliError;

/// Ranking used to pick the frozen set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Construction {
    Beta(f64),
    Ga(f64),
    Bec(f64),
}

impl Construction {
    pub fn parse(text: &str) -> Result<Self, String> {
        let (kind, value) = text
            .split_once(':')
            .ok_or_else(|| format!("construction {text:?} is not kind:value"))?;
        let v: f64 = value
            .trim()
            .parse()
            .map_err(|_| format!("construction value {value:?} is not a number"))?;
        match kind.trim() {
            "beta" => Ok(Self::Beta(v)),
            "ga" => Ok(Self::Ga(v)),
            "bec" => Ok(Self::Bec(v)),
            other => Err(format!("unknown construction {other:?} (beta, ga or bec)")),
        }
    }

    pub fn sequence(self, n: u32) -> betapolar::Result<ReliabilitySequence> {
        match self {
            Self::Beta(b) => rank_by_pw(n, b),
            Self::Ga(snr) => Ok(oracle_order(&ga_reliability(n, snr)?).sequence),
            Self::Bec(eps) => Ok(oracle_order(&bec_reliability(n, eps)?).sequence),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationFile {
    pub n: u32,
    pub k: usize,
    pub crc: u32,
    pub list: usize,
    pub modulation: Modulation,
    pub snr_db: Vec<f64>,
    pub seed: u64,
    pub max_trials: u64,
    pub target_errors: u64,
    pub construction: Construction,
}

const KEYS: [&str; 10] = [
    "n",
    "k",
    "crc",
    "list",
    "modulation",
    "snr_db",
    "seed",
    "max_trials",
    "target_errors",
    "construction",
];

fn number<T: std::str::FromStr>(no: usize, key: &str, value: &str) -> Result<T, CliError> {
    value
        .parse()
        .map_err(|_| CliError::Usage(format!("line {no}: {key} = {value:?} is not a valid value")))
}

impl SimulationFile {
    /// Parses the config text. Blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut seen = HashSet::new();
        let mut cfg = Self {
            n: 0,
            k: 0,
            crc: 0,
            list: 1,
            modulation: Modulation::Bpsk,
            snr_db: Vec::new(),
            seed: 0,
            max_trials: 10_000,
            target_errors: 100,
            construction: Construction::Beta(betapolar::BETA_QUARTER_ROOT_TWO),
        };
        for (i, raw) in text.lines().enumerate() {
            let no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("line {no}: expected key = value, got {raw:?}")))?;
            let (key, value) = (key.trim(), value.trim());
            if !KEYS.contains(&key) {
                return Err(CliError::Usage(format!("line {no}: unknown key {key:?}")));
            }
            if !seen.insert(key.to_string()) {
                return Err(CliError::Usage(format!("line {no}: duplicate key {key:?}")));
            }
            match key {
                "n" => cfg.n = number(no, key, value)?,
                "k" => cfg.k = number(no, key, value)?,
                "crc" => cfg.crc = number(no, key, value)?,
                "list" => cfg.list = number(no, key, value)?,
                "modulation" => {
                    cfg.modulation = value
                        .parse()
                        .map_err(|e| CliError::Usage(format!("line {no}: {e}")))?
                }
                "snr_db" => {
                    cfg.snr_db = value
                        .split(|c: char| c == ',' || c.is_whitespace())
                        .filter(|s| !s.is_empty())
                        .map(|s| number(no, key, s))
                        .collect::<Result<_, _>>()?
                }
                "seed" => cfg.seed = number(no, key, value)?,
                "max_trials" => cfg.max_trials = number(no, key, value)?,
                "target_errors" => cfg.target_errors = number(no, key, value)?,
                "construction" => {
                    cfg.construction =
                        Construction::parse(value).map_err(|e| CliError::Usage(format!("line {no}: {e}")))?
                }
                _ => unreachable!(),
            }
        }
        for required in ["n", "k", "snr_db"] {
            if !seen.contains(required) {
                return Err(CliError::Usage(format!("missing key {required:?}")));
            }
        }
        if !(1..=16).contains(&cfg.n) {
            return Err(CliError::Usage(format!("n = {} outside 1..=16", cfg.n)));
        }
        if cfg.snr_db.is_empty() {
            return Err(CliError::Usage("snr_db lists no points".into()));
        }
        Ok(cfg)
    }

    pub fn to_sim(&self) -> Result<SimConfig, CliError> {
        let seq = self.construction.sequence(self.n)?;
        let code = select_frozen(&seq, self.k, self.crc as usize)?.with_list_size(self.list)?;
        let sim = SimConfig {
            code,
            modulation: self.modulation,
            snr_points_db: self.snr_db.clone(),
            max_trials: self.max_trials,
            target_errors: self.target_errors,
            seed: self.seed,
        };
        sim.validate()?;
        Ok(sim)
    }
}
