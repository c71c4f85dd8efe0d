//! Polar encoder, successive-cancellation (SC) and CRC-aided SC-list (SCL)
//! decoders.
//!
//! Bits are in natural order: `u[i]` rides on synthetic channel `i`, with
//! no bit-reversal permutation, so reliability sequences map directly onto
//! positions of `u`.

mod crc;
mod sc;
mod scl;

pub use crc::Crc;
pub use sc::{sc_decode, sc_decode_with};
pub use scl::{scl_decode, scl_decode_traced, SclOutcome};

use crate::beta_expansion::ReliabilitySequence;
use crate::error::{domain, Result};

/// Channel LLRs and intermediate messages are clamped to `±LLR_CLAMP`.
pub const LLR_CLAMP: f64 = 40.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum CheckNode {
    /// `2 atanh(tanh(a/2) tanh(b/2))`.
    #[default]
    Exact,
    /// `sign(a) sign(b) min(|a|, |b|)`.
    MinSum,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeConfig {
    width: u32,
    info_count: usize,
    crc: Crc,
    list_size: usize,
    check_node: CheckNode,
    frozen: Vec<bool>,
    info_positions: Vec<usize>,
}

impl CodeConfig {
    /// A code with an explicit frozen set.
    pub fn new(width: u32, info_count: usize, crc: Crc, frozen_set: &[usize]) -> Result<Self> {
        if width > 16 {
            return domain(format!("block length 2^{width} too large"));
        }
        let size = 1usize << width;
        let payload = info_count + crc.width() as usize;
        if payload > size {
            return domain(format!("K + crc = {payload} exceeds N = {size}"));
        }
        let mut frozen = vec![false; size];
        for &f in frozen_set {
            if f >= size {
                return domain(format!("frozen index {f} out of range"));
            }
            if frozen[f] {
                return domain(format!("frozen index {f} listed twice"));
            }
            frozen[f] = true;
        }
        if frozen_set.len() != size - payload {
            return domain(format!(
                "frozen set has {} entries, expected N - K - crc = {}",
                frozen_set.len(),
                size - payload
            ));
        }
        let info_positions = (0..size).filter(|&i| !frozen[i]).collect();
        Ok(Self {
            width,
            info_count,
            crc,
            list_size: 1,
            check_node: CheckNode::Exact,
            frozen,
            info_positions,
        })
    }

    pub fn with_list_size(mut self, list_size: usize) -> Result<Self> {
        if list_size == 0 {
            return domain("list size must be at least 1");
        }
        self.list_size = list_size;
        Ok(self)
    }

    pub fn with_check_node(mut self, check_node: CheckNode) -> Self {
        self.check_node = check_node;
        self
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn block_length(&self) -> usize {
        self.frozen.len()
    }

    pub fn info_count(&self) -> usize {
        self.info_count
    }

    pub fn crc(&self) -> Crc {
        self.crc
    }

    pub fn crc_bits(&self) -> usize {
        self.crc.width() as usize
    }

    pub fn list_size(&self) -> usize {
        self.list_size
    }

    pub fn check_node(&self) -> CheckNode {
        self.check_node
    }

    pub fn is_frozen(&self, i: usize) -> bool {
        self.frozen[i]
    }

    pub fn frozen_mask(&self) -> &[bool] {
        &self.frozen
    }

    pub fn frozen_set(&self) -> Vec<usize> {
        (0..self.frozen.len()).filter(|&i| self.frozen[i]).collect()
    }

    /// Non-frozen positions in index order; info bits then CRC bits.
    pub fn info_positions(&self) -> &[usize] {
        &self.info_positions
    }

    /// Places the `K + crc` payload bits into a length-`N` `u`.
    pub fn embed(&self, payload: &[u8]) -> Result<Vec<u8>> {
        if payload.len() != self.info_positions.len() {
            return domain(format!(
                "payload has {} bits, expected {}",
                payload.len(),
                self.info_positions.len()
            ));
        }
        let mut u = vec![0u8; self.block_length()];
        for (&p, &b) in self.info_positions.iter().zip(payload) {
            u[p] = b & 1;
        }
        Ok(u)
    }

    /// Attaches the CRC to `info` and encodes.
    pub fn encode_info(&self, info: &[u8]) -> Result<Codeword> {
        if info.len() != self.info_count {
            return domain(format!("expected {} info bits, got {}", self.info_count, info.len()));
        }
        let u = self.embed(&self.crc.attach(info))?;
        let x = polar_transform(&u);
        Ok(Codeword { u, x })
    }
}

/// Freezes the `N - K - crc` least reliable positions of `seq`.
pub fn select_frozen(seq: &ReliabilitySequence, info_count: usize, crc_bits: usize) -> Result<CodeConfig> {
    let size = seq.order().len();
    let payload = info_count + crc_bits;
    if payload > size {
        return domain(format!("K + crc = {payload} exceeds N = {size}"));
    }
    let frozen: Vec<usize> = seq.order()[..size - payload].iter().map(|&i| i as usize).collect();
    CodeConfig::new(seq.width(), info_count, Crc::new(crc_bits as u32)?, &frozen)
}

/// The input `u` and its image `x = u F^{⊗n}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Codeword {
    pub u: Vec<u8>,
    pub x: Vec<u8>,
}

/// `x = u F^{⊗n}` over GF(2), `F = [[1, 0], [1, 1]]`. Self-inverse.
pub fn polar_transform(u: &[u8]) -> Vec<u8> {
    let mut x = u.to_vec();
    let size = x.len();
    let mut half = 1;
    while half < size {
        for block in (0..size).step_by(2 * half) {
            for k in block..block + half {
                x[k] ^= x[k + half];
            }
        }
        half *= 2;
    }
    x
}

/// [`polar_transform`] for a length-`2^n` input.
pub fn encode(u: &[u8], n: u32) -> Result<Vec<u8>> {
    if n > 16 || u.len() != 1usize << n {
        return domain(format!("input length {} is not 2^{n}", u.len()));
    }
    Ok(polar_transform(u))
}

#[inline]
pub(crate) fn clamp(l: f64) -> f64 {
    l.clamp(-LLR_CLAMP, LLR_CLAMP)
}

/// Check-node update in the numerically stable form
/// `sign·min(|a|,|b|) + ln(1+e^{-|a+b|}) - ln(1+e^{-|a-b|})`.
#[inline]
pub(crate) fn check_node(a: f64, b: f64, kind: CheckNode) -> f64 {
    let m = a.abs().min(b.abs());
    let hard = if (a < 0.0) != (b < 0.0) { -m } else { m };
    let v = match kind {
        CheckNode::MinSum => hard,
        CheckNode::Exact => hard + (-(a + b).abs()).exp().ln_1p() - (-(a - b).abs()).exp().ln_1p(),
    };
    clamp(v)
}

#[inline]
pub(crate) fn variable_node(a: f64, b: f64, left_bit: u8) -> f64 {
    clamp(if left_bit == 0 { b + a } else { b - a })
}
