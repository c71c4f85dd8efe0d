use super::{check_node, clamp, variable_node, CheckNode, CodeConfig};
use crate::error::{domain, Result};

/// Result of list decoding.
#[derive(Debug, Clone, PartialEq)]
pub struct SclOutcome {
    /// The `K + crc` non-frozen decisions of the chosen path, index order.
    pub bits: Vec<u8>,
    /// Whether the chosen path passed the CRC (always true without CRC).
    pub crc_passed: bool,
    pub metric: f64,
    /// Path metric after every leaf, when traced.
    pub metric_history: Vec<f64>,
}

/// CRC-aided SCL decoding with the list size of `config`.
pub fn scl_decode(llr: &[f64], config: &CodeConfig) -> Result<Vec<u8>> {
    Decoder::new(llr, config, false)?.run().map(|o| o.bits)
}

/// As [`scl_decode`], also recording the chosen path's metric history.
pub fn scl_decode_traced(llr: &[f64], config: &CodeConfig) -> Result<SclOutcome> {
    Decoder::new(llr, config, true)?.run()
}

/// `ln(1 + e^x)`.
#[inline]
fn softplus(x: f64) -> f64 {
    if x > 0.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

/// Per-path decoder state. Depth `d` of the decoding tree (1..=n) has
/// `2^{n-d}` entries stored at `offset(d) = N - 2^{n-d+1}`; the channel is
/// depth 0 and shared.
#[derive(Clone)]
struct Path {
    llr: Vec<f64>,
    /// Re-encoded bits of the most recent left child at each depth.
    psum: Vec<u8>,
    u: Vec<u8>,
    metric: f64,
    history: Vec<f64>,
}

struct Decoder<'a> {
    config: &'a CodeConfig,
    channel: Vec<f64>,
    n: u32,
    size: usize,
    kind: CheckNode,
    trace: bool,
    scratch: Vec<u8>,
}

impl<'a> Decoder<'a> {
    fn new(llr: &[f64], config: &'a CodeConfig, trace: bool) -> Result<Self> {
        let size = config.block_length();
        if llr.len() != size {
            return domain(format!("{} LLRs for a block of length {size}", llr.len()));
        }
        Ok(Self {
            config,
            channel: llr.iter().map(|&l| clamp(l)).collect(),
            n: config.width(),
            size,
            kind: config.check_node(),
            trace,
            scratch: vec![0; size],
        })
    }

    fn offset(&self, depth: u32) -> usize {
        self.size - (1usize << (self.n - depth + 1))
    }

    /// Fills depths on the way to leaf `i` and returns the leaf LLR.
    fn descend(&self, path: &mut Path, i: usize) -> f64 {
        if self.n == 0 {
            return self.channel[0];
        }
        let first = if i == 0 { 1 } else { self.n - i.trailing_zeros() };
        for d in first..=self.n {
            let half = 1usize << (self.n - d);
            let off = self.offset(d);
            let (head, tail) = path.llr.split_at_mut(off);
            let parent: &[f64] = if d == 1 { &self.channel } else { &head[self.offset(d - 1)..] };
            let child = &mut tail[..half];
            if i != 0 && d == first {
                let left = &path.psum[off..off + half];
                for k in 0..half {
                    child[k] = variable_node(parent[k], parent[k + half], left[k]);
                }
            } else {
                for k in 0..half {
                    child[k] = check_node(parent[k], parent[k + half], self.kind);
                }
            }
        }
        path.llr[self.size - 2]
    }

    fn decide(&mut self, path: &mut Path, i: usize, bit: u8, metric: f64) {
        path.u[i] = bit;
        path.metric = metric;
        if self.trace {
            path.history.push(metric);
        }
        let buf = &mut self.scratch;
        buf[0] = bit;
        let mut len = 1usize;
        let mut depth = self.n;
        let mut idx = i;
        while depth > 0 {
            let off = self.size - (1usize << (self.n - depth + 1));
            if idx & 1 == 0 {
                path.psum[off..off + len].copy_from_slice(&buf[..len]);
                break;
            }
            let left = &path.psum[off..off + len];
            for k in 0..len {
                buf[len + k] = buf[k];
                buf[k] ^= left[k];
            }
            len *= 2;
            depth -= 1;
            idx >>= 1;
        }
    }

    fn run(mut self) -> Result<SclOutcome> {
        let list = self.config.list_size();
        let span = self.size.saturating_sub(1);
        let mut paths = vec![Path {
            llr: vec![0.0; span],
            psum: vec![0; span],
            u: vec![0; self.size],
            metric: 0.0,
            history: Vec::new(),
        }];
        let mut leaf = Vec::with_capacity(list);
        for i in 0..self.size {
            leaf.clear();
            for p in paths.iter_mut() {
                leaf.push(self.descend(p, i));
            }
            if self.config.is_frozen(i) {
                for (p, &l) in paths.iter_mut().zip(&leaf) {
                    let m = p.metric + softplus(-l);
                    self.decide(p, i, 0, m);
                }
                continue;
            }
            // (metric, bit, path)
            let mut cands: Vec<(f64, u8, usize)> = Vec::with_capacity(2 * paths.len());
            for (j, (p, &l)) in paths.iter().zip(&leaf).enumerate() {
                cands.push((p.metric + softplus(-l), 0, j));
                cands.push((p.metric + softplus(l), 1, j));
            }
            if cands.len() > list {
                cands.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
                cands.truncate(list);
            }
            let mut keep: Vec<[Option<f64>; 2]> = vec![[None, None]; paths.len()];
            for &(m, bit, j) in &cands {
                keep[j][bit as usize] = Some(m);
            }
            let mut next = Vec::with_capacity(list);
            for (mut p, k) in paths.into_iter().zip(keep) {
                match k {
                    [Some(m0), Some(m1)] => {
                        let mut q = p.clone();
                        self.decide(&mut p, i, 0, m0);
                        self.decide(&mut q, i, 1, m1);
                        next.push(p);
                        next.push(q);
                    }
                    [Some(m0), None] => {
                        self.decide(&mut p, i, 0, m0);
                        next.push(p);
                    }
                    [None, Some(m1)] => {
                        self.decide(&mut p, i, 1, m1);
                        next.push(p);
                    }
                    [None, None] => {}
                }
            }
            paths = next;
        }

        paths.sort_by(|a, b| a.metric.total_cmp(&b.metric));
        let positions = self.config.info_positions();
        let payload = |p: &Path| -> Vec<u8> { positions.iter().map(|&q| p.u[q]).collect() };
        let crc = self.config.crc();
        let chosen = if crc.width() == 0 {
            Some(0)
        } else {
            paths.iter().position(|p| crc.check(&payload(p)))
        };
        let (idx, crc_passed) = match chosen {
            Some(j) => (j, true),
            None => (0, false),
        };
        let best = &paths[idx];
        Ok(SclOutcome {
            bits: payload(best),
            crc_passed,
            metric: best.metric,
            metric_history: best.history.clone(),
        })
    }
}
