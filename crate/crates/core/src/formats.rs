//! Stable text renderings. Reals use 6 fractional digits; lines end in LF.

use std::fmt::Write;

use crate::beta_expansion::{BetaInterval, BreakpointSet, ReliabilitySequence};
use crate::error::{domain, Result};
use crate::oracles::Reliability;
use crate::partial_order::PartialOrderSet;
use crate::simulation::{BlerPoint, StudyRow};

pub fn real(v: f64) -> String {
    if v == f64::INFINITY {
        "inf".into()
    } else if v == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        format!("{v:.6}")
    }
}

/// `"lo hi\n"` per cover edge, ascending.
pub fn edge_list(set: &PartialOrderSet) -> String {
    let mut out = String::new();
    for e in set.edges() {
        let _ = writeln!(out, "{} {}", e.lo, e.hi);
    }
    out
}

/// A DOT digraph with every index as a node and one `lo -> hi` per edge.
pub fn dot(set: &PartialOrderSet) -> String {
    let mut out = format!("digraph upo{} {{\n", set.width());
    for i in 0..1u32 << set.width() {
        let _ = writeln!(out, "  {i};");
    }
    for e in set.edges() {
        let _ = writeln!(out, "  {} -> {};", e.lo, e.hi);
    }
    out.push_str("}\n");
    out
}

/// Where a sequence came from, for the file header.
#[derive(Debug, Clone, PartialEq)]
pub enum SequenceSource {
    Beta(f64),
    Interval(BetaInterval),
    Oracle(String),
}

/// Header `# n=<n> beta=<value|interval>` (or `oracle=<spec>`), then one
/// index per line in ascending reliability.
pub fn sequence_file(seq: &ReliabilitySequence, source: &SequenceSource) -> String {
    let label = match source {
        SequenceSource::Beta(b) => format!("beta={}", real(*b)),
        SequenceSource::Interval(iv) => format!("beta={iv}"),
        SequenceSource::Oracle(spec) => format!("oracle={spec}"),
    };
    let mut out = format!("# n={} {label}\n", seq.width());
    for i in seq.order() {
        let _ = writeln!(out, "{i}");
    }
    out
}

/// Parses a sequence file, ignoring `#` lines and blanks.
pub fn parse_sequence_file(text: &str) -> Result<ReliabilitySequence> {
    let mut order = Vec::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        match line.parse::<u32>() {
            Ok(v) => order.push(v),
            Err(_) => return domain(format!("line {}: expected an index, got {line:?}", no + 1)),
        }
    }
    let len = order.len();
    if !len.is_power_of_two() || len < 2 {
        return domain(format!("{len} indices is not a block length"));
    }
    ReliabilitySequence::new(len.trailing_zeros(), order)
}

/// `value<TAB>polynomial` per interior breakpoint, ascending.
pub fn breakpoint_report(set: &BreakpointSet) -> String {
    let mut out = String::new();
    for b in set.interior() {
        let _ = writeln!(out, "{}\t{}", real(b.value), b.polynomial);
    }
    out
}

/// `index,metric` per line.
pub fn oracle_csv<R: Reliability + ?Sized>(rel: &R) -> String {
    let mut out = String::from("index,metric\n");
    for (i, m) in rel.metric().iter().enumerate() {
        let _ = writeln!(out, "{i},{}", real(*m));
    }
    out
}

pub fn bler_csv(points: &[BlerPoint]) -> String {
    let mut out = String::from("snr_db,trials,block_errors,bler,ci95\n");
    for p in points {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            real(p.snr_db),
            p.trials,
            p.block_errors,
            real(p.bler),
            real(p.half_width_95)
        );
    }
    out
}

pub fn study_tsv(rows: &[StudyRow]) -> String {
    let mut out = String::from("step\tlo\thi\tnew_pairs\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}",
            r.step(),
            real(r.interval.lo()),
            real(r.interval.hi()),
            r.new_pairs
        );
    }
    out
}
