use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors raised by the construction, decoding and simulation routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument is outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The request would need more memory or time than the operation allows.
    #[error("resource limit: {0}")]
    Resource(String),

    /// Two channel indices receive the same polarization weight at `beta`.
    #[error("ill-conditioned beta {beta}: indices {x} and {y} tie{}", breakpoint_note(*.breakpoint))]
    IllConditionedBeta {
        beta: f64,
        x: u32,
        y: u32,
        breakpoint: Option<f64>,
    },

    /// A β interval contains a breakpoint, so its order is not constant.
    #[error("interval ({lo}, {hi}) contains breakpoint {breakpoint}")]
    AmbiguousInterval { lo: f64, hi: f64, breakpoint: f64 },

    /// Pair orientations admit no common β.
    #[error("infeasible constraints: no beta satisfies {}", format_pairs(.pairs))]
    Infeasible { pairs: Vec<(u32, u32)> },

    /// The oracle assigns identical reliability to both indices.
    #[error("undecidable pair ({x}, {y}): oracle metric ties")]
    UndecidablePair { x: u32, y: u32 },

    /// No bracketing SNR points around the target BLER.
    #[error("out of range: {0}")]
    OutOfRange(String),
}

fn breakpoint_note(bp: Option<f64>) -> String {
    match bp {
        Some(b) => format!(" at breakpoint {b:.9}"),
        None => String::new(),
    }
}

fn format_pairs(pairs: &[(u32, u32)]) -> String {
    pairs
        .iter()
        .map(|(a, b)| format!("{a}<{b}"))
        .collect::<Vec<_>>()
        .join(", ")
}

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
