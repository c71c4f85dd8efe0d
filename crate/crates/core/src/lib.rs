//! Polar code construction from the universal partial order (UPO) of
//! synthetic-channel reliabilities and β-expansion polarization weights.
//!
//! The crate is organized bottom-up:
//!
//! - [`partial_order`]: binary channel indices, the UPO dominance test, Hasse
//!   diagrams and their recursive construction.
//! - [`beta_expansion`]: polarization weights, difference polynomials, their
//!   roots in (1, 2), breakpoint sets and β-interval refinement.
//! - [`oracles`]: Gaussian-approximation and BEC reliability oracles used to
//!   orient pairs the partial order leaves open.
//! - [`codec`]: polar encoder, SC and CRC-aided SCL decoders.
//! - [`simulation`]: AWGN Monte-Carlo BLER harness and the β convergence study.
//! - [`formats`]: stable text renderings shared by the command-line front end.
//!
//! Channel index `i` has binary expansion `(b_{n-1}, ..., b_0)`; the most
//! significant bit selects the first channel split and the least significant
//! bit the last one. Reliability sequences list indices from least to most
//! reliable.

pub mod beta_expansion;
pub mod codec;
pub mod error;
pub mod formats;
pub mod oracles;
pub mod partial_order;
pub mod simulation;

pub use beta_expansion::{
    BetaInterval, BreakpointSet, ConstrainingPair, Decision, PolarizationWeight,
    ReliabilitySequence, SignedPolynomial,
};
pub use codec::{CodeConfig, Crc};
pub use error::{Error, Result};
pub use oracles::{BecReliability, GaReliability, Reliability};
pub use partial_order::{ChannelIndex, CoverEdge, PartialOrderSet, UpoOrdering};
pub use simulation::{BlerPoint, Modulation, SimConfig};

/// `2^{1/4}`, the limiting value of the refined β interval for AWGN channels.
pub const BETA_QUARTER_ROOT_TWO: f64 = 1.189_207_115_002_721;

/// Largest supported bit-width for exhaustive constructions.
pub const MAX_WIDTH: u32 = 16;
