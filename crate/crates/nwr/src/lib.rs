//! No-worst-response game analysis toolkit.
//!
//! Finite normal-form games over exact rational payoffs, with:
//!
//! - a Boolean circuit IR for succinct payoff functions ([`circuits`]);
//! - response classification (best / worst / top-β), (α, β) predicates,
//!   and exact-potential machinery ([`games`]);
//! - exhaustive and randomized solvers for PNE, NWR, and (α, β)
//!   profiles, plus local-search dynamics ([`solvers`]);
//! - push/pull reductions: CircuitSAT→NWR, PNE→NWR in potential games,
//!   and binary quadratic programs as potential games ([`reductions`]);
//! - grid-colouring gadget search and verification ([`gadgets`]).
//!
//! All payoff arithmetic and thresholds are exact; floats never decide a
//! comparison. The core types are generic over the [`Scalar`] rational
//! type, with [`Rational`] (64-bit components) as the default
//! instantiation and [`BigRat`] for overflow-proof workloads.

pub mod circuits;
pub mod cli;
pub mod error;
pub mod gadgets;
pub mod games;
pub mod reductions;
pub mod scalar;
pub mod solvers;

pub use error::{Error, Result};
pub use games::{GameView, Profile};
pub use scalar::{BigRat, Rational, Scalar};

/// Default seed for all randomized subcommands: runs are reproducible
/// unless the caller picks a different one.
pub const DEFAULT_SEED: u64 = 0x6e77_7231;
