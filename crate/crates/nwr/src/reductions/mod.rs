//! Push/pull instance transforms: CircuitSAT to NWR search, PNE search in
//! two-action potential games to NWR search, and binary quadratic
//! programs to potential games.

pub mod bqp;
pub mod pne_to_nwr;
pub mod sat_to_nwr;

pub use bqp::{reduce_bqp_to_game, BqpInstance};
pub use pne_to_nwr::PneReducedGame;
pub use sat_to_nwr::SatReducedGame;
