//! The strip packing driver: initial construction and the shrink/extend
//! schedule around guided local search.

mod config;
mod construct;
mod gcdh;

pub use config::{ConfigError, SolverConfig};
pub use construct::{construct, construction_order, nfdh, occupied_length, PieceExceedsWidth};
pub use gcdh::{
    density, extend_length, gcdh, relocate_protruding, shrink_length, RunEvent, RunOutcome, RunRecord, RunTiming,
};
