//! Exact simulation and equicontinuity analysis of one-dimensional cellular
//! automata.
//!
//! The crate represents a CA by its local rule table ([`RuleTable`]) and works
//! with two exact configuration models: spatially periodic configurations
//! ([`CyclicConfig`]) and finite windows with unknown exterior
//! ([`WindowConfig`]). On top of those it provides:
//!
//! * column traces, temporal cycle detection and rule composition ([`sim`],
//!   [`rule`]);
//! * a de Bruijn subset construction deciding surjectivity ([`surjectivity`]);
//! * sound certification and randomized falsification of blocking words, and
//!   a topological classification built on them ([`blocking`]);
//! * Monte Carlo estimation of measure-theoretic equicontinuity ratios under
//!   Bernoulli measures ([`gilman`]);
//! * construction and verification of the equicontinuous counter factor of a
//!   CA with blocking structure ([`factor`]);
//! * correlation series, mixing tests and eigenvalue-frequency scans
//!   ([`spectrum`]).
//!
//! All operations are pure functions of their inputs; randomized operations
//! take an explicit seed and are reproducible given it. The crate is
//! `no_std`-compatible (requires `alloc`); the `std` feature is on by
//! default.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod blocking;
pub mod config;
pub mod error;
pub mod factor;
pub mod gilman;
pub(crate) mod math;
pub mod rational;
pub mod render;
pub mod rule;
pub mod sim;
pub mod spectrum;
pub mod surjectivity;

pub use config::{Configuration, CyclicConfig, WindowConfig};
pub use error::Error;
pub use rule::{Alphabet, Letter, RuleTable, DEFAULT_TABLE_BUDGET};
pub use sim::{detect_temporal_cycle, trace, TemporalCycle, Trace};

pub type Result<T> = core::result::Result<T, Error>;
