//! Simulation and exact analysis of the partial duplication random graph.
//!
//! A graph grows by copying a uniformly chosen vertex and keeping each of
//! its edges independently with probability `p`. The crate provides the
//! discrete- and continuous-time growth processes, subgraph observables,
//! deterministic laws for their expectations and distributions, the dual
//! piecewise-deterministic process, and a Monte Carlo layer that checks
//! simulations against the exact laws.

pub mod cli;
pub mod ensemble;
pub mod error;
pub mod exact;
pub mod graph;
pub mod observables;
pub mod output;
pub mod pdmp;
pub mod rng;
pub mod stats;

pub use error::{Error, Result};
pub use graph::{
    build_seed, duplicate_step, grow_to, pdt_advance, Graph, ModelParams, PdtClock, SeedSource,
    SeedSpec,
};
