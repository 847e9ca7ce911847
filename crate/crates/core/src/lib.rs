//! Random networks built from 3-connected cores.
//!
//! The crate solves the generating-function system of networks (series,
//! parallel and core compositions), locates its dominant singularity,
//! predicts core-size statistics, and samples networks with Boltzmann
//! samplers whose traces can be checked against brute-force oracles.

pub mod analysis;
pub mod census;
pub mod classes;
pub mod error;
pub mod experiment;
pub mod graph;
pub mod oracle;
pub mod polylog;
pub mod sampler;
pub mod selftest;
pub mod series;

pub use census::CensusReport;
pub use classes::{CoreClass, CoreGraph, CoreSample, TbarValue};
pub use error::{Error, Result};
pub use graph::Graph;
