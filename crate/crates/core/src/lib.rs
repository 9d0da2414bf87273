//! Pool-based multi-objective active learning over MOOT tables.
//!
//! The crate covers the whole benchmark pipeline: loading and scoring MOOT
//! data, the budgeted labeling loop with its acquisition policies (random,
//! exploit, explore, GP-UCB, TPE), prompt-ensemble synthesis with pluggable
//! backends, Scott-Knott ranking, and the experiment harness behind the
//! `moot-bench` binary.

pub mod backend;
pub mod data;
pub mod encode;
pub mod gpm;
pub mod harness;
pub mod learner;
pub mod scoring;
pub mod stats;
pub mod synthcore;
pub mod tpe;

#[cfg(test)]
mod fixtures;
