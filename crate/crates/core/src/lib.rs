//! Bi-objective royal-road benchmarks, the evolutionary algorithms that
//! optimise them, and Monte Carlo oracles for checking both.
//!
//! The library is organised bottom-up:
//!
//! - [`bitstring`]: packed bit strings, run statistics, permutations.
//! - [`objectives`]: the two benchmark families, dominance comparison, and
//!   closed-form Pareto fronts.
//! - [`operators`]: mutation and crossover operators on bit strings.
//! - [`algorithms`]: the optimisers and their shared ranking machinery.
//! - [`oracles`]: independent verifiers for the structural claims.
//! - [`harness`]: batch experiment runner with CSV records and summaries.
//!
//! Randomised code takes a caller-supplied [`RngStream`] so that every run
//! is reproducible from a seed and parallel execution can match sequential
//! execution stream for stream.

pub mod algorithms;
pub mod bitstring;
pub mod error;
pub mod harness;
pub mod objectives;
pub mod operators;
pub mod oracles;

pub use error::{Error, Result};

/// The pseudo-random stream used throughout: seedable, portable across
/// platforms, and cheap to fork per trial.
pub type RngStream = rand_chacha::ChaCha8Rng;
