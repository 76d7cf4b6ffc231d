// SPDX-License-Identifier: Apache-2.0

//! Strictly k-piecewise (SPk) dataset generation and long-distance-dependency
//! profiling.
//!
//! * [`grammar`]: alphabets, forbidden subsequences, the grammar file format
//!   and a brute-force membership check.
//! * [`automaton`]: the compiled acceptor, exact per-length counts and
//!   uniform sampling.
//! * [`generator`]: datasets with a uniform length band, splits, flattening.
//! * [`profiler`]: mutual information `I(D)` across distances with
//!   Grassberger-corrected entropies.
//! * [`cli`] and [`recipe`]: the `spk-ldd` command-line front end.

pub mod automaton;
pub mod cli;
pub mod corpus;
pub mod digamma;
pub mod error;
pub mod generator;
pub mod grammar;
pub mod profiler;
pub mod recipe;

pub use automaton::{count_valid, sample_uniform, LengthCountTable, PiecewiseDfa};
pub use corpus::Corpus;
pub use error::{Error, Result};
pub use generator::{flatten, generate_dataset, split_dataset, Dataset, LengthPlan};
pub use grammar::{is_subsequence, oracle_is_valid, subseq_k, Alphabet, SpkGrammar, Subsequence, SymbolId};
pub use profiler::{
    entropy_grassberger, entropy_plugin, ldd_profile, mi_at_distance, CountVector, Estimator,
    LddProfile,
};
