//! Stochastic local search for the maximum vertex weight clique problem.
//!
//! The search alternates construction of a maximal clique, random-walk
//! moves and greedy intensification over add/swap/drop neighborhoods, with
//! a pluggable prohibition mechanism. Every strategy choice is a parameter
//! of [`config::Configuration`]; [`harness`] runs seeded batches and a
//! simple random-search configurator.

pub mod clique_state;
pub mod clock;
pub mod config;
pub mod graph;
pub mod harness;
pub mod oracle;
pub mod prohibition;
pub mod search;

pub use clique_state::CliqueState;
pub use config::{preset, Configuration, ParameterSpace};
pub use graph::{parse_dimacs, parse_dimacs_str, Vertex, VertexWeightedGraph, Weight};
pub use harness::{new_sq, par10, run_batch, RunResult};
pub use oracle::exact_oracle;
pub use prohibition::{ProhibitionKind, ProhibitionState};
pub use search::{solve, Cutoff, SearchContext, SearchParams, SolveOptions, SolveOutcome};
