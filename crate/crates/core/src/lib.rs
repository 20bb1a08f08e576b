//! Allocation operators for transferable-utility cooperative games.
//!
//! A game on `n` players is a vector of `2^n` coalition values in bitmask
//! order; an allocation is an `n × 2^n` matrix `A` with payoffs `A·v`. The
//! crate checks whether a matrix is efficient and reasonable (every payoff
//! lies between the player's smallest and largest marginal contribution),
//! and writes every such matrix as a convex combination of the `n!`
//! permutation allocations.
//!
//! Library APIs number players from 0; text formats and the CLI use 1.

pub mod allocation;
pub mod check;
pub mod cli;
pub mod coalition;
pub mod decomposition;
pub mod error;
pub mod falsify;
pub mod game;
pub mod io;
pub mod sample;

pub use allocation::{
    apply_allocation, shapley_matrix, shapley_value, special_allocation, AllocationMatrix, PayoffVector,
};
pub use check::{
    check_abs_sums, check_efficiency, check_level_abs_sums, check_reasonable_structural, check_row_sums_zero,
    Bound, CheckReport, Violation, DEFAULT_TOL,
};
pub use coalition::{Coalition, SetChain, MAX_PLAYERS};
pub use decomposition::{
    exhaustive_decompose, peel_decompose, random_allocation, verify_decomposition, DecomposeError,
    Decomposition, DecompositionTerm, PeelStep, PeelTrace,
};
pub use error::{Error, Result};
pub use falsify::{sample_reasonableness_violation, ReasonablenessViolation, Sampler};
pub use game::{
    build_probe_game, enumerate_monotone_binary_games, span_decompose_monotone_binary, Game, ProbeKind,
    SpanTerm,
};
