//! Shapley group values of TU games.
//!
//! The crate evaluates how much a *group* of players is worth when it acts as
//! a single unit: the group is merged into one proxy player and the proxy's
//! Shapley value is the group's value. Around that core it provides
//!
//! * coalition masks and game algebra ([`coalition`], [`game`]);
//! * exact Shapley values, group values, interaction measures and
//!   profitability diagnostics ([`shapley`]);
//! * Monte Carlo permutation estimators for large games ([`estimation`]);
//! * network, diffusion and survey games ([`applied`]);
//! * executable axiom suites and the counterexample group values ([`axioms`]);
//! * exhaustive and greedy group selection ([`search`]).

pub mod applied;
pub mod axioms;
pub mod coalition;
pub mod error;
pub mod estimation;
pub mod game;
pub mod search;
pub mod shapley;

pub use coalition::{k_subsets, Coalition, MAX_PLAYERS};
pub use error::{Error, Result};
pub use game::{Game, TableGame, UnanimityCombination, EXACT_CAP};
