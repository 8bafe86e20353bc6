use thiserror::Error;

use crate::coalition::Coalition;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("player count {0} is outside 1..=64")]
    PlayerCount(usize),

    #[error("exact computation needs {players} players but the cap is {cap}; use the Monte Carlo estimators")]
    ExactCapExceeded { players: usize, cap: usize },

    #[error("coalition {coalition} is not a subset of the {players}-player universe")]
    OutOfUniverse { coalition: Coalition, players: usize },

    #[error("player {player} is outside the {players}-player universe")]
    UnknownPlayer { player: usize, players: usize },

    #[error("coalition must be nonempty")]
    EmptyCoalition,

    #[error("overlapping arguments: {0}")]
    Overlap(String),

    #[error("games have different player counts ({0} vs {1})")]
    PlayerCountMismatch(usize, usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("malformed data: {0}")]
    MalformedData(String),

    #[error("search budget exceeded: {groups} groups requested, budget is {budget}")]
    BudgetExceeded { groups: u128, budget: u128 },
}

impl Error {
    /// Errors caused by problem size rather than bad input.
    pub fn is_capability(&self) -> bool {
        matches!(
            self,
            Error::ExactCapExceeded { .. } | Error::BudgetExceeded { .. }
        )
    }
}
