//! JSON schemas for explicitly given games.
//!
//! * worth file: `{"n": 3, "worths": [[mask, value], ...]}`, absent masks are 0;
//! * dividend file: `{"n": 3, "dividends": [[mask, coeff], ...]}`.
//!
//! Both accept an optional `"labels": [...]` array naming players `0..n`.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::coalition::Coalition;
use crate::error::{Error, Result};

use super::{check_coalition, check_players, Game, TableGame, UnanimityCombination, EXACT_CAP};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WorthFile {
    pub n: usize,
    pub worths: Vec<(u64, f64)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DividendFile {
    pub n: usize,
    pub dividends: Vec<(u64, f64)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

/// Either schema, distinguished by its payload key.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GameFile {
    Worths(WorthFile),
    Dividends(DividendFile),
}

/// A game read from a worth file: dense when it fits the exact cap,
/// otherwise a sparse map.
#[derive(Clone, Debug)]
pub enum ExplicitGame {
    Table(TableGame),
    Sparse { n: usize, worths: HashMap<u64, f64> },
}

impl Game for ExplicitGame {
    fn players(&self) -> usize {
        match self {
            ExplicitGame::Table(t) => t.players(),
            ExplicitGame::Sparse { n, .. } => *n,
        }
    }

    fn worth(&self, coalition: Coalition) -> f64 {
        match self {
            ExplicitGame::Table(t) => t.worth(coalition),
            ExplicitGame::Sparse { worths, .. } => {
                worths.get(&coalition.bits()).copied().unwrap_or(0.0)
            }
        }
    }
}

impl WorthFile {
    pub fn from_game<G: Game + ?Sized>(game: &G) -> Result<Self> {
        let table = TableGame::tabulate(game)?;
        Ok(WorthFile {
            n: table.players(),
            worths: table
                .worths()
                .iter()
                .enumerate()
                .filter(|&(m, w)| m != 0 && *w != 0.0)
                .map(|(m, &w)| (m as u64, w))
                .collect(),
            labels: None,
        })
    }

    pub fn to_game(&self) -> Result<ExplicitGame> {
        check_players(self.n)?;
        let mut map = HashMap::with_capacity(self.worths.len());
        for &(mask, w) in &self.worths {
            check_coalition(Coalition::from_bits(mask), self.n)?;
            if !w.is_finite() {
                return Err(Error::MalformedData(format!("non-finite worth at mask {mask}")));
            }
            if mask == 0 && w != 0.0 {
                return Err(Error::MalformedData(
                    "the empty coalition must have worth 0".into(),
                ));
            }
            if map.insert(mask, w).is_some() {
                return Err(Error::MalformedData(format!("duplicate mask {mask}")));
            }
        }
        if self.n <= EXACT_CAP {
            let mut dense = vec![0.0; 1usize << self.n];
            for (m, w) in map {
                dense[m as usize] = w;
            }
            Ok(ExplicitGame::Table(TableGame::new(self.n, dense)?))
        } else {
            Ok(ExplicitGame::Sparse {
                n: self.n,
                worths: map,
            })
        }
    }
}

impl DividendFile {
    pub fn to_game(&self) -> Result<UnanimityCombination> {
        UnanimityCombination::new(
            self.n,
            self.dividends
                .iter()
                .map(|&(m, d)| (Coalition::from_bits(m), d)),
        )
    }
}

impl GameFile {
    pub fn players(&self) -> usize {
        match self {
            GameFile::Worths(f) => f.n,
            GameFile::Dividends(f) => f.n,
        }
    }

    pub fn labels(&self) -> Option<&[String]> {
        match self {
            GameFile::Worths(f) => f.labels.as_deref(),
            GameFile::Dividends(f) => f.labels.as_deref(),
        }
    }

    pub fn to_game(&self) -> Result<Box<dyn Game>> {
        Ok(match self {
            GameFile::Worths(f) => Box::new(f.to_game()?),
            GameFile::Dividends(f) => Box::new(f.to_game()?),
        })
    }
}
