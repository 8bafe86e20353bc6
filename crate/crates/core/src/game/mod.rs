//! The game abstraction and its concrete representations.
//!
//! A game is a player count `n` plus a worth oracle over coalitions of
//! `0..n`. Every representation in this crate returns exactly `0.0` for the
//! empty coalition.

mod dividends;
pub mod files;
pub mod generate;
mod ops;
mod predicates;

use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;

use crate::coalition::{Coalition, MAX_PLAYERS};
use crate::error::{Error, Result};

pub use dividends::{harsanyi_dividends, mobius_in_place, zeta_in_place, Dividends};
pub use ops::{
    affine_transform, linear_combination, merge, restrict, AffineGame, LinearCombination,
    MergedGame, RestrictedGame,
};
pub use predicates::{
    is_dummy_player, is_monotonic, is_null_player, is_superadditive, STRUCT_EPS,
};

/// Largest player count for which exact (2^n) enumeration is allowed.
pub const EXACT_CAP: usize = 25;

/// A transferable-utility game.
///
/// Implementations must be pure: the same coalition always yields the same
/// worth, and `worth(Coalition::EMPTY)` is `0.0`.
pub trait Game: Send + Sync {
    fn players(&self) -> usize;

    fn worth(&self, coalition: Coalition) -> f64;

    fn grand_coalition(&self) -> Coalition {
        Coalition::full(self.players())
    }
}

impl<G: Game + ?Sized> Game for &G {
    fn players(&self) -> usize {
        (**self).players()
    }
    fn worth(&self, coalition: Coalition) -> f64 {
        (**self).worth(coalition)
    }
}

impl<G: Game + ?Sized> Game for Box<G> {
    fn players(&self) -> usize {
        (**self).players()
    }
    fn worth(&self, coalition: Coalition) -> f64 {
        (**self).worth(coalition)
    }
}

impl<G: Game + ?Sized> Game for Arc<G> {
    fn players(&self) -> usize {
        (**self).players()
    }
    fn worth(&self, coalition: Coalition) -> f64 {
        (**self).worth(coalition)
    }
}

pub(crate) fn check_players(n: usize) -> Result<()> {
    if n == 0 || n > MAX_PLAYERS {
        Err(Error::PlayerCount(n))
    } else {
        Ok(())
    }
}

pub(crate) fn ensure_exact(n: usize) -> Result<()> {
    if n > EXACT_CAP {
        Err(Error::ExactCapExceeded {
            players: n,
            cap: EXACT_CAP,
        })
    } else {
        Ok(())
    }
}

pub(crate) fn check_coalition(c: Coalition, n: usize) -> Result<()> {
    if c.fits(n) {
        Ok(())
    } else {
        Err(Error::OutOfUniverse {
            coalition: c,
            players: n,
        })
    }
}

pub(crate) fn check_player(i: usize, n: usize) -> Result<()> {
    if i < n {
        Ok(())
    } else {
        Err(Error::UnknownPlayer {
            player: i,
            players: n,
        })
    }
}

/// Dense table of all `2^n` worths, indexed by coalition mask.
#[derive(Clone, Debug, PartialEq)]
pub struct TableGame {
    n: usize,
    worths: Vec<f64>,
}

impl TableGame {
    /// Builds a table game. The slot for the empty coalition is forced to 0.
    pub fn new(n: usize, mut worths: Vec<f64>) -> Result<Self> {
        check_players(n)?;
        ensure_exact(n)?;
        if worths.len() != 1usize << n {
            return Err(Error::MalformedData(format!(
                "table for {n} players needs {} entries, got {}",
                1usize << n,
                worths.len()
            )));
        }
        if let Some(bad) = worths.iter().position(|w| !w.is_finite()) {
            return Err(Error::MalformedData(format!(
                "non-finite worth at mask {bad}"
            )));
        }
        worths[0] = 0.0;
        Ok(TableGame { n, worths })
    }

    pub fn from_fn<F: Fn(Coalition) -> f64>(n: usize, f: F) -> Result<Self> {
        check_players(n)?;
        ensure_exact(n)?;
        let worths = (0..1u64 << n).map(|m| f(Coalition::from_bits(m))).collect();
        TableGame::new(n, worths)
    }

    /// Evaluates `game` on every coalition.
    pub fn tabulate<G: Game + ?Sized>(game: &G) -> Result<Self> {
        let n = game.players();
        check_players(n)?;
        ensure_exact(n)?;
        let size = 1u64 << n;
        let worths: Vec<f64> = if n >= 14 {
            (0..size)
                .into_par_iter()
                .map(|m| game.worth(Coalition::from_bits(m)))
                .collect()
        } else {
            (0..size).map(|m| game.worth(Coalition::from_bits(m))).collect()
        };
        TableGame::new(n, worths)
    }

    pub fn worths(&self) -> &[f64] {
        &self.worths
    }

    pub fn into_worths(self) -> Vec<f64> {
        self.worths
    }
}

impl Game for TableGame {
    fn players(&self) -> usize {
        self.n
    }

    fn worth(&self, coalition: Coalition) -> f64 {
        self.worths[coalition.bits() as usize]
    }
}

/// A game backed by a closure. The closure is never called on the empty
/// coalition.
pub struct FnGame<F> {
    n: usize,
    f: F,
}

impl<F> FnGame<F>
where
    F: Fn(Coalition) -> f64 + Send + Sync,
{
    pub fn new(n: usize, f: F) -> Result<Self> {
        check_players(n)?;
        Ok(FnGame { n, f })
    }
}

impl<F> Game for FnGame<F>
where
    F: Fn(Coalition) -> f64 + Send + Sync,
{
    fn players(&self) -> usize {
        self.n
    }

    fn worth(&self, coalition: Coalition) -> f64 {
        if coalition.is_empty() {
            0.0
        } else {
            (self.f)(coalition)
        }
    }
}

/// A game given by its coordinates in the unanimity basis:
/// `v(S) = Σ_{T ⊆ S} d(T)`.
#[derive(Clone, Debug, PartialEq)]
pub struct UnanimityCombination {
    n: usize,
    dividends: Vec<(Coalition, f64)>,
}

impl UnanimityCombination {
    pub fn new<I>(n: usize, dividends: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Coalition, f64)>,
    {
        check_players(n)?;
        let mut merged: BTreeMap<Coalition, f64> = BTreeMap::new();
        for (t, d) in dividends {
            if t.is_empty() {
                return Err(Error::EmptyCoalition);
            }
            check_coalition(t, n)?;
            if !d.is_finite() {
                return Err(Error::MalformedData(format!("non-finite dividend at {t}")));
            }
            *merged.entry(t).or_insert(0.0) += d;
        }
        Ok(UnanimityCombination {
            n,
            dividends: merged.into_iter().filter(|&(_, d)| d != 0.0).collect(),
        })
    }

    /// The unanimity game `u_S`.
    pub fn unanimity(n: usize, carrier: Coalition) -> Result<Self> {
        UnanimityCombination::new(n, [(carrier, 1.0)])
    }

    pub fn dividends(&self) -> &[(Coalition, f64)] {
        &self.dividends
    }

    pub fn dividend(&self, t: Coalition) -> f64 {
        self.dividends
            .binary_search_by_key(&t, |&(c, _)| c)
            .map(|k| self.dividends[k].1)
            .unwrap_or(0.0)
    }
}

impl Game for UnanimityCombination {
    fn players(&self) -> usize {
        self.n
    }

    fn worth(&self, coalition: Coalition) -> f64 {
        self.dividends
            .iter()
            .filter(|(t, _)| t.is_subset_of(coalition))
            .map(|(_, d)| d)
            .sum()
    }
}
