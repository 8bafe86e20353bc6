//! Whether acting as a group pays: surplus over the additive value and the
//! sufficient conditions of Derks–Tijs and Segal.

use serde::{Deserialize, Serialize};

use crate::coalition::Coalition;
use crate::error::{Error, Result};
use crate::game::{check_coalition, check_player, ensure_exact, harsanyi_dividends, Game, STRUCT_EPS};

use super::interaction::delta2;
use super::{additive_group_value, shapley_group_value};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProfitabilityReport {
    pub group: Coalition,
    pub group_value: f64,
    pub additive_value: f64,
    /// `group_value − additive_value`.
    pub surplus: f64,
    /// Every positive dividend lies inside the group or meets it in at most
    /// one player, which guarantees a nonnegative surplus.
    pub derks_tijs_sufficient: bool,
}

pub fn profitability<G: Game + ?Sized>(game: &G, group: Coalition) -> Result<ProfitabilityReport> {
    let n = game.players();
    ensure_exact(n)?;
    check_coalition(group, n)?;
    let group_value = shapley_group_value(game, group)?.value;
    let additive_value = additive_group_value(game, group)?.value;
    let derks_tijs_sufficient = harsanyi_dividends(game)?
        .iter()
        .filter(|&&(_, d)| d > STRUCT_EPS)
        .all(|&(t, _)| t.is_subset_of(group) || (t & group).len() <= 1);
    Ok(ProfitabilityReport {
        group,
        group_value,
        additive_value,
        surplus: group_value - additive_value,
        derks_tijs_sufficient,
    })
}

/// Outcome of a Segal sign test on third differences.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SegalVerdict {
    /// Every tested `Δ³ ≤ 0`, some strictly.
    Profitable,
    /// Every tested `Δ³ ≥ 0`, some strictly.
    Unprofitable,
    /// Every tested `Δ³` is zero, or there was nothing to test: both
    /// conditions hold at once.
    Degenerate,
    /// Mixed signs: the sufficient conditions say nothing.
    Indeterminate,
}

#[derive(Default)]
struct SignTally {
    negative: bool,
    positive: bool,
}

impl SignTally {
    fn record(&mut self, x: f64) {
        if x < -STRUCT_EPS {
            self.negative = true;
        } else if x > STRUCT_EPS {
            self.positive = true;
        }
    }

    fn verdict(&self) -> SegalVerdict {
        match (self.negative, self.positive) {
            (false, false) => SegalVerdict::Degenerate,
            (true, false) => SegalVerdict::Profitable,
            (false, true) => SegalVerdict::Unprofitable,
            (true, true) => SegalVerdict::Indeterminate,
        }
    }

    fn mixed(&self) -> bool {
        self.negative && self.positive
    }
}

/// Scans `Δ³_ijk(S)` for every `k ∉ excluded ∪ {i, j}` and every
/// `S ⊆ N \ {i, j, k}`.
fn tally<G: Game + ?Sized>(game: &G, i: usize, j: usize, excluded: Coalition, t: &mut SignTally) {
    let full = Coalition::full(game.players());
    for k in (full - excluded).without(i).without(j).players() {
        for s in (full.without(i).without(j).without(k)).subsets() {
            t.record(delta2(game, j, k, s.with(i)) - delta2(game, j, k, s));
            if t.mixed() {
                return;
            }
        }
    }
}

/// Sign test for merging the pair `{i, j}`.
pub fn segal_pair_check<G: Game + ?Sized>(game: &G, i: usize, j: usize) -> Result<SegalVerdict> {
    let n = game.players();
    ensure_exact(n)?;
    check_player(i, n)?;
    check_player(j, n)?;
    if i == j {
        return Err(Error::InvalidParameter(format!(
            "pair needs two distinct players, got {i} twice"
        )));
    }
    let mut t = SignTally::default();
    tally(game, i, j, Coalition::EMPTY, &mut t);
    Ok(t.verdict())
}

/// Sign test for admitting player `j` into the integrated group `C`.
pub fn segal_entrant_check<G: Game + ?Sized>(
    game: &G,
    group: Coalition,
    j: usize,
) -> Result<SegalVerdict> {
    let n = game.players();
    ensure_exact(n)?;
    check_coalition(group, n)?;
    check_player(j, n)?;
    if group.is_empty() {
        return Err(Error::EmptyCoalition);
    }
    if group.contains(j) {
        return Err(Error::Overlap(format!("player {j} already belongs to {group}")));
    }
    let mut t = SignTally::default();
    for i in group.players() {
        tally(game, i, j, group, &mut t);
        if t.mixed() {
            break;
        }
    }
    Ok(t.verdict())
}
