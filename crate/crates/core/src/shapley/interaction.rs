//! Difference operators, average complementarity and the decomposition of a
//! group's marginal gain from admitting a new member.

use serde::{Deserialize, Serialize};

use crate::coalition::Coalition;
use crate::error::{Error, Result};
use crate::game::{
    check_coalition, check_player, ensure_exact, merge, restrict, Game,
};

use super::{shapley_group_value, shapley_value_of, shapley_weights};

fn distinct(players: &[usize], n: usize) -> Result<()> {
    for (a, &i) in players.iter().enumerate() {
        check_player(i, n)?;
        if players[..a].contains(&i) {
            return Err(Error::InvalidParameter(format!(
                "players must be distinct, {i} repeats"
            )));
        }
    }
    Ok(())
}

fn outside(s: Coalition, players: &[usize], n: usize) -> Result<()> {
    check_coalition(s, n)?;
    if let Some(&i) = players.iter().find(|&&i| s.contains(i)) {
        return Err(Error::InvalidParameter(format!(
            "coalition {s} must not contain player {i}"
        )));
    }
    Ok(())
}

#[inline]
pub(crate) fn delta2<G: Game + ?Sized>(game: &G, i: usize, j: usize, s: Coalition) -> f64 {
    game.worth(s.with(i).with(j)) - game.worth(s.with(j)) - game.worth(s.with(i))
        + game.worth(s)
}

/// `Δ²_ij v(S) = v(S∪{i,j}) − v(S∪{j}) − v(S∪{i}) + v(S)` for `S ∌ i, j`.
pub fn second_difference<G: Game + ?Sized>(
    game: &G,
    i: usize,
    j: usize,
    s: Coalition,
) -> Result<f64> {
    let n = game.players();
    distinct(&[i, j], n)?;
    outside(s, &[i, j], n)?;
    Ok(delta2(game, i, j, s))
}

/// `Δ³_ijk v(S) = Δ²_jk v(S∪{i}) − Δ²_jk v(S)` for `S ∌ i, j, k`.
pub fn third_difference<G: Game + ?Sized>(
    game: &G,
    i: usize,
    j: usize,
    k: usize,
    s: Coalition,
) -> Result<f64> {
    let n = game.players();
    distinct(&[i, j, k], n)?;
    outside(s, &[i, j, k], n)?;
    Ok(delta2(game, j, k, s.with(i)) - delta2(game, j, k, s))
}

/// Average complementarity `ψ_ij`: second differences averaged with the
/// Shapley weights of the full player count.
pub fn average_complementarity<G: Game + ?Sized>(game: &G, i: usize, j: usize) -> Result<f64> {
    let n = game.players();
    ensure_exact(n)?;
    distinct(&[i, j], n)?;
    let w = shapley_weights(n);
    let rest = Coalition::full(n).without(i).without(j);
    Ok(rest
        .subsets()
        .map(|s| w[s.len()] * delta2(game, i, j, s))
        .sum())
}

/// Gain of group `C` from admitting player `i`, split into the player's
/// stand-alone part and the complementarity with the group.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MarginalContribution {
    pub entrant: usize,
    /// `φ^g(C ∪ {i}) − φ^g(C)`.
    pub total: f64,
    /// Shapley value of `i` in the game restricted to `N \ C`.
    pub independent: f64,
    /// `ψ` between the proxy of `C` and `i` in the merging game of `C`.
    pub complementarity: f64,
}

impl MarginalContribution {
    /// `total − (independent + complementarity)`; zero up to rounding.
    pub fn residual(&self) -> f64 {
        self.total - (self.independent + self.complementarity)
    }
}

pub fn marginal_group_contribution<G: Game + ?Sized>(
    game: &G,
    group: Coalition,
    entrant: usize,
) -> Result<MarginalContribution> {
    let n = game.players();
    check_coalition(group, n)?;
    check_player(entrant, n)?;
    if group.is_empty() {
        return Err(Error::EmptyCoalition);
    }
    if group.contains(entrant) {
        return Err(Error::Overlap(format!(
            "player {entrant} already belongs to {group}"
        )));
    }
    let total = shapley_group_value(game, group.with(entrant))?.value
        - shapley_group_value(game, group)?.value;

    let restricted = restrict(game, group)?;
    let independent = shapley_value_of(
        &restricted,
        restricted.restricted_index(entrant).expect("entrant is kept"),
    )?;

    let merged = merge(game, group)?;
    let complementarity = average_complementarity(
        &merged,
        merged.proxy(),
        merged.merged_index(entrant).expect("entrant is kept"),
    )?;

    Ok(MarginalContribution {
        entrant,
        total,
        independent,
        complementarity,
    })
}
