//! Exact Shapley values and Shapley group values.

mod interaction;
mod profit;

use std::ops::Deref;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coalition::Coalition;
use crate::error::{Error, Result};
use crate::game::{
    check_coalition, check_player, ensure_exact, merge, Game, TableGame, EXACT_CAP,
};

pub use interaction::{
    average_complementarity, marginal_group_contribution, second_difference, third_difference,
    MarginalContribution,
};
pub use profit::{
    profitability, segal_entrant_check, segal_pair_check, ProfitabilityReport, SegalVerdict,
};

/// Per-player values, indexed by player.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ValueVector(Vec<f64>);

impl ValueVector {
    pub fn new(values: Vec<f64>) -> Self {
        ValueVector(values)
    }

    pub fn total(&self) -> f64 {
        self.0.iter().sum()
    }

    /// Sum over the members of `group`.
    pub fn sum_over(&self, group: Coalition) -> f64 {
        group.players().map(|i| self.0[i]).sum()
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl Deref for ValueVector {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Exact,
    MonteCarlo,
}

/// Value of a group. `stderr` is present exactly for Monte Carlo results.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupValueResult {
    pub group: Coalition,
    pub value: f64,
    pub method: Method,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stderr: Option<f64>,
}

impl GroupValueResult {
    pub fn exact(group: Coalition, value: f64) -> Self {
        GroupValueResult {
            group,
            value,
            method: Method::Exact,
            stderr: None,
        }
    }

    /// The empty group has value 0 by definition; this flags that case.
    pub fn is_empty_group(&self) -> bool {
        self.group.is_empty()
    }
}

/// `w[s] = s!(n−s−1)!/n!` for `s = 0..n`, by the multiplicative recurrence
/// `w[s+1] = w[s]·(s+1)/(n−s−1)`.
pub fn shapley_weights(n: usize) -> Vec<f64> {
    let mut w = Vec::with_capacity(n);
    if n == 0 {
        return w;
    }
    let mut cur = 1.0 / n as f64;
    for s in 0..n {
        w.push(cur);
        if s + 1 < n {
            cur = cur * (s + 1) as f64 / (n - s - 1) as f64;
        }
    }
    w
}

/// Shapley value of every player by subset enumeration.
pub fn shapley_value<G: Game + ?Sized>(game: &G) -> Result<ValueVector> {
    let n = game.players();
    ensure_exact(n)?;
    let table = TableGame::tabulate(game)?;
    let t = table.worths();
    let w = shapley_weights(n);
    let values = (0..n)
        .into_par_iter()
        .map(|i| {
            let bit = 1usize << i;
            let mut acc = 0.0;
            for m in 0..t.len() {
                if m & bit == 0 {
                    acc += w[m.count_ones() as usize] * (t[m | bit] - t[m]);
                }
            }
            acc
        })
        .collect();
    Ok(ValueVector(values))
}

/// Shapley value of a single player, evaluating the oracle directly.
///
/// Sums in the same order as [`shapley_value`], so the two agree bit for bit
/// on the same game.
pub fn shapley_value_of<G: Game + ?Sized>(game: &G, player: usize) -> Result<f64> {
    let n = game.players();
    ensure_exact(n)?;
    check_player(player, n)?;
    let w = shapley_weights(n);
    let rest = Coalition::full(n).without(player);
    Ok(rest
        .subsets()
        .map(|s| w[s.len()] * (game.worth(s.with(player)) - game.worth(s)))
        .sum())
}

/// Shapley group value: the proxy's Shapley value in the merging game.
///
/// The empty group is worth 0 by definition and is returned as such.
pub fn shapley_group_value<G: Game + ?Sized>(
    game: &G,
    group: Coalition,
) -> Result<GroupValueResult> {
    let n = game.players();
    check_coalition(group, n)?;
    if group.is_empty() {
        return Ok(GroupValueResult::exact(group, 0.0));
    }
    let merged_players = n - group.len() + 1;
    if merged_players > EXACT_CAP {
        return Err(Error::ExactCapExceeded {
            players: merged_players,
            cap: EXACT_CAP,
        });
    }
    let merged = merge(game, group)?;
    let value = shapley_value_of(&merged, merged.proxy())?;
    Ok(GroupValueResult::exact(group, value))
}

/// Additive group value: the sum of the members' individual Shapley values.
pub fn additive_group_value<G: Game + ?Sized>(
    game: &G,
    group: Coalition,
) -> Result<GroupValueResult> {
    check_coalition(group, game.players())?;
    let phi = shapley_value(game)?;
    Ok(GroupValueResult::exact(group, phi.sum_over(group)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::generate::random_dividend_game;
    use crate::game::{FnGame, UnanimityCombination};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Average of marginal contributions over all n! orders (Heap's algorithm).
    fn permutation_oracle<G: Game>(g: &G) -> Vec<f64> {
        let n = g.players();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut acc = vec![0.0; n];
        let mut count = 0u64;
        let visit = |p: &[usize], acc: &mut Vec<f64>| {
            let mut s = Coalition::EMPTY;
            let mut prev = 0.0;
            for &i in p {
                s = s.with(i);
                let cur = g.worth(s);
                acc[i] += cur - prev;
                prev = cur;
            }
        };
        let mut c = vec![0usize; n];
        visit(&perm, &mut acc);
        count += 1;
        let mut k = 1;
        while k < n {
            if c[k] < k {
                if k % 2 == 0 {
                    perm.swap(0, k);
                } else {
                    perm.swap(c[k], k);
                }
                visit(&perm, &mut acc);
                count += 1;
                c[k] += 1;
                k = 1;
            } else {
                c[k] = 0;
                k += 1;
            }
        }
        acc.iter().map(|a| a / count as f64).collect()
    }

    #[test]
    fn weights_match_factorials() {
        fn fact(k: usize) -> f64 {
            (1..=k).map(|x| x as f64).product()
        }
        for n in 1..=20 {
            let w = shapley_weights(n);
            for (s, &ws) in w.iter().enumerate().take(n) {
                let exact = fact(s) * fact(n - s - 1) / fact(n);
                assert!((ws - exact).abs() <= 1e-15 * exact.max(1e-300) * 10.0);
            }
        }
    }

    #[test]
    fn unanimity_shares_equally() {
        let s = Coalition::from_players([0, 2, 3]);
        let u = UnanimityCombination::unanimity(5, s).unwrap();
        let phi = shapley_value(&u).unwrap();
        for i in 0..5 {
            let expect = if s.contains(i) { 1.0 / 3.0 } else { 0.0 };
            assert!((phi[i] - expect).abs() < 1e-15);
        }
    }

    #[test]
    fn additive_game_values_are_own_worths() {
        let b = [1.0, -2.5, 4.0, 0.5];
        let g = FnGame::new(4, move |s: Coalition| s.players().map(|i| b[i]).sum()).unwrap();
        let phi = shapley_value(&g).unwrap();
        for i in 0..4 {
            assert!((phi[i] - b[i]).abs() < 1e-14);
        }
    }

    #[test]
    fn subset_formula_equals_permutation_average() {
        let mut rng = ChaCha8Rng::seed_from_u64(101);
        for n in 1..=7 {
            let g = random_dividend_game(n, &mut rng);
            let phi = shapley_value(&g).unwrap();
            let oracle = permutation_oracle(&g);
            for i in 0..n {
                assert!((phi[i] - oracle[i]).abs() <= 1e-9, "n={n} i={i}");
            }
        }
    }

    #[test]
    fn efficiency() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in 1..=12 {
            let g = random_dividend_game(n, &mut rng);
            let phi = shapley_value(&g).unwrap();
            assert!((phi.total() - g.worth(Coalition::full(n))).abs() <= 1e-9);
        }
    }

    #[test]
    fn group_value_endpoints() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let g = random_dividend_game(7, &mut rng);
        let phi = shapley_value(&g).unwrap();
        for i in 0..7 {
            let gv = shapley_group_value(&g, Coalition::singleton(i)).unwrap();
            assert_eq!(gv.value, phi[i]);
        }
        let all = shapley_group_value(&g, Coalition::full(7)).unwrap();
        assert_eq!(all.value, g.worth(Coalition::full(7)));
        let none = shapley_group_value(&g, Coalition::EMPTY).unwrap();
        assert!(none.is_empty_group());
        assert_eq!(none.value, 0.0);
    }

    #[test]
    fn grand_unanimity_closed_form() {
        for n in 1..=9 {
            let u = UnanimityCombination::unanimity(n, Coalition::full(n)).unwrap();
            for c in Coalition::full(n).subsets().skip(1) {
                let v = shapley_group_value(&u, c).unwrap().value;
                assert!((v - 1.0 / (n - c.len() + 1) as f64).abs() <= 1e-12);
                let a = additive_group_value(&u, c).unwrap().value;
                assert!((a - c.len() as f64 / n as f64).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn unanimity_group_value_closed_form() {
        // Merging u_S gives unanimity over (S∖C) ∪ {c} when C meets S.
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..40 {
            let n = rng.gen_range(2..=8);
            let s = Coalition::from_bits(rng.gen_range(1..1u64 << n));
            let u = UnanimityCombination::unanimity(n, s).unwrap();
            for c in Coalition::full(n).subsets().skip(1) {
                let expect = if c.is_disjoint(s) {
                    0.0
                } else {
                    1.0 / ((s - c).len() + 1) as f64
                };
                let got = shapley_group_value(&u, c).unwrap().value;
                assert!((got - expect).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn group_value_cap_uses_merged_size() {
        let g = FnGame::new(30, |s: Coalition| s.len() as f64).unwrap();
        // 30 − 6 + 1 = 25 merged players: allowed.
        let big = Coalition::from_players(0..6);
        assert!(shapley_group_value(&g, big).is_ok());
        let small = Coalition::from_players(0..2);
        assert!(shapley_group_value(&g, small).unwrap_err().is_capability());
        assert!(shapley_value(&g).unwrap_err().is_capability());
    }
}
