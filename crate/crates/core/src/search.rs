//! Group selection: exhaustive top-m ranking of size-k groups and a greedy
//! builder driven by marginal group contributions.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coalition::{binomial, k_subsets, Coalition};
use crate::error::{Error, Result};
use crate::estimation::{mc_group_value, mc_shapley, SamplerConfig};
use crate::game::{check_coalition, Game, TableGame, EXACT_CAP};
use crate::shapley::{
    marginal_group_contribution, shapley_group_value, shapley_value, Method,
};

/// Games up to this size are tabulated once before a search.
const TABULATE_CAP: usize = 20;

/// Values closer than `2^-40` compare as equal, so that mirror-image groups
/// whose values differ only by rounding fall back to index order.
const TIE_SCALE: f64 = (1u64 << 40) as f64;

/// Sort key on the tie grid; larger is better.
pub fn order_key(v: f64) -> i128 {
    (v * TIE_SCALE).round() as i128
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RankingEntry {
    /// 1-based position.
    pub rank: usize,
    pub group: Coalition,
    pub value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stderr: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub k: usize,
    pub top_m: usize,
    pub method: Method,
    pub sampler: SamplerConfig,
    /// Largest number of groups an exhaustive ranking may evaluate.
    pub budget: u128,
}

impl SearchConfig {
    pub const DEFAULT_BUDGET: u128 = 5_000_000;

    pub fn exact(k: usize, top_m: usize) -> Self {
        SearchConfig {
            k,
            top_m,
            method: Method::Exact,
            sampler: SamplerConfig::default(),
            budget: Self::DEFAULT_BUDGET,
        }
    }

    pub fn monte_carlo(k: usize, top_m: usize, sampler: SamplerConfig) -> Self {
        SearchConfig {
            method: Method::MonteCarlo,
            sampler,
            ..Self::exact(k, top_m)
        }
    }

    fn validate(&self, n: usize) -> Result<()> {
        if self.k == 0 || self.k > n {
            return Err(Error::InvalidParameter(format!(
                "group size {} is outside 1..={n}",
                self.k
            )));
        }
        if self.top_m == 0 {
            return Err(Error::InvalidParameter("top must be at least 1".into()));
        }
        if self.method == Method::MonteCarlo {
            self.sampler.validate()?;
        }
        Ok(())
    }
}

/// Tabulates small games so that repeated group evaluations are lookups.
fn prepared<G: Game + ?Sized>(game: &G) -> Result<Option<TableGame>> {
    if game.players() <= TABULATE_CAP {
        Ok(Some(TableGame::tabulate(game)?))
    } else {
        Ok(None)
    }
}

fn with_prepared<G, T>(game: &G, f: impl FnOnce(&dyn Game) -> Result<T>) -> Result<T>
where
    G: Game + ?Sized,
{
    match prepared(game)? {
        Some(t) => f(&t),
        None => f(&DynGame(game)),
    }
}

struct DynGame<'a, G: ?Sized>(&'a G);

impl<G: Game + ?Sized> Game for DynGame<'_, G> {
    fn players(&self) -> usize {
        self.0.players()
    }
    fn worth(&self, s: Coalition) -> f64 {
        self.0.worth(s)
    }
}

fn sort_entries(mut scored: Vec<(Coalition, f64, Option<f64>)>, top_m: usize) -> Vec<RankingEntry> {
    scored.sort_by(|a, b| {
        order_key(b.1)
            .cmp(&order_key(a.1))
            .then(a.0.cmp(&b.0))
    });
    scored
        .into_iter()
        .take(top_m)
        .enumerate()
        .map(|(r, (group, value, stderr))| RankingEntry {
            rank: r + 1,
            group,
            value,
            stderr,
        })
        .collect()
}

/// Best `top_m` groups of size `k` by Shapley group value, best first, ties
/// by ascending mask.
pub fn rank_groups<G: Game + ?Sized + Sync>(game: &G, cfg: &SearchConfig) -> Result<Vec<RankingEntry>> {
    let n = game.players();
    cfg.validate(n)?;
    let groups = binomial(n, cfg.k);
    if groups > cfg.budget {
        return Err(Error::BudgetExceeded {
            groups,
            budget: cfg.budget,
        });
    }
    let candidates: Vec<Coalition> = k_subsets(n, cfg.k).collect();
    let scored = match cfg.method {
        Method::Exact => {
            let merged = n - cfg.k + 1;
            if merged > EXACT_CAP {
                return Err(Error::ExactCapExceeded {
                    players: merged,
                    cap: EXACT_CAP,
                });
            }
            with_prepared(game, |g| {
                candidates
                    .par_iter()
                    .map(|&c| Ok((c, shapley_group_value(g, c)?.value, None)))
                    .collect::<Result<Vec<_>>>()
            })?
        }
        Method::MonteCarlo => candidates
            .par_iter()
            .map(|&c| {
                let e = mc_group_value(game, c, &cfg.sampler)?;
                Ok((c, e.mean, Some(e.stderr)))
            })
            .collect::<Result<Vec<_>>>()?,
    };
    Ok(sort_entries(scored, cfg.top_m))
}

/// One admission in a greedy build.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GreedyStep {
    pub step: usize,
    pub added: usize,
    /// Group after the admission.
    pub group: Coalition,
    /// Group value after the admission.
    pub value: f64,
    /// Increase in group value; `φ_i` on the first step.
    pub gain: f64,
    /// Stand-alone part of the gain (exact steps after the first).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub independent: Option<f64>,
    /// Complementarity part of the gain (exact steps after the first).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub complementarity: Option<f64>,
    pub method: Method,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stderr: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GreedyResult {
    pub group: Coalition,
    pub value: f64,
    pub steps: Vec<GreedyStep>,
}

struct Candidate {
    player: usize,
    gain: f64,
    independent: Option<f64>,
    complementarity: Option<f64>,
    stderr: Option<f64>,
}

fn best(cands: Vec<Candidate>) -> Candidate {
    let mut it = cands.into_iter();
    let mut top = it.next().expect("at least one candidate");
    for c in it {
        if order_key(c.gain) > order_key(top.gain) {
            top = c;
        }
    }
    top
}

fn first_step(game: &dyn Game, pool: Coalition, sampler: Option<&SamplerConfig>) -> Result<(Candidate, Method)> {
    let n = game.players();
    let (phi, stderr, method) = if n <= EXACT_CAP {
        (shapley_value(game)?.into_inner(), None, Method::Exact)
    } else if let Some(cfg) = sampler {
        let est = mc_shapley(game, cfg)?;
        (
            est.iter().map(|e| e.mean).collect(),
            Some(est.iter().map(|e| e.stderr).collect::<Vec<_>>()),
            Method::MonteCarlo,
        )
    } else {
        return Err(Error::ExactCapExceeded {
            players: n,
            cap: EXACT_CAP,
        });
    };
    let cands = pool
        .players()
        .map(|i| Candidate {
            player: i,
            gain: phi[i],
            independent: None,
            complementarity: None,
            stderr: stderr.as_ref().map(|s| s[i]),
        })
        .collect();
    Ok((best(cands), method))
}

fn next_step(
    game: &dyn Game,
    group: Coalition,
    current: f64,
    pool: Coalition,
    sampler: Option<&SamplerConfig>,
) -> Result<(Candidate, Method)> {
    let n = game.players();
    let merged = n - group.len() + 1;
    let exact = merged <= EXACT_CAP;
    let outside: Vec<usize> = (pool - group).players().collect();
    if exact {
        let cands = outside
            .par_iter()
            .map(|&i| {
                let mc = marginal_group_contribution(game, group, i)?;
                Ok(Candidate {
                    player: i,
                    gain: mc.total,
                    independent: Some(mc.independent),
                    complementarity: Some(mc.complementarity),
                    stderr: None,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        return Ok((best(cands), Method::Exact));
    }
    let cfg = sampler.ok_or(Error::ExactCapExceeded {
        players: merged,
        cap: EXACT_CAP,
    })?;
    let cands = outside
        .par_iter()
        .map(|&i| {
            let e = mc_group_value(game, group.with(i), cfg)?;
            Ok(Candidate {
                player: i,
                gain: e.mean - current,
                independent: None,
                complementarity: None,
                stderr: Some(e.stderr),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((best(cands), Method::MonteCarlo))
}

/// Greedy construction restricted to players of `pool`.
fn greedy_within(
    game: &dyn Game,
    pool: Coalition,
    k: usize,
    sampler: Option<&SamplerConfig>,
) -> Result<GreedyResult> {
    let (first, method) = first_step(game, pool, sampler)?;
    let mut group = Coalition::singleton(first.player);
    let mut value = first.gain;
    let mut steps = vec![GreedyStep {
        step: 1,
        added: first.player,
        group,
        value,
        gain: first.gain,
        independent: None,
        complementarity: None,
        method,
        stderr: first.stderr,
    }];
    while group.len() < k {
        let (c, method) = next_step(game, group, value, pool, sampler)?;
        group = group.with(c.player);
        value += c.gain;
        steps.push(GreedyStep {
            step: steps.len() + 1,
            added: c.player,
            group,
            value,
            gain: c.gain,
            independent: c.independent,
            complementarity: c.complementarity,
            method,
            stderr: c.stderr,
        });
    }
    if let Some(last) = steps.last_mut() {
        if last.method == Method::Exact {
            let exact = shapley_group_value(game, group)?.value;
            last.value = exact;
            value = exact;
        }
    }
    Ok(GreedyResult { group, value, steps })
}

/// Builds a group of size `k`: the best singleton by `φ_i`, then repeatedly
/// the player with the largest marginal group contribution (ties to the
/// lower index). Steps beyond the exact cap use `sampler` when given.
pub fn greedy_group<G: Game + ?Sized>(
    game: &G,
    k: usize,
    sampler: Option<&SamplerConfig>,
) -> Result<GreedyResult> {
    let n = game.players();
    if k == 0 || k > n {
        return Err(Error::InvalidParameter(format!(
            "group size {k} is outside 1..={n}"
        )));
    }
    if let Some(cfg) = sampler {
        cfg.validate()?;
    }
    with_prepared(game, |g| greedy_within(g, Coalition::full(n), k, sampler))
}

/// Orders the members of `group` greedily and decomposes each admission into
/// its stand-alone and complementarity parts.
pub fn explain_group<G: Game + ?Sized>(
    game: &G,
    group: Coalition,
    sampler: Option<&SamplerConfig>,
) -> Result<GreedyResult> {
    check_coalition(group, game.players())?;
    if group.is_empty() {
        return Err(Error::EmptyCoalition);
    }
    with_prepared(game, |g| greedy_within(g, group, group.len(), sampler))
}

/// The `k` individually strongest players against the best group of size `k`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SingletonComparison {
    pub k: usize,
    pub individual_best: Coalition,
    pub individual_value: f64,
    pub top_group: Coalition,
    pub top_value: f64,
    /// True when the best group is strictly better than the individually
    /// strongest players.
    pub diverges: bool,
}

pub fn best_singleton_comparison<G: Game + ?Sized + Sync>(
    game: &G,
    k: usize,
) -> Result<SingletonComparison> {
    let n = game.players();
    let top = rank_groups(game, &SearchConfig::exact(k, 1))?
        .pop()
        .expect("at least one group");
    with_prepared(game, |g| {
        let phi = shapley_value(g)?;
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| order_key(phi[b]).cmp(&order_key(phi[a])).then(a.cmp(&b)));
        let individual_best: Coalition = order[..k].iter().copied().collect();
        let individual_value = shapley_group_value(g, individual_best)?.value;
        Ok(SingletonComparison {
            k,
            individual_best,
            individual_value,
            top_group: top.group,
            top_value: top.value,
            diverges: order_key(top.value) > order_key(individual_value),
        })
    })
}
