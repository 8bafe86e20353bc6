//! Permutation-sampling estimators for Shapley values and group values.
//!
//! Samples are split into fixed-size batches. Batch `b` draws from the
//! ChaCha8 stream `b` of the configured seed, so the output depends only on
//! `(seed, iterations, batch)` no matter how many threads run the batches.
//! Batch summaries are combined in batch order.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coalition::Coalition;
use crate::error::{Error, Result};
use crate::game::{check_coalition, check_players, merge, Game};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SamplerConfig {
    pub iterations: u64,
    pub seed: u64,
    /// Samples per batch; each batch is one unit of parallel work.
    pub batch: u64,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig {
            iterations: 100_000,
            seed: 0,
            batch: 1024,
        }
    }
}

impl SamplerConfig {
    pub fn new(iterations: u64, seed: u64) -> Self {
        SamplerConfig {
            iterations,
            seed,
            ..SamplerConfig::default()
        }
    }

    pub fn with_iterations(self, iterations: u64) -> Self {
        SamplerConfig { iterations, ..self }
    }

    pub fn with_seed(self, seed: u64) -> Self {
        SamplerConfig { seed, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if self.iterations < 2 {
            return Err(Error::InvalidParameter(format!(
                "at least 2 iterations are needed, got {}",
                self.iterations
            )));
        }
        if self.batch == 0 {
            return Err(Error::InvalidParameter("batch size must be positive".into()));
        }
        Ok(())
    }

    fn batches(&self) -> u64 {
        self.iterations.div_ceil(self.batch)
    }

    fn batch_len(&self, b: u64) -> u64 {
        self.batch.min(self.iterations - b * self.batch)
    }

    /// RNG for batch `b`.
    pub fn stream(&self, b: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(b);
        rng
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub mean: f64,
    /// Sample standard deviation (divisor `samples − 1`) over `√samples`.
    pub stderr: f64,
    pub samples: u64,
    pub seed: u64,
}

impl Estimate {
    /// `|mean − target| ≤ k·stderr`.
    pub fn covers(&self, target: f64, k: f64) -> bool {
        (self.mean - target).abs() <= k * self.stderr
    }
}

/// Running count, mean and sum of squared deviations.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Moments {
    count: u64,
    mean: f64,
    m2: f64,
}

impl Moments {
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let d = x - self.mean;
        self.mean += d / self.count as f64;
        self.m2 += d * (x - self.mean);
    }

    /// Pairwise combination of two summaries.
    pub fn merge(&mut self, other: &Moments) {
        if other.count == 0 {
            return;
        }
        if self.count == 0 {
            *self = *other;
            return;
        }
        let n = (self.count + other.count) as f64;
        let d = other.mean - self.mean;
        let (a, b) = (self.count as f64, other.count as f64);
        self.mean += d * b / n;
        self.m2 += other.m2 + d * d * a * b / n;
        self.count += other.count;
    }

    pub fn estimate(&self, seed: u64) -> Estimate {
        let var = if self.count > 1 {
            (self.m2 / (self.count - 1) as f64).max(0.0)
        } else {
            0.0
        };
        Estimate {
            mean: self.mean,
            stderr: (var / self.count as f64).sqrt(),
            samples: self.count,
            seed,
        }
    }
}

/// Runs `per_batch` on every batch in parallel and combines the results in
/// batch order.
pub fn run_batches<T, F, C>(cfg: &SamplerConfig, per_batch: F, mut combine: C) -> Result<Option<T>>
where
    T: Send,
    F: Fn(&mut ChaCha8Rng, u64) -> T + Sync,
    C: FnMut(&mut T, T),
{
    cfg.validate()?;
    let parts: Vec<T> = (0..cfg.batches())
        .into_par_iter()
        .map(|b| per_batch(&mut cfg.stream(b), cfg.batch_len(b)))
        .collect();
    let mut it = parts.into_iter();
    let mut acc = it.next();
    if let Some(a) = acc.as_mut() {
        for p in it {
            combine(a, p);
        }
    }
    Ok(acc)
}

/// Shapley value of every player from uniformly random orders.
pub fn mc_shapley<G: Game + ?Sized>(game: &G, cfg: &SamplerConfig) -> Result<Vec<Estimate>> {
    let n = game.players();
    check_players(n)?;
    let acc = run_batches(
        cfg,
        |rng, len| {
            let mut m = vec![Moments::default(); n];
            let mut perm: Vec<usize> = (0..n).collect();
            for _ in 0..len {
                perm.shuffle(rng);
                let mut s = Coalition::EMPTY;
                let mut prev = 0.0;
                for &i in &perm {
                    s = s.with(i);
                    let cur = game.worth(s);
                    m[i].push(cur - prev);
                    prev = cur;
                }
            }
            m
        },
        |a, b| a.iter_mut().zip(&b).for_each(|(x, y)| x.merge(y)),
    )?
    .expect("at least one batch");
    Ok(acc.iter().map(|m| m.estimate(cfg.seed)).collect())
}

/// Marginal contribution of `player` to its predecessors in random orders.
pub fn mc_shapley_of<G: Game + ?Sized>(
    game: &G,
    player: usize,
    cfg: &SamplerConfig,
) -> Result<Estimate> {
    let n = game.players();
    crate::game::check_player(player, n)?;
    let acc = run_batches(
        cfg,
        |rng, len| {
            let mut m = Moments::default();
            let mut perm: Vec<usize> = (0..n).collect();
            for _ in 0..len {
                perm.shuffle(rng);
                let s: Coalition = perm.iter().take_while(|&&p| p != player).copied().collect();
                m.push(game.worth(s.with(player)) - game.worth(s));
            }
            m
        },
        |a, b| a.merge(&b),
    )?
    .expect("at least one batch");
    Ok(acc.estimate(cfg.seed))
}

/// Shapley group value of `group` by sampling orders of the merging game and
/// tracking the proxy only.
pub fn mc_group_value<G: Game + ?Sized>(
    game: &G,
    group: Coalition,
    cfg: &SamplerConfig,
) -> Result<Estimate> {
    check_coalition(group, game.players())?;
    let merged = merge(game, group)?;
    mc_shapley_of(&merged, merged.proxy(), cfg)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingReport {
    pub iterations: u64,
    /// One pair of estimates per seed: at `iterations` and at `4·iterations`.
    pub runs: Vec<(Estimate, Estimate)>,
    /// Mean large-run stderr over mean small-run stderr; 1 when both vanish.
    pub ratio: f64,
    /// Largest `|a − b| / √(se_a² + se_b²)` between large runs of different
    /// seeds; 0 when every stderr vanishes.
    pub max_seed_discrepancy: f64,
}

impl ScalingReport {
    pub fn ratio_within(&self, lo: f64, hi: f64) -> bool {
        (lo..=hi).contains(&self.ratio)
    }
}

/// Compares standard errors at `m` and `4m` iterations; quadrupling the
/// samples should halve the error.
pub fn stderr_scaling_check<G: Game + ?Sized>(
    game: &G,
    group: Coalition,
    cfg: &SamplerConfig,
    seeds: &[u64],
) -> Result<ScalingReport> {
    if seeds.is_empty() {
        return Err(Error::InvalidParameter("at least one seed is needed".into()));
    }
    let mut runs = Vec::with_capacity(seeds.len());
    for &seed in seeds {
        let small = mc_group_value(game, group, &cfg.with_seed(seed))?;
        let large = mc_group_value(
            game,
            group,
            &cfg.with_seed(seed).with_iterations(4 * cfg.iterations),
        )?;
        runs.push((small, large));
    }
    let k = runs.len() as f64;
    let se_small = runs.iter().map(|r| r.0.stderr).sum::<f64>() / k;
    let se_large = runs.iter().map(|r| r.1.stderr).sum::<f64>() / k;
    let ratio = if se_small == 0.0 && se_large == 0.0 {
        1.0
    } else {
        se_large / se_small
    };
    let mut max_seed_discrepancy: f64 = 0.0;
    for (a, (_, x)) in runs.iter().enumerate() {
        for (_, y) in &runs[a + 1..] {
            let se = (x.stderr.powi(2) + y.stderr.powi(2)).sqrt();
            if se > 0.0 {
                max_seed_discrepancy = max_seed_discrepancy.max((x.mean - y.mean).abs() / se);
            }
        }
    }
    Ok(ScalingReport {
        iterations: cfg.iterations,
        runs,
        ratio,
        max_seed_discrepancy,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::generate::random_dividend_game;
    use crate::game::{TableGame, UnanimityCombination};
    use crate::shapley::shapley_value;
    use proptest::prelude::*;

    #[test]
    fn moments_merge_matches_single_pass() {
        let xs: Vec<f64> = (0..101).map(|i| ((i * 37) % 11) as f64 * 0.3 - 1.0).collect();
        let mut whole = Moments::default();
        xs.iter().for_each(|&x| whole.push(x));
        let mut a = Moments::default();
        let mut b = Moments::default();
        xs[..40].iter().for_each(|&x| a.push(x));
        xs[40..].iter().for_each(|&x| b.push(x));
        a.merge(&b);
        assert_eq!(a.count, whole.count);
        assert!((a.mean - whole.mean).abs() < 1e-14);
        assert!((a.m2 - whole.m2).abs() < 1e-12);
    }

    #[test]
    fn config_validation() {
        let g = TableGame::from_fn(3, |s| s.len() as f64).unwrap();
        assert!(mc_shapley(&g, &SamplerConfig::new(1, 0)).is_err());
        let zero_batch = SamplerConfig {
            batch: 0,
            ..SamplerConfig::default()
        };
        assert!(mc_shapley(&g, &zero_batch).is_err());
        assert!(mc_group_value(&g, Coalition::EMPTY, &SamplerConfig::default()).is_err());
    }

    #[test]
    fn additive_game_has_zero_variance() {
        let b = [0.5, -1.0, 2.0, 3.5, 0.0];
        let g = TableGame::from_fn(5, |s| s.players().map(|i| b[i]).sum()).unwrap();
        let est = mc_shapley(&g, &SamplerConfig::new(500, 3)).unwrap();
        for i in 0..5 {
            assert!((est[i].mean - b[i]).abs() < 1e-12);
            assert!(est[i].stderr < 1e-12);
            assert_eq!(est[i].samples, 500);
        }
    }

    #[test]
    fn grand_coalition_group_is_exact() {
        let mut rng = <ChaCha8Rng as SeedableRng>::seed_from_u64(1);
        let g = random_dividend_game(6, &mut rng);
        let e = mc_group_value(&g, Coalition::full(6), &SamplerConfig::new(50, 1)).unwrap();
        assert_eq!(e.mean, g.worth(Coalition::full(6)));
        assert_eq!(e.stderr, 0.0);
    }

    #[test]
    fn grand_unanimity_estimates() {
        let u = UnanimityCombination::unanimity(10, Coalition::full(10)).unwrap();
        let cfg = SamplerConfig::new(100_000, 17);
        for e in mc_shapley(&u, &cfg).unwrap() {
            assert!(e.covers(0.1, 4.0), "{e:?}");
        }
        let c = Coalition::from_players([2, 5, 7]);
        let e = mc_group_value(&u, c, &cfg).unwrap();
        assert!(e.covers(1.0 / 8.0, 4.0), "{e:?}");
    }

    #[test]
    fn deterministic_for_fixed_triple() {
        let mut rng = <ChaCha8Rng as SeedableRng>::seed_from_u64(2);
        let g = random_dividend_game(8, &mut rng);
        let cfg = SamplerConfig {
            iterations: 5000,
            seed: 99,
            batch: 300,
        };
        let a = mc_shapley(&g, &cfg).unwrap();
        let b = mc_shapley(&g, &cfg).unwrap();
        assert_eq!(a, b);
        let c = Coalition::from_players([1, 4]);
        assert_eq!(
            mc_group_value(&g, c, &cfg).unwrap(),
            mc_group_value(&g, c, &cfg).unwrap()
        );
    }

    #[test]
    fn calibrated_against_exact_values() {
        let mut rng = <ChaCha8Rng as SeedableRng>::seed_from_u64(4);
        let g = random_dividend_game(12, &mut rng);
        let exact = shapley_value(&g).unwrap();
        let mut covered = 0;
        let mut total = 0;
        for seed in 0..10 {
            let est = mc_shapley(&g, &SamplerConfig::new(20_000, seed)).unwrap();
            for i in 0..12 {
                total += 1;
                covered += est[i].covers(exact[i], 4.0) as usize;
            }
        }
        assert!(covered * 100 >= total * 95, "{covered}/{total}");
    }

    #[test]
    fn scaling_halves_the_error() {
        let mut rng = <ChaCha8Rng as SeedableRng>::seed_from_u64(6);
        let g = random_dividend_game(9, &mut rng);
        let r = stderr_scaling_check(
            &g,
            Coalition::from_players([0, 3]),
            &SamplerConfig::new(10_000, 0),
            &[1, 2, 3],
        )
        .unwrap();
        assert!(r.ratio_within(0.4, 0.6), "{}", r.ratio);
        assert!(r.max_seed_discrepancy <= 6.0);
    }

    #[test]
    fn zero_variance_ratio_is_one() {
        let g = TableGame::from_fn(4, |s| s.len() as f64).unwrap();
        let r = stderr_scaling_check(
            &g,
            Coalition::singleton(1),
            &SamplerConfig::new(100, 0),
            &[5],
        )
        .unwrap();
        assert_eq!(r.ratio, 1.0);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn batch_summaries_combine_in_order(xs in prop::collection::vec(-1e3f64..1e3, 2..200), cut in 1usize..199) {
            let cut = cut.min(xs.len() - 1);
            let mut whole = Moments::default();
            xs.iter().for_each(|&x| whole.push(x));
            let mut a = Moments::default();
            let mut b = Moments::default();
            xs[..cut].iter().for_each(|&x| a.push(x));
            xs[cut..].iter().for_each(|&x| b.push(x));
            a.merge(&b);
            prop_assert!((a.mean - whole.mean).abs() <= 1e-9 * (1.0 + whole.mean.abs()));
            prop_assert!((a.m2 - whole.m2).abs() <= 1e-7 * (1.0 + whole.m2));
        }
    }
}
