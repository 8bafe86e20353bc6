use rand::distributions::Open01;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coalition::Coalition;
use crate::error::{Error, Result};
use crate::estimation::{Estimate, Moments};
use crate::game::{check_player, check_players, Game};

const ROW_SUM_SLACK: f64 = 1e-12;

/// Directed influence weights: `weight(i, j)` is how much agent `i` listens
/// to agent `j`. Each agent's incoming weights sum to at most 1.
#[derive(Clone, Debug, PartialEq)]
pub struct InfluenceModel {
    n: usize,
    weights: Vec<f64>,
}

impl InfluenceModel {
    pub fn new(n: usize) -> Result<Self> {
        check_players(n)?;
        Ok(InfluenceModel {
            n,
            weights: vec![0.0; n * n],
        })
    }

    /// Builds a model from `(i, j, w_ij)` triples and validates row sums.
    pub fn from_weights<I>(n: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        let mut m = InfluenceModel::new(n)?;
        for (i, j, w) in entries {
            check_player(i, n)?;
            check_player(j, n)?;
            if i == j {
                return Err(Error::MalformedData(format!("agent {i} influences itself")));
            }
            if !w.is_finite() || w < 0.0 {
                return Err(Error::MalformedData(format!(
                    "influence {i}<-{j} has invalid weight {w}"
                )));
            }
            if m.weights[i * n + j] != 0.0 {
                return Err(Error::MalformedData(format!(
                    "influence {i}<-{j} is listed twice"
                )));
            }
            m.weights[i * n + j] = w;
        }
        for i in 0..n {
            let total = m.row_sum(i);
            if total > 1.0 + ROW_SUM_SLACK {
                return Err(Error::MalformedData(format!(
                    "incoming weights of agent {i} sum to {total} > 1"
                )));
            }
        }
        Ok(m)
    }

    pub fn agents(&self) -> usize {
        self.n
    }

    pub fn weight(&self, i: usize, j: usize) -> f64 {
        self.weights[i * self.n + j]
    }

    pub fn row_sum(&self, i: usize) -> f64 {
        self.weights[i * self.n..(i + 1) * self.n].iter().sum()
    }

    /// Final active set of the cascade seeded by `seeds` under fixed
    /// thresholds: an inactive agent activates once the weight it assigns to
    /// active agents reaches its threshold.
    pub fn cascade(&self, seeds: Coalition, thresholds: &[f64]) -> Coalition {
        let n = self.n;
        let mut active = seeds;
        loop {
            let mut grown = active;
            for i in (Coalition::full(n) - active).players() {
                let row = &self.weights[i * n..(i + 1) * n];
                let incoming: f64 = active.players().map(|j| row[j]).sum();
                if incoming >= thresholds[i] {
                    grown = grown.with(i);
                }
            }
            if grown == active {
                return active;
            }
            active = grown;
        }
    }
}

/// Expected number of active agents at the end of a linear-threshold cascade
/// seeded by the coalition, with thresholds uniform on (0, 1).
///
/// Sample `r` always uses the thresholds of ChaCha8 stream `r` of the seed,
/// so every coalition is evaluated against the same threshold draws. Worths
/// are therefore deterministic and monotone in the coalition.
#[derive(Clone, Debug)]
pub struct LinearThresholdGame {
    model: InfluenceModel,
    runs: u64,
    seed: u64,
}

pub fn linear_threshold_game(
    model: &InfluenceModel,
    runs: u64,
    seed: u64,
) -> Result<LinearThresholdGame> {
    if runs == 0 {
        return Err(Error::InvalidParameter("at least one threshold sample is needed".into()));
    }
    Ok(LinearThresholdGame {
        model: model.clone(),
        runs,
        seed,
    })
}

impl LinearThresholdGame {
    pub fn runs(&self) -> u64 {
        self.runs
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn model(&self) -> &InfluenceModel {
        &self.model
    }

    fn thresholds(&self, r: u64, out: &mut [f64]) {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(r);
        for t in out.iter_mut() {
            *t = rng.sample(Open01);
        }
    }

    /// Mean active count over the threshold samples with its standard error.
    pub fn estimate(&self, s: Coalition) -> Estimate {
        let mut m = Moments::default();
        if s.is_empty() {
            m.push(0.0);
            m.push(0.0);
            return m.estimate(self.seed);
        }
        let mut theta = vec![0.0; self.model.n];
        let mut total = 0u64;
        for r in 0..self.runs {
            self.thresholds(r, &mut theta);
            let active = self.model.cascade(s, &theta).len();
            total += active as u64;
            m.push(active as f64);
        }
        Estimate {
            mean: total as f64 / self.runs as f64,
            ..m.estimate(self.seed)
        }
    }
}

impl Game for LinearThresholdGame {
    fn players(&self) -> usize {
        self.model.n
    }

    fn worth(&self, s: Coalition) -> f64 {
        if s.is_empty() {
            return 0.0;
        }
        let mut theta = vec![0.0; self.model.n];
        let mut total = 0u64;
        for r in 0..self.runs {
            self.thresholds(r, &mut theta);
            total += self.model.cascade(s, &theta).len() as u64;
        }
        total as f64 / self.runs as f64
    }
}
