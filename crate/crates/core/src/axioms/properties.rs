//! Properties P1–P13 of group values as sampled executable checks.
//!
//! Universal statements are checked on the unanimity basis and on seeded
//! random games, so a pass means that no counterexample turned up in the
//! suite, not a proof.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coalition::Coalition;
use crate::error::{Error, Result};
use crate::game::generate::{
    random_dividend_game, random_dividends, random_monotone_game,
    random_nonnegative_dividend_game,
};
use crate::game::{
    is_dummy_player, is_null_player, restrict, zeta_in_place, Game, TableGame,
};

use super::functional::GroupValueFunctional;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Property {
    P1,
    P2,
    P3,
    P4,
    P5,
    P6,
    P7,
    P8,
    P9,
    P10,
    P11,
    P12,
    P13,
}

impl Property {
    pub const ALL: [Property; 13] = [
        Property::P1,
        Property::P2,
        Property::P3,
        Property::P4,
        Property::P5,
        Property::P6,
        Property::P7,
        Property::P8,
        Property::P9,
        Property::P10,
        Property::P11,
        Property::P12,
        Property::P13,
    ];

    pub fn number(self) -> usize {
        Property::ALL.iter().position(|&p| p == self).expect("listed") + 1
    }

    pub fn title(self) -> &'static str {
        match self {
            Property::P1 => "G-coherence",
            Property::P2 => "G-dummy player",
            Property::P3 => "G-null player",
            Property::P4 => "G-anonymity",
            Property::P5 => "G-linearity",
            Property::P6 => "G-coalitional balanced contributions",
            Property::P7 => "G-symmetry over pure bargaining games",
            Property::P8 => "G-coalitional monotonicity",
            Property::P9 => "G-strong monotonicity",
            Property::P10 => "G-positivity",
            Property::P11 => "G-relative invariance under strategic equivalence",
            Property::P12 => "G-coalitional strategic equivalence",
            Property::P13 => "G-fair ranking",
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P{}", self.number())
    }
}

impl FromStr for Property {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        s.trim()
            .strip_prefix(['P', 'p'])
            .and_then(|d| d.parse::<usize>().ok())
            .filter(|k| (1..=13).contains(k))
            .map(|k| Property::ALL[k - 1])
            .ok_or_else(|| Error::InvalidParameter(format!("unknown property id '{s}'")))
    }
}

/// Which games a suite draws and how strictly it compares.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteSpec {
    /// Inclusive range of player counts.
    pub n_range: [usize; 2],
    /// Random games per player count, in addition to the unanimity basis.
    pub games_per_n: usize,
    pub seed: u64,
    pub tolerance: f64,
}

impl Default for SuiteSpec {
    fn default() -> Self {
        SuiteSpec {
            n_range: [3, 8],
            games_per_n: 100,
            seed: 0,
            tolerance: 1e-9,
        }
    }
}

impl SuiteSpec {
    pub fn validate(&self) -> Result<()> {
        let [lo, hi] = self.n_range;
        if lo < 1 || lo > hi || hi > 12 {
            return Err(Error::InvalidParameter(format!(
                "n_range [{lo}, {hi}] must satisfy 1 ≤ lo ≤ hi ≤ 12"
            )));
        }
        if !(self.tolerance >= 0.0 && self.tolerance.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "tolerance must be a nonnegative number, got {}",
                self.tolerance
            )));
        }
        Ok(())
    }

    fn players(&self) -> std::ops::RangeInclusive<usize> {
        self.n_range[0]..=self.n_range[1]
    }

    fn rng(&self, p: Property, n: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream((p.number() * 64 + n) as u64);
        rng
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

/// Everything needed to replay a violation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub players: usize,
    /// How the game was produced, e.g. `unanimity {0,1}` or `random #12`.
    pub source: String,
    /// Worth table of the game, indexed by mask.
    pub game: Vec<f64>,
    /// Second game of a paired property.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub other_game: Option<Vec<f64>>,
    pub groups: Vec<Coalition>,
    /// Players the property quantifies over (dummy, pair, …).
    pub members: Vec<usize>,
    pub expected: f64,
    pub actual: f64,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub property: Property,
    pub functional: String,
    pub verdict: Verdict,
    pub tolerance: f64,
    pub games: usize,
    pub instances: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

impl PropertyReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

/// A game in a suite together with its provenance.
#[derive(Clone, Debug)]
pub(crate) struct SuiteGame {
    pub source: String,
    pub game: TableGame,
}

impl SuiteGame {
    fn new(source: impl Into<String>, game: TableGame) -> Self {
        SuiteGame {
            source: source.into(),
            game,
        }
    }
}

pub(crate) fn unanimity_table(n: usize, s: Coalition) -> TableGame {
    TableGame::from_fn(n, |t| if s.is_subset_of(t) { 1.0 } else { 0.0 })
        .expect("suite sizes are within the exact cap")
}

/// All unanimity games `u_S` on `n` players, in increasing mask order.
pub(crate) fn basis_games(n: usize) -> Vec<SuiteGame> {
    Coalition::full(n)
        .subsets()
        .skip(1)
        .map(|s| SuiteGame::new(format!("unanimity {s}"), unanimity_table(n, s)))
        .collect()
}

fn random_games(n: usize, count: usize, rng: &mut ChaCha8Rng) -> Vec<SuiteGame> {
    (0..count)
        .map(|k| SuiteGame::new(format!("random #{k}"), random_dividend_game(n, rng)))
        .collect()
}

/// Random dividends except that `p` only carries the singleton dividend `own`,
/// which makes `p` a dummy player with `v({p}) = own`.
fn game_with_dummy(n: usize, p: usize, own: f64, rng: &mut ChaCha8Rng) -> TableGame {
    let mut d = random_dividends(n, rng);
    for (m, x) in d.iter_mut().enumerate() {
        if m >> p & 1 == 1 {
            *x = 0.0;
        }
    }
    d[1 << p] = own;
    zeta_in_place(&mut d);
    TableGame::new(n, d).expect("suite sizes are within the exact cap")
}

fn nonempty_mask(n: usize, rng: &mut ChaCha8Rng) -> Coalition {
    Coalition::from_bits(rng.gen_range(1..1u64 << n))
}

/// Accumulates instance counts and the first violation.
struct Tally<'a> {
    tol: f64,
    instances: u64,
    games: usize,
    witness: Option<Witness>,
    current: Option<&'a SuiteGame>,
}

impl<'a> Tally<'a> {
    fn new(tol: f64) -> Self {
        Tally {
            tol,
            instances: 0,
            games: 0,
            witness: None,
            current: None,
        }
    }

    fn game(&mut self, g: &'a SuiteGame) {
        self.games += 1;
        self.current = Some(g);
    }

    fn failed(&self) -> bool {
        self.witness.is_some()
    }

    fn fail(
        &mut self,
        other: Option<&TableGame>,
        groups: Vec<Coalition>,
        members: Vec<usize>,
        expected: f64,
        actual: f64,
        detail: String,
    ) {
        let g = self.current.expect("game set before checks");
        self.witness = Some(Witness {
            players: g.game.players(),
            source: g.source.clone(),
            game: g.game.worths().to_vec(),
            other_game: other.map(|o| o.worths().to_vec()),
            groups,
            members,
            expected,
            actual,
            detail,
        });
    }

    /// Records `|expected − actual| ≤ tol`; returns false on violation.
    #[allow(clippy::too_many_arguments)]
    fn eq(
        &mut self,
        expected: f64,
        actual: f64,
        other: Option<&TableGame>,
        groups: &[Coalition],
        members: &[usize],
        detail: impl FnOnce() -> String,
    ) -> bool {
        self.instances += 1;
        if (expected - actual).abs() <= self.tol {
            true
        } else {
            self.fail(other, groups.to_vec(), members.to_vec(), expected, actual, detail());
            false
        }
    }

    /// Records `lower ≤ upper + tol`; returns false on violation.
    fn le(
        &mut self,
        lower: f64,
        upper: f64,
        other: Option<&TableGame>,
        groups: &[Coalition],
        detail: impl FnOnce() -> String,
    ) -> bool {
        self.instances += 1;
        if lower <= upper + self.tol {
            true
        } else {
            self.fail(other, groups.to_vec(), vec![], upper, lower, detail());
            false
        }
    }

    fn report(self, p: Property, f: &dyn GroupValueFunctional) -> PropertyReport {
        PropertyReport {
            property: p,
            functional: f.name(),
            verdict: if self.witness.is_some() {
                Verdict::Fail
            } else {
                Verdict::Pass
            },
            tolerance: self.tol,
            games: self.games,
            instances: self.instances,
            witness: self.witness,
        }
    }
}

/// Value tables of a functional on `v` and on every `v_{-i}`, re-indexed to
/// base masks.
struct RestrictionTables {
    full: Vec<f64>,
    without: Vec<Vec<f64>>,
}

impl RestrictionTables {
    fn new(f: &dyn GroupValueFunctional, v: &TableGame) -> Result<Self> {
        let n = v.players();
        let full = f.value_table(v)?;
        let without = (0..n)
            .map(|i| f.value_table(&restrict(v, Coalition::singleton(i))?))
            .collect::<Result<_>>()?;
        Ok(RestrictionTables { full, without })
    }

    /// `ξ(C; N∖i, v_{-i})` for `C ∌ i`.
    fn minus(&self, i: usize, c: Coalition) -> f64 {
        self.without[i][c.squeeze(Coalition::singleton(i)).bits() as usize]
    }
}

/// Both sides of the coalitional balanced contributions identity for
/// `(C, i, j)`: `[ξ(C∪i) − ξ(C)] − [ξ_{-j}(C∪i) − ξ_{-j}(C)]` and the same
/// with `i`, `j` swapped.
pub fn cbc_sides(
    f: &dyn GroupValueFunctional,
    v: &dyn Game,
    c: Coalition,
    i: usize,
    j: usize,
) -> Result<(f64, f64)> {
    let n = v.players();
    crate::game::check_coalition(c, n)?;
    if i == j || c.contains(i) || c.contains(j) || i >= n || j >= n {
        return Err(Error::InvalidParameter(format!(
            "need distinct players outside {c}, got {i} and {j}"
        )));
    }
    let vi = restrict(v, Coalition::singleton(i))?;
    let vj = restrict(v, Coalition::singleton(j))?;
    let at = |g: &dyn Game, removed: Option<usize>, s: Coalition| {
        let s = removed.map_or(s, |r| s.squeeze(Coalition::singleton(r)));
        f.evaluate(g, s)
    };
    let left = (at(v, None, c.with(i))? - at(v, None, c)?)
        - (at(&vj, Some(j), c.with(i))? - at(&vj, Some(j), c)?);
    let right = (at(v, None, c.with(j))? - at(v, None, c)?)
        - (at(&vi, Some(i), c.with(j))? - at(&vi, Some(i), c)?);
    Ok((left, right))
}

type Check<'a> = Box<dyn Fn(&mut Tally<'a>, &'a SuiteGame) -> Result<()> + 'a>;

fn run_games<'a>(t: &mut Tally<'a>, games: &'a [SuiteGame], check: Check<'a>) -> Result<()> {
    for g in games {
        if t.failed() {
            break;
        }
        t.game(g);
        check(t, g)?;
    }
    Ok(())
}

/// Checks one property of `f` over the suite.
pub fn check_property(
    f: &dyn GroupValueFunctional,
    p: Property,
    suite: &SuiteSpec,
) -> Result<PropertyReport> {
    suite.validate()?;
    let mut total = Tally::new(suite.tolerance);
    for n in suite.players() {
        let mut rng = suite.rng(p, n);
        let games = suite_games(p, n, suite, &mut rng);
        let mut t = Tally::new(suite.tolerance);
        check_on(f, p, n, &games, &mut t, &mut rng)?;
        total.instances += t.instances;
        total.games += t.games;
        if let Some(w) = t.witness {
            total.witness = Some(w);
            break;
        }
    }
    Ok(total.report(p, f))
}

/// Checks every property, in parallel, reporting in property order.
pub fn check_all(f: &dyn GroupValueFunctional, suite: &SuiteSpec) -> Result<Vec<PropertyReport>> {
    Property::ALL
        .par_iter()
        .map(|&p| check_property(f, p, suite))
        .collect()
}

/// The games a property is checked on for `n` players.
fn suite_games(p: Property, n: usize, suite: &SuiteSpec, rng: &mut ChaCha8Rng) -> Vec<SuiteGame> {
    let mut games = match p {
        Property::P7 => {
            return vec![SuiteGame::new(
                "unanimity N",
                unanimity_table(n, Coalition::full(n)),
            )]
        }
        _ => basis_games(n),
    };
    match p {
        Property::P2 | Property::P3 => {
            for k in 0..suite.games_per_n {
                let at = rng.gen_range(0..n);
                let own = if p == Property::P3 { 0.0 } else { rng.gen_range(-1.0..1.0) };
                games.push(SuiteGame::new(
                    format!("random #{k} with dummy {at}"),
                    game_with_dummy(n, at, own, rng),
                ));
            }
        }
        Property::P10 => {
            for k in 0..suite.games_per_n {
                let g = if k % 2 == 0 {
                    random_nonnegative_dividend_game(n, 0.5, rng)
                } else {
                    random_monotone_game(n, rng)
                };
                games.push(SuiteGame::new(format!("monotone #{k}"), g));
            }
        }
        _ => games.extend(random_games(n, suite.games_per_n, rng)),
    }
    games
}

fn check_on<'a>(
    f: &'a dyn GroupValueFunctional,
    p: Property,
    n: usize,
    games: &'a [SuiteGame],
    t: &mut Tally<'a>,
    rng: &mut ChaCha8Rng,
) -> Result<()> {
    let full = Coalition::full(n);
    match p {
        Property::P1 => run_games(
            t,
            games,
            Box::new(move |t, g| {
                let x = f.value_table(&g.game)?;
                let singles: f64 = (0..n).map(|i| x[1 << i]).sum();
                t.eq(x[full.bits() as usize], singles, None, &[full], &[], || {
                    "sum of singleton values differs from the grand-coalition value".into()
                });
                Ok(())
            }),
        ),
        Property::P2 | Property::P3 => run_games(
            t,
            games,
            Box::new(move |t, g| {
                let x = f.value_table(&g.game)?;
                for i in 0..n {
                    let applies = if p == Property::P2 {
                        is_dummy_player(&g.game, i)?
                    } else {
                        is_null_player(&g.game, i)?
                    };
                    if !applies {
                        continue;
                    }
                    let own = if p == Property::P2 {
                        g.game.worth(Coalition::singleton(i))
                    } else {
                        0.0
                    };
                    for c in full.without(i).subsets() {
                        let ok = t.eq(
                            x[c.bits() as usize] + own,
                            x[c.with(i).bits() as usize],
                            None,
                            &[c, c.with(i)],
                            &[i],
                            || format!("adding player {i} to {c} should change the value by {own}"),
                        );
                        if !ok {
                            return Ok(());
                        }
                    }
                }
                Ok(())
            }),
        ),
        Property::P4 => {
            let perms: Vec<Vec<usize>> = games
                .iter()
                .map(|_| {
                    let mut pi: Vec<usize> = (0..n).collect();
                    pi.shuffle(rng);
                    pi
                })
                .collect();
            let cell = std::cell::Cell::new(0usize);
            run_games(
                t,
                games,
                Box::new(move |t, g| {
                    let pi = &perms[cell.get()];
                    cell.set(cell.get() + 1);
                    let map = |s: Coalition| s.players().map(|i| pi[i]).collect::<Coalition>();
                    // w(π(S)) = v(S)
                    let mut w = vec![0.0; 1 << n];
                    for s in full.subsets() {
                        w[map(s).bits() as usize] = g.game.worth(s);
                    }
                    let w = TableGame::new(n, w)?;
                    let xv = f.value_table(&g.game)?;
                    let xw = f.value_table(&w)?;
                    for c in full.subsets() {
                        let ok = t.eq(
                            xv[c.bits() as usize],
                            xw[map(c).bits() as usize],
                            Some(&w),
                            &[c, map(c)],
                            pi,
                            || format!("relabelling by {pi:?} moves the value of {c}"),
                        );
                        if !ok {
                            break;
                        }
                    }
                    Ok(())
                }),
            )
        }
        Property::P5 => {
            let partners: Vec<(usize, f64, f64)> = games
                .iter()
                .map(|_| {
                    (
                        rng.gen_range(0..games.len()),
                        rng.gen_range(-2.0..2.0),
                        rng.gen_range(-2.0..2.0),
                    )
                })
                .collect();
            let cell = std::cell::Cell::new(0usize);
            run_games(
                t,
                games,
                Box::new(move |t, g| {
                    let (k, a, b) = partners[cell.get()];
                    cell.set(cell.get() + 1);
                    let w = &games[k].game;
                    let mix = TableGame::from_fn(n, |s| a * g.game.worth(s) + b * w.worth(s))?;
                    let xv = f.value_table(&g.game)?;
                    let xw = f.value_table(w)?;
                    let xm = f.value_table(&mix)?;
                    for c in full.subsets() {
                        let m = c.bits() as usize;
                        let ok = t.eq(
                            a * xv[m] + b * xw[m],
                            xm[m],
                            Some(w),
                            &[c],
                            &[],
                            || {
                                format!(
                                    "value of {a}·v + {b}·w at {c} is not the combination (w = {})",
                                    games[k].source
                                )
                            },
                        );
                        if !ok {
                            break;
                        }
                    }
                    Ok(())
                }),
            )
        }
        Property::P6 => run_games(
            t,
            games,
            Box::new(move |t, g| {
                let tables = RestrictionTables::new(f, &g.game)?;
                let x = &tables.full;
                for c in full.subsets() {
                    if c == full {
                        continue;
                    }
                    let out: Vec<usize> = (full - c).players().collect();
                    for (a, &i) in out.iter().enumerate() {
                        for &j in &out[a + 1..] {
                            let (ci, cj, cm) = (
                                c.with(i).bits() as usize,
                                c.with(j).bits() as usize,
                                c.bits() as usize,
                            );
                            let left = (x[ci] - x[cm])
                                - (tables.minus(j, c.with(i)) - tables.minus(j, c));
                            let right = (x[cj] - x[cm])
                                - (tables.minus(i, c.with(j)) - tables.minus(i, c));
                            let ok = t.eq(left, right, None, &[c], &[i, j], || {
                                format!(
                                    "balanced contributions fail for C = {c}, i = {i}, j = {j}"
                                )
                            });
                            if !ok {
                                return Ok(());
                            }
                        }
                    }
                }
                Ok(())
            }),
        ),
        Property::P7 => run_games(
            t,
            games,
            Box::new(move |t, g| {
                let x = f.value_table(&g.game)?;
                for c in full.subsets().skip(1) {
                    let expected = 1.0 / (n - c.len() + 1) as f64;
                    if !t.eq(expected, x[c.bits() as usize], None, &[c], &[], || {
                        format!("value of {c} in the grand unanimity game")
                    }) {
                        break;
                    }
                }
                Ok(())
            }),
        ),
        Property::P8 => {
            let bumps: Vec<(Coalition, f64)> = games
                .iter()
                .map(|_| (nonempty_mask(n, rng), rng.gen_range(0.01..1.0)))
                .collect();
            let cell = std::cell::Cell::new(0usize);
            run_games(
                t,
                games,
                Box::new(move |t, g| {
                    let (tt, delta) = bumps[cell.get()];
                    cell.set(cell.get() + 1);
                    let mut w = g.game.worths().to_vec();
                    w[tt.bits() as usize] += delta;
                    let w = TableGame::new(n, w)?;
                    let xv = f.value_table(&g.game)?;
                    let xw = f.value_table(&w)?;
                    for c in tt.subsets() {
                        let m = c.bits() as usize;
                        if !t.le(xv[m], xw[m], Some(&w), &[c, tt], || {
                            format!("raising v({tt}) by {delta} lowers the value of {c}")
                        }) {
                            break;
                        }
                    }
                    Ok(())
                }),
            )
        }
        Property::P9 => {
            let plans: Vec<Vec<(Coalition, Vec<f64>)>> = games
                .iter()
                .map(|_| {
                    (0..3)
                        .map(|_| {
                            let c = nonempty_mask(n, rng);
                            // h has nonnegative C-marginals: h(S ∪ C) ≥ h(S).
                            let mut h: Vec<f64> =
                                (0..1usize << n).map(|_| rng.gen_range(-1.0..1.0)).collect();
                            h[0] = 0.0;
                            for s in (full - c).subsets() {
                                h[(s | c).bits() as usize] =
                                    h[s.bits() as usize] + rng.gen_range(0.0..1.0);
                            }
                            (c, h)
                        })
                        .collect()
                })
                .collect();
            let cell = std::cell::Cell::new(0usize);
            run_games(
                t,
                games,
                Box::new(move |t, g| {
                    let plan = &plans[cell.get()];
                    cell.set(cell.get() + 1);
                    let xv = f.value_table(&g.game)?;
                    for (c, h) in plan {
                        let w = TableGame::from_fn(n, |s| {
                            g.game.worth(s) + h[s.bits() as usize]
                        })?;
                        let xw = f.evaluate(&w, *c)?;
                        if !t.le(xv[c.bits() as usize], xw, Some(&w), &[*c], || {
                            format!("larger marginal contributions of {c} lower its value")
                        }) {
                            break;
                        }
                    }
                    Ok(())
                }),
            )
        }
        Property::P10 => run_games(
            t,
            games,
            Box::new(move |t, g| {
                let x = f.value_table(&g.game)?;
                for c in full.subsets() {
                    if !t.le(0.0, x[c.bits() as usize], None, &[c], || {
                        format!("negative value for {c} in a monotonic game")
                    }) {
                        break;
                    }
                }
                Ok(())
            }),
        ),
        Property::P11 => {
            let maps: Vec<(f64, Vec<f64>)> = games
                .iter()
                .map(|_| {
                    (
                        rng.gen_range(0.1..3.0),
                        (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect(),
                    )
                })
                .collect();
            let cell = std::cell::Cell::new(0usize);
            run_games(
                t,
                games,
                Box::new(move |t, g| {
                    let (a, b) = &maps[cell.get()];
                    cell.set(cell.get() + 1);
                    let w = TableGame::from_fn(n, |s| {
                        a * g.game.worth(s) + s.players().map(|i| b[i]).sum::<f64>()
                    })?;
                    let xv = f.value_table(&g.game)?;
                    let xw = f.value_table(&w)?;
                    for c in full.subsets() {
                        let m = c.bits() as usize;
                        let shift: f64 = c.players().map(|i| b[i]).sum();
                        if !t.eq(a * xv[m] + shift, xw[m], Some(&w), &[c], &[], || {
                            format!("affine map with scale {a} and shift {b:?} at {c}")
                        }) {
                            break;
                        }
                    }
                    Ok(())
                }),
            )
        }
        Property::P12 => {
            let adds: Vec<Vec<(Coalition, f64)>> = games
                .iter()
                .map(|_| {
                    (0..3)
                        .map(|_| (nonempty_mask(n, rng), rng.gen_range(-2.0..2.0)))
                        .collect()
                })
                .collect();
            let cell = std::cell::Cell::new(0usize);
            run_games(
                t,
                games,
                Box::new(move |t, g| {
                    let add = &adds[cell.get()];
                    cell.set(cell.get() + 1);
                    let xv = f.value_table(&g.game)?;
                    for &(tt, lambda) in add {
                        let w = TableGame::from_fn(n, |s| {
                            g.game.worth(s) + if tt.is_subset_of(s) { lambda } else { 0.0 }
                        })?;
                        let xw = f.value_table(&w)?;
                        for c in (full - tt).subsets() {
                            let m = c.bits() as usize;
                            if !t.eq(xv[m], xw[m], Some(&w), &[c, tt], &[], || {
                                format!("adding {lambda}·u_{tt} changes the value of {c}")
                            }) {
                                return Ok(());
                            }
                        }
                    }
                    Ok(())
                }),
            )
        }
        Property::P13 => {
            let changes: Vec<Vec<(Coalition, f64)>> = games
                .iter()
                .map(|_| {
                    (0..3)
                        .map(|_| {
                            let tt = loop {
                                let tt = nonempty_mask(n, rng);
                                if tt.len() >= 2 {
                                    break tt;
                                }
                            };
                            let delta = rng.gen_range(0.05..2.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
                            (tt, delta)
                        })
                        .collect()
                })
                .collect();
            let cell = std::cell::Cell::new(0usize);
            let tol = t.tol;
            run_games(
                t,
                games,
                Box::new(move |t, g| {
                    let change = &changes[cell.get()];
                    cell.set(cell.get() + 1);
                    let xv = f.value_table(&g.game)?;
                    for &(tt, delta) in change {
                        let mut w = g.game.worths().to_vec();
                        w[tt.bits() as usize] += delta;
                        let w = TableGame::new(n, w)?;
                        let xw = f.value_table(&w)?;
                        let inside: Vec<Coalition> = tt.subsets().skip(1).collect();
                        for &c1 in &inside {
                            for &c2 in &inside {
                                if c1.len() != c2.len() || c1 == c2 {
                                    continue;
                                }
                                let (m1, m2) = (c1.bits() as usize, c2.bits() as usize);
                                if xv[m1] - xv[m2] <= tol {
                                    continue;
                                }
                                t.instances += 1;
                                if xw[m1] - xw[m2] <= 0.0 {
                                    t.fail(
                                        Some(&w),
                                        vec![c1, c2, tt],
                                        vec![],
                                        xv[m1] - xv[m2],
                                        xw[m1] - xw[m2],
                                        format!(
                                            "{c1} ranks above {c2} in v but not after changing v({tt}) by {delta}"
                                        ),
                                    );
                                    return Ok(());
                                }
                            }
                        }
                    }
                    Ok(())
                }),
            )
        }
    }
}
