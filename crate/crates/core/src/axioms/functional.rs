//! Group value functionals: the Shapley group value, the additive group
//! value, and three counterexamples defined on the unanimity basis.

use std::fmt::Debug;

use rayon::prelude::*;

use crate::coalition::Coalition;
use crate::error::{Error, Result};
use crate::game::{
    check_coalition, ensure_exact, harsanyi_dividends, is_null_player, Game, STRUCT_EPS,
};
use crate::shapley::{shapley_group_value, shapley_value};

/// A rule assigning a value to every group of every game, with the empty
/// group worth 0.
pub trait GroupValueFunctional: Debug + Send + Sync {
    /// Short identifier, e.g. `"shapley"`.
    fn name(&self) -> String;

    fn evaluate(&self, game: &dyn Game, group: Coalition) -> Result<f64>;

    /// Values of all `2^n` groups, indexed by mask.
    fn value_table(&self, game: &dyn Game) -> Result<Vec<f64>> {
        let n = game.players();
        ensure_exact(n)?;
        (0..1u64 << n)
            .into_par_iter()
            .map(|m| self.evaluate(game, Coalition::from_bits(m)))
            .collect()
    }
}

/// `φ^g`: the proxy's Shapley value in the merging game.
#[derive(Clone, Copy, Debug, Default)]
pub struct ShapleyGroupValue;

impl GroupValueFunctional for ShapleyGroupValue {
    fn name(&self) -> String {
        "shapley".into()
    }

    fn evaluate(&self, game: &dyn Game, group: Coalition) -> Result<f64> {
        Ok(shapley_group_value(game, group)?.value)
    }
}

/// Sum of the members' Shapley values.
#[derive(Clone, Copy, Debug, Default)]
pub struct AdditiveGroupValue;

impl GroupValueFunctional for AdditiveGroupValue {
    fn name(&self) -> String {
        "additive".into()
    }

    fn evaluate(&self, game: &dyn Game, group: Coalition) -> Result<f64> {
        check_coalition(group, game.players())?;
        Ok(shapley_value(game)?.sum_over(group))
    }

    fn value_table(&self, game: &dyn Game) -> Result<Vec<f64>> {
        let phi = shapley_value(game)?;
        Ok((0..1u64 << game.players())
            .map(|m| phi.sum_over(Coalition::from_bits(m)))
            .collect())
    }
}

/// A functional fixed on unanimity games `u_S` and extended linearly:
/// `ξ(C; v) = Σ_S d_S(v) · ξ(C; u_S)`.
pub trait BasisFunctional: Debug + Send + Sync {
    fn basis_name(&self) -> String;

    /// `ξ(C; u_S)` in an `n`-player game, for nonempty `C` and `S ≠ N`.
    fn on_unanimity(&self, n: usize, carrier: Coalition, group: Coalition) -> f64;
}

fn basis_value<B: BasisFunctional + ?Sized>(
    b: &B,
    n: usize,
    dividends: &[(Coalition, f64)],
    group: Coalition,
) -> f64 {
    if group.is_empty() {
        return 0.0;
    }
    let full = Coalition::full(n);
    let grand = 1.0 / (n - group.len() + 1) as f64;
    dividends
        .iter()
        .map(|&(s, d)| {
            d * if s == full {
                grand
            } else {
                b.on_unanimity(n, s, group)
            }
        })
        .sum()
}

impl<B: BasisFunctional> GroupValueFunctional for B {
    fn name(&self) -> String {
        self.basis_name()
    }

    fn evaluate(&self, game: &dyn Game, group: Coalition) -> Result<f64> {
        let n = game.players();
        check_coalition(group, n)?;
        let d = harsanyi_dividends(game)?;
        Ok(basis_value(self, n, &d, group))
    }

    fn value_table(&self, game: &dyn Game) -> Result<Vec<f64>> {
        let n = game.players();
        let d = harsanyi_dividends(game)?;
        Ok((0..1u64 << n)
            .into_par_iter()
            .map(|m| basis_value(self, n, &d, Coalition::from_bits(m)))
            .collect())
    }
}

/// Functional that fails only the null-player property: groups
/// collect `α^n, α^{n−1}, …` from unanimity games they are not part of.
#[derive(Clone, Copy, Debug)]
pub struct AlphaFunctional {
    alpha: f64,
}

impl AlphaFunctional {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "alpha must lie in (0, 1), got {alpha}"
            )));
        }
        Ok(AlphaFunctional { alpha })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// `Σ_{k=0}^{terms−1} α^{n−k}`.
    fn tail(&self, n: usize, terms: usize) -> f64 {
        (0..terms).map(|k| self.alpha.powi((n - k) as i32)).sum()
    }
}

impl BasisFunctional for AlphaFunctional {
    fn basis_name(&self) -> String {
        "alpha".into()
    }

    fn on_unanimity(&self, n: usize, s: Coalition, c: Coalition) -> f64 {
        if c.is_disjoint(s) {
            self.tail(n, c.len())
        } else {
            1.0 / (s.len() - (s & c).len() + 1) as f64 + self.tail(n, n - s.len())
        }
    }
}

/// Functional that fails only coalitional balanced contributions:
/// `|S ∩ C| · |S \ C|` on unanimity games that `C` splits.
#[derive(Clone, Copy, Debug, Default)]
pub struct ProductFunctional;

impl BasisFunctional for ProductFunctional {
    fn basis_name(&self) -> String {
        "product".into()
    }

    fn on_unanimity(&self, _n: usize, s: Coalition, c: Coalition) -> f64 {
        if c.is_disjoint(s) {
            0.0
        } else if s.is_subset_of(c) {
            1.0
        } else {
            ((s & c).len() * (s - c).len()) as f64
        }
    }
}

/// Functional that fails only linearity: `φ^g` on games with a
/// null player and on `u_N`, `φ^g + k` on every other game.
#[derive(Clone, Copy, Debug)]
pub struct ShiftFunctional {
    k: f64,
}

impl ShiftFunctional {
    pub fn new(k: f64) -> Result<Self> {
        if k == 0.0 || !k.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "shift must be a nonzero finite constant, got {k}"
            )));
        }
        Ok(ShiftFunctional { k })
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    /// Case of the definition where the functional agrees with `φ^g`.
    pub fn is_unshifted(game: &dyn Game) -> Result<bool> {
        let n = game.players();
        for i in 0..n {
            if is_null_player(game, i)? {
                return Ok(true);
            }
        }
        let full = Coalition::full(n);
        let d = harsanyi_dividends(game)?;
        Ok(d.iter().all(|&(s, x)| {
            if s == full {
                (x - 1.0).abs() <= STRUCT_EPS
            } else {
                x.abs() <= STRUCT_EPS
            }
        }) && d.iter().any(|&(s, _)| s == full))
    }

    fn offset(&self, game: &dyn Game) -> Result<f64> {
        Ok(if Self::is_unshifted(game)? { 0.0 } else { self.k })
    }
}

impl GroupValueFunctional for ShiftFunctional {
    fn name(&self) -> String {
        "shift".into()
    }

    fn evaluate(&self, game: &dyn Game, group: Coalition) -> Result<f64> {
        let base = shapley_group_value(game, group)?.value;
        if group.is_empty() {
            return Ok(base);
        }
        Ok(base + self.offset(game)?)
    }

    fn value_table(&self, game: &dyn Game) -> Result<Vec<f64>> {
        let offset = self.offset(game)?;
        let mut t = ShapleyGroupValue.value_table(game)?;
        t.iter_mut().skip(1).for_each(|x| *x += offset);
        Ok(t)
    }
}

pub fn counterexample_alpha(alpha: f64) -> Result<AlphaFunctional> {
    AlphaFunctional::new(alpha)
}

pub fn counterexample_shift(k: f64) -> Result<ShiftFunctional> {
    ShiftFunctional::new(k)
}

pub fn counterexample_product() -> ProductFunctional {
    ProductFunctional
}

/// Looks a functional up by its identifier.
pub fn functional_by_name(
    name: &str,
    alpha: f64,
    k: f64,
) -> Result<Box<dyn GroupValueFunctional>> {
    Ok(match name {
        "shapley" => Box::new(ShapleyGroupValue),
        "additive" => Box::new(AdditiveGroupValue),
        "alpha" => Box::new(AlphaFunctional::new(alpha)?),
        "shift" => Box::new(ShiftFunctional::new(k)?),
        "product" => Box::new(ProductFunctional),
        other => {
            return Err(Error::InvalidParameter(format!(
                "unknown functional '{other}' (expected shapley, additive, alpha, shift or product)"
            )))
        }
    })
}
