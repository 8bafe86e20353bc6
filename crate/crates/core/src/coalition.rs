//! Coalitions as 64-bit player masks.

use std::fmt;
use std::ops::{BitAnd, BitOr, Sub};

use serde::{Deserialize, Serialize};

/// Largest supported player count (mask width).
pub const MAX_PLAYERS: usize = 64;

/// A set of players `0..n`, one bit per player.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Coalition(u64);

impl Coalition {
    pub const EMPTY: Coalition = Coalition(0);

    pub const fn from_bits(bits: u64) -> Self {
        Coalition(bits)
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    /// The grand coalition of an `n`-player game.
    pub const fn full(n: usize) -> Self {
        if n >= 64 {
            Coalition(u64::MAX)
        } else {
            Coalition((1u64 << n) - 1)
        }
    }

    pub const fn singleton(player: usize) -> Self {
        Coalition(1u64 << player)
    }

    pub fn from_players<I: IntoIterator<Item = usize>>(players: I) -> Self {
        players
            .into_iter()
            .fold(Coalition::EMPTY, |acc, p| acc.with(p))
    }

    pub const fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub const fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub const fn contains(self, player: usize) -> bool {
        player < 64 && (self.0 >> player) & 1 == 1
    }

    pub const fn with(self, player: usize) -> Self {
        Coalition(self.0 | (1u64 << player))
    }

    pub const fn without(self, player: usize) -> Self {
        Coalition(self.0 & !(1u64 << player))
    }

    pub const fn union(self, other: Coalition) -> Self {
        Coalition(self.0 | other.0)
    }

    pub const fn intersection(self, other: Coalition) -> Self {
        Coalition(self.0 & other.0)
    }

    pub const fn difference(self, other: Coalition) -> Self {
        Coalition(self.0 & !other.0)
    }

    pub const fn is_subset_of(self, other: Coalition) -> bool {
        self.0 & !other.0 == 0
    }

    pub const fn is_disjoint(self, other: Coalition) -> bool {
        self.0 & other.0 == 0
    }

    /// True when every member is a valid index of an `n`-player game.
    pub const fn fits(self, n: usize) -> bool {
        self.is_subset_of(Coalition::full(n))
    }

    /// Lowest member, if any.
    pub const fn first(self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            Some(self.0.trailing_zeros() as usize)
        }
    }

    /// Members in increasing order.
    pub fn players(self) -> Players {
        Players(self.0)
    }

    /// Every subset of `self`, including the empty set and `self`, in
    /// increasing mask order.
    pub fn subsets(self) -> Subsets {
        Subsets {
            mask: self.0,
            next: Some(0),
        }
    }

    /// Removes the bit positions listed in `removed` and packs the remaining
    /// bits downwards. This is the index map from a universe to the universe
    /// with `removed` deleted.
    pub fn squeeze(self, removed: Coalition) -> Coalition {
        let mut out = 0u64;
        let mut dst = 0;
        for src in 0..64 {
            if removed.contains(src) {
                continue;
            }
            if self.contains(src) {
                out |= 1 << dst;
            }
            dst += 1;
        }
        Coalition(out)
    }

    /// Inverse of [`Coalition::squeeze`]: spreads packed bits back around
    /// the positions in `removed`.
    pub fn spread(self, removed: Coalition) -> Coalition {
        let mut out = 0u64;
        let mut src = 0;
        for dst in 0..64 {
            if removed.contains(dst) {
                continue;
            }
            if self.contains(src) {
                out |= 1 << dst;
            }
            src += 1;
            if src >= 64 {
                break;
            }
        }
        Coalition(out)
    }
}

impl fmt::Debug for Coalition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Coalition{self}")
    }
}

impl fmt::Display for Coalition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, p) in self.players().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str("}")
    }
}

impl BitOr for Coalition {
    type Output = Coalition;
    fn bitor(self, rhs: Coalition) -> Coalition {
        self.union(rhs)
    }
}

impl BitAnd for Coalition {
    type Output = Coalition;
    fn bitand(self, rhs: Coalition) -> Coalition {
        self.intersection(rhs)
    }
}

impl Sub for Coalition {
    type Output = Coalition;
    fn sub(self, rhs: Coalition) -> Coalition {
        self.difference(rhs)
    }
}

impl FromIterator<usize> for Coalition {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        Coalition::from_players(iter)
    }
}

#[derive(Clone, Debug)]
pub struct Players(u64);

impl Iterator for Players {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let p = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(p)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let k = self.0.count_ones() as usize;
        (k, Some(k))
    }
}

impl ExactSizeIterator for Players {}

#[derive(Clone, Debug)]
pub struct Subsets {
    mask: u64,
    next: Option<u64>,
}

impl Iterator for Subsets {
    type Item = Coalition;

    fn next(&mut self) -> Option<Coalition> {
        let cur = self.next?;
        // Increment within the mask: set all non-mask bits, add one, clear them again.
        self.next = if cur == self.mask {
            None
        } else {
            Some(((cur | !self.mask).wrapping_add(1)) & self.mask)
        };
        Some(Coalition(cur))
    }
}

/// All `k`-element subsets of `0..n` in increasing mask order (Gosper's hack).
pub fn k_subsets(n: usize, k: usize) -> KSubsets {
    let next = if k > n {
        None
    } else if k == 0 {
        Some(0u128)
    } else {
        Some((1u128 << k) - 1)
    };
    KSubsets {
        limit: 1u128 << n,
        k,
        next,
    }
}

#[derive(Clone, Debug)]
pub struct KSubsets {
    limit: u128,
    k: usize,
    next: Option<u128>,
}

impl Iterator for KSubsets {
    type Item = Coalition;

    fn next(&mut self) -> Option<Coalition> {
        let cur = self.next?;
        if cur >= self.limit {
            self.next = None;
            return None;
        }
        self.next = if self.k == 0 {
            None
        } else {
            let low = cur & cur.wrapping_neg();
            let ripple = cur + low;
            Some((((ripple ^ cur) >> 2) / low) | ripple)
        };
        Some(Coalition(cur as u64))
    }
}

/// Binomial coefficient, saturating at `u128::MAX`.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul((n - i) as u128) {
            Some(x) => x / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn basic_set_algebra() {
        let a = Coalition::from_players([0, 2, 5]);
        let b = Coalition::from_players([2, 3]);
        assert_eq!(a.len(), 3);
        assert_eq!((a | b).players().collect::<Vec<_>>(), vec![0, 2, 3, 5]);
        assert_eq!((a & b), Coalition::singleton(2));
        assert_eq!((a - b).players().collect::<Vec<_>>(), vec![0, 5]);
        assert!(Coalition::singleton(2).is_subset_of(a));
        assert!(!a.is_subset_of(b));
        assert_eq!(a.to_string(), "{0,2,5}");
        assert_eq!(Coalition::full(64).len(), 64);
        assert!(a.fits(6) && !a.fits(5));
    }

    #[test]
    fn subsets_enumerate_power_set() {
        let m = Coalition::from_players([1, 3, 4]);
        let subs: Vec<_> = m.subsets().collect();
        assert_eq!(subs.len(), 8);
        assert!(subs.windows(2).all(|w| w[0] < w[1]));
        assert!(subs.iter().all(|s| s.is_subset_of(m)));
        assert_eq!(Coalition::EMPTY.subsets().count(), 1);
    }

    #[test]
    fn k_subsets_counts() {
        for n in 0..=10 {
            for k in 0..=n {
                let v: Vec<_> = k_subsets(n, k).collect();
                assert_eq!(v.len() as u128, binomial(n, k), "n={n} k={k}");
                assert!(v.iter().all(|c| c.len() == k && c.fits(n)));
                assert!(v.windows(2).all(|w| w[0] < w[1]));
            }
        }
        assert_eq!(k_subsets(64, 64).count(), 1);
        assert_eq!(k_subsets(3, 4).count(), 0);
    }

    proptest! {
        #[test]
        fn squeeze_spread_roundtrip(bits in any::<u64>(), removed in any::<u64>()) {
            let removed = Coalition::from_bits(removed);
            let c = Coalition::from_bits(bits) - removed;
            let packed = c.squeeze(removed);
            prop_assert_eq!(packed.len(), c.len());
            prop_assert_eq!(packed.spread(removed), c);
        }
    }
}
