//! Seeded random game generators used by the property suites and tests.

use rand::Rng;

use crate::coalition::Coalition;

use super::{zeta_in_place, TableGame};

/// Dense dividends, uniform on `[-1, 1)`, indexed by mask (slot 0 is zero).
pub fn random_dividends<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    let mut d: Vec<f64> = (0..1usize << n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    d[0] = 0.0;
    d
}

fn from_dividend_table(n: usize, mut d: Vec<f64>) -> TableGame {
    d[0] = 0.0;
    zeta_in_place(&mut d);
    TableGame::new(n, d).expect("generator sizes are within the exact cap")
}

/// Game with dense random dividends.
pub fn random_dividend_game<R: Rng + ?Sized>(n: usize, rng: &mut R) -> TableGame {
    from_dividend_table(n, random_dividends(n, rng))
}

/// Game with nonnegative dividends on a random support. Such games are
/// monotone and superadditive.
pub fn random_nonnegative_dividend_game<R: Rng + ?Sized>(
    n: usize,
    density: f64,
    rng: &mut R,
) -> TableGame {
    let d = (0..1usize << n)
        .map(|_| {
            if rng.gen_bool(density) {
                rng.gen_range(0.0..1.0)
            } else {
                0.0
            }
        })
        .collect();
    from_dividend_table(n, d)
}

/// Game with random dividends on a random support of the given density.
pub fn random_sparse_dividend_game<R: Rng + ?Sized>(
    n: usize,
    density: f64,
    rng: &mut R,
) -> TableGame {
    let d = (0..1usize << n)
        .map(|_| {
            if rng.gen_bool(density) {
                rng.gen_range(-1.0..1.0)
            } else {
                0.0
            }
        })
        .collect();
    from_dividend_table(n, d)
}

/// Monotone game that need not have nonnegative dividends: each coalition
/// takes the best worth among its maximal proper subsets plus a random
/// nonnegative increment (often zero).
pub fn random_monotone_game<R: Rng + ?Sized>(n: usize, rng: &mut R) -> TableGame {
    let mut v = vec![0.0; 1usize << n];
    for m in 1..v.len() {
        let s = Coalition::from_bits(m as u64);
        let floor = s
            .players()
            .map(|i| v[s.without(i).bits() as usize])
            .fold(0.0f64, f64::max);
        let bump = if rng.gen_bool(0.5) {
            rng.gen_range(0.0..1.0)
        } else {
            0.0
        };
        v[m] = floor + bump;
    }
    TableGame::new(n, v).expect("generator sizes are within the exact cap")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{is_monotonic, is_superadditive};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generators_have_declared_structure() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in 2..=7 {
            let g = random_nonnegative_dividend_game(n, 0.5, &mut rng);
            assert!(is_monotonic(&g).unwrap());
            assert!(is_superadditive(&g).unwrap());
            let m = random_monotone_game(n, &mut rng);
            assert!(is_monotonic(&m).unwrap());
        }
    }

    #[test]
    fn generators_are_seed_deterministic() {
        let a = random_dividend_game(6, &mut ChaCha8Rng::seed_from_u64(9));
        let b = random_dividend_game(6, &mut ChaCha8Rng::seed_from_u64(9));
        assert_eq!(a, b);
    }
}
