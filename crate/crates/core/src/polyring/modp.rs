//! Arithmetic modulo a word-sized prime and randomized rank evidence.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::matrix::MonadMatrix;
use super::ring::CoordinateRing;
use crate::error::{Error, Result};

/// Largest prime below 2^31.
pub const DEFAULT_PRIME: u64 = 2_147_483_629;
pub const DEFAULT_TRIALS: usize = 20;
const MIN_PRIME: u64 = 1 << 20;
const POINT_RETRIES: usize = 64;

pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &b in &BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'outer: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// Rank of a dense matrix over `F_p`, by Gaussian elimination.
pub fn rank_mod_p(mut rows: Vec<Vec<u64>>, p: u64) -> usize {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..ncols {
        let Some(pivot) = (rank..nrows).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = pow_mod(rows[rank][col], p - 2, p);
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == rank || row[col] == 0 {
                continue;
            }
            let factor = mul_mod(row[col], inv, p);
            for (x, &pv) in row[col..ncols].iter_mut().zip(&pivot_row[col..ncols]) {
                *x = (*x + p - mul_mod(factor, pv, p)) % p;
            }
        }
        rank += 1;
        if rank == nrows {
            break;
        }
    }
    rank
}

/// Outcome of evaluating a polynomial matrix at random points of `X`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankEvidence {
    pub prime: u64,
    pub seed: u64,
    pub trials: usize,
    pub max_rank_seen: usize,
    pub ranks: Vec<usize>,
    /// One coordinate vector per trial, indexed by variable.
    pub points: Vec<Vec<u64>>,
}

/// A random point of `X` over `F_p`: every factor's coordinate tuple is
/// nonzero.
pub fn sample_point<R: Rng>(ring: &CoordinateRing, p: u64, rng: &mut R) -> Result<Vec<u64>> {
    let mut point = vec![0u64; ring.num_vars()];
    for f in 0..ring.num_factors() {
        let range = ring.factor_range(f);
        let mut ok = false;
        for _ in 0..POINT_RETRIES {
            for i in range.clone() {
                point[i] = rng.gen_range(0..p);
            }
            if range.clone().any(|i| point[i] != 0) {
                ok = true;
                break;
            }
        }
        if !ok {
            return Err(Error::DegeneratePoint(POINT_RETRIES));
        }
    }
    Ok(point)
}

pub fn check_prime(p: u64) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p < MIN_PRIME {
        return Err(Error::InvalidInput(format!("prime {p} is below 2^20")));
    }
    Ok(())
}

pub fn rank_at_random_points(
    m: &MonadMatrix,
    p: u64,
    trials: usize,
    seed: u64,
) -> Result<RankEvidence> {
    check_prime(p)?;
    if trials == 0 {
        return Err(Error::InvalidInput("at least one trial is required".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points = (0..trials)
        .map(|_| sample_point(m.ring(), p, &mut rng))
        .collect::<Result<Vec<_>>>()?;
    let ranks: Vec<usize> = points
        .par_iter()
        .map(|pt| rank_mod_p(m.eval_mod(pt, p), p))
        .collect();
    Ok(RankEvidence {
        prime: p,
        seed,
        trials,
        max_rank_seen: ranks.iter().copied().max().unwrap_or(0),
        ranks,
        points,
    })
}
