//! Bernoulli numbers and regular primes.

use std::sync::Mutex;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::is_prime;
use crate::error::{Error, Result};

pub const MAX_REGULARITY_PRIME: u64 = 10_000;

/// Largest prime handled through exact Bernoulli numbers; above it the
/// power-sum congruence is used.
pub const EXACT_BERNOULLI_LIMIT: u64 = 300;

static TABLE: Mutex<Vec<BigRational>> = Mutex::new(Vec::new());

/// `B_n` with `B_1 = -1/2`, from `Σ_{j=0}^{n} C(n+1, j) B_j = 0`. Memoised.
pub fn bernoulli(n: usize) -> BigRational {
    let mut t = TABLE.lock().unwrap_or_else(|e| e.into_inner());
    if t.is_empty() {
        t.push(BigRational::one());
    }
    while t.len() <= n {
        let m = t.len();
        if m > 1 && m % 2 == 1 {
            t.push(BigRational::zero());
            continue;
        }
        let mut binom = BigInt::one();
        let mut s = BigRational::zero();
        for (j, b) in t.iter().enumerate() {
            if !b.is_zero() {
                s += BigRational::from_integer(binom.clone()) * b;
            }
            binom = binom * BigInt::from(m + 1 - j) / BigInt::from(j + 1);
        }
        t.push(-s / BigRational::from_integer(BigInt::from(m + 1)));
    }
    t[n].clone()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegularityRoute {
    ExactBernoulli,
    PowerSums,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Regularity {
    pub p: u64,
    pub regular: bool,
    /// Even `k ≤ p − 3` with `p | B_k`.
    pub irregular_indices: Vec<u64>,
    pub route: RegularityRoute,
}

/// Whether `p` divides none of the numerators of `B_2, …, B_{p−3}`.
pub fn is_regular_prime(p: u64) -> Result<Regularity> {
    if p == 2 {
        return Err(Error::Unsupported("regularity is defined for odd primes".into()));
    }
    if !is_prime(p) {
        return Err(Error::Invalid(format!("{p} is not prime")));
    }
    if p > MAX_REGULARITY_PRIME {
        return Err(Error::Resource(format!("p = {p} exceeds {MAX_REGULARITY_PRIME}")));
    }
    let (irregular_indices, route) = if p <= EXACT_BERNOULLI_LIMIT {
        (irregular_indices_exact(p), RegularityRoute::ExactBernoulli)
    } else {
        (irregular_indices_power_sums(p), RegularityRoute::PowerSums)
    };
    Ok(Regularity {
        p,
        regular: irregular_indices.is_empty(),
        irregular_indices,
        route,
    })
}

pub fn irregular_indices_exact(p: u64) -> Vec<u64> {
    let pb = BigInt::from(p);
    (2..p.saturating_sub(2))
        .step_by(2)
        .filter(|&k| bernoulli(k as usize).numer().is_multiple_of(&pb))
        .collect()
}

/// `p | B_k` iff `Σ_{a<p} a^k ≡ 0 (mod p²)` for even `2 ≤ k ≤ p − 3`.
pub fn irregular_indices_power_sums(p: u64) -> Vec<u64> {
    let q = (p * p) as u128;
    let top = p.saturating_sub(3);
    if top < 2 {
        return Vec::new();
    }
    let nk = (top / 2) as usize;
    let sums = (1..p)
        .into_par_iter()
        .fold(
            || vec![0u128; nk],
            |mut acc, a| {
                let a2 = (a as u128 * a as u128) % q;
                let mut x = a2;
                for s in acc.iter_mut() {
                    *s = (*s + x) % q;
                    x = x * a2 % q;
                }
                acc
            },
        )
        .reduce(
            || vec![0u128; nk],
            |a, b| a.iter().zip(&b).map(|(x, y)| (x + y) % q).collect(),
        );
    sums.iter()
        .enumerate()
        .filter(|(_, &s)| s == 0)
        .map(|(i, _)| 2 * (i as u64 + 1))
        .collect()
}
