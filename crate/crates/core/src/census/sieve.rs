//! Segmented sieve of Eratosthenes.

use rayon::prelude::*;

use crate::arith::{integer_root, primes_up_to};
use crate::error::{Error, Result};

/// Largest bound accepted by the sieve.
pub const SIEVE_CAP: u64 = 100_000_000;
const SEGMENT: u64 = 1 << 18;

/// Primes in `[lo, hi]`, in increasing order.
pub fn primes_between(lo: u64, hi: u64) -> Result<Vec<u64>> {
    if hi > SIEVE_CAP {
        return Err(Error::Resource(format!("sieve bound {hi} exceeds {SIEVE_CAP}")));
    }
    let lo = lo.max(2);
    if hi < lo {
        return Ok(Vec::new());
    }
    let base = primes_up_to(integer_root(hi, 2));
    let starts: Vec<u64> = (lo..=hi).step_by(SEGMENT as usize).collect();
    let chunks: Vec<Vec<u64>> = starts
        .into_par_iter()
        .map(|start| {
            let end = (start + SEGMENT - 1).min(hi);
            let mut composite = vec![false; (end - start + 1) as usize];
            for &p in &base {
                let first = (p * p).max(start.div_ceil(p) * p);
                let mut m = first;
                while m <= end {
                    composite[(m - start) as usize] = true;
                    m += p;
                }
            }
            composite
                .iter()
                .enumerate()
                .filter(|(_, &c)| !c)
                .map(|(i, _)| start + i as u64)
                .collect()
        })
        .collect();
    Ok(chunks.concat())
}

pub fn primes_to(hi: u64) -> Result<Vec<u64>> {
    primes_between(2, hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_plain_sieve() {
        assert_eq!(primes_to(1_000_000).unwrap(), primes_up_to(1_000_000));
        let plain: Vec<u64> = primes_up_to(1_000_000).into_iter().filter(|&p| p >= 999_000).collect();
        assert_eq!(primes_between(999_000, 1_000_000).unwrap(), plain);
        assert_eq!(primes_to(1).unwrap(), Vec::<u64>::new());
        assert!(primes_to(SIEVE_CAP + 1).is_err());
    }
}
