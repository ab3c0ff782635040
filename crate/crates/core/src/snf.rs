//! Smith normal form over the local rings `Z/p^M`.
//!
//! Finitely presented `Z/p^M`-modules `(Z/p^M)^n / rowspace(R)` are
//! decomposed into cyclic factors `Z/p^{e_i}`; the precision `M` must exceed
//! every exponent of interest for the answer to be exact.

use crate::arith::{inv_mod, mul_mod};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalSnf {
    pub p: u64,
    pub precision: u32,
    /// Exponents `e_i` of the cyclic factors `Z/p^{e_i}` of the cokernel, trivial factors dropped.
    /// An exponent equal to `precision` means "at least `precision`".
    pub exponents: Vec<u32>,
    /// Generators of the cyclic factors, as coordinate vectors in the original basis
    /// (only filled when requested).
    pub generators: Vec<Vec<u64>>,
}

impl LocalSnf {
    /// `log_p` of the cokernel's order (saturating at the precision).
    pub fn log_order(&self) -> u64 {
        self.exponents.iter().map(|&e| e as u64).sum()
    }

    /// `dim_Fp` of the cokernel tensored with `F_p`.
    pub fn p_rank(&self) -> usize {
        self.exponents.len()
    }

    /// True when some factor reached the working precision.
    pub fn saturated(&self) -> bool {
        self.exponents.iter().any(|&e| e >= self.precision)
    }
}

fn valuation_mod(x: u64, p: u64, m: u32) -> u32 {
    if x == 0 {
        return m;
    }
    let mut v = 0;
    let mut y = x;
    while y % p == 0 {
        y /= p;
        v += 1;
    }
    v
}

/// Cokernel of the relation rows `rows` (each of length `cols`) over `Z/p^M`.
pub fn cokernel(rows: &[Vec<u64>], cols: usize, p: u64, precision: u32, want_generators: bool) -> Result<LocalSnf> {
    let modulus = (p as u128).checked_pow(precision).filter(|&m| m < (1u128 << 62)).ok_or_else(|| {
        Error::Resource(format!("{p}^{precision} exceeds the machine-word Smith form"))
    })? as u64;
    let mut a: Vec<Vec<u64>> = rows
        .iter()
        .map(|r| {
            assert_eq!(r.len(), cols, "ragged relation matrix");
            r.iter().map(|x| x % modulus).collect()
        })
        .collect();
    let nrows = a.len();
    // inverse column transform, rows indexed by current columns
    let mut qinv: Vec<Vec<u64>> = if want_generators {
        (0..cols)
            .map(|i| (0..cols).map(|j| u64::from(i == j)).collect())
            .collect()
    } else {
        Vec::new()
    };
    let pw: Vec<u64> = (0..=precision).map(|k| p.pow(k)).collect();
    let mut exps = Vec::new();
    let mut t = 0;
    while t < nrows.min(cols) {
        // pivot of minimal valuation in the remaining block
        let mut best: Option<(u32, usize, usize)> = None;
        for (i, row) in a.iter().enumerate().skip(t) {
            for (j, &x) in row.iter().enumerate().skip(t) {
                if x == 0 {
                    continue;
                }
                let v = valuation_mod(x, p, precision);
                if best.map_or(true, |(bv, _, _)| v < bv) {
                    best = Some((v, i, j));
                    if v == 0 {
                        break;
                    }
                }
            }
            if matches!(best, Some((0, _, _))) {
                break;
            }
        }
        let Some((v, pi, pj)) = best else { break };
        a.swap(t, pi);
        if pj != t {
            for row in a.iter_mut() {
                row.swap(t, pj);
            }
            if want_generators {
                qinv.swap(t, pj);
            }
        }
        // normalise pivot to p^v by scaling the row with the inverse unit part
        let unit = a[t][t] / pw[v as usize];
        let uinv = inv_mod(unit % modulus, modulus).expect("unit part invertible");
        for x in a[t].iter_mut() {
            *x = mul_mod(*x, uinv, modulus);
        }
        debug_assert_eq!(a[t][t], pw[v as usize]);
        let pivot_row = a[t].clone();
        // clear the column
        for i in t + 1..nrows {
            let x = a[i][t];
            if x == 0 {
                continue;
            }
            let c = x / pw[v as usize];
            for j in t..cols {
                let s = mul_mod(c, pivot_row[j], modulus);
                a[i][j] = (a[i][j] + modulus - s) % modulus;
            }
        }
        // clear the row (column operations)
        for j in t + 1..cols {
            let x = a[t][j];
            if x == 0 {
                continue;
            }
            let c = x / pw[v as usize];
            for row in a.iter_mut().skip(t) {
                let s = mul_mod(c, row[t], modulus);
                row[j] = (row[j] + modulus - s) % modulus;
            }
            if want_generators {
                // col_j -= c col_t  =>  Q^{-1}: row_t += c row_j
                let rj = qinv[j].clone();
                for (x, y) in qinv[t].iter_mut().zip(&rj) {
                    *x = (*x + mul_mod(c, *y, modulus)) % modulus;
                }
            }
        }
        exps.push((t, v));
        t += 1;
    }
    let mut exponents = Vec::new();
    let mut generators = Vec::new();
    for &(idx, v) in &exps {
        if v > 0 {
            exponents.push(v.min(precision));
            if want_generators {
                generators.push(qinv[idx].clone());
            }
        }
    }
    for idx in exps.len()..cols {
        exponents.push(precision);
        if want_generators {
            generators.push(qinv[idx].clone());
        }
    }
    Ok(LocalSnf {
        p,
        precision,
        exponents,
        generators,
    })
}

/// Rank over `F_p` of a matrix with entries reduced mod `p`.
pub fn rank_mod_p(rows: &[Vec<u64>], cols: usize, p: u64) -> usize {
    let f = crate::ff::PrimeField { p };
    let m: Vec<Vec<u64>> = rows.iter().map(|r| r.iter().map(|x| x % p).collect()).collect();
    if m.is_empty() || cols == 0 {
        return 0;
    }
    crate::ff::rank(&f, &m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_and_mixed() {
        // Z^2 / <(9, 0), (0, 3)> over Z/3^4
        let s = cokernel(&[vec![9, 0], vec![0, 3]], 2, 3, 4, false).unwrap();
        let mut e = s.exponents.clone();
        e.sort();
        assert_eq!(e, vec![1, 2]);
        assert_eq!(s.log_order(), 3);
        // relation (3, 1) identifies e2 = -3 e1: cokernel Z/p^M free of rank 1
        let s = cokernel(&[vec![3, 1]], 2, 5, 3, false).unwrap();
        assert_eq!(s.exponents, vec![3]);
        assert!(s.saturated());
    }

    #[test]
    fn generators_have_the_right_order() {
        // Z^2 / <(2, 4), (6, 8)> over Z/2^5: det = -8 => order 8, structure Z/2 x Z/4
        let rows = vec![vec![2u64, 4], vec![6, 8]];
        let s = cokernel(&rows, 2, 2, 5, true).unwrap();
        let mut e = s.exponents.clone();
        e.sort();
        assert_eq!(e, vec![1, 2]);
        // p^{e_i} * g_i must lie in the row space over Z (checked mod 2^5 by brute force)
        for (g, &ei) in s.generators.iter().zip(&s.exponents) {
            let target: Vec<u64> = g.iter().map(|x| (x << ei) % 32).collect();
            let mut found = false;
            for a in 0..32u64 {
                for b in 0..32u64 {
                    let v: Vec<u64> = (0..2).map(|j| (a * rows[0][j] + b * rows[1][j]) % 32).collect();
                    if v == target {
                        found = true;
                    }
                }
            }
            assert!(found);
        }
    }

    #[test]
    fn ranks() {
        assert_eq!(rank_mod_p(&[vec![1, 2], vec![2, 4]], 2, 7), 1);
        assert_eq!(rank_mod_p(&[vec![1, 2], vec![2, 5]], 2, 7), 2);
    }
}
