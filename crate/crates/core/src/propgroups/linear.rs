//! Linear actions over `F_p`: fixed-point-freeness from the characteristic
//! polynomial, order-3 classes in `GL_3(F_p)`, and matrix one-units.

use serde::{Deserialize, Serialize};

use crate::arith::{gcd, is_prime};
use crate::error::{Error, Result};
use crate::ff::{
    block_diag, charpoly, companion, det, factor_small, kernel, mat_sub, matrix_order, poly_divrem,
    poly_eval, poly_mul, identity, Matrix, PrimeField,
};

const ORDER_CAP: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FpfCharpoly {
    pub p: u64,
    /// `det(x I − M)`, low degree first.
    pub charpoly: Vec<u64>,
    /// `P_M(1)`, zero iff 1 is an eigenvalue.
    pub p_at_one: u64,
    pub fixed_point_free: bool,
    pub kernel_dim: usize,
    pub order: u64,
}

/// For `M` of order prime to `p`, `M` fixes only 0 iff `P_M(1) ≠ 0`.
pub fn fpf_charpoly_test(m: &Matrix<u64>, p: u64) -> Result<FpfCharpoly> {
    let f = PrimeField::new(p)?;
    let n = m.len();
    if m.iter().any(|r| r.len() != n) {
        return Err(Error::Invalid("matrix must be square".into()));
    }
    let m: Matrix<u64> = m.iter().map(|r| r.iter().map(|x| x % p).collect()).collect();
    if det(&f, &m) == 0 {
        return Err(Error::Domain("matrix is singular".into()));
    }
    let order = matrix_order(&f, &m, ORDER_CAP)
        .ok_or_else(|| Error::Resource(format!("order exceeds {ORDER_CAP}")))?;
    if order % p == 0 {
        return Err(Error::Hypothesis(format!("order {order} is divisible by p = {p}")));
    }
    let cp = charpoly(&f, &m);
    let p_at_one = poly_eval(&f, &cp, &1);
    let kernel_dim = kernel(&f, &mat_sub(&f, &m, &identity(&f, n)), n).len();
    Ok(FpfCharpoly {
        p,
        charpoly: cp,
        p_at_one,
        fixed_point_free: p_at_one != 0,
        kernel_dim,
        order,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Order3Class {
    /// Invariant factors `d_1 | d_2 | …`, low degree first.
    pub invariant_factors: Vec<Vec<u64>>,
    pub charpoly: Vec<u64>,
    pub fixed_point_free: bool,
    pub representative: Matrix<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Order3Search {
    pub p: u64,
    pub classes: Vec<Order3Class>,
    pub fpf_exists: bool,
}

fn divides(a: &[u64], b: &[u64], p: u64) -> bool {
    poly_divrem(b, a, p).1.iter().all(|&c| c == 0)
}

/// Every conjugacy class of order-3 elements of `GL_3(F_p)`, via rational
/// canonical forms, with the fixed-point-free ones flagged.
pub fn no_fpf_order3_search(p: u64) -> Result<Order3Search> {
    if !is_prime(p) {
        return Err(Error::Invalid(format!("{p} is not prime")));
    }
    if gcd(p, 3) != 1 {
        return Err(Error::Hypothesis("order 3 must be prime to p".into()));
    }
    let f = PrimeField::new(p)?;
    // x^3 - 1 is squarefree, so its monic divisors are products of distinct factors
    let x3m1 = vec![p - 1, 0, 0, 1];
    let factors: Vec<Vec<u64>> = factor_small(&x3m1, p).into_iter().map(|(g, _)| g).collect();
    let mut divisors = Vec::new();
    for mask in 1u32..(1 << factors.len()) {
        let d = factors
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .fold(vec![1u64], |acc, (_, g)| poly_mul(&acc, g, p));
        divisors.push(d);
    }
    divisors.sort_by_key(|d| (d.len(), d.clone()));

    fn chains(divs: &[Vec<u64>], p: u64, remaining: usize, last: Option<&Vec<u64>>, cur: &mut Vec<Vec<u64>>, out: &mut Vec<Vec<Vec<u64>>>) {
        if remaining == 0 {
            out.push(cur.clone());
            return;
        }
        for d in divs {
            let deg = d.len() - 1;
            if deg > remaining || last.is_some_and(|l| !divides(l, d, p)) {
                continue;
            }
            cur.push(d.clone());
            chains(divs, p, remaining - deg, Some(d), cur, out);
            cur.pop();
        }
    }
    let mut all = Vec::new();
    chains(&divisors, p, 3, None, &mut Vec::new(), &mut all);

    let one_minus_x = vec![p - 1, 1];
    let classes: Vec<Order3Class> = all
        .into_iter()
        .filter(|c| c.last().is_some_and(|d| *d != one_minus_x))
        .map(|c| {
            let blocks: Vec<Matrix<u64>> = c.iter().map(|d| companion(d, p)).collect();
            let rep = block_diag(0u64, &blocks);
            let cp = charpoly(&f, &rep);
            Order3Class {
                fixed_point_free: poly_eval(&f, &cp, &1) != 0,
                invariant_factors: c,
                charpoly: cp,
                representative: rep,
            }
        })
        .collect();
    Ok(Order3Search {
        p,
        fpf_exists: classes.iter().any(|c| c.fixed_point_free),
        classes,
    })
}

/// The congruence group `1 + p M_n(Z_p)` modulo `p^precision`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixOneUnits {
    pub p: u64,
    pub n: usize,
    pub precision: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SliceMapCheck {
    pub i: u32,
    /// `(1 + p^i A)^p ≡ 1 + p^{i+1} A` for every elementary `A`.
    pub power_map: bool,
    /// `(1 + p^i A)(1 + p^i B) ≡ 1 + p^i (A + B)` modulo `p^{i+1}`.
    pub additive: bool,
}

impl MatrixOneUnits {
    pub fn new(p: u64, n: usize, precision: u32) -> Result<Self> {
        if !is_prime(p) || p == 2 {
            return Err(Error::Invalid(format!("need an odd prime, got {p}")));
        }
        p.checked_pow(precision)
            .filter(|q| (*q as u128) * (*q as u128) * (n as u128) < u64::MAX as u128)
            .ok_or_else(|| Error::Resource("precision too large".into()))?;
        Ok(MatrixOneUnits { p, n, precision })
    }

    fn modulus(&self) -> u64 {
        self.p.pow(self.precision)
    }

    pub fn mul(&self, a: &Matrix<u64>, b: &Matrix<u64>) -> Matrix<u64> {
        let q = self.modulus();
        (0..self.n)
            .map(|i| (0..self.n).map(|j| (0..self.n).map(|k| a[i][k] * b[k][j] % q).sum::<u64>() % q).collect())
            .collect()
    }

    pub fn pow(&self, a: &Matrix<u64>, mut e: u64) -> Matrix<u64> {
        let mut base = a.clone();
        let mut acc = self.one_plus(0, &vec![vec![0; self.n]; self.n]);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// `1 + p^i A`.
    pub fn one_plus(&self, i: u32, a: &Matrix<u64>) -> Matrix<u64> {
        let q = self.modulus();
        let pi = self.p.pow(i) % q;
        (0..self.n)
            .map(|r| (0..self.n).map(|c| (pi * a[r][c] + u64::from(r == c)) % q).collect())
            .collect()
    }

    /// Largest `i` with `g ≡ 1 mod p^i`.
    pub fn level(&self, g: &Matrix<u64>) -> u32 {
        let mut v = self.precision;
        for r in 0..self.n {
            for c in 0..self.n {
                let x = (g[r][c] + self.modulus() - u64::from(r == c)) % self.modulus();
                if x != 0 {
                    v = v.min(crate::arith::valuation(x, self.p));
                }
            }
        }
        v
    }

    pub fn check_slices(&self, i_max: u32) -> Vec<SliceMapCheck> {
        let n = self.n;
        let unit = |r: usize, c: usize| -> Matrix<u64> {
            let mut e = vec![vec![0; n]; n];
            e[r][c] = 1;
            e
        };
        (1..=i_max.min(self.precision.saturating_sub(2)))
            .map(|i| {
                let modp = |m: &Matrix<u64>, k: u32| -> Matrix<u64> {
                    let pk = self.p.pow(k);
                    m.iter().map(|r| r.iter().map(|x| x % pk).collect()).collect()
                };
                let mut power_map = true;
                let mut additive = true;
                for r in 0..n {
                    for c in 0..n {
                        let g = self.one_plus(i, &unit(r, c));
                        if modp(&self.pow(&g, self.p), i + 2) != modp(&self.one_plus(i + 1, &unit(r, c)), i + 2) {
                            power_map = false;
                        }
                        let (r2, c2) = ((r + 1) % n, c);
                        let h = self.one_plus(i, &unit(r2, c2));
                        let mut sum = unit(r, c);
                        sum[r2][c2] += 1;
                        if modp(&self.mul(&g, &h), i + 1) != modp(&self.one_plus(i, &sum), i + 1) {
                            additive = false;
                        }
                    }
                }
                SliceMapCheck { i, power_map, additive }
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::mat_pow;

    /// Counts order-3 matrices in `GL_3(F_p)` with and without fixed vectors.
    fn brute_order3(p: u64) -> (u64, u64) {
        let f = PrimeField::new(p).unwrap();
        let total = p.pow(9);
        let (mut fpf, mut fixing) = (0, 0);
        let id = identity(&f, 3);
        for idx in 0..total {
            let mut k = idx;
            let m: Matrix<u64> = (0..3)
                .map(|_| {
                    (0..3)
                        .map(|_| {
                            let x = k % p;
                            k /= p;
                            x
                        })
                        .collect()
                })
                .collect();
            if m == id || mat_pow(&f, &m, 3) != id {
                continue;
            }
            if kernel(&f, &mat_sub(&f, &m, &id), 3).is_empty() {
                fpf += 1;
            } else {
                fixing += 1;
            }
        }
        (fpf, fixing)
    }

    #[test]
    fn no_fpf_order3_for_2_and_5() {
        for p in [2, 5] {
            let s = no_fpf_order3_search(p).unwrap();
            assert!(!s.fpf_exists, "p = {p}");
            assert!(!s.classes.is_empty());
            let (fpf, fixing) = brute_order3(p);
            assert_eq!(fpf, 0);
            assert!(fixing > 0);
        }
    }

    #[test]
    fn seven_has_fpf_order3() {
        let s = no_fpf_order3_search(7).unwrap();
        assert!(s.fpf_exists);
        let d = vec![vec![2, 0, 0], vec![0, 2, 0], vec![0, 0, 4]];
        let r = fpf_charpoly_test(&d, 7).unwrap();
        assert!(r.fixed_point_free);
        assert_eq!(r.order, 3);
        assert_eq!(r.kernel_dim, 0);
        for c in &s.classes {
            let r = fpf_charpoly_test(&c.representative, 7).unwrap();
            assert_eq!(r.order, 3);
            assert_eq!(r.fixed_point_free, c.fixed_point_free);
            assert_eq!(r.fixed_point_free, r.kernel_dim == 0);
        }
        assert!(no_fpf_order3_search(3).is_err());
    }

    #[test]
    fn charpoly_test_errors() {
        assert!(matches!(fpf_charpoly_test(&vec![vec![1, 1], vec![1, 1]], 5), Err(Error::Domain(_))));
        // unipotent: order 5
        assert!(matches!(fpf_charpoly_test(&vec![vec![1, 1], vec![0, 1]], 5), Err(Error::Hypothesis(_))));
        let r = fpf_charpoly_test(&vec![vec![4, 0], vec![0, 4]], 5).unwrap();
        assert!(r.fixed_point_free);
        assert_eq!(r.charpoly, vec![1, 2, 1]);
    }

    #[test]
    fn one_units_are_uniform() {
        let g = MatrixOneUnits::new(5, 2, 6).unwrap();
        for c in g.check_slices(4) {
            assert!(c.power_map && c.additive, "{c:?}");
        }
        let x = g.one_plus(2, &vec![vec![1, 3], vec![0, 2]]);
        assert_eq!(g.level(&x), 2);
        assert_eq!(g.level(&g.pow(&x, 5)), 3);
    }
}
