//! Dense polynomials and matrices over `Z`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub fn trim(a: &mut Vec<BigInt>) {
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
}

pub fn mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(&mut out);
    out
}

/// Division by a monic polynomial; returns `(quotient, remainder)`.
pub fn divrem_monic(a: &[BigInt], m: &[BigInt]) -> (Vec<BigInt>, Vec<BigInt>) {
    assert!(m.last().is_some_and(|c| c.is_one()), "divisor must be monic");
    let d = m.len() - 1;
    let mut r = a.to_vec();
    trim(&mut r);
    if r.len() <= d {
        return (Vec::new(), r);
    }
    let mut q = vec![BigInt::zero(); r.len() - d];
    for i in (d..r.len()).rev() {
        let c = r[i].clone();
        if c.is_zero() {
            continue;
        }
        q[i - d] = c.clone();
        for (j, mj) in m.iter().enumerate() {
            r[i - d + j] -= &c * mj;
        }
    }
    r.truncate(d);
    trim(&mut r);
    trim(&mut q);
    (q, r)
}

/// The cyclotomic polynomial `Φ_n` by exact division of `x^n - 1`.
pub fn cyclotomic(n: u64) -> Vec<BigInt> {
    assert!(n >= 1);
    let mut num = vec![BigInt::zero(); n as usize + 1];
    num[0] = BigInt::from(-1);
    num[n as usize] = BigInt::one();
    for d in crate::arith::divisors(n) {
        if d == n {
            continue;
        }
        let (q, r) = divrem_monic(&num, &cyclotomic(d));
        debug_assert!(r.is_empty());
        num = q;
    }
    num
}

/// Substitute `x -> c + s x`.
pub fn compose_linear(a: &[BigInt], c: &BigInt, s: &BigInt) -> Vec<BigInt> {
    let lin = vec![c.clone(), s.clone()];
    let mut out: Vec<BigInt> = Vec::new();
    for coef in a.iter().rev() {
        out = mul(&out, &lin);
        if out.is_empty() {
            out.push(BigInt::zero());
        }
        out[0] += coef;
        trim(&mut out);
    }
    out
}

/// Determinant by fraction-free Gaussian elimination.
pub fn det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = 1;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v.div_floor(&prev);
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if sign < 0 {
        -d
    } else {
        d
    }
}

/// Resultant `Res(m, a)` for monic `m`: determinant of multiplication by `a` on `Z[x]/(m)`.
pub fn resultant_monic(m: &[BigInt], a: &[BigInt]) -> BigInt {
    let d = m.len() - 1;
    let mut cols = Vec::with_capacity(d);
    let mut xi = vec![BigInt::one()];
    for _ in 0..d {
        let (_, r) = divrem_monic(&mul(a, &xi), m);
        let mut col = r;
        col.resize(d, BigInt::zero());
        cols.push(col);
        xi.insert(0, BigInt::zero());
    }
    let rows: Vec<Vec<BigInt>> = (0..d).map(|i| (0..d).map(|j| cols[j][i].clone()).collect()).collect();
    det(rows)
}

pub fn content_is_unit(a: &[BigInt]) -> bool {
    a.iter().fold(BigInt::zero(), |g, c| g.gcd(c)).abs().is_one()
}
