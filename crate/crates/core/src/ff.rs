//! Finite fields `F_p` and `F_{p^k}`, polynomials over `F_p`, and dense linear
//! algebra over any of them.

use crate::arith::{inv_mod, is_prime, mul_mod, pow_mod};
use crate::error::{Error, Result};

/// Field operations on a context-owned element type.
pub trait FieldOps {
    type Elem: Clone + PartialEq + std::fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn from_int(&self, n: i64) -> Self::Elem;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    pub p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::Invalid(format!("{p} is not prime")));
        }
        Ok(PrimeField { p })
    }
}

impl FieldOps for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        mul_mod(*a, *b, self.p)
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        inv_mod(*a, self.p)
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn from_int(&self, n: i64) -> u64 {
        n.rem_euclid(self.p as i64) as u64
    }
}

// ---------------------------------------------------------------------------
// Polynomials over F_p, coefficient vectors stored low degree first.

pub fn poly_trim(a: &mut Vec<u64>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

pub fn poly_degree(a: &[u64]) -> Option<usize> {
    a.iter().rposition(|&c| c != 0)
}

pub fn poly_add(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut out = vec![0; a.len().max(b.len())];
    for (i, o) in out.iter_mut().enumerate() {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        *o = (x + y) % p;
    }
    poly_trim(&mut out);
    out
}

pub fn poly_sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut out = vec![0; a.len().max(b.len())];
    for (i, o) in out.iter_mut().enumerate() {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        *o = (x + p - y) % p;
    }
    poly_trim(&mut out);
    out
}

pub fn poly_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mul_mod(x, y, p)) % p;
        }
    }
    poly_trim(&mut out);
    out
}

/// Euclidean division; panics on a zero divisor.
pub fn poly_divrem(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let db = poly_degree(b).expect("division by zero polynomial");
    let lead_inv = inv_mod(b[db], p).expect("leading coefficient invertible");
    let mut r: Vec<u64> = a.to_vec();
    poly_trim(&mut r);
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut q = vec![0u64; r.len() - db];
    while let Some(dr) = poly_degree(&r) {
        if dr < db {
            break;
        }
        let c = mul_mod(r[dr], lead_inv, p);
        let shift = dr - db;
        q[shift] = c;
        for (i, &bc) in b.iter().enumerate().take(db + 1) {
            let t = mul_mod(c, bc, p);
            r[shift + i] = (r[shift + i] + p - t) % p;
        }
        poly_trim(&mut r);
    }
    poly_trim(&mut q);
    (q, r)
}

pub fn poly_rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    poly_divrem(a, b, p).1
}

pub fn poly_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    poly_trim(&mut x);
    poly_trim(&mut y);
    while !y.is_empty() {
        let r = poly_rem(&x, &y, p);
        x = y;
        y = r;
    }
    if let Some(d) = poly_degree(&x) {
        let inv = inv_mod(x[d], p).unwrap();
        for c in x.iter_mut() {
            *c = mul_mod(*c, inv, p);
        }
    }
    x
}

/// `base^e mod modulus` in `F_p[x]`.
pub fn poly_powmod(base: &[u64], mut e: u128, modulus: &[u64], p: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut b = poly_rem(base, modulus, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_rem(&poly_mul(&acc, &b, p), modulus, p);
        }
        b = poly_rem(&poly_mul(&b, &b, p), modulus, p);
        e >>= 1;
    }
    acc
}

/// Rabin's irreducibility test for a monic polynomial over `F_p`.
pub fn is_irreducible(f: &[u64], p: u64) -> bool {
    let k = match poly_degree(f) {
        Some(0) | None => return false,
        Some(k) => k,
    };
    if k == 1 {
        return true;
    }
    let x = vec![0u64, 1];
    // x^(p^k) == x mod f
    let mut xp = x.clone();
    let mut powers = Vec::with_capacity(k + 1);
    powers.push(xp.clone());
    for _ in 0..k {
        xp = poly_powmod(&xp, p as u128, f, p);
        powers.push(xp.clone());
    }
    if poly_sub(&powers[k], &x, p) != Vec::<u64>::new() {
        return false;
    }
    for (q, _) in crate::arith::factorize(k as u64) {
        let j = k / q as usize;
        let g = poly_gcd(f, &poly_sub(&powers[j], &x, p), p);
        if poly_degree(&g) != Some(0) {
            return false;
        }
    }
    true
}

/// Lexicographically smallest monic irreducible polynomial of degree `k` over `F_p`.
///
/// Candidates `x^k + c_{k-1} x^{k-1} + ... + c_0` are ordered by the integer
/// `c_0 + c_1 p + ... + c_{k-1} p^{k-1}`.
pub fn smallest_irreducible(p: u64, k: usize) -> Vec<u64> {
    assert!(k >= 1);
    let mut coeffs = vec![0u64; k];
    loop {
        let mut f = coeffs.clone();
        f.push(1);
        if is_irreducible(&f, p) {
            return f;
        }
        // increment base-p counter, least significant digit first
        let mut i = 0;
        loop {
            coeffs[i] += 1;
            if coeffs[i] < p {
                break;
            }
            coeffs[i] = 0;
            i += 1;
            assert!(i < k, "no irreducible polynomial found");
        }
    }
}

/// Factorisation of a monic polynomial over `F_p` into monic irreducibles by trial division.
/// Only intended for small degrees.
pub fn factor_small(f: &[u64], p: u64) -> Vec<(Vec<u64>, u32)> {
    let mut rest = f.to_vec();
    poly_trim(&mut rest);
    let mut out = Vec::new();
    let mut deg = 1;
    while poly_degree(&rest).unwrap_or(0) >= 1 {
        let total = poly_degree(&rest).unwrap();
        if deg > total {
            break;
        }
        if 2 * deg > total {
            // remaining factor is irreducible
            out.push((rest.clone(), 1));
            return out;
        }
        for cand in monic_polys(p, deg) {
            if !is_irreducible(&cand, p) {
                continue;
            }
            let mut e = 0;
            loop {
                let (q, r) = poly_divrem(&rest, &cand, p);
                if !r.is_empty() {
                    break;
                }
                rest = q;
                e += 1;
            }
            if e > 0 {
                out.push((cand, e));
            }
        }
        deg += 1;
    }
    out
}

/// Degrees of the irreducible factors of a squarefree monic polynomial over `F_p`,
/// by distinct-degree factorisation.
pub fn factor_degrees(f: &[u64], p: u64) -> Vec<usize> {
    let mut rest = f.to_vec();
    poly_trim(&mut rest);
    let x = vec![0u64, 1];
    let mut xq = x.clone();
    let mut out = Vec::new();
    let mut d = 1;
    while let Some(n) = poly_degree(&rest) {
        if n == 0 {
            break;
        }
        if 2 * d > n {
            out.push(n);
            break;
        }
        xq = poly_powmod(&xq, p as u128, &rest, p);
        let g = poly_gcd(&rest, &poly_sub(&xq, &x, p), p);
        let gd = poly_degree(&g).unwrap_or(0);
        if gd > 0 {
            out.extend(std::iter::repeat(d).take(gd / d));
            rest = poly_divrem(&rest, &g, p).0;
            xq = poly_rem(&xq, &rest, p);
        }
        d += 1;
    }
    out
}

fn monic_polys(p: u64, k: usize) -> impl Iterator<Item = Vec<u64>> {
    let total = p.pow(k as u32);
    (0..total).map(move |mut n| {
        let mut v = Vec::with_capacity(k + 1);
        for _ in 0..k {
            v.push(n % p);
            n /= p;
        }
        v.push(1);
        v
    })
}

// ---------------------------------------------------------------------------

/// The field `F_p[t]/(m(t))` with `m` the smallest irreducible of degree `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtField {
    pub p: u64,
    pub k: usize,
    pub modulus: Vec<u64>,
}

impl ExtField {
    pub fn new(p: u64, k: usize) -> Result<Self> {
        PrimeField::new(p)?;
        if k == 0 {
            return Err(Error::Invalid("extension degree must be positive".into()));
        }
        Ok(ExtField {
            p,
            k,
            modulus: smallest_irreducible(p, k),
        })
    }

    pub fn order(&self) -> u128 {
        (self.p as u128).pow(self.k as u32)
    }

    pub fn embed(&self, a: u64) -> Vec<u64> {
        let mut v = vec![0; self.k];
        v[0] = a % self.p;
        v
    }

    fn normalize(&self, mut v: Vec<u64>) -> Vec<u64> {
        let r = if v.len() > self.k {
            poly_rem(&v, &self.modulus, self.p)
        } else {
            poly_trim(&mut v);
            v
        };
        let mut out = r;
        out.resize(self.k, 0);
        out
    }

    pub fn pow(&self, a: &[u64], mut e: u128) -> Vec<u64> {
        let mut acc = self.one();
        let mut b = a.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &b);
            }
            b = self.mul(&b, &b);
            e >>= 1;
        }
        acc
    }

    /// Element with index `n` in base-`p` digit order; enumerates the field.
    pub fn element(&self, mut n: u128) -> Vec<u64> {
        let mut v = vec![0u64; self.k];
        for c in v.iter_mut() {
            *c = (n % self.p as u128) as u64;
            n /= self.p as u128;
        }
        v
    }

    /// A primitive `m`-th root of unity, chosen as the first in enumeration order.
    pub fn primitive_root_of_unity(&self, m: u64) -> Option<Vec<u64>> {
        let q1 = self.order() - 1;
        if q1 % m as u128 != 0 {
            return None;
        }
        let primes: Vec<u64> = crate::arith::factorize(m).into_iter().map(|(q, _)| q).collect();
        for n in 1..self.order() {
            let g = self.element(n);
            let z = self.pow(&g, q1 / m as u128);
            if primes
                .iter()
                .all(|&q| self.pow(&z, (m / q) as u128) != self.one())
            {
                return Some(z);
            }
        }
        None
    }
}

impl FieldOps for ExtField {
    type Elem = Vec<u64>;

    fn zero(&self) -> Vec<u64> {
        vec![0; self.k]
    }
    fn one(&self) -> Vec<u64> {
        self.embed(1)
    }
    fn add(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        a.iter().zip(b).map(|(x, y)| (x + y) % self.p).collect()
    }
    fn sub(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        a.iter()
            .zip(b)
            .map(|(x, y)| (x + self.p - y) % self.p)
            .collect()
    }
    fn mul(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        self.normalize(poly_mul(a, b, self.p))
    }
    fn neg(&self, a: &Vec<u64>) -> Vec<u64> {
        a.iter().map(|x| (self.p - x) % self.p).collect()
    }
    fn inv(&self, a: &Vec<u64>) -> Option<Vec<u64>> {
        if self.is_zero(a) {
            return None;
        }
        Some(self.pow(a, self.order() - 2))
    }
    fn is_zero(&self, a: &Vec<u64>) -> bool {
        a.iter().all(|&c| c == 0)
    }
    fn from_int(&self, n: i64) -> Vec<u64> {
        self.embed(n.rem_euclid(self.p as i64) as u64)
    }
}

// ---------------------------------------------------------------------------
// Dense matrices, row-major `Vec<Vec<E>>`.

pub type Matrix<E> = Vec<Vec<E>>;

pub fn identity<F: FieldOps>(f: &F, n: usize) -> Matrix<F::Elem> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { f.one() } else { f.zero() }).collect())
        .collect()
}

pub fn mat_mul<F: FieldOps>(f: &F, a: &Matrix<F::Elem>, b: &Matrix<F::Elem>) -> Matrix<F::Elem> {
    let n = a.len();
    let m = b.first().map_or(0, |r| r.len());
    let inner = b.len();
    let mut out = vec![vec![f.zero(); m]; n];
    for i in 0..n {
        for k in 0..inner {
            if f.is_zero(&a[i][k]) {
                continue;
            }
            for j in 0..m {
                let t = f.mul(&a[i][k], &b[k][j]);
                out[i][j] = f.add(&out[i][j], &t);
            }
        }
    }
    out
}

pub fn mat_sub<F: FieldOps>(f: &F, a: &Matrix<F::Elem>, b: &Matrix<F::Elem>) -> Matrix<F::Elem> {
    a.iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| f.sub(x, y)).collect())
        .collect()
}

pub fn mat_scale<F: FieldOps>(f: &F, a: &Matrix<F::Elem>, c: &F::Elem) -> Matrix<F::Elem> {
    a.iter()
        .map(|r| r.iter().map(|x| f.mul(x, c)).collect())
        .collect()
}

pub fn mat_pow<F: FieldOps>(f: &F, a: &Matrix<F::Elem>, mut e: u64) -> Matrix<F::Elem> {
    let mut acc = identity(f, a.len());
    let mut b = a.clone();
    while e > 0 {
        if e & 1 == 1 {
            acc = mat_mul(f, &acc, &b);
        }
        b = mat_mul(f, &b, &b);
        e >>= 1;
    }
    acc
}

/// Reduced row echelon form in place; returns pivot columns.
pub fn rref<F: FieldOps>(f: &F, a: &mut Matrix<F::Elem>) -> Vec<usize> {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| !f.is_zero(&a[i][c])) else {
            continue;
        };
        a.swap(r, pr);
        let inv = f.inv(&a[r][c]).unwrap();
        for x in a[r].iter_mut() {
            *x = f.mul(x, &inv);
        }
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == r || f.is_zero(&row[c]) {
                continue;
            }
            let factor = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                let t = f.mul(&factor, y);
                *x = f.sub(x, &t);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<F: FieldOps>(f: &F, a: &Matrix<F::Elem>) -> usize {
    let mut m = a.clone();
    rref(f, &mut m).len()
}

/// Basis of the right kernel `{v : A v = 0}`.
pub fn kernel<F: FieldOps>(f: &F, a: &Matrix<F::Elem>, cols: usize) -> Vec<Vec<F::Elem>> {
    let mut m = a.clone();
    let pivots = rref(f, &mut m);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![f.zero(); cols];
            v[fc] = f.one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(&m[r][fc]);
            }
            v
        })
        .collect()
}

pub fn det<F: FieldOps>(f: &F, a: &Matrix<F::Elem>) -> F::Elem {
    let n = a.len();
    let mut m = a.clone();
    let mut d = f.one();
    for c in 0..n {
        let Some(pr) = (c..n).find(|&i| !f.is_zero(&m[i][c])) else {
            return f.zero();
        };
        if pr != c {
            m.swap(pr, c);
            d = f.neg(&d);
        }
        d = f.mul(&d, &m[c][c]);
        let inv = f.inv(&m[c][c]).unwrap();
        for i in c + 1..n {
            if f.is_zero(&m[i][c]) {
                continue;
            }
            let factor = f.mul(&m[i][c], &inv);
            for j in c..n {
                let t = f.mul(&factor, &m[c][j]);
                m[i][j] = f.sub(&m[i][j], &t);
            }
        }
    }
    d
}

/// Characteristic polynomial `det(x I - A)`, low degree first, via Hessenberg reduction.
pub fn charpoly<F: FieldOps>(f: &F, a: &Matrix<F::Elem>) -> Vec<F::Elem> {
    let n = a.len();
    let mut h = a.clone();
    // similarity transform to upper Hessenberg form
    for c in 0..n.saturating_sub(2) {
        let Some(pr) = (c + 1..n).find(|&i| !f.is_zero(&h[i][c])) else {
            continue;
        };
        if pr != c + 1 {
            h.swap(pr, c + 1);
            for row in h.iter_mut() {
                row.swap(pr, c + 1);
            }
        }
        let inv = f.inv(&h[c + 1][c]).unwrap();
        for i in c + 2..n {
            if f.is_zero(&h[i][c]) {
                continue;
            }
            let u = f.mul(&h[i][c], &inv);
            for j in 0..n {
                let t = f.mul(&u, &h[c + 1][j]);
                h[i][j] = f.sub(&h[i][j], &t);
            }
            for row in h.iter_mut() {
                let t = f.mul(&u, &row[i]);
                row[c + 1] = f.add(&row[c + 1], &t);
            }
        }
    }
    // recurrence on leading principal minors of x I - H
    let mut polys: Vec<Vec<F::Elem>> = vec![vec![f.one()]];
    for k in 0..n {
        // p_{k+1} = (x - h_kk) p_k - sum_{i<k} h_ik (prod_{j=i+1..k} h_{j,j-1}) p_i
        let mut next = vec![f.zero(); k + 2];
        for (d, c) in polys[k].iter().enumerate() {
            next[d + 1] = f.add(&next[d + 1], c);
            let t = f.mul(&h[k][k], c);
            next[d] = f.sub(&next[d], &t);
        }
        let mut prod = f.one();
        for i in (0..k).rev() {
            prod = f.mul(&prod, &h[i + 1][i]);
            let coef = f.mul(&h[i][k], &prod);
            if f.is_zero(&coef) {
                continue;
            }
            for (d, c) in polys[i].iter().enumerate() {
                let t = f.mul(&coef, c);
                next[d] = f.sub(&next[d], &t);
            }
        }
        polys.push(next);
    }
    polys.pop().unwrap()
}

pub fn poly_eval<F: FieldOps>(f: &F, poly: &[F::Elem], x: &F::Elem) -> F::Elem {
    poly.iter()
        .rev()
        .fold(f.zero(), |acc, c| f.add(&f.mul(&acc, x), c))
}

/// Order of an invertible matrix, searched up to `cap`.
pub fn matrix_order<F: FieldOps>(f: &F, a: &Matrix<F::Elem>, cap: u64) -> Option<u64> {
    let id = identity(f, a.len());
    let mut cur = a.clone();
    for k in 1..=cap {
        if cur == id {
            return Some(k);
        }
        cur = mat_mul(f, &cur, a);
    }
    None
}

/// Companion matrix of a monic polynomial (low degree first) over `F_p`.
pub fn companion(poly: &[u64], p: u64) -> Matrix<u64> {
    let n = poly.len() - 1;
    let mut m = vec![vec![0u64; n]; n];
    for i in 1..n {
        m[i][i - 1] = 1;
    }
    for (i, row) in m.iter_mut().enumerate() {
        row[n - 1] = (p - poly[i] % p) % p;
    }
    m
}

/// Block diagonal sum of square matrices.
pub fn block_diag<E: Clone>(zero: E, blocks: &[Matrix<E>]) -> Matrix<E> {
    let n: usize = blocks.iter().map(|b| b.len()).sum();
    let mut out = vec![vec![zero; n]; n];
    let mut off = 0;
    for b in blocks {
        for (i, row) in b.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                out[off + i][off + j] = x.clone();
            }
        }
        off += b.len();
    }
    out
}

/// Root of unity of order `m` in `F_p` with the smallest residue, if `m | p - 1`.
pub fn smallest_root_of_unity(p: u64, m: u64) -> Option<u64> {
    if (p - 1) % m != 0 {
        return None;
    }
    let primes: Vec<u64> = crate::arith::factorize(m).into_iter().map(|(q, _)| q).collect();
    (1..p).find(|&z| pow_mod(z, m, p) == 1 && primes.iter().all(|&q| pow_mod(z, m / q, p) != 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smallest_irreducibles() {
        assert_eq!(smallest_irreducible(2, 2), vec![1, 1, 1]);
        assert_eq!(smallest_irreducible(2, 3), vec![1, 1, 0, 1]);
        // x^2 + 1 is reducible mod 5 (2^2 = -1); x^2 + 2 is irreducible
        assert_eq!(smallest_irreducible(5, 2), vec![2, 0, 1]);
        assert!(is_irreducible(&[1, 1, 1], 5));
        assert!(!is_irreducible(&[1, 1, 1], 7));
    }

    #[test]
    fn factor_cyclotomic_mod_37() {
        // Phi_7 splits into two cubics mod 37 since 37 has order 3 mod 7
        let phi7 = vec![1u64; 7];
        let fs = factor_small(&phi7, 37);
        assert_eq!(fs.len(), 2);
        assert!(fs.iter().all(|(g, e)| g.len() == 4 && *e == 1));
    }

    #[test]
    fn charpoly_matches_det() {
        let f = PrimeField::new(7).unwrap();
        let a: Matrix<u64> = vec![vec![1, 2, 3], vec![4, 5, 6], vec![0, 1, 3]];
        let cp = charpoly(&f, &a);
        for x in 0..7u64 {
            let xi_minus_a: Matrix<u64> = (0..3)
                .map(|i| {
                    (0..3)
                        .map(|j| {
                            let d = if i == j { x } else { 0 };
                            f.sub(&d, &a[i][j])
                        })
                        .collect()
                })
                .collect();
            assert_eq!(poly_eval(&f, &cp, &x), det(&f, &xi_minus_a));
        }
        assert_eq!(cp[3], 1);
    }

    #[test]
    fn extension_field_roots() {
        let f = ExtField::new(2, 2).unwrap();
        let w = f.primitive_root_of_unity(3).unwrap();
        assert_ne!(w, f.one());
        assert_eq!(f.pow(&w, 3), f.one());
        assert_eq!(smallest_root_of_unity(7, 3), Some(2));
        assert_eq!(smallest_root_of_unity(37, 3), Some(10));
    }

    #[test]
    fn kernel_dimension() {
        let f = PrimeField::new(5).unwrap();
        let a: Matrix<u64> = vec![vec![1, 2, 3], vec![0, 1, 4]];
        let k = kernel(&f, &a, 3);
        assert_eq!(k.len(), 1);
        let v = &k[0];
        for row in &a {
            let s = row.iter().zip(v).fold(0, |acc, (x, y)| (acc + x * y) % 5);
            assert_eq!(s, 0);
        }
    }
}
