//! Machine-word number theory used throughout: modular powers, orders,
//! primitive roots, primality, factorisation of small integers.

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    // deterministic witness set for 64-bit integers
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Prime factorisation by trial division, as `(prime, exponent)` pairs in increasing order.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn euler_phi(n: u64) -> u64 {
    factorize(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p - 1))
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut ds = vec![1u64];
    for (p, e) in factorize(n) {
        let len = ds.len();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                ds.push(ds[i] * pk);
            }
        }
    }
    ds.sort_unstable();
    ds
}

/// Returns `Some((p, k))` when `n = p^k` with `p` prime and `k >= 1`.
pub fn prime_power(n: u64) -> Option<(u64, u32)> {
    let f = factorize(n);
    if f.len() == 1 {
        Some(f[0])
    } else {
        None
    }
}

pub fn is_squarefree(n: u64) -> bool {
    factorize(n).iter().all(|&(_, e)| e == 1)
}

/// Multiplicative order of `a` modulo `m`; `None` when `gcd(a, m) != 1`.
pub fn multiplicative_order(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(1);
    }
    if gcd(a % m, m) != 1 {
        return None;
    }
    let lambda = carmichael(m);
    let mut ord = lambda;
    for (p, _) in factorize(lambda) {
        while ord % p == 0 && pow_mod(a, ord / p, m) == 1 {
            ord /= p;
        }
    }
    Some(ord)
}

/// Carmichael function: exponent of `(Z/m)^×`.
pub fn carmichael(m: u64) -> u64 {
    factorize(m).into_iter().fold(1, |acc, (p, e)| {
        let l = if p == 2 && e >= 3 {
            1u64 << (e - 2)
        } else {
            (p - 1) * p.pow(e - 1)
        };
        lcm(acc, l)
    })
}

/// Smallest primitive root modulo `m` when the unit group is cyclic.
pub fn primitive_root(m: u64) -> Option<u64> {
    if m == 2 {
        return Some(1);
    }
    let phi = euler_phi(m);
    if carmichael(m) != phi {
        return None;
    }
    let qs: Vec<u64> = factorize(phi).into_iter().map(|(q, _)| q).collect();
    (2..m).find(|&g| gcd(g, m) == 1 && qs.iter().all(|&q| pow_mod(g, phi / q, m) != 1))
}

/// p-adic valuation of a nonzero integer.
pub fn valuation(mut n: u64, p: u64) -> u32 {
    assert!(n != 0, "valuation of zero");
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

/// Floor of the `k`-th root of `x`, exact.
pub fn integer_root(x: u64, k: u32) -> u64 {
    if k == 1 || x < 2 {
        return x;
    }
    let mut r = (x as f64).powf(1.0 / k as f64).round() as u64;
    let pow_le = |b: u64| -> bool {
        let mut acc: u128 = 1;
        for _ in 0..k {
            acc *= b as u128;
            if acc > x as u128 {
                return false;
            }
        }
        true
    };
    while !pow_le(r) {
        r -= 1;
    }
    while pow_le(r + 1) {
        r += 1;
    }
    r
}

/// Plain Eratosthenes sieve for small bounds.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// Kronecker symbol `(d | n)` for `n >= 0`.
pub fn kronecker(d: i64, n: u64) -> i32 {
    if n == 0 {
        return if d == 1 || d == -1 { 1 } else { 0 };
    }
    let mut n = n;
    let mut result = 1i32;
    while n % 2 == 0 {
        n /= 2;
        if d % 2 == 0 {
            return 0;
        }
        let r = d.rem_euclid(8);
        if r == 3 || r == 5 {
            result = -result;
        }
    }
    if n == 1 {
        return result;
    }
    result * jacobi(d.rem_euclid(n as i64) as u64, n)
}

/// Jacobi symbol `(a | n)` for odd `n`.
pub fn jacobi(mut a: u64, mut n: u64) -> i32 {
    debug_assert!(n % 2 == 1);
    a %= n;
    let mut t = 1i32;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if n % 8 == 3 || n % 8 == 5 {
                t = -t;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            t = -t;
        }
        a %= n;
    }
    if n == 1 {
        t
    } else {
        0
    }
}

/// Sum of divisors.
pub fn sigma(n: u64) -> u64 {
    divisors(n).into_iter().sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders_and_roots() {
        assert_eq!(multiplicative_order(2, 13), Some(12));
        assert_eq!(multiplicative_order(2, 7), Some(3));
        assert_eq!(multiplicative_order(37, 7), Some(3));
        assert_eq!(multiplicative_order(6, 9), None);
        assert_eq!(primitive_root(7), Some(3));
        assert_eq!(primitive_root(8), None);
        assert_eq!(primitive_root(25), Some(2));
    }

    #[test]
    fn primality_agrees_with_sieve() {
        let ps = primes_up_to(5000);
        for n in 0..5000u64 {
            assert_eq!(is_prime(n), ps.binary_search(&n).is_ok(), "{n}");
        }
        assert!(is_prime(1_000_003));
        assert!(!is_prime(1_000_001));
    }

    #[test]
    fn roots_are_exact() {
        assert_eq!(integer_root(1_000_000_000, 3), 1000);
        assert_eq!(integer_root(999_999_999, 3), 999);
        assert_eq!(integer_root(1_000_000_000_000, 2), 1_000_000);
        assert_eq!(integer_root(u64::MAX, 2), 4_294_967_295);
    }

    #[test]
    fn kronecker_small() {
        // (-4 | q) is -1 exactly for q = 3 mod 4
        for q in [3u64, 7, 11, 19] {
            assert_eq!(kronecker(-4, q), -1);
        }
        for q in [5u64, 13, 17] {
            assert_eq!(kronecker(-4, q), 1);
        }
        assert_eq!(kronecker(-7, 2), 1);
        assert_eq!(kronecker(-23, 23), 0);
        assert_eq!(inv_mod(2, 343), Some(172));
    }
}
