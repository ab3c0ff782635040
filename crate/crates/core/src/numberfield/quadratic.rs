//! Quadratic fields `Q(√d)`: discriminants, class numbers of imaginary
//! fields by reduced forms, fundamental units of real fields.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{integer_root, is_squarefree};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuadField {
    pub d: i64,
    pub discriminant: i64,
    pub r1: u32,
    pub r2: u32,
}

impl QuadField {
    pub fn new(d: i64) -> Result<Self> {
        if d == 0 || d == 1 || !is_squarefree(d.unsigned_abs()) {
            return Err(Error::Invalid(format!("{d} is not a squarefree integer != 0, 1")));
        }
        let discriminant = if d.rem_euclid(4) == 1 { d } else { 4 * d };
        let (r1, r2) = if d > 0 { (2, 0) } else { (0, 1) };
        Ok(QuadField {
            d,
            discriminant,
            r1,
            r2,
        })
    }

    /// Minimal polynomial of the ring generator `ω` (`√d` or `(1+√d)/2`), low degree first.
    pub fn order_polynomial(&self) -> Vec<BigInt> {
        if self.d.rem_euclid(4) == 1 {
            vec![BigInt::from(-(self.d - 1) / 4), BigInt::from(-1), BigInt::one()]
        } else {
            vec![BigInt::from(-self.d), BigInt::zero(), BigInt::one()]
        }
    }

    /// Number of roots of unity.
    pub fn roots_of_unity(&self) -> u64 {
        match self.d {
            -1 => 4,
            -3 => 6,
            _ => 2,
        }
    }
}

/// Reduced primitive positive-definite forms `(a, b, c)` of discriminant `disc < 0`.
pub fn reduced_forms(disc: i64) -> Vec<(i64, i64, i64)> {
    assert!(disc < 0 && disc.rem_euclid(4) <= 1);
    let n = -disc;
    let mut out = Vec::new();
    // |b| <= a <= c implies 3a^2 <= |D|
    let amax = integer_root((n / 3) as u64, 2) as i64;
    for a in 1..=amax {
        for b in -a + 1..=a {
            if (b * b - disc) % (4 * a) != 0 {
                continue;
            }
            let c = (b * b - disc) / (4 * a);
            if c < a || (c == a && b < 0) {
                continue;
            }
            if num_integer::gcd(num_integer::gcd(a, b), c) != 1 {
                continue;
            }
            out.push((a, b, c));
        }
    }
    out
}

/// Class number of the imaginary quadratic field `Q(√d)`.
pub fn class_number_imag_quadratic(d: i64) -> Result<u64> {
    let k = QuadField::new(d)?;
    if d >= 0 {
        return Err(Error::Domain(format!("{d} is not negative")));
    }
    Ok(reduced_forms(k.discriminant).len() as u64)
}

/// Fundamental unit `ε = (x + y√d)/2 > 1` of a real quadratic field, by the
/// continued fraction of the ring generator.
pub fn fundamental_unit(d: i64) -> Result<(BigInt, BigInt)> {
    QuadField::new(d)?;
    if d < 0 {
        return Err(Error::Domain("imaginary quadratic fields have finite unit groups".into()));
    }
    let s = integer_root(d as u64, 2) as i64;
    let one_mod_four = d.rem_euclid(4) == 1;
    // ω = (P + √d)/Q
    let (mut pp, mut qq) = if one_mod_four { (1i64, 2i64) } else { (0, 1) };
    let (mut h1, mut h0) = (BigInt::one(), BigInt::zero());
    let (mut k1, mut k0) = (BigInt::zero(), BigInt::one());
    let dn = BigInt::from(d);
    for _ in 0..100_000 {
        let a = (pp + s).div_euclid(qq);
        let h = BigInt::from(a) * &h1 + &h0;
        let kk = BigInt::from(a) * &k1 + &k0;
        (h0, h1) = (h1, h.clone());
        (k0, k1) = (k1, kk.clone());
        // candidate ε = p - q ω̄, written as (x + y√d)/2
        let (x, y) = if one_mod_four {
            (BigInt::from(2) * &h - &kk, kk.clone())
        } else {
            (BigInt::from(2) * &h, BigInt::from(2) * &kk)
        };
        let norm4 = &x * &x - &dn * &y * &y;
        if norm4 == BigInt::from(4) || norm4 == BigInt::from(-4) {
            return Ok((x, y));
        }
        pp = a * qq - pp;
        qq = (d - pp * pp) / qq;
    }
    Err(Error::Resource(format!("continued fraction of √{d} did not close")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{divisors, kronecker, sigma};
    use num_rational::Ratio;

    /// Hurwitz class number `H(n)` from all (not necessarily primitive) reduced forms.
    fn hurwitz(n: i64) -> Ratio<i64> {
        if n == 0 {
            return Ratio::new(-1, 12);
        }
        if n % 4 == 1 || n % 4 == 2 {
            return Ratio::from_integer(0);
        }
        let disc = -n;
        let mut total = Ratio::from_integer(0);
        let amax = integer_root((n / 3) as u64, 2) as i64;
        for a in 1..=amax {
            for b in -a + 1..=a {
                if (b * b - disc) % (4 * a) != 0 {
                    continue;
                }
                let c = (b * b - disc) / (4 * a);
                if c < a || (c == a && b < 0) {
                    continue;
                }
                let w = if a == b && b == c {
                    Ratio::new(1, 3)
                } else if b == 0 && a == c {
                    Ratio::new(1, 2)
                } else {
                    Ratio::from_integer(1)
                };
                total += w;
            }
        }
        total
    }

    #[test]
    fn kronecker_hurwitz_relation_holds() {
        for big_n in 1..60i64 {
            let mut lhs = Ratio::from_integer(0);
            let tmax = integer_root(4 * big_n as u64, 2) as i64;
            for t in -tmax..=tmax {
                lhs += hurwitz(4 * big_n - t * t);
            }
            let rhs = 2 * sigma(big_n as u64) as i64
                - divisors(big_n as u64)
                    .iter()
                    .map(|&d| d.min(big_n as u64 / d) as i64)
                    .sum::<i64>();
            assert_eq!(lhs, Ratio::from_integer(rhs), "N = {big_n}");
        }
    }

    /// Analytic class number formula for `D < -4`.
    fn dirichlet_h(disc: i64) -> i64 {
        let n = -disc;
        let s: i64 = (1..n).map(|a| kronecker(disc, a as u64) as i64 * a).sum();
        -s / n
    }

    #[test]
    fn class_numbers() {
        assert_eq!(class_number_imag_quadratic(-1).unwrap(), 1);
        assert_eq!(class_number_imag_quadratic(-23).unwrap(), 3);
        assert_eq!(class_number_imag_quadratic(-7).unwrap(), 1);
        assert_eq!(class_number_imag_quadratic(-47).unwrap(), 5);
        assert_eq!(class_number_imag_quadratic(-5).unwrap(), 2);
        let heegner = [-1i64, -2, -3, -7, -11, -19, -43, -67, -163];
        for d in -200..0i64 {
            let Ok(k) = QuadField::new(d) else { continue };
            let h = class_number_imag_quadratic(d).unwrap();
            assert_eq!(h == 1, heegner.contains(&d), "d = {d}");
            if k.discriminant < -4 {
                assert_eq!(h as i64, dirichlet_h(k.discriminant), "d = {d}");
            }
            // the primitive count is the h(D) part of H(|D|)
            let w = k.roots_of_unity() as i64;
            assert_eq!(hurwitz(-k.discriminant) * Ratio::from_integer(w / 2), Ratio::from_integer(h as i64), "d = {d}");
        }
    }

    #[test]
    fn fundamental_units() {
        let b = |x: i64| BigInt::from(x);
        assert_eq!(fundamental_unit(2).unwrap(), (b(2), b(2)));
        assert_eq!(fundamental_unit(5).unwrap(), (b(1), b(1)));
        assert_eq!(fundamental_unit(13).unwrap(), (b(3), b(1)));
        assert_eq!(fundamental_unit(7).unwrap(), (b(16), b(6)));
        // ε = 1520 + 273√31
        assert_eq!(fundamental_unit(31).unwrap(), (b(3040), b(546)));
        assert_eq!(fundamental_unit(94).unwrap(), (b(2 * 2143295), b(2 * 221064)));
        assert!(fundamental_unit(-5).is_err());
    }

    #[test]
    fn signatures() {
        let k = QuadField::new(-7).unwrap();
        assert_eq!((k.discriminant, k.r1, k.r2), (-7, 0, 1));
        let k = QuadField::new(3).unwrap();
        assert_eq!((k.discriminant, k.r1, k.r2), (12, 2, 0));
        assert!(QuadField::new(12).is_err());
    }
}
