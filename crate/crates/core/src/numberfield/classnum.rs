//! Relative class numbers of prime-power cyclotomic fields.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

use super::intpoly;
use crate::arith::{euler_phi, pow_mod, prime_power, primitive_root};
use crate::error::{Error, Result};

pub const MAX_MINUS_DEGREE: u64 = 200;

/// Prime-power conductors for which `h⁺(Q(ζ_f)) = 1` is taken from the literature.
pub const HPLUS_ONE: &[u64] = &[
    3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19, 23, 25, 27, 29, 31, 32, 37, 41, 43, 47, 49, 53, 59, 61, 64, 67,
];

/// `Some(1)` when `h⁺ = 1` is tabulated for conductor `f`, otherwise `None`.
pub fn plus_class_number(f: u64) -> Option<u64> {
    HPLUS_ONE.contains(&f).then_some(1)
}

/// Number of roots of unity in `Q(ζ_f)`.
pub fn roots_of_unity(f: u64) -> u64 {
    if f % 2 == 1 {
        2 * f
    } else {
        f
    }
}

/// The polynomial `A(X)` whose values at the odd characters give `f·B_{1,χ}`
/// (up to sign conventions), together with the monic modulus whose roots
/// run over those characters.
fn stickelberger_data(f: u64) -> (Vec<BigInt>, Vec<BigInt>) {
    let n = euler_phi(f) as usize;
    let half = n / 2;
    let mut modulus = vec![BigInt::from(0); half + 1];
    modulus[half] = BigInt::one();
    let g;
    if f % 2 == 1 || f == 4 {
        // cyclic unit group: odd characters <-> roots of X^{n/2} + 1
        g = primitive_root(f).expect("cyclic unit group");
        modulus[0] = BigInt::one();
    } else {
        // (Z/2^k)^× = <-1> x <5>: odd characters <-> roots of X^{n/2} - 1
        g = 5;
        modulus[0] = BigInt::from(-1);
    }
    let a: Vec<BigInt> = (0..half as u64)
        .map(|k| BigInt::from(2 * pow_mod(g, k, f) as i64 - f as i64))
        .collect();
    (a, modulus)
}

/// Relative class number `h⁻` of `Q(ζ_f)` for a prime power `f`, from
/// `h⁻ = w ∏_{χ odd} (−B_{1,χ}/2)` evaluated as an integer resultant.
pub fn minus_class_number(f: u64) -> Result<BigInt> {
    if f < 3 || f % 4 == 2 || prime_power(f).is_none() {
        return Err(Error::Unsupported(format!("{f} is not a normalised prime-power conductor")));
    }
    let n = euler_phi(f);
    if n > MAX_MINUS_DEGREE {
        return Err(Error::Resource(format!("φ({f}) = {n} exceeds {MAX_MINUS_DEGREE}")));
    }
    let (a, m) = stickelberger_data(f);
    let res = intpoly::resultant_monic(&m, &a);
    let half = (n / 2) as usize;
    let w = BigInt::from(roots_of_unity(f));
    let scale = BigRational::new(BigInt::from(-1), BigInt::from(2 * f));
    let h = BigRational::from_integer(w) * num_traits::pow(scale, half) * BigRational::from_integer(res);
    if !h.is_integer() || !h.is_positive() {
        return Err(Error::Mismatch(format!("h⁻({f}) evaluated to {h}")));
    }
    Ok(h.to_integer())
}
