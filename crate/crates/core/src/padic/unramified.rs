use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Zero};

use super::prime_power;
use crate::arith::is_prime;
use crate::error::{Error, Result};
use crate::ff::{smallest_irreducible, ExtField};

/// The unramified extension of `Z_p` of degree `k`, truncated at `p^N`:
/// `(Z/p^N)[t] / (m(t))` with `m` the smallest monic irreducible of degree `k` mod `p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnramifiedRing {
    p: u64,
    degree: usize,
    precision: u32,
    modulus: Vec<u64>,
    pn: BigUint,
}

#[derive(Clone, PartialEq, Eq)]
pub struct UnramifiedElement {
    coeffs: Vec<BigUint>,
}

impl UnramifiedRing {
    pub fn new(p: u64, degree: usize, precision: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::Invalid(format!("{p} is not prime")));
        }
        if degree == 0 || precision == 0 {
            return Err(Error::Invalid("degree and precision must be positive".into()));
        }
        Ok(UnramifiedRing {
            p,
            degree,
            precision,
            modulus: smallest_irreducible(p, degree),
            pn: prime_power(p, precision),
        })
    }

    pub fn prime(&self) -> u64 {
        self.p
    }
    pub fn degree(&self) -> usize {
        self.degree
    }
    pub fn precision(&self) -> u32 {
        self.precision
    }
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    /// Residue field `F_{p^k}` with the same defining polynomial.
    pub fn residue_field(&self) -> ExtField {
        ExtField {
            p: self.p,
            k: self.degree,
            modulus: self.modulus.clone(),
        }
    }

    pub fn element(&self, coeffs: &[BigInt]) -> UnramifiedElement {
        let m = BigInt::from_biguint(Sign::Plus, self.pn.clone());
        let mut v: Vec<BigUint> = coeffs
            .iter()
            .map(|c| c.mod_floor(&m).to_biguint().unwrap())
            .collect();
        v.resize(v.len().max(self.degree), BigUint::zero());
        self.reduce_poly(v)
    }

    pub fn from_int(&self, n: i64) -> UnramifiedElement {
        self.element(&[BigInt::from(n)])
    }

    /// Lift of a residue-field element with coefficients in `[0, p)`.
    pub fn lift(&self, residue: &[u64]) -> UnramifiedElement {
        let cs: Vec<BigInt> = residue.iter().map(|&c| BigInt::from(c)).collect();
        self.element(&cs)
    }

    pub fn zero(&self) -> UnramifiedElement {
        UnramifiedElement {
            coeffs: vec![BigUint::zero(); self.degree],
        }
    }

    pub fn one(&self) -> UnramifiedElement {
        self.from_int(1)
    }

    fn reduce_poly(&self, mut v: Vec<BigUint>) -> UnramifiedElement {
        let k = self.degree;
        // m is monic: t^k = -sum m_i t^i
        while v.len() > k {
            let top = v.pop().unwrap() % &self.pn;
            if top.is_zero() {
                continue;
            }
            let shift = v.len() - k;
            for i in 0..k {
                let sub = (&top * self.modulus[i]) % &self.pn;
                let slot = &mut v[shift + i];
                *slot = (&*slot + &self.pn - sub) % &self.pn;
            }
        }
        for c in v.iter_mut() {
            *c %= &self.pn;
        }
        v.resize(k, BigUint::zero());
        UnramifiedElement { coeffs: v }
    }

    pub fn add(&self, a: &UnramifiedElement, b: &UnramifiedElement) -> UnramifiedElement {
        UnramifiedElement {
            coeffs: a
                .coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(x, y)| (x + y) % &self.pn)
                .collect(),
        }
    }

    pub fn sub(&self, a: &UnramifiedElement, b: &UnramifiedElement) -> UnramifiedElement {
        UnramifiedElement {
            coeffs: a
                .coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(x, y)| (x + &self.pn - y) % &self.pn)
                .collect(),
        }
    }

    pub fn neg(&self, a: &UnramifiedElement) -> UnramifiedElement {
        self.sub(&self.zero(), a)
    }

    pub fn mul(&self, a: &UnramifiedElement, b: &UnramifiedElement) -> UnramifiedElement {
        let k = self.degree;
        let mut prod = vec![BigUint::zero(); 2 * k - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                prod[i + j] += x * y;
            }
        }
        self.reduce_poly(prod)
    }

    pub fn scale(&self, a: &UnramifiedElement, c: &BigUint) -> UnramifiedElement {
        UnramifiedElement {
            coeffs: a.coeffs.iter().map(|x| (x * c) % &self.pn).collect(),
        }
    }

    pub fn pow(&self, a: &UnramifiedElement, e: &BigUint) -> UnramifiedElement {
        let mut acc = self.one();
        let bits = e.bits();
        for i in (0..bits).rev() {
            acc = self.mul(&acc, &acc);
            if e.bit(i) {
                acc = self.mul(&acc, a);
            }
        }
        acc
    }

    /// Residue modulo `p`, as an element of the residue field.
    pub fn reduce_mod_p(&self, a: &UnramifiedElement) -> Vec<u64> {
        let p = BigUint::from(self.p);
        a.coeffs
            .iter()
            .map(|c| {
                let r = c % &p;
                r.iter_u64_digits().next().unwrap_or(0)
            })
            .collect()
    }

    pub fn is_unit(&self, a: &UnramifiedElement) -> bool {
        self.reduce_mod_p(a).iter().any(|&c| c != 0)
    }

    /// Order of the unit group `(p^k - 1) p^{k(N-1)}`.
    pub fn unit_group_order(&self) -> BigUint {
        let q = BigUint::from(self.p).pow(self.degree as u32);
        (&q - BigUint::one()) * q.pow(self.precision - 1)
    }

    pub fn inv(&self, a: &UnramifiedElement) -> Result<UnramifiedElement> {
        if !self.is_unit(a) {
            return Err(Error::NonUnit("element reduces to 0 mod p".into()));
        }
        Ok(self.pow(a, &(self.unit_group_order() - BigUint::one())))
    }

    pub fn teichmuller(&self, a: &UnramifiedElement) -> Result<UnramifiedElement> {
        if !self.is_unit(a) {
            return Err(Error::NonUnit("Teichmüller lift of a non-unit".into()));
        }
        let q = BigUint::from(self.p).pow(self.degree as u32);
        let mut w = a.clone();
        for _ in 0..self.precision {
            let next = self.pow(&w, &q);
            if next == w {
                break;
            }
            w = next;
        }
        Ok(w)
    }

    /// Evaluate an integer polynomial (low degree first) at `x`.
    pub fn eval(&self, f: &[BigInt], x: &UnramifiedElement) -> UnramifiedElement {
        f.iter().rev().fold(self.zero(), |acc, c| {
            let t = self.mul(&acc, x);
            self.add(&t, &self.element(std::slice::from_ref(c)))
        })
    }

    /// Newton lift of a simple root of `f` from the residue field.
    pub fn lift_root(&self, f: &[BigInt], seed: &[u64]) -> Result<UnramifiedElement> {
        let df: Vec<BigInt> = f
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * BigInt::from(i))
            .collect();
        let mut r = self.lift(seed);
        if self.reduce_mod_p(&self.eval(f, &r)).iter().any(|&c| c != 0) {
            return Err(Error::Domain("seed is not a root modulo p".into()));
        }
        if !self.is_unit(&self.eval(&df, &r)) {
            return Err(Error::SingularLift("derivative vanishes at the seed".into()));
        }
        for _ in 0..=64 {
            let fr = self.eval(f, &r);
            if fr.coeffs.iter().all(|c| c.is_zero()) {
                return Ok(r);
            }
            let d = self.inv(&self.eval(&df, &r))?;
            r = self.sub(&r, &self.mul(&fr, &d));
        }
        Err(Error::Precision("Newton iteration did not converge".into()))
    }

    pub fn coefficients<'a>(&self, a: &'a UnramifiedElement) -> &'a [BigUint] {
        &a.coeffs
    }

    /// `(a - 1) / p mod p` for a 1-unit `a`, as residue-field coordinates.
    pub fn first_digit_of_one_unit(&self, a: &UnramifiedElement) -> Result<Vec<u64>> {
        let d = self.sub(a, &self.one());
        let p = BigUint::from(self.p);
        if d.coeffs.iter().any(|c| !(c % &p).is_zero()) {
            return Err(Error::Domain("not a 1-unit".into()));
        }
        Ok(d.coeffs
            .iter()
            .map(|c| {
                let r = (c / &p) % &p;
                r.iter_u64_digits().next().unwrap_or(0)
            })
            .collect())
    }
}

impl fmt::Debug for UnramifiedElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn residue_field_is_a_field() {
        let r = UnramifiedRing::new(3, 2, 4).unwrap();
        let f = r.residue_field();
        use crate::ff::FieldOps;
        for n in 1..9u128 {
            let x = f.element(n);
            let inv = f.inv(&x).unwrap();
            assert_eq!(f.mul(&x, &inv), f.one());
        }
        assert_eq!(r.modulus(), &[1, 0, 1]);
    }

    #[test]
    fn teichmuller_is_root_of_unity() {
        let r = UnramifiedRing::new(5, 3, 5).unwrap();
        let a = r.lift(&[2, 1, 0]);
        let w = r.teichmuller(&a).unwrap();
        let q1 = BigUint::from(124u32);
        assert_eq!(r.pow(&w, &q1), r.one());
        assert_eq!(r.reduce_mod_p(&w), vec![2, 1, 0]);
    }

    #[test]
    fn seventh_roots_of_unity_in_degree_three() {
        // Phi_7 splits into linear factors over the unramified cubic extension of Q_37
        let r = UnramifiedRing::new(37, 3, 3).unwrap();
        let f = r.residue_field();
        let phi7: Vec<BigInt> = vec![BigInt::one(); 7];
        use crate::ff::FieldOps;
        let seed = (1..f.order())
            .map(|n| f.element(n))
            .find(|x| {
                let v = f.pow(x, 7);
                v == f.one() && *x != f.one()
            })
            .unwrap();
        let z = r.lift_root(&phi7, &seed).unwrap();
        assert!(r.eval(&phi7, &z).coeffs.iter().all(|c| c.is_zero()));
        assert_eq!(r.pow(&z, &BigUint::from(7u32)), r.one());
    }

    proptest! {
        #[test]
        fn ring_laws(a in prop::collection::vec(0i64..1000, 3), b in prop::collection::vec(0i64..1000, 3), c in prop::collection::vec(0i64..1000, 3)) {
            let r = UnramifiedRing::new(7, 3, 3).unwrap();
            let to = |v: &Vec<i64>| r.element(&v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>());
            let (a, b, c) = (to(&a), to(&b), to(&c));
            prop_assert_eq!(r.mul(&r.mul(&a, &b), &c), r.mul(&a, &r.mul(&b, &c)));
            prop_assert_eq!(r.mul(&a, &b), r.mul(&b, &a));
            prop_assert_eq!(r.mul(&a, &r.add(&b, &c)), r.add(&r.mul(&a, &b), &r.mul(&a, &c)));
            if r.is_unit(&a) {
                prop_assert_eq!(r.mul(&a, &r.inv(&a).unwrap()), r.one());
            }
        }
    }
}
