//! Truncated power series in `Z_p[[T]]` and Weierstrass preparation.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::is_prime;
use crate::error::{Error, Result};
use crate::padic::{prime_power, PadicInt};

/// A series known modulo `(p^precision, T^truncation)`.
///
/// `polynomial` records that no nonzero term was lost to truncation, so the
/// coefficients describe an honest polynomial. Binary operations coerce to
/// the smaller precision and truncation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LambdaSeries {
    pub p: u64,
    pub precision: u32,
    pub truncation: usize,
    coeffs: Vec<BigUint>,
    pub polynomial: bool,
}

impl LambdaSeries {
    pub fn new(p: u64, precision: u32, truncation: usize, coeffs: &[BigInt]) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::Invalid(format!("{p} is not prime")));
        }
        if precision == 0 || truncation == 0 {
            return Err(Error::Invalid("precision and truncation must be positive".into()));
        }
        let q = BigInt::from(prime_power(p, precision));
        let mut c: Vec<BigUint> = coeffs
            .iter()
            .map(|x| x.mod_floor(&q).to_biguint().expect("nonnegative"))
            .collect();
        let polynomial = c.iter().skip(truncation).all(|x| x.is_zero());
        c.resize(truncation, BigUint::zero());
        Ok(LambdaSeries { p, precision, truncation, coeffs: c, polynomial })
    }

    pub fn from_i64(p: u64, precision: u32, truncation: usize, coeffs: &[i64]) -> Result<Self> {
        Self::new(p, precision, truncation, &coeffs.iter().map(|&c| BigInt::from(c)).collect::<Vec<_>>())
    }

    pub fn zero(p: u64, precision: u32, truncation: usize) -> Self {
        Self::from_i64(p, precision, truncation, &[]).expect("valid parameters")
    }

    pub fn one(p: u64, precision: u32, truncation: usize) -> Self {
        Self::from_i64(p, precision, truncation, &[1]).expect("valid parameters")
    }

    fn modulus(&self) -> BigUint {
        prime_power(self.p, self.precision)
    }

    pub fn coeffs(&self) -> &[BigUint] {
        &self.coeffs
    }

    pub fn coefficient(&self, i: usize) -> PadicInt {
        let c = self.coeffs.get(i).cloned().unwrap_or_default();
        PadicInt::new(self.p, self.precision, BigInt::from(c)).expect("valid parameters")
    }

    /// Coefficients as signed representatives in `(-p^N/2, p^N/2]`.
    pub fn signed_coeffs(&self) -> Vec<BigInt> {
        let q = BigInt::from(self.modulus());
        let half = &q / 2;
        self.coeffs
            .iter()
            .map(|c| {
                let c = BigInt::from(c.clone());
                if c > half {
                    c - &q
                } else {
                    c
                }
            })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_unit(&self) -> bool {
        !(&self.coeffs[0] % self.p).is_zero()
    }

    /// Index of the last nonzero coefficient.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !c.is_zero())
    }

    pub fn with_precision(&self, precision: u32, truncation: usize) -> Self {
        let precision = precision.min(self.precision);
        let truncation = truncation.min(self.truncation);
        let q = prime_power(self.p, precision);
        let lost = self.coeffs[truncation..].iter().any(|c| !c.is_zero());
        LambdaSeries {
            p: self.p,
            precision,
            truncation,
            coeffs: self.coeffs[..truncation].iter().map(|c| c % &q).collect(),
            polynomial: self.polynomial && !lost,
        }
    }

    fn coerce(&self, other: &Self) -> (Self, Self) {
        assert_eq!(self.p, other.p, "series over different primes");
        let n = self.precision.min(other.precision);
        let m = self.truncation.min(other.truncation);
        (self.with_precision(n, m), other.with_precision(n, m))
    }

    pub fn add(&self, other: &Self) -> Self {
        let (mut a, b) = self.coerce(other);
        let q = a.modulus();
        for (x, y) in a.coeffs.iter_mut().zip(&b.coeffs) {
            *x = (&*x + y) % &q;
        }
        a.polynomial &= b.polynomial;
        a
    }

    pub fn neg(&self) -> Self {
        let mut a = self.clone();
        let q = a.modulus();
        for x in a.coeffs.iter_mut() {
            *x = (&q - &*x) % &q;
        }
        a
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (a, b) = self.coerce(other);
        let q = a.modulus();
        let m = a.truncation;
        let mut c = vec![BigUint::zero(); m];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs[..m - i].iter().enumerate() {
                c[i + j] += x * y;
            }
        }
        for x in c.iter_mut() {
            *x %= &q;
        }
        let fits = match (a.degree(), b.degree()) {
            (Some(da), Some(db)) => da + db < m,
            _ => true,
        };
        LambdaSeries {
            p: a.p,
            precision: a.precision,
            truncation: m,
            coeffs: c,
            polynomial: a.polynomial && b.polynomial && fits,
        }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        let k = LambdaSeries::new(self.p, self.precision, self.truncation, std::slice::from_ref(c)).expect("valid");
        self.mul(&k)
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut acc = Self::one(self.p, self.precision, self.truncation);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Inverse of a unit, by the recursion on coefficients.
    pub fn inv(&self) -> Result<Self> {
        if !self.is_unit() {
            return Err(Error::NonUnit("series with constant term divisible by p".into()));
        }
        let q = self.modulus();
        let qi = BigInt::from(q.clone());
        let c0 = crate::padic::mod_inverse(&self.coeffs[0], &q).expect("unit");
        let m = self.truncation;
        let mut out = vec![BigUint::zero(); m];
        out[0] = c0.clone();
        for k in 1..m {
            let mut s = BigInt::zero();
            for j in 1..=k {
                s += BigInt::from(&self.coeffs[j] * &out[k - j]);
            }
            let v = (-s * BigInt::from(c0.clone())).mod_floor(&qi);
            out[k] = v.to_biguint().expect("nonnegative");
        }
        let polynomial = self.degree() == Some(0);
        Ok(LambdaSeries { p: self.p, precision: self.precision, truncation: m, coeffs: out, polynomial })
    }

    /// `min_i v_p(a_i)`, or `None` when the series is zero at this precision.
    pub fn mu(&self) -> Option<u32> {
        self.coeffs
            .iter()
            .filter(|c| !c.is_zero())
            .map(|c| biguint_valuation(c, self.p))
            .min()
    }

    pub fn to_string_t(&self) -> String {
        let terms: Vec<String> = self
            .signed_coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => c.to_string(),
                1 => format!("{c}*T"),
                _ => format!("{c}*T^{i}"),
            })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }
}

pub(crate) fn biguint_valuation(c: &BigUint, p: u64) -> u32 {
    let mut v = 0;
    let mut x = c.clone();
    let pb = BigUint::from(p);
    while !x.is_zero() && (&x % &pb).is_zero() {
        x /= &pb;
        v += 1;
    }
    v
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Preparation {
    pub mu: u32,
    pub lambda: usize,
    /// Monic of degree `λ` with lower coefficients divisible by `p`.
    pub distinguished: LambdaSeries,
    pub unit: LambdaSeries,
    /// p-adic precision at which `P` and `U` are certified.
    pub precision: u32,
    pub truncation: usize,
}

/// `f = p^μ · P · U` with `P` distinguished and `U` a unit.
///
/// The factorisation is computed by lifting `g ≡ T^λ · ū (mod p)` one digit at
/// a time, with `P` kept monic. For a polynomial input this is exact to the
/// full remaining precision; for a truncated series the unknown tail only
/// perturbs `P` modulo `p^{⌊(M − λ)/λ⌋}`, which caps the certified precision.
pub fn weierstrass_prepare(f: &LambdaSeries) -> Result<Preparation> {
    let p = f.p;
    let mu = f
        .mu()
        .ok_or_else(|| Error::Precision("series is zero at the working precision".into()))?;
    let n = f.precision - mu;
    let q = prime_power(p, n);
    let pmu = prime_power(p, mu);
    let g: Vec<BigUint> = f.coeffs.iter().map(|c| (c / &pmu) % &q).collect();
    let lambda = g
        .iter()
        .position(|c| !(c % p).is_zero())
        .ok_or_else(|| Error::Precision("no unit coefficient below the truncation".into()))?;
    let cert = if f.polynomial || lambda == 0 {
        n
    } else {
        n.min(((f.truncation - lambda) / lambda) as u32)
    };
    if cert == 0 {
        return Err(Error::Precision(format!(
            "truncation {} too short for λ = {lambda}",
            f.truncation
        )));
    }
    let deg = f.degree().expect("nonzero");
    let (pp, uu) = hensel_split(&g[..=deg], lambda, p, n);
    let m = f.truncation;
    let unit_trunc = if f.polynomial { m } else { m - lambda };
    let mut distinguished = LambdaSeries::new(p, n, m, &pp).expect("valid").with_precision(cert, m);
    distinguished.polynomial = true;
    let mut unit = LambdaSeries::new(p, n, unit_trunc, &uu).expect("valid").with_precision(cert, m);
    unit.polynomial = f.polynomial;
    Ok(Preparation {
        mu,
        lambda,
        distinguished,
        unit,
        precision: cert,
        truncation: unit_trunc,
    })
}

fn poly_mod(a: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    a.iter().map(|x| x.mod_floor(m)).collect()
}

fn poly_mul_z(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    crate::numberfield::intpoly::mul(a, b)
}

/// Division by a monic polynomial over `Z`.
fn divrem_monic(a: &[BigInt], m: &[BigInt]) -> (Vec<BigInt>, Vec<BigInt>) {
    crate::numberfield::intpoly::divrem_monic(a, m)
}

/// Extended Euclid over `F_p`: `(s, t)` with `s a + t b = 1`.
fn xgcd_fp(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    use crate::ff::{poly_divrem, poly_mul, poly_sub, poly_trim};
    let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
    let (mut s0, mut s1) = (vec![1u64], vec![]);
    let (mut t0, mut t1) = (vec![], vec![1u64]);
    poly_trim(&mut r0);
    poly_trim(&mut r1);
    while !r1.is_empty() {
        let (quo, rem) = poly_divrem(&r0, &r1, p);
        let s2 = poly_sub(&s0, &poly_mul(&quo, &s1, p), p);
        let t2 = poly_sub(&t0, &poly_mul(&quo, &t1, p), p);
        r0 = std::mem::replace(&mut r1, rem);
        poly_trim(&mut r1);
        s0 = std::mem::replace(&mut s1, s2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    // r0 is a nonzero constant
    let inv = crate::arith::inv_mod(r0[0], p).expect("coprime inputs");
    let scale = |v: Vec<u64>| v.into_iter().map(|c| c * inv % p).collect::<Vec<_>>();
    (scale(s0), scale(t0))
}

/// Splits `g ≡ T^λ · u (mod p)` into `P · Q` modulo `p^n`, `P` monic of degree `λ`.
fn hensel_split(g: &[BigUint], lambda: usize, p: u64, n: u32) -> (Vec<BigInt>, Vec<BigInt>) {
    let g: Vec<BigInt> = g.iter().map(|c| BigInt::from(c.clone())).collect();
    let pb = BigInt::from(p);
    let mut p_poly: Vec<BigInt> = vec![BigInt::zero(); lambda];
    p_poly.push(BigInt::one());
    if lambda == 0 {
        return (p_poly, g);
    }
    let mut q_poly: Vec<BigInt> = poly_mod(&g[lambda..], &pb);
    // A Q + B P ≡ 1 (mod p) with deg A < λ
    let to_fp = |v: &[BigInt]| -> Vec<u64> { v.iter().map(|c| c.mod_floor(&pb).to_u64().expect("small")).collect() };
    let (a_fp, _) = xgcd_fp(&to_fp(&q_poly), &to_fp(&p_poly), p);
    let (_, a_fp) = crate::ff::poly_divrem(&a_fp, &to_fp(&p_poly), p);
    // B = (1 − A Q) / P over F_p
    let aq = crate::ff::poly_mul(&a_fp, &to_fp(&q_poly), p);
    let (b_fp, _) = crate::ff::poly_divrem(&crate::ff::poly_sub(&[1], &aq, p), &to_fp(&p_poly), p);
    let a_z: Vec<BigInt> = a_fp.iter().map(|&c| BigInt::from(c)).collect();
    let b_z: Vec<BigInt> = b_fp.iter().map(|&c| BigInt::from(c)).collect();
    let mut pk = BigInt::one();
    for _ in 1..n {
        pk *= &pb;
        let prod = poly_mul_z(&p_poly, &q_poly);
        let len = g.len().max(prod.len());
        let err: Vec<BigInt> = (0..len)
            .map(|i| g.get(i).cloned().unwrap_or_default() - prod.get(i).cloned().unwrap_or_default())
            .collect();
        // err ≡ 0 mod p^k; lift by e = err / p^k mod p
        let e: Vec<BigInt> = err.iter().map(|c| (c / &pk).mod_floor(&pb)).collect();
        let ea = poly_mod(&poly_mul_z(&e, &a_z), &pb);
        let (t, dp) = divrem_monic(&ea, &poly_mod(&p_poly, &pb));
        let dq = poly_mod(&add_z(&poly_mul_z(&t, &q_poly), &poly_mul_z(&e, &b_z)), &pb);
        p_poly = add_z(&p_poly, &dp.iter().map(|c| c.mod_floor(&pb) * &pk).collect::<Vec<_>>());
        q_poly = add_z(&q_poly, &dq.iter().map(|c| c * &pk).collect::<Vec<_>>());
    }
    let qn = &pk * &pb;
    let mut qp = poly_mod(&q_poly, &qn);
    crate::numberfield::intpoly::trim(&mut qp);
    (poly_mod(&p_poly, &qn), qp)
}

fn add_z(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| a.get(i).cloned().unwrap_or_default() + b.get(i).cloned().unwrap_or_default())
        .collect()
}
