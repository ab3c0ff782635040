//! Cyclotomic fields `Q(ζ_f)` in the power basis `1, ζ, …, ζ^{φ(f)-1}`.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::intpoly;
use crate::arith::{euler_phi, gcd, prime_power};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycloField {
    f: u64,
    degree: usize,
    phi: Vec<BigInt>,
}

impl CycloField {
    /// `Q(ζ_f)` for a conductor `f >= 3`, `f ≢ 2 mod 4`.
    pub fn new(f: u64) -> Result<Arc<Self>> {
        if f < 3 || f % 4 == 2 {
            return Err(Error::Invalid(format!(
                "conductor {f} is not normalised (need f >= 3, f != 2 mod 4)"
            )));
        }
        Ok(Self::of_order(f))
    }

    /// `Q(ζ_n)` for any `n >= 1`, without normalising the conductor.
    pub(crate) fn of_order(n: u64) -> Arc<Self> {
        let phi = intpoly::cyclotomic(n);
        Arc::new(CycloField {
            f: n,
            degree: phi.len() - 1,
            phi,
        })
    }

    pub fn conductor(&self) -> u64 {
        self.f
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn polynomial(&self) -> &[BigInt] {
        &self.phi
    }

    /// Checks `Φ_f | x^f - 1` and `deg Φ_f = φ(f)`.
    pub fn verify(&self) -> bool {
        let mut xf = vec![BigInt::zero(); self.f as usize + 1];
        xf[0] = BigInt::from(-1);
        xf[self.f as usize] = BigInt::one();
        let (_, r) = intpoly::divrem_monic(&xf, &self.phi);
        r.is_empty() && self.degree as u64 == euler_phi(self.f)
    }

    fn reduce(&self, mut c: Vec<BigRational>) -> Vec<BigRational> {
        let d = self.degree;
        for i in (d..c.len()).rev() {
            let top = std::mem::replace(&mut c[i], BigRational::zero());
            if top.is_zero() {
                continue;
            }
            for (j, pj) in self.phi.iter().take(d).enumerate() {
                c[i - d + j] -= &top * BigRational::from_integer(pj.clone());
            }
        }
        c.truncate(d);
        c.resize(d, BigRational::zero());
        c
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct CycloElement {
    field: Arc<CycloField>,
    coeffs: Vec<BigRational>,
}

impl CycloElement {
    pub fn new(field: &Arc<CycloField>, coeffs: Vec<BigRational>) -> Self {
        let coeffs = field.reduce(coeffs);
        CycloElement {
            field: field.clone(),
            coeffs,
        }
    }

    pub fn from_ints(field: &Arc<CycloField>, coeffs: &[i64]) -> Self {
        Self::new(
            field,
            coeffs
                .iter()
                .map(|&c| BigRational::from_integer(c.into()))
                .collect(),
        )
    }

    pub fn from_integer(field: &Arc<CycloField>, n: BigInt) -> Self {
        Self::new(field, vec![BigRational::from_integer(n)])
    }

    pub fn zero(field: &Arc<CycloField>) -> Self {
        Self::new(field, Vec::new())
    }

    pub fn one(field: &Arc<CycloField>) -> Self {
        Self::from_ints(field, &[1])
    }

    /// `ζ^k` for any integer `k`.
    pub fn zeta_pow(field: &Arc<CycloField>, k: i64) -> Self {
        let e = k.rem_euclid(field.f as i64) as usize;
        let mut c = vec![BigRational::zero(); e + 1];
        c[e] = BigRational::one();
        Self::new(field, c)
    }

    pub fn field(&self) -> &Arc<CycloField> {
        &self.field
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// The rational number this element equals, if it lies in `Q`.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.coeffs.iter().skip(1).all(|c| c.is_zero()) {
            Some(self.coeffs.first().cloned().unwrap_or_else(BigRational::zero))
        } else {
            None
        }
    }

    /// Integer coefficients when the element lies in `Z[ζ]`.
    pub fn integer_coeffs(&self) -> Option<Vec<BigInt>> {
        self.coeffs
            .iter()
            .map(|c| c.is_integer().then(|| c.to_integer()))
            .collect()
    }

    fn check(&self, other: &Self) {
        assert!(
            Arc::ptr_eq(&self.field, &other.field) || self.field == other.field,
            "elements of different fields"
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check(other);
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        CycloElement {
            field: self.field.clone(),
            coeffs,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.check(other);
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        CycloElement {
            field: self.field.clone(),
            coeffs,
        }
    }

    pub fn neg(&self) -> Self {
        CycloElement {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check(other);
        let d = self.field.degree;
        let mut out = vec![BigRational::zero(); 2 * d];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        Self::new(&self.field, out)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        CycloElement {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut acc = Self::one(&self.field);
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b);
            }
            b = b.mul(&b);
            e >>= 1;
        }
        acc
    }

    /// Galois action `σ_a: ζ -> ζ^a`, `gcd(a, f) = 1`.
    pub fn galois(&self, a: u64) -> Result<Self> {
        let f = self.field.f;
        if gcd(a % f, f) != 1 {
            return Err(Error::Invalid(format!("{a} is not a unit mod {f}")));
        }
        let mut out = vec![BigRational::zero(); f as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[(i as u64 * a % f) as usize] += c;
        }
        Ok(Self::new(&self.field, out))
    }

    /// Matrix of multiplication by `self` in the power basis (columns = images of `ζ^j`).
    pub fn multiplication_matrix(&self) -> Vec<Vec<BigRational>> {
        let d = self.field.degree;
        let cols: Vec<Vec<BigRational>> = (0..d)
            .map(|j| self.mul(&Self::zeta_pow(&self.field, j as i64)).coeffs)
            .collect();
        (0..d).map(|i| (0..d).map(|j| cols[j][i].clone()).collect()).collect()
    }

    /// Field norm `N_{K/Q}` as the determinant of the multiplication matrix.
    pub fn norm(&self) -> BigRational {
        let m = self.multiplication_matrix();
        let d = m.len();
        let den = m
            .iter()
            .flatten()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let scaled: Vec<Vec<BigInt>> = m
            .iter()
            .map(|row| row.iter().map(|c| (c * BigRational::from_integer(den.clone())).to_integer()).collect())
            .collect();
        BigRational::new(intpoly::det(scaled), num_traits::pow(den, d))
    }

    /// Complex embedding `ζ -> exp(2πik/f)` in floating point.
    pub fn embed(&self, k: u64) -> (f64, f64) {
        let f = self.field.f as f64;
        let mut re = 0.0;
        let mut im = 0.0;
        for (i, c) in self.coeffs.iter().enumerate() {
            let x = rational_to_f64(c);
            let t = 2.0 * std::f64::consts::PI * (k as f64) * (i as f64) / f;
            re += x * t.cos();
            im += x * t.sin();
        }
        (re, im)
    }
}

fn rational_to_f64(c: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    c.numer().to_f64().unwrap_or(f64::NAN) / c.denom().to_f64().unwrap_or(f64::NAN)
}

impl fmt::Debug for CycloElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for CycloElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            first = false;
            let a = c.abs();
            match i {
                0 => write!(f, "{a}")?,
                _ => {
                    if !a.is_one() {
                        write!(f, "{a}*")?;
                    }
                    if i == 1 {
                        write!(f, "z")?
                    } else {
                        write!(f, "z^{i}")?
                    }
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// `−ζ` followed by the cyclotomic units `(1 − ζ^a)/(1 − ζ) = 1 + ζ + … + ζ^{a−1}`
/// for `1 < a < f/2`, `gcd(a, f) = 1`.
pub fn cyclotomic_units(k: &Arc<CycloField>) -> Result<Vec<CycloElement>> {
    let f = k.f;
    if prime_power(f).is_none() {
        return Err(Error::Unsupported(format!(
            "cyclotomic units are only provided for prime-power conductors, got {f}"
        )));
    }
    let mut out = vec![CycloElement::zeta_pow(k, 1).neg()];
    for a in 2..f {
        if 2 * a >= f {
            break;
        }
        if gcd(a, f) != 1 {
            continue;
        }
        let coeffs = vec![1i64; a as usize];
        out.push(CycloElement::from_ints(k, &coeffs));
    }
    for u in &out {
        let n = u.norm();
        if !(n.is_one() || (-n).is_one()) {
            return Err(Error::Mismatch(format!("unit {u} has norm {}", u.norm())));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Rank of the log-embedding matrix, one row per unit, one column per
    /// pair of complex places (dropping one), in double precision.
    fn log_rank(units: &[CycloElement]) -> usize {
        let k = units[0].field().clone();
        let f = k.conductor();
        let places: Vec<u64> = (1..f).filter(|&a| gcd(a, f) == 1 && 2 * a < f).collect();
        let cols = places.len().saturating_sub(1);
        let mut m: Vec<Vec<f64>> = units
            .iter()
            .map(|u| {
                places[..cols]
                    .iter()
                    .map(|&a| {
                        let (re, im) = u.embed(a);
                        (re * re + im * im).ln()
                    })
                    .collect()
            })
            .collect();
        let mut rank = 0;
        for c in 0..cols {
            let Some(piv) = (rank..m.len()).max_by(|&i, &j| m[i][c].abs().total_cmp(&m[j][c].abs())) else {
                break;
            };
            if m[piv][c].abs() < 1e-9 {
                continue;
            }
            m.swap(rank, piv);
            for i in 0..m.len() {
                if i != rank {
                    let t = m[i][c] / m[rank][c];
                    for j in 0..cols {
                        m[i][j] -= t * m[rank][j];
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    #[test]
    fn field_polynomials() {
        for f in [3u64, 4, 5, 7, 8, 9, 12, 15, 16, 20, 21] {
            let k = CycloField::new(f).unwrap();
            assert!(k.verify());
        }
        assert!(CycloField::new(6).is_err());
        assert!(CycloField::new(2).is_err());
    }

    #[test]
    fn zeta_has_order_f() {
        let k = CycloField::new(9).unwrap();
        let z = CycloElement::zeta_pow(&k, 1);
        assert_eq!(z.pow(9), CycloElement::one(&k));
        assert_ne!(z.pow(3), CycloElement::one(&k));
        assert_eq!(CycloElement::zeta_pow(&k, -1).mul(&z), CycloElement::one(&k));
    }

    #[test]
    fn norms() {
        let k = CycloField::new(7).unwrap();
        // N(1 - ζ) = Φ_7(1) = 7
        let pi = CycloElement::from_ints(&k, &[1, -1]);
        assert_eq!(pi.norm(), BigRational::from_integer(7.into()));
        let two = CycloElement::from_ints(&k, &[2]);
        assert_eq!(two.norm(), BigRational::from_integer(64.into()));
        let half = two.scale(&BigRational::new(1.into(), 4.into()));
        assert_eq!(half.norm(), BigRational::new(1.into(), 64.into()));
        // norm is multiplicative
        let a = CycloElement::from_ints(&k, &[3, 0, 1, -2]);
        assert_eq!(a.mul(&pi).norm(), a.norm() * pi.norm());
        // and Galois-invariant
        assert_eq!(a.galois(3).unwrap().norm(), a.norm());
    }

    #[test]
    fn unit_ranks_match_log_embedding() {
        for (f, rank) in [(3u64, 0usize), (4, 0), (5, 1), (7, 2), (9, 2), (11, 4), (13, 5), (16, 3), (25, 9)] {
            let k = CycloField::new(f).unwrap();
            let us = cyclotomic_units(&k).unwrap();
            assert!(us.iter().all(|u| u.norm().abs().is_one()));
            let r = if us.len() > 1 { log_rank(&us[1..]) } else { 0 };
            assert_eq!(r, rank, "f = {f}");
            assert_eq!(us.len() - 1, rank);
        }
        assert!(cyclotomic_units(&CycloField::new(15).unwrap()).is_err());
    }
}
