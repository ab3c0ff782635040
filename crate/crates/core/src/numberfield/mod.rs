//! Cyclotomic and quadratic fields: exact element arithmetic, splitting of
//! rational primes, cyclotomic units, class numbers, and the p-parts of unit
//! groups of residue rings.

pub mod classnum;
pub mod cyclo;
pub mod intpoly;
pub mod quadratic;
pub mod residue;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::arith::{euler_phi, is_prime, kronecker, multiplicative_order};
use crate::error::{Error, Result};

pub use classnum::{minus_class_number, plus_class_number};
pub use cyclo::{cyclotomic_units, CycloElement, CycloField};
pub use quadratic::{class_number_imag_quadratic, fundamental_unit, QuadField};
pub use residue::{residue_ring_units_p_part, Filtration, LocalUnitGroup, UnitPPart};

/// A supported field, written `cyclotomic:<f>` or `quadratic:<d>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum FieldDescriptor {
    Cyclotomic(u64),
    Quadratic(i64),
}

impl FieldDescriptor {
    pub fn cyclotomic(f: u64) -> Result<Self> {
        CycloField::new(f)?;
        Ok(FieldDescriptor::Cyclotomic(f))
    }

    pub fn quadratic(d: i64) -> Result<Self> {
        QuadField::new(d)?;
        Ok(FieldDescriptor::Quadratic(d))
    }

    pub fn degree(&self) -> u64 {
        match *self {
            FieldDescriptor::Cyclotomic(f) => euler_phi(f),
            FieldDescriptor::Quadratic(_) => 2,
        }
    }

    /// `(r1, r2)`.
    pub fn signature(&self) -> (u32, u32) {
        match *self {
            FieldDescriptor::Cyclotomic(f) => (0, (euler_phi(f) / 2) as u32),
            FieldDescriptor::Quadratic(d) => {
                let k = QuadField::new(d).expect("validated");
                (k.r1, k.r2)
            }
        }
    }

    /// Monic integer polynomial `g` with `O_K = Z[x]/(g)`.
    pub fn order_polynomial(&self) -> Vec<BigInt> {
        match *self {
            FieldDescriptor::Cyclotomic(f) => intpoly::cyclotomic(f),
            FieldDescriptor::Quadratic(d) => QuadField::new(d).expect("validated").order_polynomial(),
        }
    }

    pub fn cyclo_field(&self) -> Option<Arc<CycloField>> {
        match *self {
            FieldDescriptor::Cyclotomic(f) => CycloField::new(f).ok(),
            FieldDescriptor::Quadratic(_) => None,
        }
    }

    pub fn is_ramified(&self, p: u64) -> bool {
        match *self {
            FieldDescriptor::Cyclotomic(f) => f % p == 0,
            FieldDescriptor::Quadratic(d) => {
                QuadField::new(d).expect("validated").discriminant.unsigned_abs() % p == 0
            }
        }
    }
}

impl fmt::Display for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldDescriptor::Cyclotomic(c) => write!(f, "cyclotomic:{c}"),
            FieldDescriptor::Quadratic(d) => write!(f, "quadratic:{d}"),
        }
    }
}

impl FromStr for FieldDescriptor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, val) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("field descriptor `{s}` lacks a `kind:` prefix")))?;
        match kind.trim() {
            "cyclotomic" => {
                let f = val
                    .trim()
                    .parse::<u64>()
                    .map_err(|e| Error::Parse(format!("conductor `{val}`: {e}")))?;
                Self::cyclotomic(f)
            }
            "quadratic" => {
                let d = val
                    .trim()
                    .parse::<i64>()
                    .map_err(|e| Error::Parse(format!("quadratic parameter `{val}`: {e}")))?;
                Self::quadratic(d)
            }
            other => Err(Error::Parse(format!("unknown field kind `{other}`"))),
        }
    }
}

impl TryFrom<String> for FieldDescriptor {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<FieldDescriptor> for String {
    fn from(d: FieldDescriptor) -> String {
        d.to_string()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplittingData {
    pub field: FieldDescriptor,
    pub p: u64,
    pub e: u64,
    pub fres: u64,
    pub g: u64,
}

pub fn splitting_data(k: &FieldDescriptor, p: u64) -> Result<SplittingData> {
    if !is_prime(p) {
        return Err(Error::Invalid(format!("{p} is not prime")));
    }
    let (e, fres, g) = match *k {
        FieldDescriptor::Cyclotomic(f) => {
            let mut m = f;
            let mut pk = 1;
            while m % p == 0 {
                m /= p;
                pk *= p;
            }
            let e = euler_phi(pk);
            let fres = multiplicative_order(p, m).expect("p coprime to m");
            (e, fres, euler_phi(m) / fres)
        }
        FieldDescriptor::Quadratic(d) => {
            let disc = QuadField::new(d)?.discriminant;
            match kronecker(disc, p) {
                0 => (2, 1, 1),
                1 => (1, 1, 2),
                _ => (1, 2, 1),
            }
        }
    };
    Ok(SplittingData {
        field: *k,
        p,
        e,
        fres,
        g,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff;

    /// Splitting read off from factoring the defining polynomial mod p (p unramified).
    fn splitting_by_factoring(k: &FieldDescriptor, p: u64) -> (u64, u64) {
        let g: Vec<u64> = k
            .order_polynomial()
            .iter()
            .map(|c| {
                let r = c % BigInt::from(p);
                let r = if r < BigInt::from(0) { r + BigInt::from(p) } else { r };
                u64::try_from(r).unwrap()
            })
            .collect();
        let degs = ff::factor_degrees(&g, p);
        assert!(degs.iter().all(|&d| d == degs[0]));
        (degs[0] as u64, degs.len() as u64)
    }

    #[test]
    fn small_cyclotomic_splittings() {
        let s = splitting_data(&"cyclotomic:13".parse().unwrap(), 2).unwrap();
        assert_eq!((s.e, s.fres, s.g), (1, 12, 1));
        let s = splitting_data(&"cyclotomic:7".parse().unwrap(), 2).unwrap();
        assert_eq!((s.e, s.fres, s.g), (1, 3, 2));
        let s = splitting_data(&"cyclotomic:7".parse().unwrap(), 7).unwrap();
        assert_eq!((s.e, s.fres, s.g), (6, 1, 1));
        // 37 ≡ 2 mod 7: residue degree 3, two primes
        let s = splitting_data(&"cyclotomic:7".parse().unwrap(), 37).unwrap();
        assert_eq!((s.e, s.fres, s.g), (1, 3, 2));
    }

    #[test]
    fn splitting_agrees_with_factorisation() {
        let fields: Vec<FieldDescriptor> = [3u64, 4, 5, 7, 8, 9, 12, 13, 15, 16, 20, 21]
            .iter()
            .map(|&f| FieldDescriptor::Cyclotomic(f))
            .chain([-1i64, -7, -23, 2, 5, 13, -5].iter().map(|&d| FieldDescriptor::Quadratic(d)))
            .collect();
        for k in &fields {
            for p in crate::arith::primes_up_to(60) {
                let s = splitting_data(k, p).unwrap();
                assert_eq!(s.e * s.fres * s.g, k.degree(), "{k} at {p}");
                if !k.is_ramified(p) {
                    assert_eq!(s.e, 1);
                    assert_eq!(splitting_by_factoring(k, p), (s.fres, s.g), "{k} at {p}");
                } else {
                    assert!(s.e > 1);
                }
            }
        }
    }

    #[test]
    fn descriptors_round_trip() {
        for s in ["cyclotomic:7", "quadratic:-7", "quadratic:5"] {
            let d: FieldDescriptor = s.parse().unwrap();
            assert_eq!(d.to_string(), s);
            let j = serde_json::to_string(&d).unwrap();
            assert_eq!(serde_json::from_str::<FieldDescriptor>(&j).unwrap(), d);
        }
        assert!("cyclotomic:6".parse::<FieldDescriptor>().is_err());
        assert!("quadratic:4".parse::<FieldDescriptor>().is_err());
        assert!("cubic:7".parse::<FieldDescriptor>().is_err());
        assert_eq!(FieldDescriptor::Cyclotomic(7).signature(), (0, 3));
        assert_eq!(FieldDescriptor::Quadratic(-7).signature(), (0, 1));
    }
}
