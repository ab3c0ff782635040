//! Coordinate group laws and their level-`n` quotients.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::arith::{is_prime, mul_mod};
use crate::error::{Error, Result};

/// Largest quotient enumerated element by element.
pub const ENUMERATION_CAP: u128 = 1 << 24;

/// A group law on coordinate vectors, each element being the normal form
/// `x_1^{c_1} ⋯ x_d^{c_d}` in the generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GroupLaw {
    /// `Z_p^d`.
    Abelian { d: usize },
    /// `Γ(s) = <x, y, z | [x,y] = z^{p^s}, z central>`:
    /// `(a1,b1,c1)(a2,b2,c2) = (a1+a2, b1+b2, c1+c2 − p^s a2 b1)`.
    Gamma { s: u32 },
    /// The same law with `c` read modulo `p` only; not torsion-free.
    GammaTorsion { s: u32 },
}

impl GroupLaw {
    pub fn dim(&self) -> usize {
        match *self {
            GroupLaw::Abelian { d } => d,
            GroupLaw::Gamma { .. } | GroupLaw::GammaTorsion { .. } => 3,
        }
    }

    pub fn name(&self) -> String {
        match *self {
            GroupLaw::Abelian { d } => format!("Z_p^{d}"),
            GroupLaw::Gamma { s } => format!("Gamma({s})"),
            GroupLaw::GammaTorsion { s } => format!("Gamma({s}) with c mod p"),
        }
    }
}

impl fmt::Display for GroupLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            GroupLaw::Abelian { d } => write!(f, "zp:{d}"),
            GroupLaw::Gamma { s } => write!(f, "gamma:{s}"),
            GroupLaw::GammaTorsion { s } => write!(f, "gamma-torsion:{s}"),
        }
    }
}

impl FromStr for GroupLaw {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let (kind, val) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("group `{s}` lacks a `kind:` prefix")))?;
        let n: u32 = val
            .trim()
            .parse()
            .map_err(|e| Error::Parse(format!("group parameter `{val}`: {e}")))?;
        match kind.trim() {
            "zp" => Ok(GroupLaw::Abelian { d: n as usize }),
            "gamma" | "gamma-s" => Ok(GroupLaw::Gamma { s: n }),
            "gamma-torsion" => Ok(GroupLaw::GammaTorsion { s: n }),
            other => Err(Error::Parse(format!("unknown group kind `{other}`"))),
        }
    }
}

pub type Elem = Vec<u64>;

/// The quotient of a coordinate group by the kernel of reduction modulo
/// `p^n`: coordinates are read modulo `p^n` (the torsion coordinate modulo
/// `p`), and the order is `p^{dn}` for the torsion-free laws.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiniteQuotient {
    pub law: GroupLaw,
    pub p: u64,
    pub level: u32,
    pub moduli: Vec<u64>,
    /// `p^s` reduced modulo the last coordinate's modulus.
    #[serde(skip)]
    twist: u64,
}

impl FiniteQuotient {
    pub fn new(law: GroupLaw, p: u64, level: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::Invalid(format!("{p} is not prime")));
        }
        if level == 0 {
            return Err(Error::Invalid("level must be positive".into()));
        }
        let q = (p as u128)
            .checked_pow(level)
            .filter(|&q| q < (1u128 << 62))
            .ok_or_else(|| Error::Resource(format!("{p}^{level} exceeds a machine word")))? as u64;
        let d = law.dim();
        if d == 0 {
            return Err(Error::Invalid("dimension must be positive".into()));
        }
        let mut moduli = vec![q; d];
        let twist = match law {
            GroupLaw::Abelian { .. } => 0,
            GroupLaw::Gamma { s } => p.checked_pow(s).map_or(0, |t| t % q),
            GroupLaw::GammaTorsion { s } => {
                moduli[2] = p;
                if s == 0 {
                    1 % p
                } else {
                    0
                }
            }
        };
        Ok(FiniteQuotient {
            law,
            p,
            level,
            moduli,
            twist,
        })
    }

    pub fn dim(&self) -> usize {
        self.moduli.len()
    }

    /// `log_p` of the order.
    pub fn order_log(&self) -> u32 {
        self.moduli.iter().map(|&m| crate::arith::valuation(m, self.p)).sum()
    }

    pub fn order(&self) -> u128 {
        self.moduli.iter().map(|&m| m as u128).product()
    }

    pub fn identity(&self) -> Elem {
        vec![0; self.dim()]
    }

    pub fn is_identity(&self, g: &[u64]) -> bool {
        g.iter().all(|&c| c == 0)
    }

    /// The `i`-th generator.
    pub fn generator(&self, i: usize) -> Elem {
        let mut g = self.identity();
        g[i] = 1 % self.moduli[i];
        g
    }

    pub fn generators(&self) -> Vec<Elem> {
        (0..self.dim()).map(|i| self.generator(i)).collect()
    }

    /// Reduces arbitrary coordinates (for instance from a deeper level).
    pub fn reduce(&self, g: &[u64]) -> Elem {
        g.iter().zip(&self.moduli).map(|(&c, &m)| c % m).collect()
    }

    pub fn from_signed(&self, g: &[i64]) -> Elem {
        g.iter()
            .zip(&self.moduli)
            .map(|(&c, &m)| c.rem_euclid(m as i64) as u64)
            .collect()
    }

    pub fn mul(&self, g: &[u64], h: &[u64]) -> Elem {
        let mut out: Elem = g
            .iter()
            .zip(h)
            .zip(&self.moduli)
            .map(|((&a, &b), &m)| ((a as u128 + b as u128) % m as u128) as u64)
            .collect();
        if !matches!(self.law, GroupLaw::Abelian { .. }) && self.twist != 0 {
            let m = self.moduli[2];
            let t = mul_mod(mul_mod(self.twist, h[0] % m, m), g[1] % m, m);
            out[2] = (out[2] + m - t) % m;
        }
        out
    }

    pub fn inv(&self, g: &[u64]) -> Elem {
        let mut out: Elem = g.iter().zip(&self.moduli).map(|(&a, &m)| (m - a) % m).collect();
        if !matches!(self.law, GroupLaw::Abelian { .. }) && self.twist != 0 {
            let m = self.moduli[2];
            let t = mul_mod(mul_mod(self.twist, g[0] % m, m), g[1] % m, m);
            out[2] = (out[2] + m - t) % m;
        }
        out
    }

    pub fn pow(&self, g: &[u64], mut e: u64) -> Elem {
        let mut acc = self.identity();
        let mut b = g.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &b);
            }
            b = self.mul(&b, &b);
            e >>= 1;
        }
        acc
    }

    /// `g^k` for a signed exponent.
    pub fn pow_signed(&self, g: &[u64], k: i128) -> Elem {
        let r = self.pow(g, k.unsigned_abs() as u64);
        if k < 0 {
            self.inv(&r)
        } else {
            r
        }
    }

    /// `[g, h] = g^{-1} h^{-1} g h`.
    pub fn comm(&self, g: &[u64], h: &[u64]) -> Elem {
        let gi = self.inv(g);
        let hi = self.inv(h);
        self.mul(&self.mul(&gi, &hi), &self.mul(g, h))
    }

    /// `h g h^{-1}`.
    pub fn conj(&self, g: &[u64], h: &[u64]) -> Elem {
        self.mul(&self.mul(h, g), &self.inv(h))
    }

    /// Element number `idx` in mixed-radix order.
    pub fn element(&self, mut idx: u128) -> Elem {
        self.moduli
            .iter()
            .map(|&m| {
                let c = (idx % m as u128) as u64;
                idx /= m as u128;
                c
            })
            .collect()
    }

    pub fn check_enumerable(&self) -> Result<()> {
        if self.order() > ENUMERATION_CAP {
            return Err(Error::Resource(format!(
                "|{}/level {}| = {} exceeds the enumeration cap 2^24",
                self.law.name(),
                self.level,
                self.order()
            )));
        }
        Ok(())
    }

    /// Whether the generators commute.
    pub fn is_abelian(&self) -> bool {
        let gens = self.generators();
        gens.iter()
            .all(|g| gens.iter().all(|h| self.is_identity(&self.comm(g, h))))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn presentation() {
        for s in 0..3 {
            let q = FiniteQuotient::new(GroupLaw::Gamma { s }, 7, 4).unwrap();
            let (x, y, z) = (q.generator(0), q.generator(1), q.generator(2));
            assert_eq!(q.comm(&x, &y), q.pow(&z, 7u64.pow(s)));
            assert!(q.is_identity(&q.comm(&x, &z)));
            assert!(q.is_identity(&q.comm(&y, &z)));
            assert_eq!(q.order_log(), 12);
        }
        let q = FiniteQuotient::new(GroupLaw::Gamma { s: 0 }, 7, 1).unwrap();
        assert_eq!(q.order(), 343);
        assert!(!q.is_abelian());
        let q = FiniteQuotient::new(GroupLaw::Gamma { s: 2 }, 7, 1).unwrap();
        assert!(q.is_abelian());
    }

    #[test]
    fn normal_form_words() {
        let q = FiniteQuotient::new(GroupLaw::Gamma { s: 1 }, 5, 5).unwrap();
        let (x, y, z) = (q.generator(0), q.generator(1), q.generator(2));
        for (a, b, c) in [(3u64, 7u64, 11u64), (124, 3, 0), (0, 0, 9)] {
            let w = q.mul(&q.mul(&q.pow(&x, a), &q.pow(&y, b)), &q.pow(&z, c));
            assert_eq!(w, vec![a, b, c]);
        }
    }

    #[test]
    fn parsing() {
        assert_eq!("gamma-s:2".parse::<GroupLaw>().unwrap(), GroupLaw::Gamma { s: 2 });
        assert_eq!("zp:2".parse::<GroupLaw>().unwrap(), GroupLaw::Abelian { d: 2 });
        assert!("heisenberg:1".parse::<GroupLaw>().is_err());
        let l = GroupLaw::GammaTorsion { s: 1 };
        assert_eq!(l.to_string().parse::<GroupLaw>().unwrap(), l);
    }

    fn elem(m: u64) -> impl Strategy<Value = Vec<u64>> {
        proptest::collection::vec(0..m, 3)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]
        #[test]
        fn group_axioms(s in 0u32..3, g in elem(7u64.pow(4)), h in elem(7u64.pow(4)), k in elem(7u64.pow(4))) {
            let q = FiniteQuotient::new(GroupLaw::Gamma { s }, 7, 4).unwrap();
            let (g, h, k) = (q.reduce(&g), q.reduce(&h), q.reduce(&k));
            prop_assert_eq!(q.mul(&q.mul(&g, &h), &k), q.mul(&g, &q.mul(&h, &k)));
            prop_assert!(q.is_identity(&q.mul(&g, &q.inv(&g))));
            prop_assert!(q.is_identity(&q.mul(&q.inv(&g), &g)));
            prop_assert_eq!(q.mul(&g, &q.identity()), g.clone());
            // x^a y^b = z^{ab p^s} y^b x^a
            let (a, b) = (g[0], g[1]);
            let xa = q.pow(&q.generator(0), a);
            let yb = q.pow(&q.generator(1), b);
            let zz = q.pow(&q.generator(2), ((a as u128 * b as u128 * 7u128.pow(s)) % q.moduli[2] as u128) as u64);
            prop_assert_eq!(q.mul(&xa, &yb), q.mul(&zz, &q.mul(&yb, &xa)));
        }

        #[test]
        fn torsion_law_axioms(g in elem(125), h in elem(125), k in elem(125)) {
            let q = FiniteQuotient::new(GroupLaw::GammaTorsion { s: 0 }, 5, 3).unwrap();
            let (g, h, k) = (q.reduce(&g), q.reduce(&h), q.reduce(&k));
            prop_assert_eq!(q.mul(&q.mul(&g, &h), &k), q.mul(&g, &q.mul(&h, &k)));
            prop_assert!(q.is_identity(&q.mul(&g, &q.inv(&g))));
        }

        #[test]
        fn pow_matches_repeated_mul(g in elem(343), e in 0u64..60) {
            let q = FiniteQuotient::new(GroupLaw::Gamma { s: 0 }, 7, 3).unwrap();
            let g = q.reduce(&g);
            let naive = (0..e).fold(q.identity(), |acc, _| q.mul(&acc, &g));
            prop_assert_eq!(q.pow(&g, e), naive);
        }
    }
}
