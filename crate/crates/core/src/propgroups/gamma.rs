//! Elements of `Γ(s)` with p-adic coordinates.

use num_bigint::{BigInt, BigUint};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::padic::PadicInt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GammaParams {
    pub p: u64,
    pub s: u32,
    /// Coordinates are known modulo `p^precision`.
    pub precision: u32,
}

/// The normal form `x^a y^b z^c`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GammaElement {
    pub params: GammaParams,
    pub a: PadicInt,
    pub b: PadicInt,
    pub c: PadicInt,
}

impl GammaParams {
    pub fn new(p: u64, s: u32, precision: u32) -> Result<Self> {
        if !crate::arith::is_prime(p) {
            return Err(Error::Invalid(format!("{p} is not prime")));
        }
        if precision == 0 {
            return Err(Error::Invalid("precision must be positive".into()));
        }
        Ok(GammaParams { p, s, precision })
    }

    fn int(&self, v: impl Into<BigInt>) -> PadicInt {
        PadicInt::new(self.p, self.precision, v).expect("validated parameters")
    }

    pub fn element(&self, a: impl Into<BigInt>, b: impl Into<BigInt>, c: impl Into<BigInt>) -> GammaElement {
        GammaElement {
            params: *self,
            a: self.int(a),
            b: self.int(b),
            c: self.int(c),
        }
    }

    pub fn identity(&self) -> GammaElement {
        self.element(0, 0, 0)
    }

    pub fn x(&self) -> GammaElement {
        self.element(1, 0, 0)
    }

    pub fn y(&self) -> GammaElement {
        self.element(0, 1, 0)
    }

    pub fn z(&self) -> GammaElement {
        self.element(0, 0, 1)
    }

    fn twist(&self) -> PadicInt {
        self.int(BigInt::from(self.p).pow(self.s))
    }
}

fn same(g: &GammaElement, h: &GammaElement) -> Result<()> {
    if g.params != h.params {
        return Err(Error::Mismatch(format!("{:?} against {:?}", g.params, h.params)));
    }
    Ok(())
}

pub fn gamma_mul(g: &GammaElement, h: &GammaElement) -> Result<GammaElement> {
    same(g, h)?;
    let t = g.params.twist();
    Ok(GammaElement {
        params: g.params,
        a: &g.a + &h.a,
        b: &g.b + &h.b,
        c: &(&g.c + &h.c) - &(&t * &(&h.a * &g.b)),
    })
}

pub fn gamma_inv(g: &GammaElement) -> GammaElement {
    let t = g.params.twist();
    GammaElement {
        params: g.params,
        a: -&g.a,
        b: -&g.b,
        c: &(-&g.c) - &(&t * &(&g.a * &g.b)),
    }
}

/// `g^k` by square-and-multiply.
pub fn gamma_pow(g: &GammaElement, k: &BigUint) -> GammaElement {
    let mut acc = g.params.identity();
    for i in (0..k.bits()).rev() {
        acc = gamma_mul(&acc, &acc).expect("same parameters");
        if k.bit(i) {
            acc = gamma_mul(&acc, g).expect("same parameters");
        }
    }
    acc
}

/// `g^k` for `k ∈ Z_p`, `p` odd: `(ka, kb, kc − p^s C(k,2) ab)`.
pub fn gamma_pow_padic(g: &GammaElement, k: &PadicInt) -> Result<GammaElement> {
    let pp = g.params;
    if pp.p == 2 {
        return Err(Error::Unsupported("p-adic exponents need an odd prime".into()));
    }
    if k.prime() != pp.p {
        return Err(Error::Mismatch(format!("exponent over {} for a group over {}", k.prime(), pp.p)));
    }
    let k = k.reduce(pp.precision);
    let k = PadicInt::new(pp.p, pp.precision, BigInt::from(k.residue().clone()))?;
    let half = pp.int(2).inv()?;
    let binom = &(&k * &(&k - &pp.int(1))) * &half;
    Ok(GammaElement {
        params: pp,
        a: &k * &g.a,
        b: &k * &g.b,
        c: &(&k * &g.c) - &(&pp.twist() * &(&binom * &(&g.a * &g.b))),
    })
}

pub fn gamma_comm(g: &GammaElement, h: &GammaElement) -> Result<GammaElement> {
    let gi = gamma_inv(g);
    let hi = gamma_inv(h);
    gamma_mul(&gamma_mul(&gi, &hi)?, &gamma_mul(g, h)?)
}

impl GammaElement {
    pub fn is_identity(&self) -> bool {
        self.a.is_zero() && self.b.is_zero() && self.c.is_zero()
    }

    /// Coordinates as machine words (requires `p^precision < 2^64`).
    pub fn coords(&self) -> Option<Vec<u64>> {
        Some(vec![self.a.to_u64()?, self.b.to_u64()?, self.c.to_u64()?])
    }
}

/// The primitive cube root of unity in `Z_p` whose residue is smallest.
pub fn teichmuller_cube_root(p: u64, precision: u32) -> Result<PadicInt> {
    if p % 3 != 1 {
        return Err(Error::Domain(format!("{p} ≢ 1 mod 3 has no cube roots of unity in Z_p")));
    }
    let r = crate::ff::smallest_root_of_unity(p, 3).expect("3 | p - 1");
    let z = PadicInt::from_u64(p, precision, r)?.teichmuller()?;
    debug_assert!(z.pow_u64(3) == PadicInt::one(p, precision));
    Ok(z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::propgroups::law::{FiniteQuotient, GroupLaw};
    use proptest::prelude::*;

    #[test]
    fn commutator_of_generators() {
        for s in 0..3 {
            let g = GammaParams::new(7, s, 6).unwrap();
            let c = gamma_comm(&g.x(), &g.y()).unwrap();
            assert_eq!(c, g.element(0, 0, 7i64.pow(s)));
            assert!(gamma_comm(&g.x(), &g.z()).unwrap().is_identity());
            assert!(gamma_mul(&g.x(), &gamma_inv(&g.x())).unwrap().is_identity());
        }
        let a = GammaParams::new(7, 0, 6).unwrap();
        let b = GammaParams::new(7, 1, 6).unwrap();
        assert!(gamma_mul(&a.x(), &b.x()).is_err());
    }

    #[test]
    fn cube_roots() {
        let z = teichmuller_cube_root(7, 10).unwrap();
        assert_eq!(z.to_u64().unwrap() % 7, 2);
        assert_eq!(z.pow_u64(3), PadicInt::one(7, 10));
        assert!(teichmuller_cube_root(5, 4).is_err());
    }

    proptest! {
        #[test]
        fn agrees_with_machine_word_law(s in 0u32..3, v in proptest::collection::vec(0u64..2401, 6), k in 0u64..5000) {
            let pp = GammaParams::new(7, s, 4).unwrap();
            let q = FiniteQuotient::new(GroupLaw::Gamma { s }, 7, 4).unwrap();
            let g = pp.element(v[0], v[1], v[2]);
            let h = pp.element(v[3], v[4], v[5]);
            let gh = gamma_mul(&g, &h).unwrap();
            prop_assert_eq!(gh.coords().unwrap(), q.mul(&v[0..3], &v[3..6]));
            let kb = BigUint::from(k);
            let pw = gamma_pow(&g, &kb);
            prop_assert_eq!(pw.coords().unwrap(), q.pow(&v[0..3], k));
            let kp = PadicInt::from_u64(7, 4, k).unwrap();
            prop_assert_eq!(gamma_pow_padic(&g, &kp).unwrap(), pw);
            prop_assert!(gamma_mul(&gamma_inv(&g), &g).unwrap().is_identity());
        }
    }
}
