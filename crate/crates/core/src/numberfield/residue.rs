//! p-parts of unit groups of residue rings `O_K/m`, through the filtration by
//! higher unit groups.
//!
//! Every element of the p-part is written as a product of filtration
//! generators by peeling off one digit layer at a time; the relations
//! `g^p = ∏ (deeper generators)` then present the group, and its structure
//! comes from a Smith form over `Z/p^M`.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use super::intpoly;
use super::{splitting_data, FieldDescriptor};
use crate::arith::{inv_mod, mul_mod};
use crate::error::{Error, Result};
use crate::snf::{self, LocalSnf};

/// `Z[x]/(g(x), p^c)` with `g` monic, elements as coefficient vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientRing {
    pub p: u64,
    pub c: u32,
    pub q: u64,
    g: Vec<u64>,
    n: usize,
}

impl QuotientRing {
    pub fn new(g: &[BigInt], p: u64, c: u32) -> Result<Self> {
        let q = (p as u128)
            .checked_pow(c)
            .filter(|&q| q < (1u128 << 62))
            .ok_or_else(|| Error::Resource(format!("{p}^{c} does not fit a machine word")))? as u64;
        if !g.last().is_some_and(|c| c.is_one()) {
            return Err(Error::Invalid("defining polynomial must be monic".into()));
        }
        let g = g.iter().map(|c| reduce_big(c, q)).collect::<Vec<_>>();
        let n = g.len() - 1;
        Ok(QuotientRing { p, c, q, g, n })
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn one(&self) -> Vec<u64> {
        let mut v = vec![0; self.n];
        v[0] = 1 % self.q;
        v
    }

    pub fn monomial(&self, j: usize, scalar: u64) -> Vec<u64> {
        let mut c = vec![0; j + 1];
        c[j] = scalar % self.q;
        self.reduce(c)
    }

    pub fn from_big(&self, coeffs: &[BigInt]) -> Vec<u64> {
        self.reduce(coeffs.iter().map(|c| reduce_big(c, self.q)).collect())
    }

    fn reduce(&self, mut c: Vec<u64>) -> Vec<u64> {
        let n = self.n;
        let q = self.q;
        for i in (n..c.len()).rev() {
            let t = c[i];
            if t == 0 {
                continue;
            }
            for j in 0..n {
                let s = mul_mod(t, self.g[j], q);
                c[i - n + j] = (c[i - n + j] + q - s) % q;
            }
            c[i] = 0;
        }
        c.resize(n, 0);
        c
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).map(|(x, y)| (x + y) % self.q).collect()
    }

    pub fn sub(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).map(|(x, y)| (x + self.q - y) % self.q).collect()
    }

    pub fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let q = self.q as u128;
        let mut acc = vec![0u128; 2 * self.n];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                if y != 0 {
                    acc[i + j] = (acc[i + j] + x as u128 * y as u128) % q;
                }
            }
        }
        self.reduce(acc.into_iter().map(|x| x as u64).collect())
    }

    pub fn pow(&self, a: &[u64], e: &BigUint) -> Vec<u64> {
        let mut acc = self.one();
        for i in (0..e.bits()).rev() {
            acc = self.mul(&acc, &acc);
            if e.bit(i) {
                acc = self.mul(&acc, a);
            }
        }
        acc
    }

    pub fn pow_u64(&self, a: &[u64], e: u64) -> Vec<u64> {
        self.pow(a, &BigUint::from(e))
    }
}

fn reduce_big(c: &BigInt, q: u64) -> u64 {
    c.mod_floor(&BigInt::from(q)).to_u64().expect("reduced")
}

fn vp(x: u64, p: u64, cap: u32) -> u32 {
    if x == 0 {
        return cap;
    }
    let mut v = 0;
    let mut y = x;
    while y % p == 0 {
        y /= p;
        v += 1;
    }
    v
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Filtration {
    /// `p` unramified: layers `(1 + p^i O)/(1 + p^{i+1} O) ≅ O/p`.
    Unramified,
    /// A single totally ramified prime with uniformiser `π` and index `e`:
    /// layers `U^{(i)}/U^{(i+1)} ≅ F_p`.
    TotallyRamified { e: u32 },
}

/// The p-part of `(O_K/m)^×`, presented by filtration generators.
#[derive(Debug, Clone)]
pub struct LocalUnitGroup {
    pub field: FieldDescriptor,
    pub p: u64,
    /// Exponent of the modulus: `m = p^a` (unramified) or `𝔭^a` (totally ramified).
    pub a: u32,
    pub kind: Filtration,
    ring: QuotientRing,
    gens: Vec<Vec<u64>>,
    gen_inv: Vec<Vec<u64>>,
    gen_level: Vec<u32>,
    /// Per level: digit normalisation (ramified layers only).
    level_scale: Vec<u64>,
    /// `u -> u^{project}` maps `(O/m)^×` onto its p-part.
    project: BigUint,
    /// Precision of the Smith form; exceeds the exponent of the group.
    snf_precision: u32,
    /// Conversion of power-basis (ζ or ω) coefficients into the ring basis.
    basis: Basis,
}

#[derive(Debug, Clone)]
enum Basis {
    Power,
    /// `ζ = 1 - π`.
    OneMinusPi,
}

impl LocalUnitGroup {
    /// p-part of `(O_K / p^a)^×` for `p` unramified in `K`.
    pub fn unramified(field: &FieldDescriptor, p: u64, a: u32) -> Result<Self> {
        let split = splitting_data(field, p)?;
        if split.e != 1 {
            return Err(Error::Unsupported(format!("{p} ramifies in {field}")));
        }
        if a == 0 {
            return Err(Error::Invalid("the modulus exponent must be positive".into()));
        }
        let ring = QuotientRing::new(&field.order_polynomial(), p, a)?;
        let n = ring.degree();
        let mut gens = Vec::new();
        let mut gen_level = Vec::new();
        for i in 1..a {
            for j in 0..n {
                let g = ring.add(&ring.one(), &ring.monomial(j, p.pow(i)));
                gens.push(g);
                gen_level.push(i);
            }
        }
        let gen_inv = gens.iter().map(|g| geometric_inverse(&ring, g, a)).collect();
        let project = BigUint::from(p).pow(split.fres as u32) - BigUint::one();
        let snf_precision = exponent_bound(p, 1, a) + 1;
        Ok(LocalUnitGroup {
            field: *field,
            p,
            a,
            kind: Filtration::Unramified,
            ring,
            gens,
            gen_inv,
            gen_level,
            level_scale: vec![1; a as usize],
            project,
            snf_precision,
            basis: Basis::Power,
        })
    }

    /// p-part of `(O_K / 𝔭^a)^×` for `K = Q(ζ_{p^k})`, `𝔭 = (1 - ζ)`.
    pub fn totally_ramified(field: &FieldDescriptor, p: u64, a: u32) -> Result<Self> {
        let FieldDescriptor::Cyclotomic(f) = *field else {
            return Err(Error::Unsupported("ramified unit groups need a cyclotomic field".into()));
        };
        if crate::arith::prime_power(f).map(|(q, _)| q) != Some(p) {
            return Err(Error::Unsupported(format!("{p} is not totally ramified in {field}")));
        }
        if a == 0 {
            return Err(Error::Invalid("the modulus exponent must be positive".into()));
        }
        let e = crate::arith::euler_phi(f) as u32;
        // Eisenstein polynomial of π = 1 - ζ
        let g = intpoly::compose_linear(&field.order_polynomial(), &BigInt::one(), &BigInt::from(-1));
        let g = if g.last().is_some_and(|c| c.is_one()) {
            g
        } else {
            g.iter().map(|c| -c).collect()
        };
        let c = a.div_ceil(e) + 1;
        let ring = QuotientRing::new(&g, p, c)?;
        let mut me = LocalUnitGroup {
            field: *field,
            p,
            a,
            kind: Filtration::TotallyRamified { e },
            ring,
            gens: Vec::new(),
            gen_inv: Vec::new(),
            gen_level: Vec::new(),
            level_scale: vec![1; a as usize],
            project: BigUint::from(p - 1),
            snf_precision: exponent_bound(p, e, a) + 1,
            basis: Basis::OneMinusPi,
        };
        for i in 1..a {
            // 1 + π^i
            let mut pi_i = me.ring.one();
            let pi = me.ring.monomial(1, 1);
            for _ in 0..i {
                pi_i = me.ring.mul(&pi_i, &pi);
            }
            let gen = me.ring.add(&me.ring.one(), &pi_i);
            let d = me.raw_digits(&gen, i).expect("generator sits in its layer");
            me.level_scale[i as usize] = inv_mod(d[0], p).expect("nonzero layer digit");
            me.gen_inv.push(geometric_inverse(&me.ring, &gen, c * e));
            me.gens.push(gen);
            me.gen_level.push(i);
        }
        Ok(me)
    }

    /// Picks the filtration matching how `p` sits in `field` (unramified or
    /// totally ramified prime-power cyclotomic) with the modulus `a = 2e + 1`.
    pub fn for_criterion(field: &FieldDescriptor, p: u64) -> Result<Self> {
        let s = splitting_data(field, p)?;
        if s.e == 1 {
            Self::unramified(field, p, 3)
        } else if s.g == 1 && s.fres == 1 && s.e == field.degree() {
            Self::totally_ramified(field, p, 2 * s.e as u32 + 1)
        } else {
            Err(Error::Unsupported(format!(
                "{p} is partially ramified in {field}; only unramified or totally ramified primes are handled"
            )))
        }
    }

    /// Number of filtration generators (`log_p` of the group order).
    pub fn generator_count(&self) -> usize {
        self.gens.len()
    }

    pub fn modulus_label(&self) -> String {
        match self.kind {
            Filtration::Unramified => format!("{}^{}", self.p, self.a),
            Filtration::TotallyRamified { .. } => format!("(1-z)^{}", self.a),
        }
    }

    fn layer_dim(&self) -> usize {
        match self.kind {
            Filtration::Unramified => self.ring.degree(),
            Filtration::TotallyRamified { .. } => 1,
        }
    }

    /// Digits of `w ∈ U^{(i)}` in the layer `U^{(i)}/U^{(i+1)}`, before normalisation;
    /// `None` when `w ∉ U^{(i)}`.
    fn raw_digits(&self, w: &[u64], i: u32) -> Option<Vec<u64>> {
        let p = self.p;
        let d = self.ring.sub(w, &self.ring.one());
        match self.kind {
            Filtration::Unramified => {
                let pi = p.pow(i);
                if d.iter().any(|&x| x % pi != 0) {
                    return None;
                }
                Some(d.iter().map(|&x| (x / pi) % p).collect())
            }
            Filtration::TotallyRamified { e } => {
                let cap = self.ring.c;
                let v = d
                    .iter()
                    .enumerate()
                    .map(|(j, &x)| e * vp(x, p, cap) + j as u32)
                    .min()
                    .unwrap_or(e * cap);
                if v < i {
                    return None;
                }
                let (s, j) = (i / e, (i % e) as usize);
                Some(vec![(d[j] / p.pow(s)) % p])
            }
        }
    }

    /// Exponent vector of `w ∈ U^{(1)}` with respect to the generators, entries in `[0, p)`.
    pub fn dlog(&self, w: &[u64]) -> Result<Vec<u64>> {
        let mut w = w.to_vec();
        let mut out = Vec::with_capacity(self.gens.len());
        let dim = self.layer_dim();
        for i in 1..self.a {
            let digits = self.raw_digits(&w, i).ok_or_else(|| {
                Error::Domain(format!("element is not in the level-{i} one-units"))
            })?;
            let base = (i as usize - 1) * dim;
            for (j, &d) in digits.iter().enumerate() {
                let c = mul_mod(d, self.level_scale[i as usize], self.p);
                out.push(c);
                if c != 0 {
                    w = self.ring.mul(&w, &self.ring.pow_u64(&self.gen_inv[base + j], c));
                }
            }
        }
        debug_assert!(self.a <= 1 || self.raw_digits(&w, self.a).is_some());
        Ok(out)
    }

    /// Relation rows `p·e_t - dlog(g_t^p)` over `Z/p^M`, `M = snf_precision`.
    pub fn relations(&self) -> Vec<Vec<u64>> {
        let m = self.p.pow(self.snf_precision);
        let k = self.gens.len();
        (0..k)
            .map(|t| {
                let gp = self.ring.pow_u64(&self.gens[t], self.p);
                let d = self.dlog(&gp).expect("p-th powers stay one-units");
                let mut row: Vec<u64> = d.iter().map(|&x| (m - x) % m).collect();
                row[t] = (row[t] + self.p) % m;
                row
            })
            .collect()
    }

    /// Smith-form structure of the group; generator columns when asked for.
    pub fn structure(&self, want_generators: bool) -> Result<LocalSnf> {
        snf::cokernel(&self.relations(), self.gens.len(), self.p, self.snf_precision, want_generators)
    }

    /// The element `∏ g_t^{x_t}`.
    pub fn element_of(&self, x: &[u64]) -> Vec<u64> {
        x.iter()
            .zip(&self.gens)
            .fold(self.ring.one(), |acc, (&e, g)| self.ring.mul(&acc, &self.ring.pow_u64(g, e)))
    }

    /// Reduce an algebraic integer given in the field's power basis.
    pub fn reduce(&self, coeffs: &[BigInt]) -> Vec<u64> {
        match self.basis {
            Basis::Power => self.ring.from_big(coeffs),
            Basis::OneMinusPi => {
                let sub = intpoly::compose_linear(coeffs, &BigInt::one(), &BigInt::from(-1));
                self.ring.from_big(&sub)
            }
        }
    }

    /// Image of a global unit in `G`, as an exponent vector.
    pub fn unit_image(&self, coeffs: &[BigInt]) -> Result<Vec<u64>> {
        let r = self.reduce(coeffs);
        let u = self.ring.pow(&r, &self.project);
        self.dlog(&u)
            .map_err(|_| Error::NonUnit("element is not a unit at the primes above p".into()))
    }

    /// `dim_Fp` of `G / <images> ⊗ F_p`.
    pub fn cokernel_rank(&self, images: &[Vec<u64>]) -> usize {
        let mut rows = self.relations();
        rows.extend(images.iter().cloned());
        self.gens.len() - snf::rank_mod_p(&rows, self.gens.len(), self.p)
    }

    /// `dim_Fp G ⊗ F_p`.
    pub fn p_rank(&self) -> usize {
        self.gens.len() - snf::rank_mod_p(&self.relations(), self.gens.len(), self.p)
    }

    pub fn ring(&self) -> &QuotientRing {
        &self.ring
    }

    /// The automorphism `ζ -> ζ^t` of a cyclotomic field applied to a ring
    /// element (unramified filtration only).
    pub fn galois(&self, w: &[u64], t: u64) -> Result<Vec<u64>> {
        let FieldDescriptor::Cyclotomic(f) = self.field else {
            return Err(Error::Unsupported("Galois action is provided for cyclotomic fields".into()));
        };
        if !matches!(self.kind, Filtration::Unramified) {
            return Err(Error::Unsupported("Galois action needs the power basis".into()));
        }
        if crate::arith::gcd(t, f) != 1 {
            return Err(Error::Invalid(format!("{t} is not a unit mod {f}")));
        }
        let mut out = vec![0; self.ring.degree()];
        for (i, &c) in w.iter().enumerate() {
            if c != 0 {
                let m = self.ring.monomial((i as u64 * t % f) as usize, c);
                out = self.ring.add(&out, &m);
            }
        }
        Ok(out)
    }
}

/// Number of p-th powerings needed to push `U^{(1)}` into `U^{(a)}`.
fn exponent_bound(p: u64, e: u32, a: u32) -> u32 {
    let mut v = 1u64;
    let mut t = 0;
    while v < a as u64 {
        v = (p * v).min(v + e as u64);
        t += 1;
    }
    t
}

/// Inverse of a one-unit `1 + x` with `x` nilpotent of index below `terms`.
fn geometric_inverse(ring: &QuotientRing, g: &[u64], terms: u32) -> Vec<u64> {
    let x = ring.sub(g, &ring.one());
    let mx = ring.sub(&vec![0; ring.degree()], &x);
    let mut acc = ring.one();
    let mut pw = ring.one();
    for _ in 0..terms {
        pw = ring.mul(&pw, &mx);
        if pw.iter().all(|&c| c == 0) {
            break;
        }
        acc = ring.add(&acc, &pw);
    }
    debug_assert_eq!(ring.mul(&acc, g), ring.one());
    acc
}

/// Explicit description of the p-part of `(O_K/p^a)^×`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnitPPart {
    pub field: FieldDescriptor,
    pub p: u64,
    pub a: u32,
    /// Cyclic factors `Z/p^{e_i}`, listed by exponent.
    pub exponents: Vec<u32>,
    /// Orders `p^{e_i}` as decimal strings.
    pub orders: Vec<String>,
    /// Generator residues mod `p^a` in the power basis.
    pub generators: Vec<Vec<u64>>,
    pub p_rank: usize,
    /// `log_p |G|`.
    pub log_order: u64,
}

/// The p-Sylow subgroup of `(O_K/p^a)^×` for `p` unramified in `K`.
pub fn residue_ring_units_p_part(field: &FieldDescriptor, p: u64, a: u32) -> Result<UnitPPart> {
    let g = LocalUnitGroup::unramified(field, p, a)?;
    let s = g.structure(true)?;
    let m = p.pow(g.snf_precision);
    let generators = s
        .generators
        .iter()
        .map(|x| g.element_of(&x.iter().map(|&c| c % m).collect::<Vec<_>>()))
        .collect();
    Ok(UnitPPart {
        field: *field,
        p,
        a,
        orders: s.exponents.iter().map(|&e| BigUint::from(p).pow(e).to_string()).collect(),
        p_rank: s.p_rank(),
        log_order: s.log_order(),
        exponents: s.exponents,
        generators,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn seven_at_thirty_seven() {
        let k: FieldDescriptor = "cyclotomic:7".parse().unwrap();
        let g = residue_ring_units_p_part(&k, 37, 3).unwrap();
        assert_eq!(g.exponents, vec![2; 6]);
        assert_eq!(g.p_rank, 6);
        assert_eq!(g.orders[0], "1369");
        // each generator has exact order 37^2 in (Z[ζ]/37^3)^×
        let lg = LocalUnitGroup::unramified(&k, 37, 3).unwrap();
        for gen in &g.generators {
            assert_ne!(lg.ring.pow_u64(gen, 37), lg.ring.one());
            assert_eq!(lg.ring.pow_u64(gen, 37 * 37), lg.ring.one());
        }
    }

    #[test]
    fn gaussian_integers_mod_125_by_brute_force() {
        let k: FieldDescriptor = "quadratic:-1".parse().unwrap();
        let g = residue_ring_units_p_part(&k, 5, 3).unwrap();
        assert_eq!(g.exponents, vec![2, 2]);
        // independent count: elements u^4 of (Z[i]/125)^×, and their orders
        let q = 125i64;
        let mul = |(a, b): (i64, i64), (c, d): (i64, i64)| ((a * c - b * d).rem_euclid(q), (a * d + b * c).rem_euclid(q));
        let pow = |x: (i64, i64), e: u32| (0..e).fold((1, 0), |acc, _| mul(acc, x));
        let mut ppart = std::collections::BTreeSet::new();
        for a in 0..q {
            for b in 0..q {
                if (a * a + b * b) % 5 == 0 {
                    continue;
                }
                ppart.insert(pow((a, b), 4));
            }
        }
        assert_eq!(ppart.len(), 625);
        let killed_by_5 = ppart.iter().filter(|&&x| pow(x, 5) == (1, 0)).count();
        let killed_by_25 = ppart.iter().filter(|&&x| pow(x, 25) == (1, 0)).count();
        assert_eq!((killed_by_5, killed_by_25), (25, 625));
    }

    #[test]
    fn orders_match_the_counting_formula() {
        for (k, p, a) in [("cyclotomic:7", 2u64, 3u32), ("cyclotomic:5", 3, 4), ("quadratic:5", 2, 4), ("quadratic:-7", 3, 2), ("cyclotomic:12", 5, 3)] {
            let k: FieldDescriptor = k.parse().unwrap();
            let s = splitting_data(&k, p).unwrap();
            let g = residue_ring_units_p_part(&k, p, a).unwrap();
            // ∏ (p^{f a} - p^{f (a-1)}) over g primes has p-part p^{g f (a-1)}
            assert_eq!(g.log_order, s.g * s.fres * (a as u64 - 1), "{k} {p} {a}");
        }
        let g = residue_ring_units_p_part(&"cyclotomic:7".parse().unwrap(), 3, 1).unwrap();
        assert_eq!(g.log_order, 0);
        assert!(residue_ring_units_p_part(&"cyclotomic:7".parse().unwrap(), 7, 3).is_err());
    }

    #[test]
    fn two_adic_structure() {
        // (Z/2^5)^× = Z/2 x Z/8
        let k: FieldDescriptor = "quadratic:5".parse().unwrap();
        let g = residue_ring_units_p_part(&k, 2, 5).unwrap();
        assert_eq!(g.log_order, 8);
        // 2 is inert in Q(√5): (O/32)^× p-part = (1 + 2 O)/(1 + 32 O) of a degree-2 unramified ring
        let mut e = g.exponents.clone();
        e.sort();
        assert_eq!(e, vec![1, 3, 4]);
    }

    #[test]
    fn ramified_layers() {
        let k: FieldDescriptor = "cyclotomic:3".parse().unwrap();
        let g = LocalUnitGroup::totally_ramified(&k, 3, 5).unwrap();
        assert_eq!(g.generator_count(), 4);
        // U^{(1)}/U^{(5)} of Q_3(ζ_3) has order 81; the root of unity ζ lies in it
        let s = g.structure(false).unwrap();
        assert_eq!(s.log_order(), 4);
        let zeta = g.reduce(&z(&[0, 1]));
        let d = g.dlog(&zeta).unwrap();
        assert!(d.iter().any(|&x| x != 0));
        // dlog reconstructs the element modulo 𝔭^5
        let back = g.element_of(&d);
        let ratio = g.ring.mul(&back, &geometric_inverse(&g.ring, &zeta, 20));
        assert!(g.raw_digits(&ratio, 5).is_some());
    }
}
