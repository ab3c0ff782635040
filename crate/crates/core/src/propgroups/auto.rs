//! Automorphisms of the coordinate quotients, their fixed points, and the
//! Frobenius test on `G ⋊ Z/m`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::gamma::teichmuller_cube_root;
use super::law::{Elem, FiniteQuotient, GroupLaw, ENUMERATION_CAP};
use super::pcgs::Subgroup;
use crate::arith::gcd;
use crate::error::{Error, Result};
use crate::ff::{kernel, mat_sub, identity, PrimeField};

const ORDER_CAP: u64 = 100_000;
/// Largest group handled by the quadratic-time Frobenius test.
pub const FROBENIUS_CAP: u128 = 1 << 14;

/// An automorphism given by generator images modulo `p^precision`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupAutomorphism {
    pub law: GroupLaw,
    pub p: u64,
    pub precision: u32,
    pub images: Vec<Elem>,
    pub order: Option<u64>,
}

impl GroupAutomorphism {
    /// Checks the defining relations and surjectivity before accepting `images`.
    pub fn from_images(law: GroupLaw, p: u64, precision: u32, images: Vec<Elem>) -> Result<Self> {
        let q = FiniteQuotient::new(law, p, precision)?;
        if images.len() != q.dim() {
            return Err(Error::Invalid(format!("expected {} generator images", q.dim())));
        }
        let images: Vec<Elem> = images.iter().map(|g| q.reduce(g)).collect();
        let ok = match law {
            GroupLaw::Abelian { .. } => images
                .iter()
                .all(|g| images.iter().all(|h| q.is_identity(&q.comm(g, h)))),
            GroupLaw::Gamma { s } | GroupLaw::GammaTorsion { s } => {
                let ps = p.pow(s);
                q.comm(&images[0], &images[1]) == q.pow(&images[2], ps)
                    && q.is_identity(&q.comm(&images[0], &images[2]))
                    && q.is_identity(&q.comm(&images[1], &images[2]))
            }
        };
        if !ok {
            return Err(Error::Invalid("generator images violate the defining relations".into()));
        }
        if Subgroup::generated(&q, &images, &[]).order_log() != q.order_log() {
            return Err(Error::Invalid("generator images do not generate the group".into()));
        }
        let mut a = GroupAutomorphism { law, p, precision, images, order: None };
        a.order = a.compute_order();
        Ok(a)
    }

    pub fn identity(law: GroupLaw, p: u64, precision: u32) -> Result<Self> {
        let q = FiniteQuotient::new(law, p, precision)?;
        Ok(GroupAutomorphism { law, p, precision, images: q.generators(), order: Some(1) })
    }

    /// `g ↦ h g h⁻¹`.
    pub fn inner(q: &FiniteQuotient, h: &[u64]) -> Self {
        let images = q.generators().iter().map(|g| q.conj(g, h)).collect();
        let mut a = GroupAutomorphism { law: q.law, p: q.p, precision: q.level, images, order: None };
        a.order = a.compute_order();
        a
    }

    pub fn quotient(&self) -> FiniteQuotient {
        FiniteQuotient::new(self.law, self.p, self.precision).expect("validated at construction")
    }

    /// Image of `g ∈ q`, where `q` is a quotient at level at most `precision`.
    pub fn apply(&self, q: &FiniteQuotient, g: &[u64]) -> Elem {
        debug_assert!(q.level <= self.precision && q.law == self.law);
        self.images
            .iter()
            .zip(g)
            .fold(q.identity(), |acc, (im, &e)| q.mul(&acc, &q.pow(&q.reduce(im), e)))
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        let precision = self.precision.min(other.precision);
        let q = FiniteQuotient::new(self.law, self.p, precision).expect("valid law");
        let images = other.images.iter().map(|g| self.apply(&q, &q.reduce(g))).collect();
        GroupAutomorphism { law: self.law, p: self.p, precision, images, order: None }
    }

    pub fn power(&self, k: u64) -> Self {
        let mut out = Self::identity(self.law, self.p, self.precision).expect("valid law");
        for _ in 0..k {
            out = self.compose(&out);
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        let q = self.quotient();
        self.images == q.generators()
    }

    fn compute_order(&self) -> Option<u64> {
        let mut cur = self.clone();
        for k in 1..=ORDER_CAP {
            if cur.is_identity() {
                return Some(k);
            }
            cur = self.compose(&cur);
        }
        None
    }
}

/// The order-3 automorphism `x ↦ x^ζ, y ↦ y^ζ, z ↦ z^{ζ²}` of `Γ(s)`, with
/// `ζ` the cube root of unity in `Z_p` of smallest residue.
pub fn sigma_gamma(p: u64, s: u32, precision: u32) -> Result<GroupAutomorphism> {
    let zeta = teichmuller_cube_root(p, precision)?
        .to_u64()
        .ok_or_else(|| Error::Resource("precision too large for machine words".into()))?;
    let q = FiniteQuotient::new(GroupLaw::Gamma { s }, p, precision)?;
    let m = q.moduli[0];
    let z2 = crate::arith::mul_mod(zeta, zeta, m);
    GroupAutomorphism::from_images(
        GroupLaw::Gamma { s },
        p,
        precision,
        vec![vec![zeta, 0, 0], vec![0, zeta, 0], vec![0, 0, z2]],
    )
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SigmaCheck {
    pub p: u64,
    pub s: u32,
    pub zeta_residue: u64,
    /// `σ([x, y]) = z^{ζ² p^s}` at each level checked.
    pub relation_levels: Vec<(u32, bool)>,
    pub order: Option<u64>,
}

pub fn check_sigma_gamma(p: u64, s: u32, levels: u32) -> Result<SigmaCheck> {
    let sigma = sigma_gamma(p, s, levels)?;
    let zeta = sigma.images[0][0];
    let relation_levels = (1..=levels)
        .map(|n| {
            let q = FiniteQuotient::new(GroupLaw::Gamma { s }, p, n).expect("valid law");
            let (x, y, z) = (q.generator(0), q.generator(1), q.generator(2));
            let lhs = sigma.apply(&q, &q.comm(&x, &y));
            let e = crate::arith::mul_mod(crate::arith::mul_mod(zeta, zeta, q.moduli[2]), p.pow(s) % q.moduli[2], q.moduli[2]);
            (n, lhs == q.pow(&z, e))
        })
        .collect();
    Ok(SigmaCheck { p, s, zeta_residue: zeta % p, relation_levels, order: sigma.order })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FixMode {
    Exhaustive,
    Graded,
}

impl std::str::FromStr for FixMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exhaustive" => Ok(FixMode::Exhaustive),
            "graded" => Ok(FixMode::Graded),
            _ => Err(Error::Parse(format!("unknown fixed-point mode {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SliceFix {
    /// Slice `K_i/K_{i+1}`.
    pub index: u32,
    pub dim: usize,
    pub fixed_dim: usize,
    pub enumerated: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixedPoints {
    pub law: GroupLaw,
    pub p: u64,
    pub level: u32,
    pub mode: FixMode,
    pub count: Option<u128>,
    /// `None` when the slices alone cannot decide.
    pub trivial: Option<bool>,
    pub sample: Vec<Elem>,
    pub slices: Vec<SliceFix>,
}

pub fn fixed_points(q: &FiniteQuotient, sigma: &GroupAutomorphism, mode: FixMode) -> Result<FixedPoints> {
    if q.level > sigma.precision || q.law != sigma.law || q.p != sigma.p {
        return Err(Error::Mismatch("automorphism and quotient do not match".into()));
    }
    match mode {
        FixMode::Exhaustive => {
            q.check_enumerable()?;
            let mut fixed: Vec<u128> = (0..q.order())
                .into_par_iter()
                .filter(|&i| {
                    let g = q.element(i);
                    sigma.apply(q, &g) == g
                })
                .collect();
            fixed.sort_unstable();
            let count = fixed.len() as u128;
            Ok(FixedPoints {
                law: q.law,
                p: q.p,
                level: q.level,
                mode,
                count: Some(count),
                trivial: Some(count == 1),
                sample: fixed.iter().take(8).map(|&i| q.element(i)).collect(),
                slices: Vec::new(),
            })
        }
        FixMode::Graded => graded_fixed_points(q, sigma),
    }
}

fn graded_fixed_points(q: &FiniteQuotient, sigma: &GroupAutomorphism) -> Result<FixedPoints> {
    let p = q.p;
    let f = PrimeField::new(p)?;
    let mut slices = Vec::new();
    let q1 = FiniteQuotient::new(q.law, p, 1)?;
    let mut sample = Vec::new();
    if q1.is_abelian() {
        slices.push(linear_slice(&f, sigma, 0, &q1, &(0..q1.dim()).collect::<Vec<_>>()));
    } else {
        let fix = fixed_points(&q1, sigma, FixMode::Exhaustive)?;
        let count = fix.count.expect("exhaustive count");
        slices.push(SliceFix {
            index: 0,
            dim: q1.dim(),
            fixed_dim: crate::arith::valuation(count as u64, p) as usize,
            enumerated: true,
        });
        sample = fix.sample;
    }
    for i in 1..q.level {
        let coords: Vec<usize> = (0..q.dim()).filter(|&j| q.moduli[j] > p.pow(i)).collect();
        let qi = FiniteQuotient::new(q.law, p, i + 1)?;
        slices.push(linear_slice(&f, sigma, i, &qi, &coords));
    }
    let coprime = sigma.order.is_some_and(|m| gcd(m, p) == 1);
    let all_zero = slices.iter().all(|s| s.fixed_dim == 0);
    let fixed_log: usize = slices.iter().map(|s| s.fixed_dim).sum();
    Ok(FixedPoints {
        law: q.law,
        p,
        level: q.level,
        mode: FixMode::Graded,
        count: coprime.then(|| (p as u128).pow(fixed_log as u32)),
        trivial: if coprime || all_zero { Some(all_zero) } else { None },
        sample,
        slices,
    })
}

/// Action of `σ` on `K_i/K_{i+1}` with basis `p^i e_j` for `j ∈ coords`, and
/// the dimension of its fixed space.
fn linear_slice(f: &PrimeField, sigma: &GroupAutomorphism, i: u32, qi: &FiniteQuotient, coords: &[usize]) -> SliceFix {
    let p = f.p;
    let pi = p.pow(i);
    let n = coords.len();
    let mut m = vec![vec![0u64; n]; n];
    for (c, &j) in coords.iter().enumerate() {
        let mut e = qi.identity();
        e[j] = pi;
        let img = sigma.apply(qi, &e);
        for (r, &k) in coords.iter().enumerate() {
            m[r][c] = (img[k] / pi) % p;
        }
    }
    let a = mat_sub(f, &m, &identity(f, n));
    SliceFix {
        index: i,
        dim: n,
        fixed_dim: kernel(f, &a, n).len(),
        enumerated: false,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrobeniusWitness {
    /// The element `(g, σ^j)` of the semidirect product.
    pub g: Elem,
    pub j: u64,
    /// A nontrivial `h` with `g σ^j(h) g⁻¹ = h`.
    pub h: Elem,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrobeniusReport {
    pub law: GroupLaw,
    pub p: u64,
    pub level: u32,
    pub m: u64,
    pub group_order: u128,
    /// Elements `(g, σ^j)`, `j ≠ 0`, of order dividing `m`.
    pub torsion_elements: u64,
    pub centralizers_trivial: bool,
    pub complements: u64,
    pub complements_conjugate: bool,
    pub frobenius: bool,
    pub witness: Option<FrobeniusWitness>,
}

/// Decides whether `G ⋊ ⟨σ⟩` with `σ^m = 1` is a Frobenius group with kernel `G`.
pub fn frobenius_check(q: &FiniteQuotient, sigma: &GroupAutomorphism, m: u64) -> Result<FrobeniusReport> {
    if q.level > sigma.precision || q.law != sigma.law || q.p != sigma.p {
        return Err(Error::Mismatch("automorphism and quotient do not match".into()));
    }
    if m == 0 || gcd(m, q.p) != 1 {
        return Err(Error::Hypothesis(format!("m = {m} must be positive and prime to p")));
    }
    if q.order() > FROBENIUS_CAP {
        return Err(Error::Resource(format!(
            "|G| = {} exceeds the Frobenius test cap {FROBENIUS_CAP}",
            q.order()
        )));
    }
    if !sigma.power(m).is_identity() {
        return Err(Error::Invalid(format!("σ^{m} is not the identity")));
    }
    let elems: Vec<Elem> = (0..q.order()).map(|i| q.element(i)).collect();
    let powers: Vec<GroupAutomorphism> = (0..m).map(|j| sigma.power(j)).collect();

    // (g, σ^j)^m = (g σ^j(g) σ^{2j}(g) ⋯, 1)
    let norm = |g: &[u64], j: u64| -> Elem {
        let mut acc = q.identity();
        for k in 0..m {
            acc = q.mul(&acc, &powers[((k * j) % m) as usize].apply(q, g));
        }
        acc
    };

    let found: Vec<(u64, Option<FrobeniusWitness>)> = (1..m)
        .flat_map(|j| elems.iter().map(move |g| (j, g)))
        .collect::<Vec<_>>()
        .into_par_iter()
        .filter(|(j, g)| q.is_identity(&norm(g, *j)))
        .map(|(j, g)| {
            let ginv = q.inv(g);
            let w = elems.iter().skip(1).find(|h| {
                let img = q.mul(&q.mul(g, &powers[j as usize].apply(q, h)), &ginv);
                &img == *h
            });
            (j, w.map(|h| FrobeniusWitness { g: g.clone(), j, h: h.clone() }))
        })
        .collect();
    let torsion_elements = found.len() as u64;
    let witness = found.into_iter().find_map(|(_, w)| w);

    // complements ↔ g with (g, σ) of order m; conjugates of ⟨σ⟩ ↔ h σ(h)⁻¹
    let mut complements: Vec<Elem> = elems.par_iter().filter(|g| q.is_identity(&norm(g, 1 % m))).cloned().collect();
    let mut conj: Vec<Elem> = elems
        .par_iter()
        .map(|h| q.mul(h, &q.inv(&powers[1 % m as usize].apply(q, h))))
        .collect();
    complements.sort();
    conj.sort();
    conj.dedup();
    let complements_conjugate = complements == conj;
    let centralizers_trivial = witness.is_none();
    Ok(FrobeniusReport {
        law: q.law,
        p: q.p,
        level: q.level,
        m,
        group_order: q.order(),
        torsion_elements,
        centralizers_trivial,
        complements: complements.len() as u64,
        complements_conjugate,
        frobenius: centralizers_trivial && complements_conjugate && m > 1,
        witness,
    })
}

/// Fixed points counted across a range of levels, keeping `ENUMERATION_CAP` in view.
pub fn fixed_point_profile(law: GroupLaw, sigma: &GroupAutomorphism, levels: u32, mode: FixMode) -> Result<Vec<FixedPoints>> {
    (1..=levels)
        .map(|n| {
            let q = FiniteQuotient::new(law, sigma.p, n)?;
            let mode = if mode == FixMode::Exhaustive && q.order() > ENUMERATION_CAP as u128 {
                FixMode::Graded
            } else {
                mode
            };
            fixed_points(&q, sigma, mode)
        })
        .collect()
}
