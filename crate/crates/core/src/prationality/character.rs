//! Decomposition of the unit cokernel under `Gal(K/K_0)` for `K = Q(ζ_f)`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{global_units, test_numerical, Verdict};
use crate::arith::{gcd, kronecker, multiplicative_order};
use crate::characters::CharacterVec;
use crate::error::{Error, Result};
use crate::ff::{self, ExtField, FieldOps, PrimeField};
use crate::numberfield::{FieldDescriptor, LocalUnitGroup, QuadField};

/// A subfield `K_0 ⊂ Q(ζ_f)`, written `quadratic:d`, `cyclotomic:f0`, or
/// `subgroup:a,b,...` (the fixing subgroup of `(Z/f)^×`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Subfield {
    Quadratic(i64),
    Cyclotomic(u64),
    Subgroup(Vec<u64>),
}

impl fmt::Display for Subfield {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Subfield::Quadratic(d) => write!(f, "quadratic:{d}"),
            Subfield::Cyclotomic(c) => write!(f, "cyclotomic:{c}"),
            Subfield::Subgroup(h) => {
                let s: Vec<String> = h.iter().map(|x| x.to_string()).collect();
                write!(f, "subgroup:{}", s.join(","))
            }
        }
    }
}

impl FromStr for Subfield {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let (kind, val) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("subfield `{s}` lacks a `kind:` prefix")))?;
        let bad = |e: std::num::ParseIntError| Error::Parse(format!("subfield `{s}`: {e}"));
        match kind.trim() {
            "quadratic" => Ok(Subfield::Quadratic(val.trim().parse().map_err(bad)?)),
            "cyclotomic" => Ok(Subfield::Cyclotomic(val.trim().parse().map_err(bad)?)),
            "subgroup" => Ok(Subfield::Subgroup(
                val.split(',').map(|x| x.trim().parse().map_err(bad)).collect::<Result<_>>()?,
            )),
            other => Err(Error::Parse(format!("unknown subfield kind `{other}`"))),
        }
    }
}

impl TryFrom<String> for Subfield {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Subfield> for String {
    fn from(s: Subfield) -> String {
        s.to_string()
    }
}

impl Subfield {
    /// The subgroup `H ⊂ (Z/f)^×` fixing the subfield, sorted.
    pub fn fixing_group(&self, f: u64) -> Result<Vec<u64>> {
        let units: Vec<u64> = (1..f).filter(|&a| gcd(a, f) == 1).collect();
        let h: Vec<u64> = match self {
            Subfield::Quadratic(d) => {
                let disc = QuadField::new(*d)?.discriminant;
                if f % disc.unsigned_abs() != 0 {
                    return Err(Error::Invalid(format!("Q(√{d}) is not contained in Q(ζ_{f})")));
                }
                units.into_iter().filter(|&a| kronecker(disc, a) == 1).collect()
            }
            Subfield::Cyclotomic(f0) => {
                if *f0 == 0 || f % f0 != 0 {
                    return Err(Error::Invalid(format!("Q(ζ_{f0}) is not contained in Q(ζ_{f})")));
                }
                units.into_iter().filter(|&a| a % f0 == 1 % f0).collect()
            }
            Subfield::Subgroup(gens) => {
                let mut h: Vec<u64> = gens.iter().map(|&a| a % f).collect();
                h.sort_unstable();
                h.dedup();
                if h.iter().any(|&a| gcd(a, f) != 1) {
                    return Err(Error::Invalid("subgroup elements must be units".into()));
                }
                for &a in &h {
                    for &b in &h {
                        if h.binary_search(&(a * b % f)).is_err() {
                            return Err(Error::Invalid(format!("{h:?} is not closed under multiplication mod {f}")));
                        }
                    }
                }
                h
            }
        };
        Ok(h)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacterReport {
    pub field: FieldDescriptor,
    pub subfield: Subfield,
    pub p: u64,
    /// `[K : K_0]`.
    pub m: u64,
    /// `σ: ζ -> ζ^sigma` generates `Gal(K/K_0)`.
    pub sigma: u64,
    pub r2_k0: u64,
    /// `χ_j(σ) = ξ^j` with `ξ` the chosen primitive `m`-th root of unity.
    pub xi: Vec<u64>,
    /// Degree of the field of definition of `ξ` over `F_p`.
    pub xi_degree: usize,
    pub dp_am: usize,
    pub character: CharacterVec,
    /// `r_2(K_0) χ_reg + 1`.
    pub expected: CharacterVec,
    pub matches: bool,
}

/// Character of `A_{S_p}` as a module over `Gal(K/K_0)`.
pub fn character_of_asp(k: &FieldDescriptor, k0: &Subfield, p: u64) -> Result<CharacterReport> {
    let FieldDescriptor::Cyclotomic(f) = *k else {
        return Err(Error::Unsupported("the Galois decomposition needs a cyclotomic field".into()));
    };
    let h = k0.fixing_group(f)?;
    let m = h.len() as u64;
    let sigma = *h
        .iter()
        .find(|&&a| multiplicative_order(a, f) == Some(m))
        .ok_or_else(|| Error::Hypothesis(format!("Gal(K/K_0) = {h:?} is not cyclic")))?;
    if gcd(m, p) != 1 {
        return Err(Error::Hypothesis(format!("[K:K_0] = {m} is not prime to {p}")));
    }
    if h.contains(&(f - 1)) {
        return Err(Error::Hypothesis(format!(
            "{k0} is real; its real places would ramify in K"
        )));
    }
    let report = test_numerical(k, p)?;
    if report.verdict != Verdict::PRational {
        return Err(Error::Hypothesis(format!("{k} is not known to be {p}-rational: {}", report.reason)));
    }
    let dp_am = report.dp_am.expect("numerical report");
    let group = LocalUnitGroup::unramified(k, p, 3)?;
    let r2_k0 = crate::arith::euler_phi(f) / (2 * m);

    // W = F_p^n / rowspace(relations + unit images)
    let fp = PrimeField::new(p)?;
    let n = group.generator_count();
    let mut rows: Vec<Vec<u64>> = group.relations().iter().map(|r| r.iter().map(|x| x % p).collect()).collect();
    for u in global_units(k)? {
        rows.push(group.unit_image(&u)?.iter().map(|x| x % p).collect());
    }
    let pivots = ff::rref(&fp, &mut rows);
    let basis: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    if basis.len() != dp_am {
        return Err(Error::Mismatch(format!("quotient has dimension {} but d_p A_m = {dp_am}", basis.len())));
    }
    let quotient_coords = |mut v: Vec<u64>| -> Vec<u64> {
        for (r, &pc) in pivots.iter().enumerate() {
            let c = v[pc];
            if c != 0 {
                for (x, y) in v.iter_mut().zip(&rows[r]) {
                    *x = fp.sub(x, &fp.mul(&c, y));
                }
            }
        }
        basis.iter().map(|&c| v[c]).collect()
    };
    // columns: images of the basis vectors under σ
    let mut cols = Vec::with_capacity(dp_am);
    for &c in &basis {
        let mut e = vec![0u64; n];
        e[c] = 1;
        let g = group.element_of(&e);
        let sg = group.galois(&g, sigma)?;
        let d = group.dlog(&sg)?;
        cols.push(quotient_coords(d.iter().map(|x| x % p).collect()));
    }
    let mat: Vec<Vec<u64>> = (0..dp_am).map(|i| (0..dp_am).map(|j| cols[j][i]).collect()).collect();

    let xi_degree = multiplicative_order(p, m).unwrap_or(1) as usize;
    let mult;
    let xi;
    if xi_degree == 1 {
        let z = ff::smallest_root_of_unity(p, m).expect("m | p - 1");
        xi = vec![z];
        mult = (0..m)
            .map(|j| {
                let zj = crate::arith::pow_mod(z, j, p);
                let a: Vec<Vec<u64>> = (0..dp_am)
                    .map(|i| (0..dp_am).map(|l| if i == l { fp.sub(&mat[i][l], &zj) } else { mat[i][l] }).collect())
                    .collect();
                ff::kernel(&fp, &a, dp_am).len() as i64
            })
            .collect::<Vec<_>>();
    } else {
        let ext = ExtField::new(p, xi_degree)?;
        let z = ext.primitive_root_of_unity(m).expect("m | p^k - 1");
        xi = z.clone();
        let emb: Vec<Vec<Vec<u64>>> = mat.iter().map(|r| r.iter().map(|&x| ext.embed(x)).collect()).collect();
        mult = (0..m)
            .map(|j| {
                let zj = ext.pow(&z, j as u128);
                let a: Vec<Vec<Vec<u64>>> = (0..dp_am)
                    .map(|i| {
                        (0..dp_am)
                            .map(|l| if i == l { ext.sub(&emb[i][l], &zj) } else { emb[i][l].clone() })
                            .collect()
                    })
                    .collect();
                ff::kernel(&ext, &a, dp_am).len() as i64
            })
            .collect::<Vec<_>>();
    }
    let character = CharacterVec::from_mult(mult);
    let expected = CharacterVec::regular(m)
        .scale(r2_k0 as i64)
        .add(&CharacterVec::trivial(m))?;
    Ok(CharacterReport {
        field: *k,
        subfield: k0.clone(),
        p,
        m,
        sigma,
        r2_k0,
        xi,
        xi_degree,
        dp_am,
        matches: character == expected,
        character,
        expected,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seven_over_minus_seven_at_37() {
        let k: FieldDescriptor = "cyclotomic:7".parse().unwrap();
        let r = character_of_asp(&k, &"quadratic:-7".parse().unwrap(), 37).unwrap();
        assert_eq!(r.m, 3);
        assert_eq!(r.character.mult, vec![2, 1, 1]);
        assert!(r.matches);
        assert_eq!(r.character.degree(), 4);
        let same = character_of_asp(&k, &"subgroup:1,2,4".parse().unwrap(), 37).unwrap();
        assert_eq!(same.character, r.character);
    }

    /// An eigenspace oracle over `F_37`: the trivial multiplicity is the
    /// dimension of the σ-invariants, and the total is `d_p A_m`.
    #[test]
    fn trivial_part_is_the_invariant_subspace() {
        let k: FieldDescriptor = "cyclotomic:7".parse().unwrap();
        let r = character_of_asp(&k, &"quadratic:-7".parse().unwrap(), 37).unwrap();
        // 37 ≡ 1 mod 3, so ξ ∈ F_37 and ξ^3 = 1
        assert_eq!(r.xi_degree, 1);
        assert_eq!(crate::arith::pow_mod(r.xi[0], 3, 37), 1);
        assert_ne!(r.xi[0], 1);
        assert_eq!(r.character.mult.iter().sum::<i64>() as usize, r.dp_am);
    }

    #[test]
    fn trivial_group_and_other_subfields() {
        let k: FieldDescriptor = "cyclotomic:7".parse().unwrap();
        let r = character_of_asp(&k, &"cyclotomic:7".parse().unwrap(), 37).unwrap();
        assert_eq!(r.m, 1);
        assert_eq!(r.character.mult, vec![4]);
        // K_0 = Q(√−7) over a prime with ξ outside F_p: 5 has order 2 mod 3
        let r = character_of_asp(&k, &"quadratic:-7".parse().unwrap(), 5);
        match r {
            Ok(r) => {
                assert_eq!(r.xi_degree, 2);
                assert!(r.matches);
            }
            Err(Error::Hypothesis(_)) => {}
            Err(e) => panic!("{e}"),
        }
        // real subfield
        assert!(matches!(
            character_of_asp(&k, &"subgroup:1,6".parse().unwrap(), 37),
            Err(Error::Hypothesis(_))
        ));
        // not 2-rational
        assert!(matches!(
            character_of_asp(&k, &"quadratic:-7".parse().unwrap(), 2),
            Err(Error::Hypothesis(_))
        ));
        assert!("subgroup:1,3".parse::<Subfield>().unwrap().fixing_group(7).is_err());
    }
}
