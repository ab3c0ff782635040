//! p-rationality of cyclotomic and quadratic fields.
//!
//! The numerical test compares `d_p` of the p-part of `(O_K/m)^×` modulo the
//! image of the global units with `r_2 + 1`. Since that cokernel is a subgroup
//! of the p-part of the ray class group mod `m`, an excess already proves
//! non-p-rationality; equality proves p-rationality once `p ∤ h` is known.

pub mod bernoulli;
mod character;
mod survey;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numberfield::{
    class_number_imag_quadratic, cyclotomic_units, fundamental_unit, minus_class_number, plus_class_number,
    splitting_data, FieldDescriptor, LocalUnitGroup, SplittingData,
};

pub use bernoulli::{bernoulli, is_regular_prime, Regularity, RegularityRoute};
pub use character::{character_of_asp, CharacterReport, Subfield};
pub use survey::{survey_quadratic, SurveyReport, SurveyRow};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Numerical,
    Theoretical,
}

impl std::str::FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "numerical" => Ok(Method::Numerical),
            "theoretical" => Ok(Method::Theoretical),
            _ => Err(Error::Parse(format!("unknown method `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    PRational,
    NotPRational,
    Undecided,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrationalityReport {
    pub field: FieldDescriptor,
    pub p: u64,
    pub method: Method,
    pub splitting: SplittingData,
    /// Modulus `m` of the numerical test.
    pub modulus: Option<String>,
    /// `dim_Fp` of the p-part of `(O_K/m)^×` tensored with `F_p`.
    pub group_rank: Option<usize>,
    /// Rank of the image of the global units in it.
    pub unit_image_rank: Option<usize>,
    pub dp_am: Option<usize>,
    pub expected: u64,
    pub verdict: Verdict,
    pub assumptions: Vec<String>,
    pub reason: String,
}

/// Outcome of the class-number precondition `p ∤ h`.
enum ClassCheck {
    Coprime(Vec<String>),
    Divisible(String),
    Unknown(String),
}

fn class_check(k: &FieldDescriptor, p: u64) -> ClassCheck {
    match *k {
        FieldDescriptor::Cyclotomic(f) => {
            let hm = match minus_class_number(f) {
                Ok(h) => h,
                Err(e) => return ClassCheck::Unknown(format!("h⁻ unavailable: {e}")),
            };
            if (&hm % BigInt::from(p)).is_zero() {
                return ClassCheck::Divisible(format!("p divides h⁻ = {hm}"));
            }
            let mut flags = vec![format!("h⁻ = {hm}")];
            if plus_class_number(f) == Some(1) {
                flags.push("h⁺ = 1 tabulated".into());
            } else if crate::arith::prime_power(f).map(|(q, _)| q) == Some(p) && p != 2 {
                flags.push("p ∤ h⁺ by Kummer (p | h⁺ implies p | h⁻)".into());
            } else {
                flags.push("p ∤ h⁺ assumed".into());
            }
            ClassCheck::Coprime(flags)
        }
        FieldDescriptor::Quadratic(d) if d < 0 => {
            let h = class_number_imag_quadratic(d).expect("validated");
            if h % p == 0 {
                ClassCheck::Divisible(format!("p divides h = {h}"))
            } else {
                ClassCheck::Coprime(vec![format!("h = {h}")])
            }
        }
        FieldDescriptor::Quadratic(_) => {
            ClassCheck::Unknown("class numbers of real quadratic fields are not computed".into())
        }
    }
}

/// Generators of the global units modulo nothing: roots of unity and a
/// fundamental system, in the field's power basis.
fn global_units(k: &FieldDescriptor) -> Result<Vec<Vec<BigInt>>> {
    match *k {
        FieldDescriptor::Cyclotomic(_) => {
            let field = k.cyclo_field().expect("cyclotomic");
            cyclotomic_units(&field)?
                .iter()
                .map(|u| u.integer_coeffs().ok_or_else(|| Error::Mismatch("unit is not integral".into())))
                .collect()
        }
        FieldDescriptor::Quadratic(d) => {
            let mut out = vec![vec![BigInt::from(-1), BigInt::zero()]];
            if d == -1 || d == -3 {
                out.push(vec![BigInt::zero(), BigInt::from(1)]);
            }
            if d > 0 {
                let (x, y) = fundamental_unit(d)?;
                let two = BigInt::from(2);
                if d.rem_euclid(4) == 1 {
                    // ε = (x + y√d)/2 = (x − y)/2 + y ω
                    out.push(vec![(&x - &y) / &two, y]);
                } else {
                    out.push(vec![x / &two, y / two]);
                }
            }
            Ok(out)
        }
    }
}

fn expected_rank(k: &FieldDescriptor) -> u64 {
    k.signature().1 as u64 + 1
}

fn undecided(k: &FieldDescriptor, p: u64, method: Method, splitting: SplittingData, reason: String) -> PrationalityReport {
    PrationalityReport {
        field: *k,
        p,
        method,
        splitting,
        modulus: None,
        group_rank: None,
        unit_image_rank: None,
        dp_am: None,
        expected: expected_rank(k),
        verdict: Verdict::Undecided,
        assumptions: Vec::new(),
        reason,
    }
}

/// Numerical criterion with the default modulus (`p^3` unramified, `𝔭^{2e+1}`
/// totally ramified).
pub fn test_numerical(k: &FieldDescriptor, p: u64) -> Result<PrationalityReport> {
    test_numerical_with_exponent(k, p, None)
}

/// Numerical criterion with an explicit modulus exponent `a`.
pub fn test_numerical_with_exponent(k: &FieldDescriptor, p: u64, a: Option<u32>) -> Result<PrationalityReport> {
    let splitting = splitting_data(k, p)?;
    let group = match a {
        None => LocalUnitGroup::for_criterion(k, p),
        Some(a) if splitting.e == 1 => LocalUnitGroup::unramified(k, p, a),
        Some(a) => LocalUnitGroup::totally_ramified(k, p, a),
    };
    let group = match group {
        Ok(g) => g,
        Err(Error::Unsupported(msg)) => return Ok(undecided(k, p, Method::Numerical, splitting, msg)),
        Err(e) => return Err(e),
    };
    let units = match global_units(k) {
        Ok(u) => u,
        Err(Error::Unsupported(msg)) => return Ok(undecided(k, p, Method::Numerical, splitting, msg)),
        Err(e) => return Err(e),
    };
    let images = units.iter().map(|u| group.unit_image(u)).collect::<Result<Vec<_>>>()?;
    let group_rank = group.p_rank();
    let dp_am = group.cokernel_rank(&images);
    let expected = expected_rank(k);
    let (verdict, assumptions, reason) = if dp_am as u64 > expected {
        (
            Verdict::NotPRational,
            Vec::new(),
            format!("d_p of the unit cokernel is {dp_am} > r_2 + 1 = {expected}"),
        )
    } else {
        match class_check(k, p) {
            ClassCheck::Coprime(flags) => (
                Verdict::PRational,
                flags,
                format!("d_p A_m = {dp_am} = r_2 + 1 and p ∤ h"),
            ),
            ClassCheck::Divisible(why) => (
                Verdict::Undecided,
                Vec::new(),
                format!("unit cokernel has d_p = {dp_am} = r_2 + 1 but {why}"),
            ),
            ClassCheck::Unknown(why) => (
                Verdict::Undecided,
                Vec::new(),
                format!("unit cokernel has d_p = {dp_am} = r_2 + 1; {why}"),
            ),
        }
    };
    Ok(PrationalityReport {
        field: *k,
        p,
        method: Method::Numerical,
        splitting,
        modulus: Some(group.modulus_label()),
        group_rank: Some(group_rank),
        unit_image_rank: Some(group_rank - dp_am),
        dp_am: Some(dp_am),
        expected,
        verdict,
        assumptions,
        reason,
    })
}

/// Criterion for fields containing `ζ_p`: p-rational iff exactly one prime lies
/// above `p` and its class generates the p-class group. In cyclotomic fields
/// that prime is principal, so the second condition reads `p ∤ h`; for
/// quadratic fields only `p ∤ h` is decided.
pub fn test_theoretical(k: &FieldDescriptor, p: u64) -> Result<PrationalityReport> {
    let splitting = splitting_data(k, p)?;
    let contains_zeta_p = match *k {
        _ if p == 2 => true,
        FieldDescriptor::Cyclotomic(f) => f % p == 0,
        FieldDescriptor::Quadratic(d) => p == 3 && d == -3,
    };
    if !contains_zeta_p {
        return Err(Error::Inapplicable(format!(
            "{k} does not contain ζ_{p}; use the numerical method"
        )));
    }
    let base = PrationalityReport {
        field: *k,
        p,
        method: Method::Theoretical,
        splitting,
        modulus: None,
        group_rank: None,
        unit_image_rank: None,
        dp_am: None,
        expected: expected_rank(k),
        verdict: Verdict::Undecided,
        assumptions: Vec::new(),
        reason: String::new(),
    };
    if splitting.g > 1 {
        return Ok(PrationalityReport {
            verdict: Verdict::NotPRational,
            reason: format!("{} primes lie above {p}", splitting.g),
            ..base
        });
    }
    Ok(match class_check(k, p) {
        ClassCheck::Coprime(assumptions) => PrationalityReport {
            verdict: Verdict::PRational,
            assumptions,
            reason: format!("a single prime above {p}, and p ∤ h"),
            ..base
        },
        ClassCheck::Divisible(why) if matches!(k, FieldDescriptor::Quadratic(_)) => PrationalityReport {
            reason: format!("a single prime above {p}, whose class is not determined, and {why}"),
            ..base
        },
        ClassCheck::Divisible(why) => PrationalityReport {
            verdict: Verdict::NotPRational,
            reason: format!("the principal prime above {p} cannot generate a nontrivial p-class group: {why}"),
            ..base
        },
        ClassCheck::Unknown(why) => PrationalityReport {
            reason: format!("a single prime above {p}; {why}"),
            ..base
        },
    })
}

/// Runs the requested method.
pub fn test_prationality(k: &FieldDescriptor, p: u64, method: Method) -> Result<PrationalityReport> {
    match method {
        Method::Numerical => test_numerical(k, p),
        Method::Theoretical => test_theoretical(k, p),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::{rank, PrimeField};
    use crate::numberfield::intpoly;
    use num_integer::Integer;
    use num_traits::{One, ToPrimitive};

    fn field(s: &str) -> FieldDescriptor {
        s.parse().unwrap()
    }

    /// For p unramified and odd, `G ⊗ F_p ≅ O/p` through `u -> (u^{q−1} − 1)/p`
    /// with `q = p^f`; the criterion's `d_p` is `n − rank` of the unit images.
    fn dp_by_fermat_quotients(k: &FieldDescriptor, p: u64) -> usize {
        let g = k.order_polynomial();
        let n = g.len() - 1;
        let modulus = BigInt::from(p).pow(2);
        let s = splitting_data(k, p).unwrap();
        let q1 = p.pow(s.fres as u32) - 1;
        let reduce = |a: Vec<BigInt>| -> Vec<BigInt> {
            let (_, mut r) = intpoly::divrem_monic(&a, &g);
            r.resize(n, BigInt::zero());
            r.iter().map(|c| c.mod_floor(&modulus)).collect()
        };
        let pow = |u: &[BigInt], mut e: u64| {
            let mut acc = reduce(vec![BigInt::one()]);
            let mut b = reduce(u.to_vec());
            while e > 0 {
                if e & 1 == 1 {
                    acc = reduce(intpoly::mul(&acc, &b));
                }
                b = reduce(intpoly::mul(&b, &b));
                e >>= 1;
            }
            acc
        };
        let rows: Vec<Vec<u64>> = global_units(k)
            .unwrap()
            .iter()
            .map(|u| {
                let mut w = pow(u, q1);
                w[0] -= 1;
                w.iter()
                    .map(|c| {
                        let c = c.mod_floor(&modulus);
                        assert!((&c % BigInt::from(p)).is_zero());
                        (c / BigInt::from(p)).to_u64().unwrap()
                    })
                    .collect()
            })
            .collect();
        n - rank(&PrimeField::new(p).unwrap(), &rows)
    }

    #[test]
    fn seven_is_thirty_seven_rational() {
        let r = test_numerical(&field("cyclotomic:7"), 37).unwrap();
        assert_eq!(r.dp_am, Some(4));
        assert_eq!(r.expected, 4);
        assert_eq!(r.verdict, Verdict::PRational);
        assert_eq!(r.modulus.as_deref(), Some("37^3"));
        assert_eq!(r.splitting.fres, 3);
        assert!(r.assumptions.iter().any(|a| a.contains("tabulated")));
    }

    #[test]
    fn fermat_quotient_oracle() {
        for (k, p) in [
            ("cyclotomic:5", 7u64),
            ("cyclotomic:7", 37),
            ("cyclotomic:7", 5),
            ("cyclotomic:5", 11),
            ("cyclotomic:9", 5),
            ("cyclotomic:8", 3),
            ("cyclotomic:11", 3),
            ("quadratic:5", 7),
            ("quadratic:-7", 11),
            ("quadratic:13", 17),
        ] {
            let k = field(k);
            let r = test_numerical(&k, p).unwrap();
            assert_eq!(r.dp_am.unwrap(), dp_by_fermat_quotients(&k, p), "{k} at {p}");
        }
        let r = test_numerical(&field("cyclotomic:5"), 7).unwrap();
        assert_eq!(r.dp_am, Some(3));
    }

    #[test]
    fn rank_zero_units_leave_everything() {
        // Q(√−7): only ±1, so d_p = g·fres = 2 for any odd unramified p
        for p in [3u64, 5, 11, 13] {
            let r = test_numerical(&field("quadratic:-7"), p).unwrap();
            assert_eq!(r.dp_am, Some(2), "p = {p}");
        }
        // h(−47) = 5
        let r = test_numerical(&field("quadratic:-47"), 5).unwrap();
        assert_eq!(r.verdict, Verdict::Undecided);
        let r = test_numerical(&field("quadratic:-47"), 7).unwrap();
        assert_eq!(r.verdict, Verdict::PRational);
    }

    #[test]
    fn stable_under_deeper_modulus() {
        for (k, p) in [("cyclotomic:7", 37u64), ("cyclotomic:5", 7), ("cyclotomic:7", 2), ("cyclotomic:5", 5), ("cyclotomic:9", 3), ("quadratic:5", 3)] {
            let k = field(k);
            let s = splitting_data(&k, p).unwrap();
            let a = if s.e == 1 { 3 } else { 2 * s.e as u32 + 1 };
            let r3 = test_numerical_with_exponent(&k, p, Some(a)).unwrap();
            let r4 = test_numerical_with_exponent(&k, p, Some(a + 1)).unwrap();
            assert_eq!(r3.dp_am, r4.dp_am, "{k} at {p}");
            assert_eq!(r3, test_numerical(&k, p).unwrap());
        }
    }

    #[test]
    fn theoretical_examples() {
        let r = test_theoretical(&field("cyclotomic:7"), 2).unwrap();
        assert_eq!(r.verdict, Verdict::NotPRational);
        let r = test_theoretical(&field("cyclotomic:13"), 2).unwrap();
        assert_eq!(r.verdict, Verdict::PRational);
        for f in [3u64, 5, 7, 9, 11, 13, 25, 27] {
            let r = test_theoretical(&field(&format!("cyclotomic:{f}")), crate::arith::prime_power(f).unwrap().0).unwrap();
            assert_eq!(r.verdict, Verdict::PRational, "f = {f}");
        }
        let r = test_theoretical(&field("cyclotomic:37"), 37).unwrap();
        assert_eq!(r.verdict, Verdict::NotPRational);
        assert!(matches!(test_theoretical(&field("cyclotomic:7"), 37), Err(Error::Inapplicable(_))));
    }

    #[test]
    fn criteria_agree_on_prime_power_cyclotomic_fields() {
        for f in [3u64, 4, 5, 7, 8, 9, 11, 13, 16, 25, 27] {
            let k = field(&format!("cyclotomic:{f}"));
            let p = crate::arith::prime_power(f).unwrap().0;
            let num = test_numerical(&k, p).unwrap();
            let th = test_theoretical(&k, p).unwrap();
            assert_eq!(num.verdict, th.verdict, "f = {f}");
            assert_eq!(num.dp_am, Some(num.expected as usize), "f = {f}");
        }
        // two primes above 2 in Q(ζ_7): the numerical test sees the excess
        let k = field("cyclotomic:7");
        let num = test_numerical(&k, 2).unwrap();
        assert_eq!(num.verdict, Verdict::NotPRational);
        let k = field("cyclotomic:13");
        assert_eq!(test_numerical(&k, 2).unwrap().verdict, Verdict::PRational);
    }

    #[test]
    fn irregular_prime_is_detected_numerically() {
        let k = field("cyclotomic:37");
        let r = test_numerical(&k, 37).unwrap();
        assert_eq!(r.verdict, Verdict::NotPRational);
        assert!(r.dp_am.unwrap() > 19);
    }

    #[test]
    fn partially_ramified_is_undecided() {
        let r = test_numerical(&field("cyclotomic:15"), 3).unwrap();
        assert_eq!(r.verdict, Verdict::Undecided);
        let r = test_numerical(&field("cyclotomic:21"), 2).unwrap();
        assert_eq!(r.verdict, Verdict::Undecided);
    }
}
