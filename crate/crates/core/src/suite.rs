//! The verification battery behind `mutower paper-suite`: fifteen exact
//! checks, each reported as pass/fail with the data it rests on.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::census::{admissible_s, census_summary, select_free_t, split_constant, AbelianField};
use crate::characters::{
    koch_shafarevich, mirror_split_scenario, realizability_check, CharacterVec, KochShafarevichInput,
};
use crate::error::Result;
use crate::iwasawa::{
    coinvariant_growth, fit_invariants, weierstrass_prepare, LambdaSeries, ModulePresentation,
};
use crate::numberfield::FieldDescriptor;
use crate::prationality::{
    character_of_asp, is_regular_prime, test_numerical, test_theoretical, Subfield, Verdict,
};
use crate::propgroups::{
    check_sigma_gamma, fixed_points, frobenius_check, nilpotency_class, no_fpf_order3_search, sigma_gamma,
    FiniteQuotient, FixMode, GroupAutomorphism, GroupLaw,
};

pub const CRITERIA: u32 = 15;

/// Criteria whose literal target disagrees with what the stated formula
/// computes; they are evaluated faithfully and expected to fail.
pub const KNOWN_DEVIATIONS: &[u32] = &[11];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionResult {
    pub id: u32,
    pub title: String,
    pub pass: bool,
    pub detail: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub quick: bool,
    pub results: Vec<CriterionResult>,
    pub passed: usize,
    pub failed: Vec<u32>,
    pub known_deviations: Vec<u32>,
}

impl SuiteReport {
    /// Every failure is a known deviation.
    pub fn only_known_failures(&self) -> bool {
        self.failed.iter().all(|id| KNOWN_DEVIATIONS.contains(id))
    }

    pub fn table(&self) -> String {
        let mut s = String::new();
        for r in &self.results {
            let tag = if r.pass {
                "PASS"
            } else if KNOWN_DEVIATIONS.contains(&r.id) {
                "FAIL (known deviation)"
            } else {
                "FAIL"
            };
            s.push_str(&format!("{:>2}  {:<24} {}\n", r.id, tag, r.title));
        }
        s.push_str(&format!("{}/{} passed\n", self.passed, self.results.len()));
        s
    }
}

pub fn title(id: u32) -> &'static str {
    match id {
        1 => "Q(zeta_7) is 37-rational (numerical criterion)",
        2 => "2-rationality of Q(zeta_7), Q(zeta_13) (theoretical criterion)",
        3 => "irregular primes below 100",
        4 => "Gamma(s) engine and the order-3 automorphism",
        5 => "order-3 elements of GL_3(F_p) without fixed points",
        6 => "Frobenius groups",
        7 => "nilpotency class of Gamma(0)/Gamma_3",
        8 => "coinvariant growth and fitted invariants",
        9 => "Weierstrass preparation round trip",
        10 => "mirror identity with |T| = r + 1 inert places",
        11 => "Koch-Shafarevich rank with a free T",
        12 => "inert-prime census",
        13 => "character of A_Sp for Q(zeta_7)/Q(sqrt(-7)) at 37",
        14 => "realizability constraint",
        15 => "determinism",
        _ => "unknown",
    }
}

fn c1() -> Result<(bool, Value)> {
    let r = test_numerical(&FieldDescriptor::Cyclotomic(7), 37)?;
    let pass = r.dp_am == Some(4) && r.expected == 4 && r.verdict == Verdict::PRational && r.splitting.fres == 3;
    Ok((pass, json!({ "dp_am": r.dp_am, "expected": r.expected, "verdict": r.verdict, "fres": r.splitting.fres, "g": r.splitting.g })))
}

fn c2() -> Result<(bool, Value)> {
    let a = test_theoretical(&FieldDescriptor::Cyclotomic(7), 2)?;
    let b = test_theoretical(&FieldDescriptor::Cyclotomic(13), 2)?;
    let pass = a.verdict == Verdict::NotPRational && b.verdict == Verdict::PRational;
    Ok((pass, json!({ "q7": a.verdict, "q7_reason": a.reason, "q13": b.verdict, "q13_reason": b.reason })))
}

fn c3() -> Result<(bool, Value)> {
    let mut irregular = Vec::new();
    for p in crate::arith::primes_up_to(100).into_iter().filter(|&p| p > 2) {
        let r = is_regular_prime(p)?;
        if !r.regular {
            irregular.push((p, r.irregular_indices));
        }
    }
    let primes: Vec<u64> = irregular.iter().map(|x| x.0).collect();
    Ok((primes == [37, 59, 67], json!({ "irregular": irregular, "smallest": primes.first() })))
}

fn c4() -> Result<(bool, Value)> {
    let p = 7;
    let mut pass = true;
    let mut rows = Vec::new();
    for s in 0..3 {
        let law = GroupLaw::Gamma { s };
        let q = FiniteQuotient::new(law, p, 6)?;
        let (x, y, z) = (q.generator(0), q.generator(1), q.generator(2));
        let presentation = q.comm(&x, &y) == q.pow(&z, p.pow(s))
            && q.is_identity(&q.comm(&x, &z))
            && q.is_identity(&q.comm(&y, &z));
        let sig = check_sigma_gamma(p, s, 6)?;
        let relation = sig.relation_levels.iter().all(|&(_, ok)| ok);
        let sigma = sigma_gamma(p, s, 6)?;
        let q1 = FiniteQuotient::new(law, p, 1)?;
        let ex = fixed_points(&q1, &sigma, FixMode::Exhaustive)?;
        let graded: Vec<Option<bool>> = (1..=6)
            .map(|n| Ok(fixed_points(&FiniteQuotient::new(law, p, n)?, &sigma, FixMode::Graded)?.trivial))
            .collect::<Result<_>>()?;
        let ok = presentation
            && relation
            && sig.order == Some(3)
            && ex.count == Some(1)
            && q1.order() == 343
            && graded.iter().all(|&t| t == Some(true));
        pass &= ok;
        rows.push(json!({ "s": s, "presentation": presentation, "sigma_relation": sig.relation_levels,
            "sigma_order": sig.order, "zeta_mod_p": sig.zeta_residue, "exhaustive_fix_n1": ex.count, "graded_trivial": graded }));
    }
    Ok((pass, json!(rows)))
}

fn c5() -> Result<(bool, Value)> {
    let mut detail = Vec::new();
    let mut pass = true;
    for (p, want) in [(2u64, false), (5, false), (7, true)] {
        let s = no_fpf_order3_search(p)?;
        pass &= s.fpf_exists == want;
        detail.push(json!({ "p": p, "classes": s.classes.len(), "fpf_exists": s.fpf_exists }));
    }
    Ok((pass, json!(detail)))
}

fn c6() -> Result<(bool, Value)> {
    let sigma = sigma_gamma(7, 0, 2)?;
    let q = FiniteQuotient::new(GroupLaw::Gamma { s: 0 }, 7, 1)?;
    let a = frobenius_check(&q, &sigma, 3)?;
    let neg = GroupAutomorphism::from_images(GroupLaw::Abelian { d: 1 }, 5, 3, vec![vec![124]])?;
    let q5 = FiniteQuotient::new(GroupLaw::Abelian { d: 1 }, 5, 3)?;
    let b = frobenius_check(&q5, &neg, 2)?;
    let summary = |r: &crate::propgroups::FrobeniusReport| {
        json!({ "order": r.group_order, "m": r.m, "centralizers_trivial": r.centralizers_trivial,
            "complements": r.complements, "complements_conjugate": r.complements_conjugate, "frobenius": r.frobenius })
    };
    Ok((a.frobenius && b.frobenius, json!({ "gamma0_mod_gamma2": summary(&a), "z_mod_125": summary(&b) })))
}

fn c7() -> Result<(bool, Value)> {
    let q = FiniteQuotient::new(GroupLaw::Gamma { s: 0 }, 7, 2)?;
    let r = nilpotency_class(&q);
    Ok((r.class == 2, json!(r)))
}

fn series(p: u64, c: &[i64]) -> LambdaSeries {
    LambdaSeries::from_i64(p, 30, 40, c).expect("valid parameters")
}

/// Upper-triangular presentation with random diagonal `p^a · P`.
fn random_module(rng: &mut ChaCha8Rng, p: u64) -> Result<ModulePresentation> {
    let g = rng.gen_range(1..=2usize);
    let pi = p as i64;
    let mut rels = Vec::new();
    for i in 0..g {
        let mut row = Vec::new();
        for j in 0..g {
            let c: Vec<i64> = if i == j {
                let a = rng.gen_range(0..3u32);
                let lam = rng.gen_range(0..3usize);
                let mut c: Vec<i64> = (0..lam).map(|_| pi * rng.gen_range(-2..3)).collect();
                c.push(1);
                c.iter().map(|x| x * pi.pow(a)).collect()
            } else if j > i {
                (0..3).map(|_| rng.gen_range(-4..5)).collect()
            } else {
                vec![]
            };
            row.push(series(p, &c));
        }
        rels.push(row);
    }
    ModulePresentation::new(p, g, rels)
}

fn c8(quick: bool) -> Result<(bool, Value)> {
    let x = ModulePresentation::cyclic(vec![series(3, &[3])])?;
    let t = coinvariant_growth(&x, 0..=6)?;
    let dims_ok = t.rows.iter().all(|r| r.dim_fp == 3u64.pow(r.n));
    let f1 = fit_invariants(&t)?;
    let y = ModulePresentation::cyclic(vec![series(3, &[3, 0, 1])])?;
    let f2 = fit_invariants(&coinvariant_growth(&y, 0..=5)?)?;
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let levels = if quick { 3 } else { 4 };
    let mut random_ok = 0;
    for _ in 0..50 {
        let m = random_module(&mut rng, 3)?;
        let f = fit_invariants(&coinvariant_growth(&m, 0..=levels)?)?;
        if let (Some(r), Some(mu)) = (f.r, f.mu) {
            if mu >= r && (r == 0) == (mu == 0) {
                random_ok += 1;
            }
        }
    }
    let pass = dims_ok
        && (f1.r, f1.mu) == (Some(1), Some(1))
        && (f2.r, f2.mu, f2.lambda) == (Some(0), Some(0), Some(2))
        && random_ok == 50;
    Ok((pass, json!({ "lambda_mod_p": { "dims": t.rows.iter().map(|r| r.dim_fp).collect::<Vec<_>>(), "fit": f1 },
        "t2_plus_p": f2, "random_suite": { "modules": 50, "levels": levels, "consistent": random_ok } })))
}

fn c9() -> Result<(bool, Value)> {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut ok = 0;
    for _ in 0..100 {
        let p = [3u64, 5, 7, 11][rng.gen_range(0..4)];
        let pi = p as i64;
        let a = rng.gen_range(0..4u32);
        let lam = rng.gen_range(0..6usize);
        let mut pc: Vec<i64> = (0..lam).map(|_| pi * rng.gen_range(-4..5)).collect();
        pc.push(1);
        let mut uc: Vec<i64> = (0..rng.gen_range(1..5)).map(|_| rng.gen_range(-9..10)).collect();
        uc[0] = rng.gen_range(1..pi);
        let big = |v: &[i64]| v.iter().map(|&c| BigInt::from(c)).collect::<Vec<_>>();
        let exact: Vec<BigInt> = crate::numberfield::intpoly::mul(&big(&pc), &big(&uc))
            .into_iter()
            .map(|c| c * BigInt::from(p).pow(a))
            .collect();
        let f = LambdaSeries::new(p, 16, 24, &exact)?;
        let r = weierstrass_prepare(&f)?;
        let back = r.distinguished.mul(&r.unit).scale(&BigInt::from(p).pow(a));
        let want_p = LambdaSeries::new(p, r.precision, 24, &big(&pc))?;
        if (r.mu, r.lambda) == (a, lam)
            && r.distinguished.with_precision(r.precision, 24) == want_p
            && back == f.with_precision(r.precision, 24)
        {
            ok += 1;
        }
    }
    Ok((ok == 100, json!({ "inputs": 100, "recovered": ok })))
}

fn c10() -> Result<(bool, Value)> {
    let mut pass = true;
    let mut rows = Vec::new();
    for r in 1..=3u64 {
        for m in [2u64, 3, 5] {
            for omega in 0..m {
                let sol = mirror_split_scenario(r, m, omega)?;
                let target = CharacterVec::regular(m).sub(&CharacterVec::trivial(m))?.scale(r as i64);
                // over K: r_2 = r m, one place above p, |T| = r + 1, A_T^S = 0
                let ks = koch_shafarevich(KochShafarevichInput {
                    r1: 0,
                    r2: r * m,
                    s: 1,
                    t: r + 1,
                    dp_a_ts: 0,
                    local_degree_sum: 2 * r * m,
                });
                let ok = sol.a_t_s == CharacterVec::zero(m)
                    && sol.a_s_t == target
                    && ks.free
                    && ks.rank == (r * (m - 1)) as i64
                    && ks.rank == sol.a_s_t.degree();
                pass &= ok;
                rows.push(json!({ "r": r, "m": m, "omega": omega, "a_t_s": sol.a_t_s.mult, "a_s_t": sol.a_s_t.mult, "rank": ks.rank, "free": ks.free }));
            }
        }
    }
    Ok((pass, json!(rows)))
}

fn c11() -> Result<(bool, Value)> {
    let mut pass = true;
    let mut rows = Vec::new();
    for p in [5u64, 7, 11] {
        let sel = select_free_t(p, 500)?;
        let ell = sel.primes.first().copied();
        let ks = koch_shafarevich(KochShafarevichInput {
            r1: 0,
            r2: (p - 1) / 2,
            s: 1,
            t: 1,
            dp_a_ts: 0,
            local_degree_sum: p - 1,
        });
        let target = ((p - 3) / 2) as i64;
        let ok = ell.is_some() && ks.rank == target && ks.free;
        pass &= ok;
        rows.push(json!({ "p": p, "ell": ell, "rank": ks.rank, "target": target, "free": ks.free }));
    }
    Ok((pass, json!(rows)))
}

fn c12() -> Result<(bool, Value)> {
    let cubic = AbelianField::new(7, &[1, 6])?;
    let s = census_summary(&cubic, 1_000_000)?;
    let c = split_constant(3, &cubic, 1_000_000_000, 16)?;
    let density_ok = (s.inert_density - 2.0 / 3.0).abs() <= 0.02;
    let s_set = admissible_s(3, 4, 1000)?;
    Ok((
        density_ok && c.min_ratio >= 0.3,
        json!({ "inert_density": s.inert_density, "primes": s.primes, "min_ratio": c.min_ratio,
            "grid": c.grid.iter().map(|g| json!({"x": g.x, "count": g.count, "ratio": g.ratio})).collect::<Vec<_>>(),
            "admissible_s": s_set }),
    ))
}

fn c13() -> Result<(bool, Value)> {
    let r = character_of_asp(&FieldDescriptor::Cyclotomic(7), &Subfield::Quadratic(-7), 37)?;
    let pass = r.character.mult == [2, 1, 1] && r.matches && r.r2_k0 == 1;
    Ok((pass, json!({ "character": r.character.mult, "expected": r.expected.mult, "r2_k0": r.r2_k0, "dp_am": r.dp_am })))
}

fn c14() -> Result<(bool, Value)> {
    let mut pass = true;
    let mut rows = Vec::new();
    for k0 in [2u64, 4, 6] {
        for p in [5u64, 7, 13] {
            for n in 0..3u32 {
                let r = realizability_check(3, 3, k0, p, n)?;
                pass &= r.embeddable == r.closed_form;
                rows.push(json!({ "k0_degree": k0, "p": p, "n": n, "embeddable": r.embeddable, "closed_form": r.closed_form }));
            }
        }
    }
    Ok((pass, json!(rows)))
}

fn evaluate(id: u32, quick: bool) -> Result<(bool, Value)> {
    match id {
        1 => c1(),
        2 => c2(),
        3 => c3(),
        4 => c4(),
        5 => c5(),
        6 => c6(),
        7 => c7(),
        8 => c8(quick),
        9 => c9(),
        10 => c10(),
        11 => c11(),
        12 => c12(),
        13 => c13(),
        14 => c14(),
        15 => {
            let a = serde_json::to_vec(&run_core(quick))?;
            let b = serde_json::to_vec(&run_core(quick))?;
            Ok((a == b, json!({ "bytes": a.len(), "identical": a == b })))
        }
        _ => Err(crate::Error::Invalid(format!("no criterion {id}"))),
    }
}

/// Runs one criterion; computation errors count as failures.
pub fn run_criterion(id: u32, quick: bool) -> CriterionResult {
    let (pass, detail) = match evaluate(id, quick) {
        Ok(x) => x,
        Err(e) => (false, json!({ "error": { "kind": e.kind(), "message": e.to_string() } })),
    };
    CriterionResult { id, title: title(id).into(), pass, detail }
}

fn run_core(quick: bool) -> Vec<CriterionResult> {
    (1..CRITERIA).map(|id| run_criterion(id, quick)).collect()
}

/// Criteria 1–14, plus the determinism rerun unless `quick`.
pub fn run_suite(quick: bool) -> SuiteReport {
    let mut results = run_core(quick);
    if !quick {
        let again = run_core(quick);
        let a = serde_json::to_vec(&results).expect("serialisable");
        let b = serde_json::to_vec(&again).expect("serialisable");
        results.push(CriterionResult {
            id: 15,
            title: title(15).into(),
            pass: a == b,
            detail: json!({ "bytes": a.len(), "identical": a == b }),
        });
    }
    let failed: Vec<u32> = results.iter().filter(|r| !r.pass).map(|r| r.id).collect();
    SuiteReport {
        quick,
        passed: results.len() - failed.len(),
        failed,
        known_deviations: KNOWN_DEVIATIONS.to_vec(),
        results,
    }
}
