use mutower::census::{pi_split_statistic, qualifies_for_t, select_free_t, AbelianField};
use mutower::characters::{fpf_criterion, CharacterVec};
use mutower::iwasawa::{coinvariant_growth, fit_invariants, weierstrass_prepare, LambdaSeries, ModulePresentation};
use mutower::numberfield::FieldDescriptor;
use mutower::prationality::{character_of_asp, Subfield};
use mutower::propgroups::{fixed_points, fpf_charpoly_test, FiniteQuotient, FixMode, GroupAutomorphism, GroupLaw};
use proptest::prelude::*;

const P: u64 = 7;

fn mat_mul(a: &[Vec<u64>], b: &[Vec<u64>]) -> Vec<Vec<u64>> {
    (0..3)
        .map(|i| (0..3).map(|j| (0..3).map(|k| a[i][k] * b[k][j]).sum::<u64>() % P).collect())
        .collect()
}

/// `I + c E_ij` and its inverse.
fn elementary(i: usize, j: usize, c: u64) -> (Vec<Vec<u64>>, Vec<Vec<u64>>) {
    let mut e = vec![vec![0; 3]; 3];
    for (k, row) in e.iter_mut().enumerate() {
        row[k] = 1;
    }
    let mut f = e.clone();
    e[i][j] = c % P;
    f[i][j] = (P - c % P) % P;
    (e, f)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Matrices of order dividing 3 over F_7 with known eigenvalues `2^a, 2^b, 2^c`,
    /// disguised by elementary conjugations.
    #[test]
    fn character_and_charpoly_and_enumeration_agree(
        exps in prop::array::uniform3(0usize..3),
        conj in prop::collection::vec((0usize..3, 0usize..3, 1u64..7), 0..6),
    ) {
        let pow2 = [1u64, 2, 4];
        let mut m: Vec<Vec<u64>> = (0..3).map(|i| (0..3).map(|j| if i == j { pow2[exps[i]] } else { 0 }).collect()).collect();
        for (i, j, c) in conj {
            if i != j {
                let (e, f) = elementary(i, j, c);
                m = mat_mul(&mat_mul(&e, &m), &f);
            }
        }
        let mut mult = vec![0i64; 3];
        for &a in &exps {
            mult[a] += 1;
        }
        let by_character = fpf_criterion(&CharacterVec::from_mult(mult)).unwrap();
        let by_charpoly = fpf_charpoly_test(&m, P).unwrap().fixed_point_free;
        let law = GroupLaw::Abelian { d: 3 };
        let images: Vec<Vec<u64>> = (0..3).map(|j| (0..3).map(|i| m[i][j]).collect()).collect();
        let sigma = GroupAutomorphism::from_images(law, P, 1, images).unwrap();
        let q = FiniteQuotient::new(law, P, 1).unwrap();
        let by_enumeration = fixed_points(&q, &sigma, FixMode::Exhaustive).unwrap().trivial.unwrap();
        prop_assert_eq!(by_character, by_charpoly);
        prop_assert_eq!(by_charpoly, by_enumeration);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn preparation_and_growth_agree_on_mu(
        p in prop::sample::select(vec![3u64, 5]),
        a in 0u32..3,
        tail in prop::collection::vec(-2i64..3, 0..3),
        u1 in -3i64..4,
    ) {
        let pi = p as i64;
        let mut poly: Vec<i64> = tail.iter().map(|c| c * pi).collect();
        poly.push(1);
        // times the unit 1 + u1 T
        let mut f = vec![0i64; poly.len() + 1];
        for (i, c) in poly.iter().enumerate() {
            f[i] += c;
            f[i + 1] += c * u1;
        }
        let f: Vec<i64> = f.iter().map(|c| c * pi.pow(a)).collect();
        let s = LambdaSeries::from_i64(p, 30, 40, &f).unwrap();
        let prep = weierstrass_prepare(&s).unwrap();
        let table = coinvariant_growth(&ModulePresentation::cyclic(vec![s]).unwrap(), 0..=3).unwrap();
        let fit = fit_invariants(&table).unwrap();
        prop_assert_eq!(prep.mu, a);
        prop_assert_eq!(fit.mu, Some(a as u64));
        prop_assert_eq!(fit.r == Some(0), fit.mu == Some(0));
        prop_assert!(table.rows.windows(2).all(|w| w[0].dim_fp <= w[1].dim_fp));
    }
}

#[test]
fn character_degree_is_the_rank() {
    for (f, k0, p) in [(7, "quadratic:-7", 37), (7, "cyclotomic:7", 29), (9, "quadratic:-3", 19)] {
        let k0: Subfield = k0.parse().unwrap();
        let r = character_of_asp(&FieldDescriptor::Cyclotomic(f), &k0, p).unwrap();
        assert_eq!(r.character.degree(), r.dp_am as i64, "Q(zeta_{f}) at {p}");
    }
}

#[test]
fn pi_split_is_monotone() {
    let cubic = AbelianField::new(7, &[1, 6]).unwrap();
    let mut last = 0;
    for k in 0..40 {
        let x = (100.0 * 10f64.powf(k as f64 / 5.0)) as u64;
        let c = pi_split_statistic(x, 3, &cubic).unwrap().count;
        assert!(c >= last);
        last = c;
    }
}

#[test]
fn selected_t_primes_pass_independent_checks() {
    for p in [5u64, 7, 11, 13] {
        for l in select_free_t(p, 400).unwrap().primes {
            assert!(qualifies_for_t(p, l).is_ok());
            let order = (1..p).find(|&k| mutower::arith::pow_mod(l, k, p) == 1).unwrap();
            assert_eq!(order, p - 1, "{l} is not inert in Q(zeta_{p})");
            let mut x: u128 = 1;
            for _ in 0..p - 1 {
                x = x * l as u128 % (p * p) as u128;
            }
            assert_ne!(x, 1, "{p}^2 divides {l}^{} - 1", p - 1);
        }
    }
}
