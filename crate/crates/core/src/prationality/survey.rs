//! p-rationality across imaginary quadratic fields.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numberfield::{class_number_imag_quadratic, QuadField};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurveyRow {
    pub d: i64,
    pub discriminant: i64,
    pub h: u64,
    pub p_rational: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurveyReport {
    pub p: u64,
    pub bound: u64,
    pub total: usize,
    pub p_rational: usize,
    pub proportion: f64,
    pub rows: Vec<SurveyRow>,
}

impl SurveyReport {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("D,h,verdict\n");
        for r in &self.rows {
            let v = if r.p_rational { "p-rational" } else { "not p-rational" };
            s.push_str(&format!("{},{},{}\n", r.discriminant, r.h, v));
        }
        s
    }
}

/// Imaginary quadratic fields with `|D| ≤ bound` and `p ∤ D`; for those
/// `K` is p-rational iff `p ∤ h`.
pub fn survey_quadratic(p: u64, bound: u64) -> Result<SurveyReport> {
    if p < 5 || !crate::arith::is_prime(p) {
        return Err(Error::Invalid(format!("the survey needs a prime p ≥ 5, got {p}")));
    }
    let bound_i = i64::try_from(bound).map_err(|_| Error::Resource("bound too large".into()))?;
    let mut rows: Vec<SurveyRow> = (1..=bound_i)
        .into_par_iter()
        .filter_map(|n| {
            let d = -n;
            let k = QuadField::new(d).ok()?;
            let disc = k.discriminant;
            if disc.unsigned_abs() > bound || disc.unsigned_abs() % p == 0 {
                return None;
            }
            let h = class_number_imag_quadratic(d).ok()?;
            Some(SurveyRow {
                d,
                discriminant: disc,
                h,
                p_rational: h % p != 0,
            })
        })
        .collect();
    rows.sort_by_key(|r| (r.discriminant.unsigned_abs(), r.d));
    let total = rows.len();
    let p_rational = rows.iter().filter(|r| r.p_rational).count();
    Ok(SurveyReport {
        p,
        bound,
        total,
        p_rational,
        proportion: if total == 0 { 0.0 } else { p_rational as f64 / total as f64 },
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numberfield::FieldDescriptor;
    use crate::prationality::{test_numerical, Verdict};

    #[test]
    fn five_up_to_500() {
        let s = survey_quadratic(5, 500).unwrap();
        assert!(s.total > 100);
        let r47 = s.rows.iter().find(|r| r.d == -47).unwrap();
        assert_eq!(r47.h, 5);
        assert!(!r47.p_rational);
        assert!(s.proportion > 0.5 && s.proportion < 1.0);
        assert!(s.to_csv().lines().nth(1).unwrap().starts_with("-3,1,"));
    }

    #[test]
    fn agrees_with_numerical_test() {
        let s = survey_quadratic(7, 150).unwrap();
        for r in &s.rows {
            let k = FieldDescriptor::Quadratic(r.d);
            let v = test_numerical(&k, 7).unwrap();
            if r.p_rational {
                assert_eq!(v.verdict, Verdict::PRational, "d = {}", r.d);
            } else {
                assert_ne!(v.verdict, Verdict::PRational, "d = {}", r.d);
            }
        }
    }

    #[test]
    fn huge_prime_leaves_everything_rational() {
        let s = survey_quadratic(1_000_003, 300).unwrap();
        assert_eq!(s.proportion, 1.0);
        assert!(survey_quadratic(3, 100).is_err());
    }
}
