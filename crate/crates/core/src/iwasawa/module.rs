//! Finitely presented `Λ`-modules, their `Γ_n`-coinvariants, and fitted
//! growth invariants.

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::series::LambdaSeries;
use crate::arith::mul_mod;
use crate::error::{Error, Result};
use crate::snf::cokernel;

/// Largest `p^n` for which coinvariants are computed.
pub const COINVARIANT_CAP: u64 = 2048;
const MAX_GENERATORS: usize = 6;

/// `Λ^r / ⟨relations⟩`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModulePresentation {
    pub p: u64,
    pub generators: usize,
    pub relations: Vec<Vec<LambdaSeries>>,
}

impl ModulePresentation {
    pub fn new(p: u64, generators: usize, relations: Vec<Vec<LambdaSeries>>) -> Result<Self> {
        if generators == 0 || generators > MAX_GENERATORS {
            return Err(Error::Invalid(format!("between 1 and {MAX_GENERATORS} generators supported")));
        }
        for r in &relations {
            if r.len() != generators {
                return Err(Error::Invalid("relation length differs from the generator count".into()));
            }
            if r.iter().any(|s| s.p != p) {
                return Err(Error::Mismatch("relation over a different prime".into()));
            }
        }
        Ok(ModulePresentation { p, generators, relations })
    }

    /// `Λ / (f_1, …, f_k)`.
    pub fn cyclic(fs: Vec<LambdaSeries>) -> Result<Self> {
        let p = fs.first().ok_or_else(|| Error::Invalid("no relations".into()))?.p;
        Self::new(p, 1, fs.into_iter().map(|f| vec![f]).collect())
    }

    /// A nonzero `r × r` minor of the relation matrix, which annihilates the module.
    pub fn annihilator(&self) -> Option<LambdaSeries> {
        let r = self.generators;
        let k = self.relations.len();
        if k < r {
            return None;
        }
        let mut idx: Vec<usize> = (0..r).collect();
        loop {
            let rows: Vec<&Vec<LambdaSeries>> = idx.iter().map(|&i| &self.relations[i]).collect();
            let d = det(&rows, &(0..r).collect::<Vec<_>>());
            if !d.is_zero() {
                return Some(d);
            }
            // next combination
            let mut i = r;
            loop {
                if i == 0 {
                    return None;
                }
                i -= 1;
                if idx[i] < k - r + i {
                    break;
                }
            }
            idx[i] += 1;
            for j in i + 1..r {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }

    pub fn is_torsion(&self) -> bool {
        self.annihilator().is_some()
    }

    fn precision(&self) -> u32 {
        self.relations.iter().flatten().map(|s| s.precision).min().unwrap_or(u32::MAX)
    }
}

/// Laplace expansion along the first row; `cols` indexes the surviving columns.
fn det(rows: &[&Vec<LambdaSeries>], cols: &[usize]) -> LambdaSeries {
    let first = &rows[0][cols[0]];
    if rows.len() == 1 {
        return first.clone();
    }
    let mut acc: Option<LambdaSeries> = None;
    for (k, &c) in cols.iter().enumerate() {
        let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        let term = rows[0][c].mul(&det(&rows[1..], &rest));
        let term = if k % 2 == 1 { term.neg() } else { term };
        acc = Some(match acc {
            None => term,
            Some(a) => a.add(&term),
        });
    }
    acc.expect("nonempty")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrowthRow {
    pub n: u32,
    pub dim_fp: u64,
    /// `log_p |X_{Γ_n} / p^n|`.
    pub log_mod_pn: u64,
    /// `log_p |X_{Γ_n}|`, `None` when it did not stabilise (typically infinite).
    pub log_order: Option<u64>,
    pub precision: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrowthTable {
    pub p: u64,
    pub torsion: bool,
    pub rows: Vec<GrowthRow>,
}

/// Coefficients of `ω_n = (1 + T)^{p^n} − 1` modulo `q`.
fn omega(p: u64, n: u32, q: u64) -> Vec<u64> {
    let m = p.pow(n) as usize;
    let qb = BigUint::from(q);
    let mut c = vec![0u64; m + 1];
    let mut binom = BigUint::from(1u32);
    for k in 0..=m {
        c[k] = (&binom % &qb).to_u64().expect("reduced");
        binom = binom * BigUint::from((m - k) as u64) / BigUint::from((k + 1) as u64);
    }
    c[0] = (c[0] + q - 1) % q;
    c
}

/// Reduces `a` modulo the monic `w` of degree `m`, over `Z/q`.
fn reduce_mod(a: &[u64], w: &[u64], q: u64) -> Vec<u64> {
    let m = w.len() - 1;
    let mut a = a.to_vec();
    for i in (m..a.len()).rev() {
        let c = a[i];
        if c == 0 {
            continue;
        }
        for j in 0..=m {
            a[i - m + j] = (a[i - m + j] + q - mul_mod(c, w[j], q)) % q;
        }
    }
    a.resize(m, 0);
    a
}

fn relation_rows(x: &ModulePresentation, n: u32, precision: u32) -> Result<Vec<Vec<u64>>> {
    let p = x.p;
    let q = p.pow(precision);
    let w = omega(p, n, q);
    let m = w.len() - 1;
    let r = x.generators;
    let qb = BigUint::from(q);
    let mut rows = Vec::new();
    for rel in &x.relations {
        let mut cur: Vec<Vec<u64>> = rel
            .iter()
            .map(|s| {
                let c: Vec<u64> = s.coeffs().iter().map(|c| (c % &qb).to_u64().expect("reduced")).collect();
                reduce_mod(&c, &w, q)
            })
            .collect();
        for _ in 0..m {
            rows.push(cur.iter().flatten().copied().collect());
            // multiply by T modulo ω_n
            for v in cur.iter_mut() {
                let top = v[m - 1];
                v.rotate_right(1);
                v[0] = 0;
                for j in 0..m {
                    v[j] = (v[j] + q - mul_mod(top, w[j], q)) % q;
                }
            }
        }
    }
    if rows.is_empty() {
        rows.push(vec![0; r * m]);
    }
    Ok(rows)
}

fn level_row(x: &ModulePresentation, n: u32) -> Result<GrowthRow> {
    let p = x.p;
    let pn = p.pow(n);
    let mut cap = x.precision();
    for rel in x.relations.iter().flatten() {
        if !rel.polynomial {
            // T^{k p^n} ≡ 0 mod p^k modulo ω_n bounds the lost tail
            cap = cap.min((rel.truncation as u64 / pn) as u32);
        }
    }
    let word_cap = (62.0 / (p as f64).log2()).floor() as u32;
    let mut precision = (n + 6).min(cap).min(word_cap);
    if precision <= n {
        return Err(Error::Precision(format!("level {n} needs more than {precision} digits")));
    }
    let cols = x.generators * pn as usize;
    let mut snf = cokernel(&relation_rows(x, n, precision)?, cols, p, precision, false)?;
    let mut log_order = None;
    for _ in 0..3 {
        if !snf.saturated() {
            log_order = Some(snf.log_order());
            break;
        }
        let next = (precision * 2).min(cap).min(word_cap);
        if next == precision {
            break;
        }
        precision = next;
        snf = cokernel(&relation_rows(x, n, precision)?, cols, p, precision, false)?;
    }
    Ok(GrowthRow {
        n,
        dim_fp: snf.p_rank() as u64,
        log_mod_pn: snf.exponents.iter().map(|&e| e.min(n) as u64).sum(),
        log_order,
        precision,
    })
}

/// `dim_Fp X_{Γ_n}`, `log_p |X_{Γ_n}/p^n|` and `log_p |X_{Γ_n}|` for `n` in `levels`,
/// by Smith normal form of the relations modulo `ω_n`.
pub fn coinvariant_growth(x: &ModulePresentation, levels: std::ops::RangeInclusive<u32>) -> Result<GrowthTable> {
    let p = x.p;
    if let Some(n) = levels.clone().last() {
        if p.checked_pow(n).map_or(true, |pn| pn > COINVARIANT_CAP) {
            return Err(Error::Resource(format!("p^n above the coinvariant cap {COINVARIANT_CAP}")));
        }
    }
    let rows: Result<Vec<GrowthRow>> = levels.collect::<Vec<_>>().into_par_iter().map(|n| level_row(x, n)).collect();
    Ok(GrowthTable { p, torsion: x.is_torsion(), rows: rows? })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvariantFit {
    /// Growth is not of the torsion shape; no fit is attempted.
    pub unbounded: bool,
    pub r: Option<u64>,
    /// Residuals `dim − r p^n` constant on the fitted levels.
    pub r_exact: bool,
    pub mu: Option<u64>,
    pub lambda: Option<i64>,
    pub nu: Option<i64>,
    /// `μ p^n + λ n + ν` reproduces the data exactly.
    pub exact: bool,
    /// Which size sequence fed `μ, λ, ν`: `order` or `mod_pn`.
    pub source: String,
}

fn least_squares_leading(p: u64, pts: &[(u32, u64)]) -> f64 {
    let num: f64 = pts.iter().map(|&(n, v)| v as f64 * (p as f64).powi(n as i32)).sum();
    let den: f64 = pts.iter().map(|&(n, _)| (p as f64).powi(2 * n as i32)).sum();
    num / den
}

/// `r` from `dim_Fp X_{Γ_n} = r p^n + O(1)` and `(μ, λ, ν)` from
/// `μ p^n + λ n + ν` on the last three levels.
pub fn fit_invariants(table: &GrowthTable) -> Result<InvariantFit> {
    let rows = &table.rows;
    if rows.len() < 3 || rows.windows(2).any(|w| w[1].n != w[0].n + 1) {
        return Err(Error::InsufficientData("need at least 3 consecutive levels".into()));
    }
    if !table.torsion {
        return Ok(InvariantFit {
            unbounded: true,
            r: None,
            r_exact: false,
            mu: None,
            lambda: None,
            nu: None,
            exact: false,
            source: String::new(),
        });
    }
    let p = table.p;
    let pi = p as i128;
    let tail = &rows[rows.len() - 3..];

    let dims: Vec<(u32, u64)> = tail.iter().map(|r| (r.n, r.dim_fp)).collect();
    let r = least_squares_leading(p, &dims).round().max(0.0) as u64;
    let resid: Vec<i128> = dims.iter().map(|&(n, d)| d as i128 - r as i128 * pi.pow(n)).collect();
    let r_exact = resid.windows(2).all(|w| w[0] == w[1]);

    let use_order = rows.iter().all(|r| r.log_order.is_some());
    let seq: Vec<(u32, i128)> = rows
        .iter()
        .map(|r| (r.n, if use_order { r.log_order.expect("checked") } else { r.log_mod_pn } as i128))
        .collect();
    let t = &seq[seq.len() - 3..];
    let n0 = t[0].0;
    let d0 = t[1].1 - t[0].1;
    let d1 = t[2].1 - t[1].1;
    let denom = pi.pow(n0) * (pi - 1) * (pi - 1);
    let (mu, lambda, nu, mut exact) = if (d1 - d0) % denom == 0 && (d1 - d0) >= 0 {
        let mu = (d1 - d0) / denom;
        let lambda = d0 - mu * (pi - 1) * pi.pow(n0);
        let nu = t[0].1 - mu * pi.pow(n0) - lambda * n0 as i128;
        (mu, lambda, nu, true)
    } else {
        let tail: Vec<(u32, u64)> = t.iter().map(|&(n, v)| (n, v.max(0) as u64)).collect();
        (least_squares_leading(p, &tail).round().max(0.0) as i128, 0, 0, false)
    };
    if exact && seq.len() >= 4 {
        let (n, v) = seq[seq.len() - 4];
        exact = mu * pi.pow(n) + lambda * n as i128 + nu == v;
    }
    Ok(InvariantFit {
        unbounded: false,
        r: Some(r),
        r_exact,
        mu: Some(mu as u64),
        lambda: exact.then_some(lambda as i64),
        nu: exact.then_some(nu as i64),
        exact,
        source: if use_order { "order" } else { "mod_pn" }.into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::iwasawa::weierstrass_prepare;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn s(p: u64, c: &[i64]) -> LambdaSeries {
        LambdaSeries::from_i64(p, 30, 40, c).unwrap()
    }

    #[test]
    fn omega_mod_p_is_a_power_of_t() {
        let w = omega(3, 2, 3);
        assert_eq!(w.iter().filter(|&&c| c != 0).count(), 1);
        assert_eq!(w[9], 1);
    }

    #[test]
    fn lambda_mod_p() {
        let x = ModulePresentation::cyclic(vec![s(3, &[3])]).unwrap();
        let t = coinvariant_growth(&x, 0..=6).unwrap();
        for r in &t.rows {
            assert_eq!(r.dim_fp, 3u64.pow(r.n));
            assert_eq!(r.log_order, Some(3u64.pow(r.n)));
        }
        let f = fit_invariants(&t).unwrap();
        assert_eq!((f.r, f.mu, f.lambda), (Some(1), Some(1), Some(0)));
        assert!(f.exact && f.r_exact);
    }

    #[test]
    fn small_modules() {
        let x = ModulePresentation::cyclic(vec![s(3, &[3]), s(3, &[0, 1])]).unwrap();
        let t = coinvariant_growth(&x, 0..=4).unwrap();
        assert!(t.rows.iter().all(|r| r.dim_fp == 1));
        let f = fit_invariants(&t).unwrap();
        assert_eq!((f.r, f.mu), (Some(0), Some(0)));

        let x = ModulePresentation::cyclic(vec![s(3, &[3, 0, 1])]).unwrap();
        let f = fit_invariants(&coinvariant_growth(&x, 0..=5).unwrap()).unwrap();
        assert_eq!((f.r, f.mu, f.lambda), (Some(0), Some(0), Some(2)));

        let x = ModulePresentation::cyclic(vec![s(3, &[9])]).unwrap();
        let t = coinvariant_growth(&x, 0..=4).unwrap();
        assert_eq!(t.rows[3].log_order, Some(2 * 27));
        assert_eq!(fit_invariants(&t).unwrap().mu, Some(2));

        let zero = ModulePresentation::cyclic(vec![s(5, &[1])]).unwrap();
        let f = fit_invariants(&coinvariant_growth(&zero, 0..=3).unwrap()).unwrap();
        assert_eq!((f.r, f.mu), (Some(0), Some(0)));

        let free = ModulePresentation::new(3, 1, vec![]).unwrap();
        let t = coinvariant_growth(&free, 0..=3).unwrap();
        assert!(!t.torsion && fit_invariants(&t).unwrap().unbounded);

        assert!(fit_invariants(&GrowthTable { p: 3, torsion: true, rows: t.rows[..2].to_vec() }).is_err());
    }

    /// Classical `|X_n| = p^{μ p^n + λ n + ν}` for `Λ/(T − p)`, where `X_{Γ_n} = Z_p / ω_n(p)`.
    #[test]
    fn cyclic_order_matches_direct_valuation() {
        let x = ModulePresentation::cyclic(vec![s(3, &[-3, 1])]).unwrap();
        let t = coinvariant_growth(&x, 0..=4).unwrap();
        for r in &t.rows {
            // v_3((1 + 3)^{3^n} − 1) = n + 1
            assert_eq!(r.log_order, Some(r.n as u64 + 1));
        }
        let f = fit_invariants(&t).unwrap();
        assert_eq!((f.mu, f.lambda, f.nu), (Some(0), Some(1), Some(1)));
    }

    /// Upper-triangular presentations: `μ` agrees with the preparation of the
    /// determinant, `μ ≥ r`, and `r = 0` exactly when `μ = 0`.
    #[test]
    fn randomized_suite() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let p = 3u64;
        for _ in 0..24 {
            let g = rng.gen_range(1..=2usize);
            let mut rels = Vec::new();
            for i in 0..g {
                let mut row = Vec::new();
                for j in 0..g {
                    let c: Vec<i64> = if i == j {
                        let a = rng.gen_range(0..3u32);
                        let lam = rng.gen_range(0..3usize);
                        let mut c: Vec<i64> = (0..lam).map(|_| 3 * rng.gen_range(-2..3)).collect();
                        c.push(1);
                        c.iter().map(|x| x * 3i64.pow(a)).collect()
                    } else if j > i {
                        (0..3).map(|_| rng.gen_range(-4..5)).collect()
                    } else {
                        vec![]
                    };
                    row.push(s(p, &c));
                }
                rels.push(row);
            }
            let x = ModulePresentation::new(p, g, rels).unwrap();
            let t = coinvariant_growth(&x, 0..=4).unwrap();
            let f = fit_invariants(&t).unwrap();
            let mu_det = weierstrass_prepare(&x.annihilator().unwrap()).unwrap().mu as u64;
            assert_eq!(f.mu, Some(mu_det), "{t:?}");
            let (r, mu) = (f.r.unwrap(), f.mu.unwrap());
            assert!(mu >= r);
            assert_eq!(r == 0, mu == 0);
        }
    }
}
