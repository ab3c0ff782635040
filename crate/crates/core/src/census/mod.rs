//! Splitting of primes in abelian fields `Q(ζ_f)^H`, the count of inert
//! primes below `x^{1/ℓ}`, and the prime sets feeding ramification arguments.

mod sieve;

pub use sieve::{primes_between, primes_to, SIEVE_CAP};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{euler_phi, gcd, integer_root, is_prime, multiplicative_order, pow_mod};
use crate::error::{Error, Result};

/// The fixed field of `H ≤ (Z/f)^×` inside `Q(ζ_f)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbelianField {
    pub conductor: u64,
    pub subgroup: Vec<u64>,
}

impl AbelianField {
    pub fn new(conductor: u64, subgroup: &[u64]) -> Result<Self> {
        if conductor < 2 {
            return Err(Error::Invalid("conductor must be at least 2".into()));
        }
        let mut h: Vec<u64> = subgroup.iter().map(|&a| a % conductor).collect();
        h.sort_unstable();
        h.dedup();
        if h.is_empty() {
            h.push(1 % conductor);
        }
        if h.iter().any(|&a| gcd(a, conductor) != 1) {
            return Err(Error::Invalid("subgroup elements must be units".into()));
        }
        let closed = h
            .iter()
            .all(|&a| h.iter().all(|&b| h.binary_search(&(a * b % conductor)).is_ok()));
        if !closed || h.binary_search(&(1 % conductor)).is_err() {
            return Err(Error::Invalid(format!("{h:?} is not a subgroup of (Z/{conductor})^×")));
        }
        Ok(AbelianField { conductor, subgroup: h })
    }

    pub fn degree(&self) -> u64 {
        euler_phi(self.conductor) / self.subgroup.len() as u64
    }

    /// Smallest representative of the coset `a H`.
    pub fn coset_rep(&self, a: u64) -> u64 {
        let f = self.conductor;
        self.subgroup.iter().map(|&h| a % f * h % f).min().expect("nonempty")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Splitting {
    Split,
    /// Frobenius outside `H`; for prime degree this is inertia.
    Inert,
    Ramified,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusRow {
    pub q: u64,
    /// Coset representative of `q` in `(Z/f)^×/H`, 0 when ramified.
    pub frobenius: u64,
    pub class: Splitting,
    pub split: u64,
    pub inert: u64,
    pub ramified: u64,
}

pub fn classify(q: u64, field: &AbelianField) -> Result<CensusRow> {
    if !is_prime(q) {
        return Err(Error::Invalid(format!("{q} is not prime")));
    }
    let f = field.conductor;
    let class = if f % q == 0 {
        Splitting::Ramified
    } else if field.subgroup.binary_search(&(q % f)).is_ok() {
        Splitting::Split
    } else {
        Splitting::Inert
    };
    Ok(CensusRow {
        q,
        frobenius: if class == Splitting::Ramified { 0 } else { field.coset_rep(q) },
        class,
        split: (class == Splitting::Split) as u64,
        inert: (class == Splitting::Inert) as u64,
        ramified: (class == Splitting::Ramified) as u64,
    })
}

/// Every prime up to `x` with running counts.
pub fn census_rows(field: &AbelianField, x: u64) -> Result<Vec<CensusRow>> {
    let primes = primes_to(x)?;
    let mut rows: Vec<CensusRow> = primes.par_iter().map(|&q| classify(q, field)).collect::<Result<_>>()?;
    let (mut s, mut i, mut r) = (0, 0, 0);
    for row in rows.iter_mut() {
        s += row.split;
        i += row.inert;
        r += row.ramified;
        (row.split, row.inert, row.ramified) = (s, i, r);
    }
    Ok(rows)
}

pub fn rows_to_csv(rows: &[CensusRow]) -> String {
    let mut out = String::from("q,frobenius,class,split,inert,ramified\n");
    for r in rows {
        let c = match r.class {
            Splitting::Split => "split",
            Splitting::Inert => "inert",
            Splitting::Ramified => "ramified",
        };
        out.push_str(&format!("{},{},{},{},{},{}\n", r.q, r.frobenius, c, r.split, r.inert, r.ramified));
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CensusSummary {
    pub field: AbelianField,
    pub degree: u64,
    pub x: u64,
    pub primes: u64,
    pub split: u64,
    pub inert: u64,
    pub ramified: u64,
    pub split_density: f64,
    pub inert_density: f64,
    /// `|H|/φ(f)`.
    pub expected_split: f64,
}

pub fn census_summary(field: &AbelianField, x: u64) -> Result<CensusSummary> {
    let primes = primes_to(x)?;
    let (split, inert, ramified) = primes
        .par_iter()
        .map(|&q| {
            let r = classify(q, field).expect("sieve output is prime");
            (r.split, r.inert, r.ramified)
        })
        .reduce(|| (0, 0, 0), |a, b| (a.0 + b.0, a.1 + b.1, a.2 + b.2));
    let total = primes.len() as u64;
    let dens = |c: u64| if total == 0 { 0.0 } else { c as f64 / total as f64 };
    Ok(CensusSummary {
        degree: field.degree(),
        field: field.clone(),
        x,
        primes: total,
        split,
        inert,
        ramified,
        split_density: dens(split),
        inert_density: dens(inert),
        expected_split: 1.0 / field.degree() as f64,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PiSplit {
    pub x: u64,
    pub ell: u64,
    /// `⌊x^{1/ℓ}⌋`.
    pub y: u64,
    /// Unramified primes `q ≤ y` with nontrivial Frobenius.
    pub count: u64,
    /// `y / log y`.
    pub reference: f64,
    pub ratio: f64,
    /// `(1 − 1/ℓ) π(y)`.
    pub chebotarev_expectation: f64,
}

/// Primes `q` inert in the degree-`ℓ` field with `q^ℓ ≤ x`, against `x^{1/ℓ}/log x^{1/ℓ}`.
pub fn pi_split_statistic(x: u64, ell: u64, field: &AbelianField) -> Result<PiSplit> {
    if !is_prime(ell) {
        return Err(Error::Invalid(format!("ℓ = {ell} is not prime")));
    }
    if x < 100 {
        return Err(Error::Invalid("x must be at least 100".into()));
    }
    if field.degree() != ell {
        return Err(Error::Mismatch(format!("field has degree {}, not {ell}", field.degree())));
    }
    let y = integer_root(x, ell as u32);
    let primes = primes_to(y)?;
    let count = primes
        .iter()
        .filter(|&&q| classify(q, field).expect("prime").class == Splitting::Inert)
        .count() as u64;
    let reference = y as f64 / (y as f64).ln();
    Ok(PiSplit {
        x,
        ell,
        y,
        count,
        reference,
        ratio: count as f64 / reference,
        chebotarev_expectation: (1.0 - 1.0 / ell as f64) * primes.len() as f64,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstantEstimate {
    pub grid: Vec<PiSplit>,
    /// Smallest ratio on the grid; an empirical stand-in for the constant.
    pub min_ratio: f64,
}

/// `pi_split_statistic` on `points` log-spaced values of `x` in `[100, x_max]`.
pub fn split_constant(ell: u64, field: &AbelianField, x_max: u64, points: usize) -> Result<ConstantEstimate> {
    if points < 2 || x_max < 100 {
        return Err(Error::Invalid("need at least two grid points and x_max ≥ 100".into()));
    }
    let (a, b) = (100f64.ln(), (x_max as f64).ln());
    let mut grid: Vec<PiSplit> = (0..points)
        .map(|i| {
            let x = (a + (b - a) * i as f64 / (points - 1) as f64).exp().round() as u64;
            pi_split_statistic(x.clamp(100, x_max), ell, field)
        })
        .collect::<Result<_>>()?;
    grid.dedup_by_key(|g| g.x);
    let min_ratio = grid.iter().map(|g| g.ratio).fold(f64::INFINITY, f64::min);
    Ok(ConstantEstimate { grid, min_ratio })
}

/// The first `t` primes `ℓ ≡ 1 (mod p)` below `bound`.
pub fn admissible_s(p: u64, t: usize, bound: u64) -> Result<Vec<u64>> {
    if !is_prime(p) || p == 2 {
        return Err(Error::Invalid(format!("p = {p} must be an odd prime")));
    }
    let found: Vec<u64> = primes_to(bound)?.into_iter().filter(|&l| l % p == 1).take(t).collect();
    if found.len() < t {
        return Err(Error::InsufficientData(format!(
            "only {} primes ≡ 1 mod {p} below {bound}: {found:?}",
            found.len()
        )));
    }
    Ok(found)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FreeTSelection {
    pub p: u64,
    pub bound: u64,
    pub primes: Vec<u64>,
    /// Candidates rejected, with the failed condition.
    pub rejected: Vec<(u64, String)>,
}

/// `ℓ` inert in `Q(ζ_p)` (a primitive root mod `p`) with `p² ∤ ℓ^{p−1} − 1`.
pub fn qualifies_for_t(p: u64, l: u64) -> std::result::Result<(), String> {
    if l == p {
        return Err("ramified".into());
    }
    if multiplicative_order(l % p, p) != Some(p - 1) {
        return Err("not a primitive root mod p".into());
    }
    if pow_mod(l % (p * p), p - 1, p * p) == 1 {
        return Err("p² divides ℓ^(p−1) − 1".into());
    }
    Ok(())
}

pub fn select_free_t(p: u64, bound: u64) -> Result<FreeTSelection> {
    let reg = crate::prationality::is_regular_prime(p)?;
    if !reg.regular {
        return Err(Error::Hypothesis(format!("{p} is irregular")));
    }
    let mut primes = Vec::new();
    let mut rejected = Vec::new();
    for l in primes_to(bound)? {
        match qualifies_for_t(p, l) {
            Ok(()) => primes.push(l),
            Err(why) => rejected.push((l, why)),
        }
    }
    Ok(FreeTSelection { p, bound, primes, rejected })
}
