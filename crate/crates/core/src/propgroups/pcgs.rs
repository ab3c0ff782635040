//! Subgroups of coordinate quotients by triangular generating tables, and
//! the series built from them.
//!
//! A table holds, for each coordinate `i`, at most one element whose first
//! nonzero coordinate is `i` and equals `p^{w_i}`. Closing the table under
//! relative powers and commutators (and conjugation, for normal closures)
//! makes every element of the subgroup a unique product `∏ t_i^{e_i}`.

use serde::{Deserialize, Serialize};

use super::law::{Elem, FiniteQuotient, GroupLaw};
use crate::arith::{inv_mod, valuation};
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct Subgroup {
    q: FiniteQuotient,
    table: Vec<Option<Elem>>,
}

impl Subgroup {
    pub fn trivial(q: &FiniteQuotient) -> Self {
        Subgroup {
            q: q.clone(),
            table: vec![None; q.dim()],
        }
    }

    /// Subgroup generated by `gens`; normal closure under `normalizers` when given.
    pub fn generated(q: &FiniteQuotient, gens: &[Elem], normalizers: &[Elem]) -> Self {
        let mut s = Self::trivial(q);
        s.extend(gens, normalizers);
        s
    }

    pub fn whole(q: &FiniteQuotient) -> Self {
        Self::generated(q, &q.generators(), &[])
    }

    pub fn quotient(&self) -> &FiniteQuotient {
        &self.q
    }

    fn lead(&self, g: &[u64]) -> Option<(usize, u32)> {
        let i = g.iter().position(|&c| c != 0)?;
        Some((i, valuation(g[i], self.q.p)))
    }

    fn weight(&self, i: usize) -> Option<u32> {
        self.table[i].as_ref().map(|t| valuation(t[i], self.q.p))
    }

    /// `g^k` with leading coordinate exactly `p^v`.
    fn normalize(&self, g: &[u64], i: usize, v: u32) -> Elem {
        let m = self.q.moduli[i];
        let u = g[i] / self.q.p.pow(v);
        let k = inv_mod(u % m, m).expect("unit part");
        self.q.pow(g, k)
    }

    /// Divides `g` by table elements as far as possible.
    fn sift(&self, g: &[u64]) -> Elem {
        let mut g = g.to_vec();
        for i in 0..self.q.dim() {
            if g[i] == 0 {
                continue;
            }
            let v = valuation(g[i], self.q.p);
            let Some(w) = self.weight(i) else { return g };
            if v < w {
                return g;
            }
            let t = self.table[i].as_ref().expect("weight implies entry");
            let k = g[i] / self.q.p.pow(w);
            g = self.q.mul(&g, &self.q.pow_signed(t, -(k as i128)));
        }
        g
    }

    pub fn contains(&self, g: &[u64]) -> bool {
        self.q.is_identity(&self.sift(g))
    }

    pub fn extend(&mut self, gens: &[Elem], normalizers: &[Elem]) {
        let mut queue: Vec<Elem> = gens.to_vec();
        while let Some(g) = queue.pop() {
            let g = self.sift(&g);
            let Some((i, v)) = self.lead(&g) else { continue };
            let t = self.normalize(&g, i, v);
            if let Some(old) = self.table[i].replace(t.clone()) {
                queue.push(old);
            }
            let rel = self.q.moduli[i] / self.q.p.pow(v);
            queue.push(self.q.pow(&t, rel));
            for other in self.table.iter().flatten() {
                queue.push(self.q.comm(&t, other));
            }
            for h in normalizers {
                queue.push(self.q.conj(&t, h));
            }
        }
    }

    /// `log_p |H|`.
    pub fn order_log(&self) -> u32 {
        self.table
            .iter()
            .enumerate()
            .filter_map(|(i, t)| {
                t.as_ref()
                    .map(|t| valuation(self.q.moduli[i], self.q.p) - valuation(t[i], self.q.p))
            })
            .sum()
    }

    pub fn is_trivial(&self) -> bool {
        self.table.iter().all(|t| t.is_none())
    }

    /// Table elements, in coordinate order.
    pub fn generators(&self) -> Vec<Elem> {
        self.table.iter().flatten().cloned().collect()
    }

    /// Exponents `w_i` when `H = {g : p^{w_i} | g_i}` exactly.
    pub fn box_form(&self) -> Option<Vec<u32>> {
        let p = self.q.p;
        let w: Vec<u32> = (0..self.q.dim())
            .map(|i| self.weight(i).unwrap_or(valuation(self.q.moduli[i], p)))
            .collect();
        let inside = self
            .table
            .iter()
            .flatten()
            .all(|t| t.iter().enumerate().all(|(j, &c)| c % p.pow(w[j]) == 0));
        inside.then_some(w)
    }

    pub fn same_as(&self, other: &Subgroup) -> bool {
        self.order_log() == other.order_log() && self.generators().iter().all(|g| other.contains(g))
    }
}

/// `Γ_1, …, Γ_count` with `Γ_{k+1} = Γ_k^p [Γ, Γ_k]`, in the quotient `q`.
pub fn p_central_series(q: &FiniteQuotient, count: usize) -> Vec<Subgroup> {
    let gens = q.generators();
    let mut out = vec![Subgroup::whole(q)];
    while out.len() < count {
        let last = out.last().expect("nonempty");
        let mut new_gens = Vec::new();
        for t in last.generators() {
            new_gens.push(q.pow(&t, q.p));
            for g in &gens {
                new_gens.push(q.comm(g, &t));
            }
        }
        out.push(Subgroup::generated(q, &new_gens, &gens));
    }
    out
}

/// `γ_1 = G, γ_{k+1} = [G, γ_k]` until it becomes trivial.
pub fn lower_central_series(q: &FiniteQuotient) -> Vec<Subgroup> {
    let gens = q.generators();
    let mut out = vec![Subgroup::whole(q)];
    while !out.last().expect("nonempty").is_trivial() {
        let last = out.last().expect("nonempty");
        let new_gens: Vec<Elem> = last
            .generators()
            .iter()
            .flat_map(|t| gens.iter().map(|g| q.comm(g, t)).collect::<Vec<_>>())
            .collect();
        out.push(Subgroup::generated(q, &new_gens, &gens));
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NilpotencyReport {
    pub law: GroupLaw,
    pub p: u64,
    pub level: u32,
    pub class: usize,
    /// `log_p |γ_k|` for `k = 1, 2, …`.
    pub series_orders: Vec<u32>,
}

pub fn nilpotency_class(q: &FiniteQuotient) -> NilpotencyReport {
    let series = lower_central_series(q);
    NilpotencyReport {
        law: q.law,
        p: q.p,
        level: q.level,
        class: series.len() - 1,
        series_orders: series.iter().map(|h| h.order_log()).collect(),
    }
}

fn working_level(law: GroupLaw, n: u32) -> u32 {
    match law {
        GroupLaw::Gamma { s } | GroupLaw::GammaTorsion { s } => n + s + 2,
        GroupLaw::Abelian { .. } => n + 1,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesLevel {
    pub n: u32,
    /// `log_p [Γ : Γ_n]`.
    pub index_log: u32,
    /// `Γ_n = {g : p^{e_i} | g_i}` when that description was verified.
    pub coordinate_form: Option<Vec<u32>>,
    pub generators: Vec<Elem>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PCentralReport {
    pub law: GroupLaw,
    pub p: u64,
    pub working_level: u32,
    pub levels: Vec<SeriesLevel>,
    /// `log_p [Γ : Γ_n] = d (n − 1)` at every level.
    pub uniform_indices: bool,
}

/// The p-central series down to `Γ_n`, computed by closure in a quotient deep
/// enough that the index is stable.
pub fn p_central_series_level(law: GroupLaw, p: u64, n: u32) -> Result<PCentralReport> {
    if n == 0 {
        return Err(Error::Invalid("series levels start at 1".into()));
    }
    let mut level = working_level(law, n);
    let compute = |level: u32| -> Result<Vec<Subgroup>> {
        let q = FiniteQuotient::new(law, p, level)?;
        Ok(p_central_series(&q, n as usize))
    };
    let indices = |s: &[Subgroup]| -> Vec<u32> {
        let total = s[0].order_log();
        s.iter().map(|h| total - h.order_log()).collect()
    };
    let mut series = compute(level)?;
    loop {
        let deeper = compute(level + 1)?;
        if indices(&series) == indices(&deeper) {
            break;
        }
        if level > working_level(law, n) + 4 {
            return Err(Error::Resource(format!("p-central series of {} did not stabilise", law.name())));
        }
        level += 1;
        series = deeper;
    }
    let idx = indices(&series);
    let d = law.dim() as u32;
    let levels: Vec<SeriesLevel> = series
        .iter()
        .zip(&idx)
        .enumerate()
        .map(|(k, (h, &i))| SeriesLevel {
            n: k as u32 + 1,
            index_log: i,
            coordinate_form: h.box_form(),
            generators: h.generators(),
        })
        .collect();
    Ok(PCentralReport {
        law,
        p,
        working_level: level,
        uniform_indices: idx.iter().enumerate().all(|(k, &i)| i == d * k as u32),
        levels,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UniformityWitness {
    /// Slice `Γ_i/Γ_{i+1}` where the p-th power map fails.
    pub i: u32,
    pub reason: String,
    pub element: Option<Elem>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UniformityReport {
    pub law: GroupLaw,
    pub p: u64,
    pub n_max: u32,
    pub powerful: bool,
    /// `log_p |Γ_i/Γ_{i+1}|` for `i = 1..=n_max + 1`.
    pub slice_dims: Vec<u32>,
    pub uniform: bool,
    pub witness: Option<UniformityWitness>,
}

/// Powerfulness on generator commutators and bijectivity of
/// `x -> x^p : Γ_i/Γ_{i+1} -> Γ_{i+1}/Γ_{i+2}` for `i ≤ n_max`.
pub fn uniformity_check(law: GroupLaw, p: u64, n_max: u32) -> Result<UniformityReport> {
    let level = working_level(law, n_max + 2);
    let q = FiniteQuotient::new(law, p, level)?;
    let gens = q.generators();
    let series = p_central_series(&q, n_max as usize + 3);
    let slice_dims: Vec<u32> = series.windows(2).map(|w| w[0].order_log() - w[1].order_log()).collect();

    let e = if p == 2 { 4 } else { p };
    let powers: Vec<Elem> = gens.iter().map(|g| q.pow(g, e)).collect();
    let gp = Subgroup::generated(&q, &powers, &gens);
    let mut witness = None;
    let mut powerful = true;
    'outer: for g in &gens {
        for h in &gens {
            let c = q.comm(g, h);
            if !gp.contains(&c) {
                powerful = false;
                witness = Some(UniformityWitness {
                    i: 0,
                    reason: "a generator commutator is not a p-th power".into(),
                    element: Some(c),
                });
                break 'outer;
            }
        }
    }

    for i in 0..n_max as usize {
        if witness.is_some() {
            break;
        }
        let (gi, gi1, gi2) = (&series[i], &series[i + 1], &series[i + 2]);
        let mut image = gi2.clone();
        image.extend(&gi.generators().iter().map(|t| q.pow(t, p)).collect::<Vec<_>>(), &[]);
        let injective_dims = slice_dims[i] == slice_dims[i + 1];
        if injective_dims && image.same_as(gi1) {
            continue;
        }
        // a kernel element: h ∈ Γ_i \ Γ_{i+1} with h^p ∈ Γ_{i+2}
        let table = gi.generators();
        let combos = p.checked_pow(table.len() as u32).filter(|&c| c <= 1 << 16);
        let kernel = combos.and_then(|c| {
            (1..c).find_map(|mut idx| {
                let mut h = q.identity();
                for t in &table {
                    h = q.mul(&h, &q.pow(t, idx % p));
                    idx /= p;
                }
                (!gi1.contains(&h) && gi2.contains(&q.pow(&h, p))).then_some(h)
            })
        });
        witness = Some(match kernel {
            Some(h) => UniformityWitness {
                i: i as u32 + 1,
                reason: "the p-th power map is not injective".into(),
                element: Some(h),
            },
            None => {
                let missing = gi1.generators().into_iter().find(|g| !image.contains(g));
                UniformityWitness {
                    i: i as u32 + 1,
                    reason: format!(
                        "the p-th power map is not surjective (|Γ_i/Γ_i+1| = p^{}, |Γ_i+1/Γ_i+2| = p^{})",
                        slice_dims[i],
                        slice_dims[i + 1]
                    ),
                    element: missing,
                }
            }
        });
    }
    Ok(UniformityReport {
        law,
        p,
        n_max,
        powerful,
        uniform: witness.is_none(),
        slice_dims,
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    /// Subgroup generated by `gens` by breadth-first multiplication.
    fn brute_closure(q: &FiniteQuotient, gens: &[Elem]) -> BTreeSet<Elem> {
        let mut seen = BTreeSet::new();
        seen.insert(q.identity());
        let mut frontier = vec![q.identity()];
        while let Some(g) = frontier.pop() {
            for h in gens {
                let gh = q.mul(&g, h);
                if seen.insert(gh.clone()) {
                    frontier.push(gh);
                }
            }
        }
        seen
    }

    #[test]
    fn closure_matches_brute_force() {
        let q = FiniteQuotient::new(GroupLaw::Gamma { s: 0 }, 3, 2).unwrap();
        let cases: Vec<Vec<Elem>> = vec![
            vec![vec![1, 0, 0]],
            vec![vec![3, 0, 0], vec![0, 1, 0]],
            vec![vec![1, 1, 0], vec![0, 3, 4]],
            vec![vec![2, 5, 7], vec![4, 0, 1]],
            vec![vec![0, 0, 3]],
        ];
        for gens in cases {
            let h = Subgroup::generated(&q, &gens, &[]);
            let brute = brute_closure(&q, &gens);
            assert_eq!(3u64.pow(h.order_log()) as usize, brute.len(), "{gens:?}");
            for idx in 0..q.order() {
                let g = q.element(idx);
                assert_eq!(h.contains(&g), brute.contains(&g));
            }
        }
    }

    #[test]
    fn index_formula_for_uniform_gamma() {
        for s in 1..3 {
            let r = p_central_series_level(GroupLaw::Gamma { s }, 7, 4).unwrap();
            assert!(r.uniform_indices);
            for l in &r.levels {
                assert_eq!(l.index_log, 3 * (l.n - 1));
                assert_eq!(l.coordinate_form, Some(vec![l.n - 1; 3]));
            }
        }
        // [Γ : Γ_2] = p^3 for every s
        for s in 0..3 {
            let r = p_central_series_level(GroupLaw::Gamma { s }, 7, 2).unwrap();
            let expect = if s == 0 { 2 } else { 3 };
            assert_eq!(r.levels[1].index_log, expect, "s = {s}");
        }
        let r = p_central_series_level(GroupLaw::Abelian { d: 2 }, 5, 4).unwrap();
        assert_eq!(r.levels[3].index_log, 6);
    }

    #[test]
    fn uniformity() {
        for s in 1..3 {
            let r = uniformity_check(GroupLaw::Gamma { s }, 7, 4).unwrap();
            assert!(r.uniform && r.powerful, "s = {s}");
        }
        assert!(uniformity_check(GroupLaw::Abelian { d: 3 }, 5, 4).unwrap().uniform);
        let r = uniformity_check(GroupLaw::Gamma { s: 0 }, 7, 4).unwrap();
        assert!(!r.uniform && !r.powerful);
        // torsion injected into c: z is a nontrivial kernel element of x -> x^p
        let r = uniformity_check(GroupLaw::GammaTorsion { s: 1 }, 7, 3).unwrap();
        assert!(!r.uniform);
        let w = r.witness.unwrap();
        let h = w.element.unwrap();
        assert_eq!((h[0], h[1]), (0, 0));
        assert_ne!(h[2], 0);
        assert!(w.reason.contains("injective"));
    }

    #[test]
    fn nilpotency() {
        let q = FiniteQuotient::new(GroupLaw::Gamma { s: 0 }, 7, 2).unwrap();
        assert_eq!(nilpotency_class(&q).class, 2);
        let q = FiniteQuotient::new(GroupLaw::Gamma { s: 2 }, 7, 1).unwrap();
        assert_eq!(nilpotency_class(&q).class, 1);
        let q = FiniteQuotient::new(GroupLaw::Abelian { d: 3 }, 5, 3).unwrap();
        assert_eq!(nilpotency_class(&q).class, 1);
        let q = FiniteQuotient::new(GroupLaw::Gamma { s: 1 }, 5, 4).unwrap();
        let r = nilpotency_class(&q);
        assert_eq!(r.class, 2);
        assert_eq!(r.series_orders, vec![12, 3, 0]);
    }
}
