//! Virtual characters of a cyclic group `Δ = <σ>` of order `m`, stored as
//! multiplicity vectors over the degree-one characters `χ_j(σ) = ξ^j`.

use serde::{Deserialize, Serialize};

use crate::arith::gcd;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CharacterVec {
    pub m: u64,
    pub mult: Vec<i64>,
}

impl CharacterVec {
    pub fn zero(m: u64) -> Self {
        assert!(m >= 1);
        CharacterVec {
            m,
            mult: vec![0; m as usize],
        }
    }

    pub fn from_mult(mult: Vec<i64>) -> Self {
        assert!(!mult.is_empty());
        CharacterVec {
            m: mult.len() as u64,
            mult,
        }
    }

    /// The trivial character `1`.
    pub fn trivial(m: u64) -> Self {
        Self::delta(m, 0)
    }

    /// `χ_j`.
    pub fn delta(m: u64, j: u64) -> Self {
        let mut c = Self::zero(m);
        c.mult[(j % m) as usize] = 1;
        c
    }

    pub fn regular(m: u64) -> Self {
        CharacterVec {
            m,
            mult: vec![1; m as usize],
        }
    }

    /// Non-negative multiplicities.
    pub fn is_genuine(&self) -> bool {
        self.mult.iter().all(|&x| x >= 0)
    }

    pub fn degree(&self) -> i64 {
        self.mult.iter().sum()
    }

    fn same_group(&self, other: &Self) -> Result<()> {
        if self.m != other.m {
            return Err(Error::Mismatch(format!(
                "characters of groups of order {} and {}",
                self.m, other.m
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_group(other)?;
        Ok(CharacterVec {
            m: self.m,
            mult: self.mult.iter().zip(&other.mult).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_group(other)?;
        Ok(CharacterVec {
            m: self.m,
            mult: self.mult.iter().zip(&other.mult).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn scale(&self, k: i64) -> Self {
        CharacterVec {
            m: self.m,
            mult: self.mult.iter().map(|a| a * k).collect(),
        }
    }

    pub fn inner(&self, other: &Self) -> Result<i64> {
        self.same_group(other)?;
        Ok(self.mult.iter().zip(&other.mult).map(|(a, b)| a * b).sum())
    }

    /// Restriction to the subgroup `<σ^{m/m'}>` of order `m'`.
    pub fn restrict(&self, m_sub: u64) -> Result<Self> {
        if m_sub == 0 || self.m % m_sub != 0 {
            return Err(Error::Invalid(format!("{m_sub} does not divide {}", self.m)));
        }
        let mut out = Self::zero(m_sub);
        for (j, &a) in self.mult.iter().enumerate() {
            out.mult[j % m_sub as usize] += a;
        }
        Ok(out)
    }

    /// Induction from the subgroup of order `self.m` to the group of order `m`.
    pub fn induce(&self, m: u64) -> Result<Self> {
        if self.m == 0 || m % self.m != 0 {
            return Err(Error::Invalid(format!("{} does not divide {m}", self.m)));
        }
        let mut out = Self::zero(m);
        for j in 0..m as usize {
            out.mult[j] = self.mult[j % self.m as usize];
        }
        Ok(out)
    }

    /// The twist `ψ -> ω ψ^{-1}` with `ω = χ_w`: `χ_k -> χ_{w-k}`.
    pub fn omega_dual(&self, w: u64) -> Self {
        let m = self.m as i64;
        let mut out = Self::zero(self.m);
        for (k, &a) in self.mult.iter().enumerate() {
            out.mult[(w as i64 - k as i64).rem_euclid(m) as usize] += a;
        }
        out
    }
}

/// True iff every nontrivial element of `Δ` acts without fixed points on a
/// module with character `χ`: `<Res_{<τ>} χ, 1> = 0` for all `τ ≠ 1`.
pub fn fpf_criterion(chi: &CharacterVec) -> Result<bool> {
    if !chi.is_genuine() {
        return Err(Error::Invalid("fixed-point criterion needs a genuine character".into()));
    }
    let m = chi.m;
    for t in 1..m.max(2) {
        if m == 1 {
            break;
        }
        let order = m / gcd(t, m);
        let r = chi.restrict(order)?;
        if r.mult[0] != 0 {
            return Ok(false);
        }
    }
    // m = 1: only the identity acts, which is never fixed-point-free on a nonzero module
    Ok(m > 1 || chi.degree() == 0)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Realizability {
    pub d: u64,
    pub m: u64,
    pub k0_degree: u64,
    pub p: u64,
    pub n: u32,
    /// `χ(F/F_2) = ([K_0':Q]/2) p^n χ_reg + 1`.
    pub free_quotient: CharacterVec,
    /// Smallest coefficient of `χ(F/F_2)`, the binding multiplicity.
    pub min_multiplicity: i64,
    /// Every character of degree `d` embeds iff `min_multiplicity >= d`.
    pub embeddable: bool,
    /// Closed form `[K_0':Q] p^n >= 2d`.
    pub closed_form: bool,
    /// A degree-`d` character that fails to embed, when one exists.
    pub witness: Option<CharacterVec>,
}

/// Feasibility of embedding every `Δ`-module of dimension `d` into `F/F_2`.
pub fn realizability_check(d: u64, m: u64, k0_degree: u64, p: u64, n: u32) -> Result<Realizability> {
    if m == 0 || gcd(m, p) != 1 {
        return Err(Error::Invalid(format!("m = {m} must be positive and prime to p = {p}")));
    }
    if k0_degree % 2 != 0 {
        return Err(Error::Invalid("K_0' must be totally imaginary (even degree)".into()));
    }
    let pn = p
        .checked_pow(n)
        .filter(|&x| x < i64::MAX as u64 / k0_degree.max(1))
        .ok_or_else(|| Error::Resource(format!("{p}^{n} overflows")))?;
    let coef = (k0_degree / 2 * pn) as i64;
    let free_quotient = CharacterVec::regular(m)
        .scale(coef)
        .add(&CharacterVec::trivial(m))?;
    // the worst candidate of degree d puts all its mass on one character, and
    // the nontrivial characters carry the smaller coefficient
    let (min_idx, &min_multiplicity) = free_quotient
        .mult
        .iter()
        .enumerate()
        .min_by_key(|(i, &x)| (x, *i == 0))
        .expect("nonempty");
    let embeddable = min_multiplicity >= d as i64;
    let witness = (!embeddable).then(|| CharacterVec::delta(m, min_idx as u64).scale(d as i64));
    Ok(Realizability {
        d,
        m,
        k0_degree,
        p,
        n,
        free_quotient,
        min_multiplicity,
        embeddable,
        closed_form: k0_degree * pn >= 2 * d,
        witness,
    })
}

/// Place counts entering the mirror identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct MirrorInput {
    /// `r = r_1(K_0) + r_2(K_0)`.
    pub r: u64,
    pub m: u64,
    /// Index `w` with `ω = χ_w`.
    pub omega: u64,
    pub s_split: u64,
    pub s_inert: u64,
    pub t_split: u64,
    pub t_inert: u64,
}

/// Right-hand side `r χ_reg + ω − 1 + |S_inert| 1 + |S_split| χ_reg − |T_split| χ_reg − |T_inert| ω`.
pub fn mirror_rhs(x: &MirrorInput) -> CharacterVec {
    let m = x.m;
    let reg = CharacterVec::regular(m);
    let one = CharacterVec::trivial(m);
    let om = CharacterVec::delta(m, x.omega);
    let mut c = reg.scale(x.r as i64);
    c = c.add(&om).unwrap();
    c = c.sub(&one).unwrap();
    c = c.add(&one.scale(x.s_inert as i64)).unwrap();
    c = c.add(&reg.scale(x.s_split as i64)).unwrap();
    c = c.sub(&reg.scale(x.t_split as i64)).unwrap();
    c.sub(&om.scale(x.t_inert as i64)).unwrap()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MirrorSolution {
    pub input: MirrorInput,
    pub rhs: CharacterVec,
    /// `χ(A_S^T)`.
    pub a_s_t: CharacterVec,
    /// `χ(A_T^S)`.
    pub a_t_s: CharacterVec,
    /// Both sides are genuine characters.
    pub consistent: bool,
}

/// Given `χ(A_S^T)`, solve for `χ(A_T^S) = ω χ^{-1}(A_S^T) − RHS`.
pub fn mirror_solve_t(x: &MirrorInput, a_s_t: &CharacterVec) -> Result<MirrorSolution> {
    let rhs = mirror_rhs(x);
    let a_t_s = a_s_t.omega_dual(x.omega).sub(&rhs)?;
    Ok(MirrorSolution {
        input: *x,
        consistent: a_s_t.is_genuine() && a_t_s.is_genuine(),
        rhs,
        a_s_t: a_s_t.clone(),
        a_t_s,
    })
}

/// Given `χ(A_T^S)`, solve for `χ(A_S^T) = ω (χ(A_T^S) + RHS)^{-1}`.
pub fn mirror_solve_s(x: &MirrorInput, a_t_s: &CharacterVec) -> Result<MirrorSolution> {
    let rhs = mirror_rhs(x);
    let a_s_t = a_t_s.add(&rhs)?.omega_dual(x.omega);
    Ok(MirrorSolution {
        input: *x,
        consistent: a_s_t.is_genuine() && a_t_s.is_genuine(),
        rhs,
        a_s_t,
        a_t_s: a_t_s.clone(),
    })
}

/// The scenario with `S = S_p` a single inert place and `|T| = r + 1` inert
/// places chosen so that `χ(A_S^T) = χ(A_S) − |T|·1`, where `χ(A_S) = r χ_reg + 1`.
pub fn mirror_split_scenario(r: u64, m: u64, omega: u64) -> Result<MirrorSolution> {
    let input = MirrorInput {
        r,
        m,
        omega,
        s_split: 0,
        s_inert: 1,
        t_split: 0,
        t_inert: r + 1,
    };
    let a_s = CharacterVec::regular(m).scale(r as i64).add(&CharacterVec::trivial(m))?;
    let a_s_t = a_s.sub(&CharacterVec::trivial(m).scale((r + 1) as i64))?;
    mirror_solve_t(&input, &a_s_t)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct KochShafarevichInput {
    pub r1: u64,
    pub r2: u64,
    pub s: u64,
    pub t: u64,
    /// `d_p A_T^S`.
    pub dp_a_ts: u64,
    /// `Σ_{v ∈ S ∩ S_p} [K_v : Q_p]`.
    pub local_degree_sum: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct KochShafarevich {
    pub input: KochShafarevichInput,
    /// `d_p G_S^T`.
    pub rank: i64,
    /// Upper bound for `d_p H^2(G_S^T, F_p)`.
    pub h2_bound: i64,
    pub free: bool,
}

pub fn koch_shafarevich(x: KochShafarevichInput) -> KochShafarevich {
    let rank = x.dp_a_ts as i64 + x.s as i64 - x.t as i64 - (x.r1 + x.r2) as i64 + x.local_degree_sum as i64;
    let h2_bound = x.dp_a_ts as i64 + x.s as i64 - 1;
    KochShafarevich {
        input: x,
        rank,
        h2_bound,
        free: h2_bound <= 0,
    }
}

/// Lower bound `d_p A_T^S ≥ |T| − (r_1 + r_2 + |S|)` obtained by reversing `S` and `T`.
pub fn reversal_lower_bound(r1: u64, r2: u64, s: u64, t: u64) -> i64 {
    t as i64 - (r1 + r2 + s) as i64
}

/// Genus bound `d_p A(L) ≥ |S| − 1 + d_p O_K^×`.
pub fn genus_bound(s: u64, dp_units: u64) -> i64 {
    s as i64 - 1 + dp_units as i64
}

/// Certified floor `max(0, |S| − r_2(F))` for `μ`.
pub fn mu_lower_bound(s: u64, r2: u64) -> u64 {
    s.saturating_sub(r2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn arb_char(m: u64) -> impl Strategy<Value = CharacterVec> {
        proptest::collection::vec(-5i64..6, m as usize).prop_map(CharacterVec::from_mult)
    }

    #[test]
    fn basics() {
        for m in 1..8 {
            let reg = CharacterVec::regular(m);
            let one = CharacterVec::trivial(m);
            assert_eq!(reg.inner(&one).unwrap(), 1);
            assert_eq!(one.induce(m).unwrap(), one);
            assert_eq!(CharacterVec::trivial(1).induce(m).unwrap(), reg);
        }
        // Γ(s)'s character: 2χ_ζ + χ_{ζ²} against the trivial character
        let chi = CharacterVec::from_mult(vec![0, 2, 1]);
        let ind = CharacterVec::trivial(3).induce(3).unwrap();
        assert_eq!(chi.inner(&ind).unwrap(), 0);
        assert!(CharacterVec::from_mult(vec![1, 2]).restrict(3).is_err());
    }

    #[test]
    fn fpf() {
        assert!(!fpf_criterion(&CharacterVec::regular(3)).unwrap());
        let action = CharacterVec::regular(3).add(&CharacterVec::trivial(3)).unwrap();
        assert!(!fpf_criterion(&action).unwrap());
        assert!(fpf_criterion(&CharacterVec::from_mult(vec![0, 2, 1])).unwrap());
        // order 4: χ_2 is fixed by σ^2
        assert!(!fpf_criterion(&CharacterVec::from_mult(vec![0, 1, 1, 0])).unwrap());
        assert!(fpf_criterion(&CharacterVec::from_mult(vec![0, 1, 0, 3])).unwrap());
        assert!(fpf_criterion(&CharacterVec::from_mult(vec![0, -1, 0])).is_err());
    }

    #[test]
    fn realizability() {
        // d = 3, m = 3, [K_0':Q] = 2: embeddable iff p^n >= 3
        for (p, n) in [(7u64, 0u32), (7, 1), (2, 1), (2, 2), (5, 1)] {
            let r = realizability_check(3, 3, 2, p, n).unwrap();
            assert_eq!(r.embeddable, r.closed_form, "p = {p}, n = {n}");
            assert_eq!(r.embeddable, 2 * p.pow(n) >= 6);
            assert_eq!(r.witness.is_some(), !r.embeddable);
        }
        let r = realizability_check(3, 3, 2, 7, 0).unwrap();
        assert_eq!(r.free_quotient.mult, vec![2, 1, 1]);
        assert_eq!(r.min_multiplicity, 1);
    }

    #[test]
    fn mirror_scenario_and_koch_shafarevich() {
        for (r, m, w) in [(1u64, 3u64, 1u64), (2, 3, 2), (3, 5, 1), (1, 2, 1)] {
            let sol = mirror_split_scenario(r, m, w).unwrap();
            assert_eq!(sol.a_t_s, CharacterVec::zero(m));
            let expect = CharacterVec::regular(m)
                .sub(&CharacterVec::trivial(m))
                .unwrap()
                .scale(r as i64);
            assert_eq!(sol.a_s_t, expect);
            assert!(fpf_criterion(&sol.a_s_t).unwrap());
        }
        let empty = MirrorInput {
            m: 3,
            omega: 1,
            ..Default::default()
        };
        assert_eq!(mirror_rhs(&empty).mult, vec![-1, 1, 0]);
    }

    #[test]
    fn koch_shafarevich_scenarios() {
        // imaginary quadratic, T empty, S = S_p with local degree 2 over one prime
        let ks = koch_shafarevich(KochShafarevichInput {
            r1: 0,
            r2: 1,
            s: 1,
            t: 0,
            dp_a_ts: 0,
            local_degree_sum: 2,
        });
        assert_eq!(ks.rank, 2);
        assert!(ks.free);
        // Q(ζ_p), S = S_p, T = {ℓ}: the displayed formula evaluates to (p - 1)/2
        for p in [5u64, 7, 11] {
            let ks = koch_shafarevich(KochShafarevichInput {
                r1: 0,
                r2: (p - 1) / 2,
                s: 1,
                t: 1,
                dp_a_ts: 0,
                local_degree_sum: p - 1,
            });
            assert_eq!(ks.rank, (p as i64 - 1) / 2);
            assert!(ks.free);
        }
        assert_eq!(reversal_lower_bound(0, 1, 1, 4), 2);
        assert_eq!(mu_lower_bound(10, 3), 7);
        assert_eq!(mu_lower_bound(0, 3), 0);
        assert_eq!(genus_bound(5, 2), 6);
    }

    proptest! {
        #[test]
        fn frobenius_reciprocity(chi in arb_char(2), psi in arb_char(6)) {
            let lhs = chi.induce(6).unwrap().inner(&psi).unwrap();
            let rhs = chi.inner(&psi.restrict(2).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn mirror_is_an_involution(x in arb_char(5), w in 0u64..5, r in 0u64..4, si in 0u64..3, ss in 0u64..3, ti in 0u64..3, ts in 0u64..3) {
            let input = MirrorInput { r, m: 5, omega: w, s_split: ss, s_inert: si, t_split: ts, t_inert: ti };
            let fwd = mirror_solve_t(&input, &x).unwrap();
            let back = mirror_solve_s(&input, &fwd.a_t_s).unwrap();
            prop_assert_eq!(back.a_s_t, x.clone());
            prop_assert_eq!(x.omega_dual(w).omega_dual(w), x);
        }

        #[test]
        fn lambda_bounded_by_degree(mult in proptest::collection::vec(0i64..4, 3)) {
            // λ_χ ≤ d/χ(1) ≤ d for every constituent of a degree-d character
            let chi = CharacterVec::from_mult(mult);
            let d = chi.degree();
            for j in 0..3 {
                prop_assert!(chi.inner(&CharacterVec::delta(3, j)).unwrap() <= d);
            }
        }
    }
}
