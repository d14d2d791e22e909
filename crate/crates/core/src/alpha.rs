//! Coefficients of the projectors `E_{I,φ}` in the `Δ_L` basis of the
//! commuting algebra, and in the Weyl basis via orbit sums.
//!
//! [`alpha_expansion`] expands each connected component separately,
//!
//! ```text
//! 2|A_C| E_{I,ε} = Σ_{I⁺ − max I⁺ ⊆ J⁺ ⊆ I⁺} (−1)^{|I⁺−J⁺|} (p^{[J^⊥−J]} Δ_J + (−1)^ε Δ_{J^⊥}),
//! ```
//!
//! merges terms that land on the same ideal, and glues the components by
//! disjoint union of their ideals. The merge matters: when `J = J^⊥` both
//! terms hit `Δ_J`, giving a coefficient `±(1 + (−1)^ε) ∈ {0, ±2}`.
//!
//! [`theorem_support`] and [`theorem_value`] give the closed form that
//! assumes no two terms ever coincide. It agrees with the expansion except
//! on those self-dual terms; both are kept so the discrepancy stays visible.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::decomposition::{LaurentPolynomial, QElement, QLambda};
use crate::error::{Error, Result};
use crate::poset::{OrderIdeal, PLambdaPoset, PointSet};

/// `sign · p^{p_exp} / 2^{two_exp}`; `sign = 0` is the exact zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct AlphaCoefficient {
    pub sign: i8,
    pub p_exp: i64,
    pub two_exp: i64,
}

impl AlphaCoefficient {
    pub const ZERO: AlphaCoefficient = AlphaCoefficient { sign: 0, p_exp: 0, two_exp: 0 };

    pub fn is_zero(self) -> bool {
        self.sign == 0
    }

    pub fn to_polynomial(self) -> LaurentPolynomial {
        if self.is_zero() {
            return LaurentPolynomial::zero();
        }
        let c = BigRational::new(BigInt::from(self.sign), BigInt::from(2).pow(self.two_exp as u32));
        LaurentPolynomial::monomial(c, self.p_exp)
    }

    pub fn evaluate(self, p: &BigInt) -> BigRational {
        self.to_polynomial().evaluate(p)
    }

    pub fn to_f64(self, p: f64) -> f64 {
        self.sign as f64 * p.powi(self.p_exp as i32) / 2f64.powi(self.two_exp as i32)
    }
}

/// An integer multiple of a power of `p`, one term of a component expansion.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Term {
    coeff: i64,
    p_exp: i64,
}

/// Expansion of `2|A_C| E_{I,ε}` in `P_{λ(C)}` with coinciding terms merged.
fn component_expansion(poset: &PLambdaPoset, inner: OrderIdeal, eps: u8) -> Result<BTreeMap<PointSet, Term>> {
    let perp = poset.perp(inner);
    let plus = poset.plus_part(inner)?;
    let top = poset.maximal(plus).to_vec();
    let mut out: BTreeMap<PointSet, Term> = BTreeMap::new();
    let mut push = |ideal: PointSet, term: Term| -> Result<()> {
        match out.get_mut(&ideal) {
            None => {
                out.insert(ideal, term);
            }
            Some(t) if t.p_exp == term.p_exp || t.coeff == 0 || term.coeff == 0 => {
                if t.coeff == 0 {
                    t.p_exp = term.p_exp;
                }
                t.coeff += term.coeff;
            }
            Some(t) => {
                return Err(Error::InconsistentSigns(format!(
                    "terms p^{} and p^{} land on the same Δ",
                    t.p_exp, term.p_exp
                )))
            }
        }
        Ok(())
    };
    for mask in 0..(1u64 << top.len()) {
        // `removed` = I⁺ − J⁺, a set of maximal points of I⁺.
        let removed: PointSet = top.iter().enumerate().filter(|(b, _)| mask >> b & 1 == 1).map(|(_, &x)| x).collect();
        let j_perp = poset.ideal(perp.set().difference(removed))?;
        let j = poset.perp(j_perp);
        let sign = if removed.len() % 2 == 0 { 1 } else { -1 };
        let gap = poset.weighted_size(j_perp.set().difference(j.set())) as i64;
        push(j.set(), Term { coeff: sign, p_exp: gap })?;
        push(j_perp.set(), Term { coeff: if eps == 0 { sign } else { -sign }, p_exp: 0 })?;
    }
    out.retain(|_, t| t.coeff != 0);
    Ok(out)
}

/// The nonzero `α_L(I, φ)`, in canonical ideal order.
pub fn alpha_expansion(ql: &QLambda, qe: &QElement) -> Result<Vec<(OrderIdeal, AlphaCoefficient)>> {
    ql.validate(qe)?;
    let poset = ql.poset();
    let split = ql.split(qe.ideal)?;
    let r = split.len() as i64;
    let total = poset.weighted_size(poset.full().set()) as i64;

    // Cartesian product of the component expansions, glued by union.
    let mut glued: Vec<(PointSet, Term)> = vec![(qe.ideal.set(), Term { coeff: 1, p_exp: 0 })];
    for (c, &eps) in split.components.iter().zip(&qe.signs) {
        let local = component_expansion(&c.poset, c.inner, eps)?;
        let mut next = Vec::with_capacity(glued.len() * local.len());
        for (set, t) in &glued {
            for (lc, lt) in &local {
                let lifted = c.poset.transfer(*lc, poset);
                next.push((set.union(lifted), Term { coeff: t.coeff * lt.coeff, p_exp: t.p_exp + lt.p_exp }));
            }
        }
        glued = next;
    }

    let position: BTreeMap<OrderIdeal, usize> = ql.ideals().iter().enumerate().map(|(i, &l)| (l, i)).collect();
    let mut out = Vec::with_capacity(glued.len());
    for (set, t) in glued {
        let ideal = poset.ideal(set)?;
        let twos = t.coeff.unsigned_abs().trailing_zeros() as i64;
        if t.coeff.unsigned_abs() >> twos != 1 {
            return Err(Error::InconsistentSigns(format!("coefficient {} is not ±2^a", t.coeff)));
        }
        let coeff = AlphaCoefficient { sign: t.coeff.signum() as i8, p_exp: t.p_exp - total, two_exp: r - twos };
        out.push((ideal, coeff));
    }
    out.sort_by_key(|(l, _)| position.get(l).copied().unwrap_or(usize::MAX));
    Ok(out)
}

pub fn alpha_support(ql: &QLambda, qe: &QElement) -> Result<Vec<OrderIdeal>> {
    Ok(alpha_expansion(ql, qe)?.into_iter().map(|(l, _)| l).collect())
}

/// `α_L(I, φ)`; exact zero off the support.
pub fn alpha_value(ql: &QLambda, qe: &QElement, l: OrderIdeal) -> Result<AlphaCoefficient> {
    Ok(alpha_expansion(ql, qe)?
        .into_iter()
        .find(|(x, _)| *x == l)
        .map(|(_, c)| c)
        .unwrap_or(AlphaCoefficient::ZERO))
}

/// The closed-form support: ideals `I ⊆ L ⊆ I^⊥` such that (1) each `L(C)`
/// or `L(C)^⊥` is small in `P_{λ(C)}`, and (2) `I⁺ − max I⁺ ⊆ I_L⁺ ⊆ I⁺`
/// where `I_L = L ∩ L^⊥`.
pub fn theorem_support(ql: &QLambda, qe: &QElement) -> Result<Vec<OrderIdeal>> {
    ql.validate(qe)?;
    let poset = ql.poset();
    let split = ql.split(qe.ideal)?;
    let perp = poset.perp(qe.ideal);
    let plus = poset.plus_part(qe.ideal)?;
    let lower = plus.difference(poset.maximal(plus));
    let mut out = Vec::new();
    for &l in ql.ideals() {
        if !qe.ideal.is_subset(l) || !l.is_subset(perp) {
            continue;
        }
        let local_ok = split.components.iter().all(|c| {
            let restricted = poset.transfer(l.set().intersection(poset.columns(&c.parts)), &c.poset);
            match c.poset.ideal(restricted) {
                Ok(lc) => c.poset.is_small(lc) || c.poset.is_small(c.poset.perp(lc)),
                Err(_) => false,
            }
        });
        if !local_ok {
            continue;
        }
        let il = l.intersection(poset.perp(l));
        let il_plus = poset.plus_part(il)?;
        if lower.is_subset(il_plus) && il_plus.is_subset(plus) {
            out.push(l);
        }
    }
    Ok(out)
}

/// The closed form `2^r |A| α_L = (−1)^{|I⁺ − I_L⁺| + ⟨φ, φ_L⟩} p^{[I_L^⊥ − L]}`
/// on [`theorem_support`], zero elsewhere. `φ_L(C)` is read off `Ψ(L)`; the
/// sub-components of one `C` must agree.
pub fn theorem_value(ql: &QLambda, qe: &QElement, l: OrderIdeal) -> Result<AlphaCoefficient> {
    if !theorem_support(ql, qe)?.contains(&l) {
        return Ok(AlphaCoefficient::ZERO);
    }
    let poset = ql.poset();
    let split = ql.split(qe.ideal)?;
    let psi = ql.psi(l)?;
    let inner = ql.split(psi.ideal)?;
    let mut phi_l: Vec<Option<u8>> = vec![None; split.len()];
    for (sub, &s) in inner.components.iter().zip(&psi.signs) {
        let host = split
            .components
            .iter()
            .position(|c| sub.members.is_subset(c.members))
            .ok_or_else(|| Error::InconsistentSigns("sub-component outside every component".into()))?;
        match phi_l[host] {
            Some(prev) if prev != s => {
                return Err(Error::InconsistentSigns(format!("component {host} receives signs 0 and 1")))
            }
            _ => phi_l[host] = Some(s),
        }
    }
    let pairing: u32 = qe.signs.iter().zip(&phi_l).map(|(&a, b)| (a * b.unwrap_or(0)) as u32).sum();
    let plus = poset.plus_part(qe.ideal)?;
    let il_plus = poset.plus_part(psi.ideal)?;
    let flips = plus.difference(il_plus).len() as u32 + pairing;
    let il_perp = poset.perp(psi.ideal);
    let total = poset.weighted_size(poset.full().set()) as i64;
    Ok(AlphaCoefficient {
        sign: if flips % 2 == 0 { 1 } else { -1 },
        p_exp: poset.weighted_size(il_perp.set().difference(l.set())) as i64 - total,
        two_exp: split.len() as i64,
    })
}

/// `e_k(I, φ) = Σ_{L ⊇ J} α_L(I, φ)` for `k` in the orbit labelled `J`.
pub fn e_coefficient(ql: &QLambda, qe: &QElement, j: OrderIdeal) -> Result<LaurentPolynomial> {
    Ok(alpha_expansion(ql, qe)?
        .into_iter()
        .filter(|(l, _)| j.is_subset(*l))
        .map(|(_, c)| c.to_polynomial())
        .sum())
}

/// Direction of a coefficient conversion between the `Δ_I` and `T_J` bases,
/// where `Δ_I = Σ_{J ⊆ I} T_J`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BasisChange {
    /// `Σ d_I Δ_I = Σ t_J T_J` with `t_J = Σ_{I ⊇ J} d_I`.
    DeltaToT,
    /// The inverse (Möbius) transform.
    TToDelta,
}

/// Converts coefficients indexed like `ideals` between the two bases.
pub fn basis_change<T>(ideals: &[OrderIdeal], coeffs: &[T], direction: BasisChange) -> Vec<T>
where
    T: Clone + Zero + std::ops::Sub<Output = T>,
{
    assert_eq!(ideals.len(), coeffs.len(), "one coefficient per ideal");
    let n = ideals.len();
    match direction {
        BasisChange::DeltaToT => (0..n)
            .map(|j| {
                (0..n)
                    .filter(|&i| ideals[j].is_subset(ideals[i]))
                    .fold(T::zero(), |acc, i| acc + coeffs[i].clone())
            })
            .collect(),
        BasisChange::TToDelta => {
            // Largest ideals first: d_I = t_I − Σ_{J ⊋ I} d_J.
            let mut order: Vec<usize> = (0..n).collect();
            order.sort_by_key(|&i| std::cmp::Reverse(ideals[i].len()));
            let mut out = vec![T::zero(); n];
            for &i in &order {
                let above = order
                    .iter()
                    .filter(|&&j| j != i && ideals[i].is_subset(ideals[j]))
                    .fold(T::zero(), |acc, &j| acc + out[j].clone());
                out[i] = coeffs[i].clone() - above;
            }
            out
        }
    }
}

/// `Σ_{(I,φ) ∈ Q_λ} α_L(I, φ)` as a polynomial, for every ideal `L`.
pub fn alpha_column_sums(ql: &QLambda) -> Result<BTreeMap<OrderIdeal, LaurentPolynomial>> {
    let mut sums: BTreeMap<OrderIdeal, LaurentPolynomial> = BTreeMap::new();
    for qe in ql.elements() {
        for (l, c) in alpha_expansion(ql, qe)? {
            let entry = sums.entry(l).or_default();
            *entry = &*entry + &c.to_polynomial();
        }
    }
    sums.retain(|_, v| !v.is_zero());
    Ok(sums)
}

/// `2^r·|A|·α` as a rational at `p`, i.e. the integer the closed form predicts.
pub fn normalised_value(c: AlphaCoefficient, r: usize, total: u32, p: &BigInt) -> BigRational {
    let scale = BigRational::from_integer(BigInt::from(2).pow(r as u32) * p.pow(total));
    c.evaluate(p) * scale
}

impl Default for AlphaCoefficient {
    fn default() -> Self {
        Self::ZERO
    }
}
