//! The parameter set `Q_λ` of irreducible invariant subspaces and their
//! dimensions.
//!
//! An element is a small ideal `I` together with a sign `φ(C) ∈ {0,1}` for
//! each connected component `C` of `I^⊥ − I`. Signs are stored in component
//! order, i.e. keyed by each component's smallest segment index.

mod mobius;
mod polynomial;

pub use mobius::MobiusTable;
pub use polynomial::{DimPolynomial, LaurentPolynomial};

use std::collections::HashMap;
use std::sync::OnceLock;

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::poset::{ComponentSplit, OrderIdeal, PLambdaPoset, Partition, PointSet};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QElement {
    pub ideal: OrderIdeal,
    /// `φ(C)` for each component of `I^⊥ − I`, in component order.
    pub signs: Vec<u8>,
}

/// `Q_λ` together with the data needed to work with it: every order ideal,
/// and the component split of `I^⊥ − I` for every small `I`.
#[derive(Debug)]
pub struct QLambda {
    poset: PLambdaPoset,
    ideals: Vec<OrderIdeal>,
    splits: HashMap<OrderIdeal, ComponentSplit>,
    elements: Vec<QElement>,
    index: HashMap<QElement, usize>,
    mobius: OnceLock<MobiusTable>,
    exec: Execution,
}

impl QLambda {
    pub fn new(partition: Partition, ideal_cap: usize, exec: Execution) -> Result<Self> {
        Self::from_poset(PLambdaPoset::new(partition)?, ideal_cap, exec)
    }

    pub fn from_poset(poset: PLambdaPoset, ideal_cap: usize, exec: Execution) -> Result<Self> {
        let ideals = poset.enumerate_ideals(ideal_cap)?;
        let small: Vec<OrderIdeal> = ideals.iter().copied().filter(|&i| poset.is_small(i)).collect();
        let computed = exec.map(&small, |&i| poset.connected_components(i, poset.perp(i)));
        let mut splits = HashMap::with_capacity(small.len());
        let mut elements = Vec::new();
        for (&ideal, split) in small.iter().zip(computed) {
            let split = split?;
            let r = split.len();
            for bits in 0..(1usize << r) {
                let signs = (0..r).map(|c| ((bits >> (r - 1 - c)) & 1) as u8).collect();
                elements.push(QElement { ideal, signs });
            }
            splits.insert(ideal, split);
        }
        let index = elements.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        Ok(QLambda { poset, ideals, splits, elements, index, mobius: OnceLock::new(), exec })
    }

    pub fn poset(&self) -> &PLambdaPoset {
        &self.poset
    }

    pub fn partition(&self) -> &Partition {
        self.poset.partition()
    }

    /// All of `J(P_λ)`, canonical order.
    pub fn ideals(&self) -> &[OrderIdeal] {
        &self.ideals
    }

    pub fn elements(&self) -> &[QElement] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn index_of(&self, qe: &QElement) -> Option<usize> {
        self.index.get(qe).copied()
    }

    /// Components of `I^⊥ − I` for a small ideal `I`.
    pub fn split(&self, ideal: OrderIdeal) -> Result<&ComponentSplit> {
        self.splits.get(&ideal).ok_or(Error::NotSmall)
    }

    pub fn validate(&self, qe: &QElement) -> Result<()> {
        let split = self.split(qe.ideal)?;
        if split.len() != qe.signs.len() || qe.signs.iter().any(|&s| s > 1) {
            return Err(Error::InconsistentSigns(format!(
                "{} signs given for {} components",
                qe.signs.len(),
                split.len()
            )));
        }
        Ok(())
    }

    /// `lower ≤ upper`: `L²(A)_{lower} ⊆ L²(A)_{upper}`. With
    /// `upper = (I, φ)` and `lower = (I', φ')` this means `I ⊆ I'` and, for
    /// every component `P` of `I^⊥ − I`, `φ(P) = Σ_{P' ⊆ P} φ'(P')` mod 2.
    pub fn q_leq(&self, lower: &QElement, upper: &QElement) -> bool {
        if !upper.ideal.is_subset(lower.ideal) {
            return false;
        }
        let (Ok(up), Ok(low)) = (self.split(upper.ideal), self.split(lower.ideal)) else {
            return false;
        };
        up.components.iter().zip(&upper.signs).all(|(big, &s)| {
            let total: u8 = low
                .components
                .iter()
                .zip(&lower.signs)
                .filter(|(c, _)| c.members.is_subset(big.members))
                .map(|(_, &t)| t)
                .sum();
            total % 2 == s
        })
    }

    /// `Θ(I, φ) = I ∪ ⋃_{φ(C) = 1} C`.
    pub fn theta(&self, qe: &QElement) -> Result<OrderIdeal> {
        self.validate(qe)?;
        let split = self.split(qe.ideal)?;
        let mut s = qe.ideal.set();
        for (c, &sign) in split.components.iter().zip(&qe.signs) {
            if sign == 1 {
                s = s.union(c.members);
            }
        }
        self.poset.ideal(s)
    }

    /// `Ψ(J) = (J ∩ J^⊥, φ_J)` with `φ_J(C) = 1` when `C ⊆ J` and `0` when
    /// `C` misses `J`; anything else is an error.
    pub fn psi(&self, j: OrderIdeal) -> Result<QElement> {
        let ideal = j.intersection(self.poset.perp(j));
        let split = self.split(ideal)?;
        let signs = split
            .components
            .iter()
            .map(|c| {
                if c.members.is_subset(j.set()) {
                    Ok(1)
                } else if c.members.is_disjoint(j.set()) {
                    Ok(0)
                } else {
                    Err(Error::InconsistentSigns(format!(
                        "component {:?} meets J without lying in it",
                        self.poset.members(c.members)
                    )))
                }
            })
            .collect::<Result<Vec<u8>>>()?;
        Ok(QElement { ideal, signs })
    }

    /// `dim L²(A)_{I,φ} = Π_C (p^{[C]} + (−1)^{φ(C)})/2`.
    pub fn subspace_dim(&self, qe: &QElement) -> Result<DimPolynomial> {
        self.validate(qe)?;
        let split = self.split(qe.ideal)?;
        Ok(split
            .components
            .iter()
            .zip(&qe.signs)
            .map(|(c, &s)| half_pm(self.poset.weighted_size(c.members) as i64, s))
            .product())
    }

    /// `dim V_{I,φ} = Π_C dim V_{I(C), φ(C)}`.
    pub fn dim_irreducible(&self, qe: &QElement) -> Result<DimPolynomial> {
        self.validate(qe)?;
        let split = self.split(qe.ideal)?;
        split
            .components
            .iter()
            .zip(&qe.signs)
            .map(|(c, &s)| dim_connected(&c.poset, c.inner, s))
            .product()
    }

    /// The Möbius function of `(Q_λ, ≤)`, indexed like [`QLambda::elements`].
    pub fn mobius(&self) -> &MobiusTable {
        self.mobius.get_or_init(|| {
            let e = &self.elements;
            MobiusTable::new(e.len(), |x, y| self.q_leq(&e[x], &e[y]), self.exec)
        })
    }

    /// `dim V_{I,φ}` by inverting the down-set sums of subspace dimensions.
    pub fn dim_via_mobius(&self, qe: &QElement) -> Result<DimPolynomial> {
        let y = self.index_of(qe).ok_or_else(|| Error::BadElement(format!("{qe:?} not in Q_λ")))?;
        let mut acc = DimPolynomial::zero();
        for &(x, mu) in self.mobius().interval_below(y) {
            acc = &acc + &self.subspace_dim(&self.elements[x])?.scale(&BigRational::from_integer(mu.into()));
        }
        Ok(acc)
    }

    /// Components of `I^⊥ − I` for `qe`, paired with their signs.
    pub fn signed_components(&self, qe: &QElement) -> Result<Vec<(PointSet, u8)>> {
        self.validate(qe)?;
        let split = self.split(qe.ideal)?;
        Ok(split.components.iter().map(|c| c.members).zip(qe.signs.iter().copied()).collect())
    }
}

/// `(p^n + (−1)^s)/2`.
fn half_pm(n: i64, s: u8) -> DimPolynomial {
    let pm = if s == 0 { 1 } else { -1 };
    (&DimPolynomial::p_power(n) + &DimPolynomial::from_int(pm)).scale(&BigRational::new(1.into(), 2.into()))
}

/// Dimension of `V_{I,ε}` when `I^⊥ − I` is connected:
/// `(p^{[I^⊥−I]} + (−1)^ε)/2` if `I⁺ = ∅`, otherwise
/// `p^{[I^⊥−I]}·Π_{x ∈ max I⁺}(1 − p^{−2m(x)})/2`.
pub fn dim_connected(poset: &PLambdaPoset, inner: OrderIdeal, eps: u8) -> Result<DimPolynomial> {
    let perp = poset.perp(inner);
    let split = poset.connected_components(inner, perp)?;
    if split.len() != 1 {
        return Err(Error::NotConnected(split.len()));
    }
    let n = poset.weighted_size(perp.set().difference(inner.set())) as i64;
    let plus = poset.plus_part(inner)?;
    if plus.is_empty() {
        return Ok(half_pm(n, eps));
    }
    let one = DimPolynomial::one();
    let factors: DimPolynomial = poset
        .maximal(plus)
        .iter()
        .map(|x| &one - &DimPolynomial::p_power(-2 * poset.multiplicity(x) as i64))
        .product();
    Ok((&DimPolynomial::p_power(n) * &factors).scale(&BigRational::new(1.into(), 2.into())))
}
