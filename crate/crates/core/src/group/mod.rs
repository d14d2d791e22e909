//! Exact arithmetic in `A = Z/p^{λ_1} × ... × Z/p^{λ_l}`, its dual, and
//! `K = A × Â`.
//!
//! Characters are stored in the basis `ε_j` dual to `e_j`, so
//! `χ(a) = exp(2πi Σ_j χ_j a_j / p^{λ_j})`. The identification `Â ≅ A`
//! used throughout is `e_i ↦ ε_i`, i.e. same coordinate vector.

mod phase;

pub use phase::Phase;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::{factorize, is_prime, mod_inv};
use crate::error::{Error, Result};
use crate::poset::{OrderIdeal, PLambdaPoset, Partition, PointSet, PosetPoint};

/// Default cap on enumerated group sizes (`|A|` for subgroup listings).
pub const DEFAULT_GROUP_CAP: u128 = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GroupElement(pub Vec<u64>);

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CharacterElement(pub Vec<u64>);

/// An element `(a, χ)` of `K = A × Â`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct KElement {
    pub a: GroupElement,
    pub chi: CharacterElement,
}

impl KElement {
    pub fn new(a: Vec<u64>, chi: Vec<u64>) -> Self {
        KElement { a: GroupElement(a), chi: CharacterElement(chi) }
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// `p`-adic valuation of `x` viewed in `Z/p^k`; `v(0) = k`.
pub fn valuation(p: u64, k: u32, x: u64) -> u32 {
    let m = p.pow(k);
    let mut x = x % m;
    if x == 0 {
        return k;
    }
    let mut v = 0;
    while x % p == 0 {
        x /= p;
        v += 1;
    }
    v
}

/// A finite abelian `p`-group of type `λ`, with `p` an odd prime.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupSpec {
    p: u64,
    poset: PLambdaPoset,
    moduli: Vec<u64>,
    /// Inverse of 2 modulo each `p^{λ_i}`.
    halves: Vec<u64>,
}

#[derive(Serialize, Deserialize)]
struct GroupSpecJson {
    p: u64,
    lambda: Partition,
}

impl Serialize for GroupSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GroupSpecJson { p: self.p, lambda: self.partition().clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for GroupSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = GroupSpecJson::deserialize(d)?;
        GroupSpec::new(raw.p, raw.lambda).map_err(serde::de::Error::custom)
    }
}

impl GroupSpec {
    pub fn new(p: u64, partition: Partition) -> Result<Self> {
        if p % 2 == 0 || !is_prime(p) {
            return Err(Error::InvalidPrime(p));
        }
        let moduli = partition
            .parts()
            .iter()
            .map(|&k| p.checked_pow(k).ok_or_else(|| Error::InvalidPartition(format!("p^{k} overflows u64"))))
            .collect::<Result<Vec<_>>>()?;
        let halves = moduli.iter().map(|&m| m.div_ceil(2)).collect();
        let poset = PLambdaPoset::new(partition)?;
        Ok(GroupSpec { p, poset, moduli, halves })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn partition(&self) -> &Partition {
        self.poset.partition()
    }

    pub fn poset(&self) -> &PLambdaPoset {
        &self.poset
    }

    pub fn rank(&self) -> usize {
        self.moduli.len()
    }

    pub fn moduli(&self) -> &[u64] {
        &self.moduli
    }

    /// `|A| = p^{Σλ_i}`, or `None` on overflow.
    pub fn order(&self) -> Option<u128> {
        (self.p as u128).checked_pow(self.partition().size())
    }

    fn order_within(&self, what: &'static str, cap: u128) -> Result<usize> {
        match self.order() {
            Some(n) if n <= cap => Ok(n as usize),
            n => Err(Error::CapExceeded { what, size: n.unwrap_or(u128::MAX), cap }),
        }
    }

    /// Largest modulus `p^{λ_1}`; every phase denominator divides it.
    pub fn exponent(&self) -> u64 {
        self.moduli[0]
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement(vec![0; self.rank()])
    }

    pub fn zero_k(&self) -> KElement {
        KElement::new(vec![0; self.rank()], vec![0; self.rank()])
    }

    pub fn contains(&self, coords: &[u64]) -> bool {
        coords.len() == self.rank() && coords.iter().zip(&self.moduli).all(|(x, m)| x < m)
    }

    pub fn element(&self, coords: Vec<u64>) -> Result<GroupElement> {
        if self.contains(&coords) {
            Ok(GroupElement(coords))
        } else {
            Err(Error::BadElement(format!("{coords:?} for moduli {:?}", self.moduli)))
        }
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).zip(&self.moduli).map(|((x, y), m)| (x + y) % m).collect()
    }

    pub fn neg(&self, a: &[u64]) -> Vec<u64> {
        a.iter().zip(&self.moduli).map(|(x, m)| (m - x) % m).collect()
    }

    pub fn sub(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        self.add(a, &self.neg(b))
    }

    pub fn scale(&self, c: u64, a: &[u64]) -> Vec<u64> {
        a.iter()
            .zip(&self.moduli)
            .map(|(x, m)| ((c as u128 * *x as u128) % *m as u128) as u64)
            .collect()
    }

    /// `a/2`, coordinatewise.
    pub fn halve(&self, a: &[u64]) -> Vec<u64> {
        a.iter()
            .zip(&self.moduli)
            .zip(&self.halves)
            .map(|((x, m), h)| ((*x as u128 * *h as u128) % *m as u128) as u64)
            .collect()
    }

    pub fn add_k(&self, k: &KElement, l: &KElement) -> KElement {
        KElement::new(self.add(&k.a.0, &l.a.0), self.add(&k.chi.0, &l.chi.0))
    }

    pub fn neg_k(&self, k: &KElement) -> KElement {
        KElement::new(self.neg(&k.a.0), self.neg(&k.chi.0))
    }

    /// Position of `coords` in the lexicographic enumeration of `A`
    /// (first coordinate most significant).
    pub fn index_of(&self, coords: &[u64]) -> usize {
        coords.iter().zip(&self.moduli).fold(0usize, |acc, (x, m)| acc * *m as usize + *x as usize)
    }

    pub fn element_at(&self, mut index: usize) -> Vec<u64> {
        let mut out = vec![0; self.rank()];
        for (slot, m) in out.iter_mut().zip(&self.moduli).rev() {
            *slot = (index % *m as usize) as u64;
            index /= *m as usize;
        }
        out
    }

    /// All of `A` in canonical order.
    pub fn elements(&self, cap: u128) -> Result<Vec<Vec<u64>>> {
        let n = self.order_within("group order", cap)?;
        Ok((0..n).map(|i| self.element_at(i)).collect())
    }

    /// Index of `(a, χ)` in `K`, with the `A` part most significant.
    pub fn k_index(&self, k: &KElement) -> usize {
        let n = self.order().expect("index of a group that fits in memory") as usize;
        self.index_of(&k.a.0) * n + self.index_of(&k.chi.0)
    }

    pub fn k_at(&self, index: usize) -> KElement {
        let n = self.order().expect("index of a group that fits in memory") as usize;
        KElement::new(self.element_at(index / n), self.element_at(index % n))
    }

    /// `χ(a)` as an exact phase.
    pub fn pairing(&self, chi: &[u64], a: &[u64]) -> Phase {
        Phase::new(self.pairing_numerator(chi, a) as i128, self.exponent())
    }

    /// Numerator of `χ(a)` over the common denominator `p^{λ_1}`.
    pub fn pairing_numerator(&self, chi: &[u64], a: &[u64]) -> u64 {
        let n = self.exponent() as u128;
        let mut acc = 0u128;
        for ((c, x), m) in chi.iter().zip(a).zip(&self.moduli) {
            let m = *m as u128;
            acc += (*c as u128 * *x as u128 % m) * (n / m);
        }
        (acc % n) as u64
    }

    /// The Weyl cocycle `c(k, l) = χ(y/2)·λ(x/2)^{-1}` for `k = (x, χ)`, `l = (y, λ)`.
    pub fn cocycle(&self, k: &KElement, l: &KElement) -> Phase {
        self.pairing(&k.chi.0, &self.halve(&l.a.0)) - self.pairing(&l.chi.0, &self.halve(&k.a.0))
    }

    /// Numerator of `c(k, l)` over `p^{λ_1}`, from raw coordinate slices.
    pub fn cocycle_numerator(&self, x: &[u64], chi: &[u64], y: &[u64], lam: &[u64]) -> u64 {
        let n = self.exponent() as u128;
        let mut acc = 0u128;
        for j in 0..self.rank() {
            let m = self.moduli[j] as u128;
            let t = (chi[j] as u128 * y[j] as u128 % m + m * m - lam[j] as u128 * x[j] as u128 % m) % m;
            acc += t * self.halves[j] as u128 % m * (n / m);
        }
        (acc % n) as u64
    }

    /// `I(a)`: the ideal generated by `(v(a_i), λ_i)` over nonzero `a_i`.
    pub fn element_ideal(&self, a: &[u64]) -> OrderIdeal {
        let gens: PointSet = a
            .iter()
            .zip(self.partition().parts())
            .filter(|(x, _)| **x != 0)
            .map(|(x, &k)| {
                let pt = PosetPoint::new(valuation(self.p, k, *x), k);
                self.poset.index_of(pt).expect("valuation point lies in P")
            })
            .collect();
        self.poset.generated(gens)
    }

    /// `e(x)`: `p^v` in the left-most coordinate with `λ_i = k`.
    pub fn point_element(&self, x: PosetPoint) -> Vec<u64> {
        let mut out = vec![0; self.rank()];
        let i = self
            .partition()
            .parts()
            .iter()
            .position(|&k| k == x.k)
            .expect("point column is a part of λ");
        out[i] = self.p.pow(x.v);
        out
    }

    /// `a(I) = Σ_{x ∈ max I} e(x)`.
    pub fn canonical_element(&self, ideal: OrderIdeal) -> GroupElement {
        let mut acc = vec![0; self.rank()];
        for i in self.poset.maximal(ideal.set()).iter() {
            acc = self.add(&acc, &self.point_element(self.poset.point(i)));
        }
        GroupElement(acc)
    }

    /// Per-coordinate generators of `A_I`: coordinate `i` ranges over the
    /// multiples of `p^{t_i}` where `t_i` is the least `v` with `(v, λ_i) ∈ I`.
    pub fn characteristic_steps(&self, ideal: OrderIdeal) -> Vec<u64> {
        self.partition()
            .parts()
            .iter()
            .map(|&k| {
                let t = (0..k)
                    .find(|&v| {
                        let i = self.poset.index_of(PosetPoint::new(v, k)).expect("point in P");
                        ideal.set().contains(i)
                    })
                    .unwrap_or(k);
                self.p.pow(t)
            })
            .collect()
    }

    /// The members of `A_I = {a : I(a) ⊆ I}`, in canonical order.
    pub fn characteristic_members(&self, ideal: OrderIdeal, cap: u128) -> Result<Vec<GroupElement>> {
        let size = (self.p as u128).pow(self.poset.weighted_size(ideal.set()) as u32);
        if size > cap {
            return Err(Error::CapExceeded { what: "characteristic subgroup", size, cap });
        }
        let steps = self.characteristic_steps(ideal);
        let counts: Vec<u64> = steps.iter().zip(&self.moduli).map(|(s, m)| m / s).collect();
        let mut out = Vec::with_capacity(size as usize);
        let mut digits = vec![0u64; self.rank()];
        loop {
            out.push(GroupElement(digits.iter().zip(&steps).map(|(d, s)| d * s).collect()));
            // Odometer increment, last coordinate fastest.
            let mut i = self.rank();
            loop {
                if i == 0 {
                    return Ok(out);
                }
                i -= 1;
                digits[i] += 1;
                if digits[i] < counts[i] {
                    break;
                }
                digits[i] = 0;
            }
        }
    }

    /// Enumerates `Â` and checks that the annihilator of `A_I` is exactly
    /// `Â_{I^⊥}` (the image of `A_{I^⊥}` under `e_i ↦ ε_i`).
    pub fn dual_subgroup_check(&self, ideal: OrderIdeal, cap: u128) -> Result<bool> {
        let elements = self.elements(cap)?;
        let sub: Vec<Vec<u64>> = elements
            .iter()
            .filter(|a| self.element_ideal(a).is_subset(ideal))
            .cloned()
            .collect();
        let perp = self.poset.perp(ideal);
        for chi in &elements {
            let annihilates = sub.iter().all(|a| self.pairing_numerator(chi, a) == 0);
            let in_perp = self.element_ideal(chi).is_subset(perp);
            if annihilates != in_perp {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Index of the unique `i` with `λ_i = k` that is left-most.
    pub fn leftmost_coordinate(&self, k: u32) -> Option<usize> {
        self.partition().parts().iter().position(|&x| x == k)
    }

    pub fn modular_inverse(&self, a: u64, coord: usize) -> Option<u64> {
        mod_inv(a, self.moduli[coord])
    }
}

/// Splits a group given by odd invariant factors into its primary parts, one
/// [`GroupSpec`] per prime, primes increasing.
pub fn primary_split(invariant_factors: &[u64]) -> Result<Vec<GroupSpec>> {
    let mut exps: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
    for &f in invariant_factors {
        if f <= 1 || f % 2 == 0 {
            return Err(Error::InvalidInvariantFactor(f));
        }
        for (p, e) in factorize(f) {
            exps.entry(p).or_default().push(e);
        }
    }
    exps.into_iter().map(|(p, parts)| GroupSpec::new(p, Partition::sorted(parts)?)).collect()
}
