use std::fmt;

use crate::error::{Error, Result};

/// Default cap on the number of order ideals enumerated.
pub const DEFAULT_IDEAL_CAP: usize = 1_000_000;

/// A subset of a poset with at most 64 elements, as a bitmask over the
/// poset's element indices.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct PointSet(u64);

impl PointSet {
    pub const EMPTY: PointSet = PointSet(0);

    pub fn from_bits(bits: u64) -> Self {
        PointSet(bits)
    }

    pub fn full(n: usize) -> Self {
        if n >= 64 {
            PointSet(u64::MAX)
        } else {
            PointSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(i: usize) -> Self {
        PointSet(1u64 << i)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn insert(&mut self, i: usize) {
        self.0 |= 1u64 << i;
    }

    pub fn remove(&mut self, i: usize) {
        self.0 &= !(1u64 << i);
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: Self) -> Self {
        PointSet(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        PointSet(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        PointSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(self, other: Self) -> bool {
        self.0 & other.0 == 0
    }

    /// Member indices in increasing order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(i)
            }
        })
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl FromIterator<usize> for PointSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = PointSet::EMPTY;
        for i in iter {
            s.insert(i);
        }
        s
    }
}

impl fmt::Debug for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// A finite poset on `0..n` stored as down-sets: `down[i]` holds every `j`
/// with `j <= i`, including `i` itself.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinitePoset {
    down: Vec<PointSet>,
    up: Vec<PointSet>,
    weights: Vec<u64>,
}

impl FinitePoset {
    /// Builds the poset from a `leq` predicate. The predicate must be a
    /// partial order; this is checked.
    pub fn from_leq(n: usize, leq: impl Fn(usize, usize) -> bool) -> Result<Self> {
        Self::weighted_from_leq(vec![1; n], leq)
    }

    pub fn weighted_from_leq(weights: Vec<u64>, leq: impl Fn(usize, usize) -> bool) -> Result<Self> {
        let n = weights.len();
        if n > 64 {
            return Err(Error::PosetTooLarge(n));
        }
        let mut down = vec![PointSet::EMPTY; n];
        let mut up = vec![PointSet::EMPTY; n];
        for i in 0..n {
            for j in 0..n {
                if leq(j, i) {
                    down[i].insert(j);
                    up[j].insert(i);
                }
            }
        }
        let poset = FinitePoset { down, up, weights };
        poset.check_partial_order()?;
        Ok(poset)
    }

    fn check_partial_order(&self) -> Result<()> {
        let n = self.len();
        for i in 0..n {
            if !self.down[i].contains(i) {
                return Err(Error::Parse(format!("relation not reflexive at {i}")));
            }
            for j in self.down[i].iter() {
                if j != i && self.down[j].contains(i) {
                    return Err(Error::Parse(format!("relation not antisymmetric at ({i},{j})")));
                }
                if !self.down[j].is_subset(self.down[i]) {
                    return Err(Error::Parse(format!("relation not transitive at ({i},{j})")));
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.down.len()
    }

    pub fn is_empty(&self) -> bool {
        self.down.is_empty()
    }

    pub fn all(&self) -> PointSet {
        PointSet::full(self.len())
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.down[y].contains(x)
    }

    pub fn weight(&self, x: usize) -> u64 {
        self.weights[x]
    }

    /// Sum of weights over `s`.
    pub fn weighted_size(&self, s: PointSet) -> u64 {
        s.iter().map(|i| self.weights[i]).sum()
    }

    pub fn down_set(&self, x: usize) -> PointSet {
        self.down[x]
    }

    pub fn up_set(&self, x: usize) -> PointSet {
        self.up[x]
    }

    pub fn is_ideal(&self, s: PointSet) -> bool {
        s.iter().all(|x| self.down[x].is_subset(s))
    }

    /// Smallest down-closed set containing `gens`.
    pub fn ideal_generated_by(&self, gens: PointSet) -> PointSet {
        gens.iter().fold(PointSet::EMPTY, |acc, x| acc.union(self.down[x]))
    }

    /// Maximal elements of `s` with respect to the induced order.
    pub fn maximal(&self, s: PointSet) -> PointSet {
        s.iter()
            .filter(|&x| self.up[x].intersection(s) == PointSet::singleton(x))
            .collect()
    }

    pub fn minimal(&self, s: PointSet) -> PointSet {
        s.iter()
            .filter(|&x| self.down[x].intersection(s) == PointSet::singleton(x))
            .collect()
    }

    /// Cover pairs `(lower, upper)` of the subposet induced on `s`.
    pub fn covers_within(&self, s: PointSet) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for y in s.iter() {
            let below = self.down[y].intersection(s).difference(PointSet::singleton(y));
            for x in self.maximal(below).iter() {
                out.push((x, y));
            }
        }
        out.sort_unstable();
        out
    }

    /// Connected components of the Hasse diagram of the subposet induced on
    /// `s`, ordered by their smallest member index.
    pub fn components_within(&self, s: PointSet) -> Vec<PointSet> {
        let covers = self.covers_within(s);
        let mut remaining = s;
        let mut comps = Vec::new();
        while let Some(start) = remaining.iter().next() {
            let mut comp = PointSet::singleton(start);
            let mut frontier = vec![start];
            while let Some(x) = frontier.pop() {
                for &(a, b) in &covers {
                    let other = if a == x {
                        b
                    } else if b == x {
                        a
                    } else {
                        continue;
                    };
                    if !comp.contains(other) {
                        comp.insert(other);
                        frontier.push(other);
                    }
                }
            }
            remaining = remaining.difference(comp);
            comps.push(comp);
        }
        comps
    }

    /// Every order ideal exactly once, sorted by weighted size, then by the
    /// lexicographic order of member index lists.
    pub fn enumerate_ideals(&self, cap: usize) -> Result<Vec<PointSet>> {
        // Linear extension: process elements so that everything below comes first.
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by_key(|&i| self.down[i].len());
        let mut out = Vec::new();
        self.extend_ideals(&order, 0, PointSet::EMPTY, cap, &mut out)?;
        sort_canonically(self, &mut out);
        Ok(out)
    }

    fn extend_ideals(
        &self,
        order: &[usize],
        pos: usize,
        current: PointSet,
        cap: usize,
        out: &mut Vec<PointSet>,
    ) -> Result<()> {
        if pos == order.len() {
            if out.len() >= cap {
                return Err(Error::CapExceeded {
                    what: "order ideal count",
                    size: out.len() as u128 + 1,
                    cap: cap as u128,
                });
            }
            out.push(current);
            return Ok(());
        }
        let x = order[pos];
        self.extend_ideals(order, pos + 1, current, cap, out)?;
        let strictly_below = self.down[x].difference(PointSet::singleton(x));
        if strictly_below.is_subset(current) {
            let mut with = current;
            with.insert(x);
            self.extend_ideals(order, pos + 1, with, cap, out)?;
        }
        Ok(())
    }

    /// Subposet induced on `s`, with elements renumbered in increasing index
    /// order. Returns the subposet and the map from new to old indices.
    pub fn induced(&self, s: PointSet) -> (FinitePoset, Vec<usize>) {
        let map = s.to_vec();
        let weights = map.iter().map(|&i| self.weights[i]).collect();
        let sub = FinitePoset::weighted_from_leq(weights, |a, b| self.leq(map[a], map[b]))
            .expect("induced subposet of a poset is a poset");
        (sub, map)
    }
}

pub(crate) fn sort_canonically(poset: &FinitePoset, ideals: &mut [PointSet]) {
    ideals.sort_by(|a, b| {
        poset
            .weighted_size(*a)
            .cmp(&poset.weighted_size(*b))
            .then_with(|| a.to_vec().cmp(&b.to_vec()))
    });
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain(n: usize) -> FinitePoset {
        FinitePoset::from_leq(n, |a, b| a <= b).unwrap()
    }

    fn antichain(n: usize) -> FinitePoset {
        FinitePoset::from_leq(n, |a, b| a == b).unwrap()
    }

    #[test]
    fn chain_has_n_plus_one_ideals() {
        for n in 0..8 {
            assert_eq!(chain(n).enumerate_ideals(DEFAULT_IDEAL_CAP).unwrap().len(), n + 1);
        }
    }

    #[test]
    fn antichain_ideals_are_all_subsets() {
        assert_eq!(antichain(5).enumerate_ideals(DEFAULT_IDEAL_CAP).unwrap().len(), 32);
    }

    #[test]
    fn cap_is_enforced() {
        let err = antichain(5).enumerate_ideals(10).unwrap_err();
        assert!(matches!(err, Error::CapExceeded { .. }));
    }

    #[test]
    fn rejects_non_orders() {
        assert!(FinitePoset::from_leq(2, |_, _| true).is_err());
        assert!(FinitePoset::from_leq(3, |a, b| a == b || (a + 1 == b)).is_err());
    }

    #[test]
    fn components_of_two_chains() {
        // 0 < 1, 2 < 3, no relation across.
        let p = FinitePoset::from_leq(4, |a, b| a == b || (a / 2 == b / 2 && a < b)).unwrap();
        let comps = p.components_within(p.all());
        assert_eq!(comps, vec![PointSet::from_bits(0b0011), PointSet::from_bits(0b1100)]);
        assert_eq!(p.maximal(p.all()), PointSet::from_bits(0b1010));
        assert_eq!(p.minimal(p.all()), PointSet::from_bits(0b0101));
    }

    #[test]
    fn point_set_iter_is_sorted() {
        let s: PointSet = [5, 1, 9].into_iter().collect();
        assert_eq!(s.to_vec(), vec![1, 5, 9]);
        assert_eq!(s.len(), 3);
    }
}
