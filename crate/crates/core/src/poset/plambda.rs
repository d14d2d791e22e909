use std::fmt;

use serde::{Deserialize, Serialize};

use super::finite::{FinitePoset, PointSet};
use super::partition::Partition;
use crate::error::{Error, Result};

/// A point `(v, k)` of `P_λ`, with `k` a part of `λ` and `0 <= v < k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "[u32; 2]", into = "[u32; 2]")]
pub struct PosetPoint {
    pub v: u32,
    pub k: u32,
}

impl PosetPoint {
    pub const fn new(v: u32, k: u32) -> Self {
        PosetPoint { v, k }
    }

    /// Mirror image across the horizontal axis of the Hasse diagram.
    pub fn reflect(self) -> Self {
        PosetPoint::new(self.k - 1 - self.v, self.k)
    }

    /// `self <= other`.
    pub fn leq(self, other: PosetPoint) -> bool {
        // (v,k) >= (v',k') iff v' >= v and k'-v' <= k-v.
        self.v >= other.v && self.k - self.v <= other.k - other.v
    }
}

impl From<[u32; 2]> for PosetPoint {
    fn from([v, k]: [u32; 2]) -> Self {
        PosetPoint::new(v, k)
    }
}

impl From<PosetPoint> for [u32; 2] {
    fn from(p: PosetPoint) -> Self {
        [p.v, p.k]
    }
}

impl fmt::Display for PosetPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.v, self.k)
    }
}

/// A down-closed subset of a [`PLambdaPoset`], indexed by that poset's
/// canonical point order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrderIdeal(PointSet);

impl OrderIdeal {
    pub const EMPTY: OrderIdeal = OrderIdeal(PointSet::EMPTY);

    pub fn set(self) -> PointSet {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.len()
    }

    pub fn is_empty(self) -> bool {
        self.0.is_empty()
    }

    pub fn is_subset(self, other: OrderIdeal) -> bool {
        self.0.is_subset(other.0)
    }

    pub fn intersection(self, other: OrderIdeal) -> OrderIdeal {
        OrderIdeal(self.0.intersection(other.0))
    }

    pub fn union(self, other: OrderIdeal) -> OrderIdeal {
        OrderIdeal(self.0.union(other.0))
    }
}

/// The poset `P_λ` with multiplicities.
///
/// Points are stored in canonical order: `k` descending, then `v` ascending.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PLambdaPoset {
    partition: Partition,
    points: Vec<PosetPoint>,
    poset: FinitePoset,
    reflection: Vec<usize>,
}

impl PLambdaPoset {
    pub fn new(partition: Partition) -> Result<Self> {
        let points: Vec<PosetPoint> = partition
            .distinct_parts()
            .into_iter()
            .flat_map(|k| (0..k).map(move |v| PosetPoint::new(v, k)))
            .collect();
        if points.len() > 64 {
            return Err(Error::PosetTooLarge(points.len()));
        }
        let weights = points.iter().map(|p| partition.multiplicity(p.k) as u64).collect();
        let poset = FinitePoset::weighted_from_leq(weights, |a, b| points[a].leq(points[b]))?;
        let reflection = points
            .iter()
            .map(|p| points.iter().position(|q| *q == p.reflect()).expect("reflection stays in P"))
            .collect();
        Ok(PLambdaPoset { partition, points, poset, reflection })
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn points(&self) -> &[PosetPoint] {
        &self.points
    }

    pub fn point(&self, i: usize) -> PosetPoint {
        self.points[i]
    }

    pub fn index_of(&self, p: PosetPoint) -> Option<usize> {
        self.points.iter().position(|q| *q == p)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn finite(&self) -> &FinitePoset {
        &self.poset
    }

    pub fn multiplicity(&self, i: usize) -> u64 {
        self.poset.weight(i)
    }

    pub fn full(&self) -> OrderIdeal {
        OrderIdeal(self.poset.all())
    }

    pub fn order_leq(&self, x: PosetPoint, y: PosetPoint) -> bool {
        x.leq(y)
    }

    /// Cover relations `(lower, upper)` as point pairs.
    pub fn cover_relations(&self) -> Vec<(PosetPoint, PosetPoint)> {
        self.poset
            .covers_within(self.poset.all())
            .into_iter()
            .map(|(a, b)| (self.points[a], self.points[b]))
            .collect()
    }

    /// Point set from explicit points; unknown points are an error.
    pub fn set_of(&self, pts: &[PosetPoint]) -> Result<PointSet> {
        pts.iter()
            .map(|p| self.index_of(*p).ok_or_else(|| Error::Parse(format!("{p} is not a point of P{}", self.partition))))
            .collect()
    }

    pub fn members(&self, s: PointSet) -> Vec<PosetPoint> {
        s.iter().map(|i| self.points[i]).collect()
    }

    /// Wraps a set after checking it is down-closed.
    pub fn ideal(&self, s: PointSet) -> Result<OrderIdeal> {
        if s.is_subset(self.poset.all()) && self.poset.is_ideal(s) {
            Ok(OrderIdeal(s))
        } else {
            Err(Error::Parse(format!("{:?} is not an order ideal", self.members(s))))
        }
    }

    pub fn ideal_from_points(&self, pts: &[PosetPoint]) -> Result<OrderIdeal> {
        self.ideal(self.set_of(pts)?)
    }

    pub fn ideal_generated_by(&self, gens: &[PosetPoint]) -> Result<OrderIdeal> {
        Ok(OrderIdeal(self.poset.ideal_generated_by(self.set_of(gens)?)))
    }

    pub(crate) fn generated(&self, gens: PointSet) -> OrderIdeal {
        OrderIdeal(self.poset.ideal_generated_by(gens))
    }

    pub fn enumerate_ideals(&self, cap: usize) -> Result<Vec<OrderIdeal>> {
        Ok(self.poset.enumerate_ideals(cap)?.into_iter().map(OrderIdeal).collect())
    }

    /// `[S]`: size counted with multiplicity.
    pub fn weighted_size(&self, s: PointSet) -> u64 {
        self.poset.weighted_size(s)
    }

    pub fn maximal(&self, s: PointSet) -> PointSet {
        self.poset.maximal(s)
    }

    pub fn reflect(&self, s: PointSet) -> PointSet {
        s.iter().map(|i| self.reflection[i]).collect()
    }

    /// `I^⊥`: the complement of the reflection of `I`.
    pub fn perp(&self, ideal: OrderIdeal) -> OrderIdeal {
        OrderIdeal(self.poset.all().difference(self.reflect(ideal.0)))
    }

    pub fn is_small(&self, ideal: OrderIdeal) -> bool {
        ideal.0.is_subset(self.perp(ideal).0)
    }

    /// `P_λ⁺ = {(v,k) : v < (k-1)/2}`.
    pub fn plus_points(&self) -> PointSet {
        (0..self.len()).filter(|&i| 2 * self.points[i].v + 1 < self.points[i].k).collect()
    }

    /// Points on the axis of symmetry, `v = (k-1)/2`.
    pub fn axis_points(&self) -> PointSet {
        (0..self.len()).filter(|&i| 2 * self.points[i].v + 1 == self.points[i].k).collect()
    }

    /// `I⁺ = I^⊥ ∩ P_λ⁺`, returned in `P_λ` indexing.
    pub fn plus_part(&self, ideal: OrderIdeal) -> Result<PointSet> {
        if !self.is_small(ideal) {
            return Err(Error::NotSmall);
        }
        Ok(self.perp(ideal).0.intersection(self.plus_points()))
    }

    /// The induced subposet `P_λ⁺` and its index map into `P_λ`.
    pub fn plus_poset(&self) -> (FinitePoset, Vec<usize>) {
        self.poset.induced(self.plus_points())
    }

    /// All points whose column `k` is one of `ks`.
    pub fn columns(&self, ks: &[u32]) -> PointSet {
        (0..self.len()).filter(|&i| ks.contains(&self.points[i].k)).collect()
    }

    /// `P_{λ'}` for the sub-partition made of the parts listed in `ks`
    /// (with their full multiplicity).
    pub fn column_subposet(&self, ks: &[u32]) -> Result<PLambdaPoset> {
        let parts: Vec<u32> = self.partition.parts().iter().copied().filter(|k| ks.contains(k)).collect();
        PLambdaPoset::new(Partition::new(parts)?)
    }

    /// Re-indexes `s` (whose points must all exist in `target`) into `target`.
    pub fn transfer(&self, s: PointSet, target: &PLambdaPoset) -> PointSet {
        s.iter()
            .map(|i| target.index_of(self.points[i]).expect("point missing from target poset"))
            .collect()
    }

    /// Connected components of `J - I`, with their segments and the
    /// restrictions of `I` and `J` to each component's columns.
    pub fn connected_components(&self, inner: OrderIdeal, outer: OrderIdeal) -> Result<ComponentSplit> {
        if !inner.is_subset(outer) {
            return Err(Error::NotNested {
                inner: format!("{:?}", self.members(inner.0)),
                outer: format!("{:?}", self.members(outer.0)),
            });
        }
        let diff = outer.0.difference(inner.0);
        let mut components = Vec::new();
        let mut used = vec![false; self.partition.len()];
        for members in self.poset.components_within(diff) {
            let mut ks: Vec<u32> = members.iter().map(|i| self.points[i].k).collect();
            ks.sort_unstable_by(|a, b| b.cmp(a));
            ks.dedup();
            let segment: Vec<usize> = self
                .partition
                .parts()
                .iter()
                .enumerate()
                .filter(|(_, k)| ks.contains(k))
                .map(|(i, _)| i + 1)
                .collect();
            for &i in &segment {
                debug_assert!(!used[i - 1], "component segments overlap");
                used[i - 1] = true;
            }
            let sub = self.column_subposet(&ks)?;
            let cols = self.columns(&ks);
            let inner_c = OrderIdeal(self.transfer(inner.0.intersection(cols), &sub));
            let outer_c = OrderIdeal(self.transfer(outer.0.intersection(cols), &sub));
            components.push(Component {
                members,
                parts: ks,
                segment,
                poset: sub,
                inner: inner_c,
                outer: outer_c,
            });
        }
        components.sort_by_key(|c| c.segment[0]);
        let zero_segment = (1..=self.partition.len()).filter(|&i| !used[i - 1]).collect();
        Ok(ComponentSplit { components, zero_segment })
    }

    /// Graphviz rendering of the Hasse diagram; nodes are labelled `(v,k)×m`.
    pub fn to_dot(&self, highlight: Option<OrderIdeal>) -> String {
        let mut out = String::from("digraph P {\n  rankdir=BT;\n  node [shape=circle];\n");
        for (i, p) in self.points.iter().enumerate() {
            let fill = match highlight {
                Some(ideal) if ideal.0.contains(i) => ", style=filled, fillcolor=black, fontcolor=white",
                _ => "",
            };
            out.push_str(&format!(
                "  n{i} [label=\"({},{})×{}\"{fill}];\n",
                p.v,
                p.k,
                self.multiplicity(i)
            ));
        }
        for (a, b) in self.poset.covers_within(self.poset.all()) {
            out.push_str(&format!("  n{a} -> n{b} [arrowhead=none];\n"));
        }
        out.push_str("}\n");
        out
    }
}

/// One connected component `C` of `J - I`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    /// Points of `C`, in the parent poset's indexing.
    pub members: PointSet,
    /// Part values occurring in `C`, decreasing; `λ(C)` repeats each with its multiplicity.
    pub parts: Vec<u32>,
    /// `S_C`: 1-based positions `i` with `λ_i` a part of `C`.
    pub segment: Vec<usize>,
    /// `P_{λ(C)}`.
    pub poset: PLambdaPoset,
    /// `I(C)` in `P_{λ(C)}`.
    pub inner: OrderIdeal,
    /// `J(C)` in `P_{λ(C)}`.
    pub outer: OrderIdeal,
}

impl Component {
    pub fn sub_partition(&self) -> &Partition {
        self.poset.partition()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentSplit {
    /// Ordered by smallest segment index.
    pub components: Vec<Component>,
    /// `S_0`: positions not covered by any component.
    pub zero_segment: Vec<usize>,
}

impl ComponentSplit {
    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }
}
