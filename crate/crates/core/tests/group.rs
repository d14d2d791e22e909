use std::collections::HashSet;

use weil_core::group::{primary_split, GroupSpec, KElement};
use weil_core::poset::{Partition, DEFAULT_IDEAL_CAP};

fn specs(p: u64, max: u32) -> impl Iterator<Item = GroupSpec> {
    Partition::all_up_to(max).into_iter().map(move |part| GroupSpec::new(p, part).unwrap())
}

#[test]
fn representatives_generate_their_ideal() {
    for g in specs(3, 8) {
        for ideal in g.poset().enumerate_ideals(DEFAULT_IDEAL_CAP).unwrap() {
            assert_eq!(g.element_ideal(&g.canonical_element(ideal).0), ideal, "{}", g.partition());
        }
    }
}

#[test]
fn characteristic_subgroup_orders() {
    for p in [3u64, 5] {
        for g in specs(p, 6) {
            for ideal in g.poset().enumerate_ideals(DEFAULT_IDEAL_CAP).unwrap() {
                let members = g.characteristic_members(ideal, u128::MAX).unwrap();
                let expect = p.pow(g.poset().weighted_size(ideal.set()) as u32) as usize;
                assert_eq!(members.len(), expect, "p={p} {} {ideal:?}", g.partition());
                // A subgroup: closed under addition.
                let set: HashSet<&Vec<u64>> = members.iter().map(|m| &m.0).collect();
                for a in members.iter().take(20) {
                    for b in members.iter().take(20) {
                        assert!(set.contains(&g.add(&a.0, &b.0)));
                    }
                }
            }
        }
    }
}

#[test]
fn annihilator_oracle_everywhere() {
    for p in [3u64, 5, 7] {
        for g in specs(p, 5) {
            for ideal in g.poset().enumerate_ideals(DEFAULT_IDEAL_CAP).unwrap() {
                assert!(g.dual_subgroup_check(ideal, u128::MAX).unwrap(), "p={p} {} {ideal:?}", g.partition());
            }
        }
    }
}

/// All endomorphisms of `A`, as column-major matrices: column `j` is the
/// image of `e_j`, whose `i`-th entry must be a multiple of `p^{max(0, λ_i − λ_j)}`.
fn endomorphisms(g: &GroupSpec) -> Vec<Vec<u64>> {
    let m = g.moduli();
    let l = m.len();
    let mut choices: Vec<Vec<u64>> = Vec::new();
    for j in 0..l {
        for i in 0..l {
            let step = if m[i] > m[j] { m[i] / m[j] } else { 1 };
            choices.push((0..m[i] / step).map(|t| t * step).collect());
        }
    }
    let mut out = vec![Vec::new()];
    for c in &choices {
        out = out.iter().flat_map(|prefix| c.iter().map(move |&x| [prefix.clone(), vec![x]].concat())).collect();
    }
    out
}

fn apply(g: &GroupSpec, mat: &[u64], a: &[u64]) -> Vec<u64> {
    let l = a.len();
    (0..l)
        .map(|i| (0..l).fold(0u64, |acc, j| (acc + mat[j * l + i] * a[j]) % g.moduli()[i]))
        .collect()
}

#[test]
fn degeneration_order_matches_ideal_inclusion() {
    // b is an endomorphic image of a iff I(b) ⊆ I(a); p = 3, |λ| ≤ 4,
    // skipping λ = (1,1,1,1) whose 3^16 endomorphisms are too many to list.
    for g in specs(3, 4).filter(|g| g.partition().parts() != [1, 1, 1, 1]) {
        let ends = endomorphisms(&g);
        let elements = g.elements(u128::MAX).unwrap();
        for a in &elements {
            let images: HashSet<Vec<u64>> = ends.iter().map(|e| apply(&g, e, a)).collect();
            let ia = g.element_ideal(a);
            for b in &elements {
                assert_eq!(images.contains(b), g.element_ideal(b).is_subset(ia), "{} a={a:?} b={b:?}", g.partition());
            }
        }
    }
}

#[test]
fn cocycle_is_biadditive_and_alternating() {
    let g = GroupSpec::new(3, Partition::new(vec![2, 1]).unwrap()).unwrap();
    let n = g.order().unwrap() as usize;
    let ks: Vec<KElement> = (0..n * n).step_by(7).map(|i| g.k_at(i)).collect();
    for k in &ks {
        assert_eq!(g.cocycle(k, k).to_complex().re, 1.0);
        for l in &ks {
            let sum = g.cocycle(k, l) + g.cocycle(l, k);
            assert!((sum.to_complex().re - 1.0).abs() < 1e-12, "antisymmetric");
            // c(k,l) − c(l,k) = χ(y) − λ(x): the commutator phase.
            let commutator = g.cocycle(k, l) - g.cocycle(l, k);
            let expect = g.pairing(&k.chi.0, &l.a.0) - g.pairing(&l.chi.0, &k.a.0);
            assert_eq!(commutator, expect);
            for m in ks.iter().take(10) {
                assert_eq!(g.cocycle(&g.add_k(k, m), l), g.cocycle(k, l) + g.cocycle(m, l));
            }
        }
    }
}

#[test]
fn primary_parts() {
    let parts = primary_split(&[45, 15, 7]).unwrap();
    let summary: Vec<(u64, Vec<u32>)> = parts.iter().map(|g| (g.p(), g.partition().parts().to_vec())).collect();
    assert_eq!(summary, vec![(3, vec![2, 1]), (5, vec![1, 1]), (7, vec![1])]);
    assert!(primary_split(&[12]).is_err());
}
