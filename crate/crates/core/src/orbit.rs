//! Symplectic orbits in `K = A × Â`.
//!
//! [`canonicalize`] is the constructive reduction `(a, α) ↦ (a', 0)`; the
//! orbit label is `I(a')`. [`closure_orbits`] is an independent oracle:
//! orbits of the subgroup generated by Fourier swaps, transvections and a
//! generating family of `Aut(A)`, validated against the ideal count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::arith::primitive_root_prime_power;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::group::{valuation, GroupSpec, KElement};
use crate::poset::{OrderIdeal, PosetPoint, DEFAULT_IDEAL_CAP};

/// Default cap on `|K|` for closure and exhaustive pair checks (`3^8`).
pub const DEFAULT_ORBIT_CAP: u128 = 6561;

/// Random pairs tried per generator when `|K|` is above the exhaustive limit.
const SAMPLED_PAIRS: usize = 20_000;

pub type OrbitLabel = OrderIdeal;

/// One generator of the validation subgroup of `Sp(K)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Generator {
    /// `(a_i, α_i) ↦ (−α_i, a_i)`.
    FourierSwap { i: usize },
    /// `α_i ↦ α_i − b·a_i`.
    Transvection { i: usize, b: u64 },
    /// `a_i ↦ r·a_i`, `α_i ↦ r^{-1}·α_i`.
    UnitScale { i: usize, r: u64, r_inv: u64 },
    /// `a_i ↦ a_i + p^{max(0, λ_i−λ_j)}·a_j` on `A`, with the contragredient
    /// `α_j ↦ α_j − p^{max(0, λ_j−λ_i)}·α_i` on `Â`.
    Elementary { i: usize, j: usize },
}

impl Generator {
    pub fn apply(&self, spec: &GroupSpec, k: &KElement) -> KElement {
        let m = spec.moduli();
        let mut a = k.a.0.clone();
        let mut chi = k.chi.0.clone();
        match *self {
            Generator::FourierSwap { i } => {
                let t = a[i];
                a[i] = (m[i] - chi[i]) % m[i];
                chi[i] = t;
            }
            Generator::Transvection { i, b } => {
                chi[i] = (chi[i] + m[i] - mul_mod(b, a[i], m[i])) % m[i];
            }
            Generator::UnitScale { i, r, r_inv } => {
                a[i] = mul_mod(r, a[i], m[i]);
                chi[i] = mul_mod(r_inv, chi[i], m[i]);
            }
            Generator::Elementary { i, j } => {
                let parts = spec.partition().parts();
                let p = spec.p();
                let c = p.pow(parts[i].saturating_sub(parts[j]));
                let d = p.pow(parts[j].saturating_sub(parts[i]));
                a[i] = (a[i] + mul_mod(c, a[j], m[i])) % m[i];
                chi[j] = (chi[j] + m[j] - mul_mod(d, chi[i], m[j])) % m[j];
            }
        }
        KElement::new(a, chi)
    }
}

fn mul_mod(x: u64, y: u64, m: u64) -> u64 {
    ((x as u128 * y as u128) % m as u128) as u64
}

/// The generating family used by [`closure_orbits`]: one swap and one unit
/// scaling per coordinate, every transvection, and every elementary map.
pub fn generators(spec: &GroupSpec) -> Vec<Generator> {
    let parts = spec.partition().parts();
    let mut out = Vec::new();
    for i in 0..spec.rank() {
        out.push(Generator::FourierSwap { i });
        let r = primitive_root_prime_power(spec.p(), parts[i]) % spec.moduli()[i];
        let r_inv = spec.modular_inverse(r, i).expect("primitive root is a unit");
        out.push(Generator::UnitScale { i, r, r_inv });
        for b in 1..spec.moduli()[i] {
            out.push(Generator::Transvection { i, b });
        }
    }
    for i in 0..spec.rank() {
        for j in 0..spec.rank() {
            if i != j {
                out.push(Generator::Elementary { i, j });
            }
        }
    }
    out
}

/// Runs the reduction: per coordinate, swap when `v(a_i) > v(α_i)`, then
/// clear `α_i` by the transvection with `b·a_i = α_i`. Returns `(a', 0)`.
pub fn reduce(spec: &GroupSpec, k: &KElement) -> KElement {
    let p = spec.p();
    let parts = spec.partition().parts();
    let mut cur = k.clone();
    for i in 0..spec.rank() {
        let ki = parts[i];
        if valuation(p, ki, cur.a.0[i]) > valuation(p, ki, cur.chi.0[i]) {
            cur = Generator::FourierSwap { i }.apply(spec, &cur);
        }
        if cur.chi.0[i] != 0 {
            let b = solve_multiple(p, spec.moduli()[i], cur.a.0[i], cur.chi.0[i]);
            cur = Generator::Transvection { i, b }.apply(spec, &cur);
        }
        debug_assert_eq!(cur.chi.0[i], 0);
    }
    cur
}

/// Some `b` with `b·x ≡ y (mod m)`, given `v(x) ≤ v(y)` and `x ≠ 0`.
fn solve_multiple(p: u64, m: u64, x: u64, y: u64) -> u64 {
    let mut v = 0;
    let (mut xu, mut yu) = (x, y);
    while xu % p == 0 {
        xu /= p;
        yu /= p;
        v += 1;
    }
    let reduced = m / p.pow(v);
    let inv = crate::arith::mod_inv(xu % reduced, reduced).expect("unit part is invertible");
    mul_mod(yu, inv, reduced)
}

/// Orbit label of `k` via the constructive reduction.
pub fn canonicalize(spec: &GroupSpec, k: &KElement) -> OrbitLabel {
    spec.element_ideal(&reduce(spec, k).a.0)
}

#[derive(Clone, Debug, Serialize)]
pub struct Orbit {
    #[serde(skip)]
    pub ideal: OrderIdeal,
    #[serde(rename = "ideal")]
    pub points: Vec<PosetPoint>,
    pub size: usize,
    /// `(a(I), 0)`.
    pub representative: KElement,
    /// Member indices into the canonical enumeration of `K`, ascending.
    #[serde(skip)]
    pub members: Vec<usize>,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    /// Keeps the smaller root so roots are the smallest members.
    fn union(&mut self, x: usize, y: usize) {
        let (a, b) = (self.find(x), self.find(y));
        if a != b {
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            self.0[hi] = lo;
        }
    }
}

/// Orbits of the generated subgroup on `K`, ordered by smallest member.
///
/// Fails with [`Error::OrbitValidation`] unless there is exactly one orbit
/// per order ideal, each containing exactly one `(a(I), 0)`.
pub fn closure_orbits(spec: &GroupSpec, cap: u128, exec: Execution) -> Result<Vec<Orbit>> {
    let n = spec.order().unwrap_or(u128::MAX);
    let size = n.saturating_mul(n);
    if size > cap {
        return Err(Error::CapExceeded { what: "|K|", size, cap });
    }
    let size = size as usize;
    let gens = generators(spec);
    let images: Vec<Vec<usize>> = exec.map_range(size, |idx| {
        let k = spec.k_at(idx);
        gens.iter().map(|g| spec.k_index(&g.apply(spec, &k))).collect()
    });
    let mut uf = UnionFind((0..size).collect());
    for (idx, targets) in images.iter().enumerate() {
        for &t in targets {
            uf.union(idx, t);
        }
    }
    let mut slot = vec![usize::MAX; size];
    let mut orbits: Vec<Vec<usize>> = Vec::new();
    for idx in 0..size {
        let root = uf.find(idx);
        if slot[root] == usize::MAX {
            slot[root] = orbits.len();
            orbits.push(Vec::new());
        }
        orbits[slot[root]].push(idx);
    }

    let ideals = spec.poset().enumerate_ideals(DEFAULT_IDEAL_CAP)?;
    if ideals.len() != orbits.len() {
        return Err(Error::OrbitValidation(format!(
            "{} closure orbits but {} order ideals",
            orbits.len(),
            ideals.len()
        )));
    }
    let mut labelled: Vec<Option<Orbit>> = vec![None; orbits.len()];
    for ideal in ideals {
        let representative = KElement { a: spec.canonical_element(ideal), chi: spec.zero_k().chi };
        let o = slot[uf.find(spec.k_index(&representative))];
        if labelled[o].is_some() {
            return Err(Error::OrbitValidation(format!("orbit {o} holds two representatives")));
        }
        let members = std::mem::take(&mut orbits[o]);
        let points = spec.poset().members(ideal.set());
        labelled[o] = Some(Orbit { ideal, points, size: members.len(), representative, members });
    }
    labelled
        .into_iter()
        .map(|o| o.ok_or_else(|| Error::OrbitValidation("orbit without a representative".into())))
        .collect()
}

/// Checks `c(gk, gl) = c(k, l)` for a map on `K`: over all pairs when
/// `|K| ≤ exhaustive_limit`, otherwise over seeded random pairs.
pub fn is_symplectic<F>(spec: &GroupSpec, map: F, exhaustive_limit: u128, exec: Execution) -> bool
where
    F: Fn(&KElement) -> KElement + Sync,
{
    let n = spec.order().unwrap_or(u128::MAX);
    let size = n.saturating_mul(n);
    let preserved = |k: &KElement, l: &KElement| {
        let (gk, gl) = (map(k), map(l));
        spec.cocycle_numerator(&gk.a.0, &gk.chi.0, &gl.a.0, &gl.chi.0)
            == spec.cocycle_numerator(&k.a.0, &k.chi.0, &l.a.0, &l.chi.0)
    };
    if size <= exhaustive_limit {
        let size = size as usize;
        let all: Vec<KElement> = (0..size).map(|i| spec.k_at(i)).collect();
        let bad = exec.map_range(size, |i| all.iter().all(|l| preserved(&all[i], l)));
        bad.into_iter().all(|ok| ok)
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        let random = |rng: &mut ChaCha8Rng| {
            let coords = |rng: &mut ChaCha8Rng| spec.moduli().iter().map(|&m| rng.random_range(0..m)).collect();
            KElement::new(coords(rng), coords(rng))
        };
        let pairs: Vec<(KElement, KElement)> =
            (0..SAMPLED_PAIRS).map(|_| (random(&mut rng), random(&mut rng))).collect();
        exec.map(&pairs, |(k, l)| preserved(k, l)).into_iter().all(|ok| ok)
    }
}

/// Exhaustive pair limit for generator checks. Every generator is additive,
/// so `|K|^2` pairs at this size (~4M) is plenty; larger groups are sampled.
pub const DEFAULT_PAIR_LIMIT: u128 = 2048;

/// Every generator of [`generators`] preserves the cocycle.
pub fn verify_generators_symplectic(spec: &GroupSpec, exhaustive_limit: u128, exec: Execution) -> bool {
    generators(spec)
        .iter()
        .all(|g| is_symplectic(spec, |k| g.apply(spec, k), exhaustive_limit, exec))
}
