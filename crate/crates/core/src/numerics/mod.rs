//! Dense-matrix realisation of the Weyl operators, the `Δ_I` basis and the
//! projectors `E_{I,φ}` on `L²(A)`.
//!
//! Two projectors are built for every `(I, φ)` and checked against each
//! other: [`NumericalModel::projector_matrix`] sums `α_L·Δ_L`, while
//! [`NumericalModel::mobius_projector`] inverts the subspace projectors
//! over `Q_λ` without using `α` at all. [`NumericalModel::numerical_alpha`]
//! recovers `α` from the second one through traces against Weyl operators.

mod operator;
mod verify;

pub use operator::{
    delta_matrix, parity_matrix, weyl_matrix, ComplexOperator, RootTable, WeylOperator, DEFAULT_MATRIX_CAP,
};
pub use verify::{run_verification, Check, CheckStatus, Tolerances, VerificationReport, VerifyConfig};

use std::sync::OnceLock;

use num_complex::Complex64;

use crate::alpha::{alpha_expansion, basis_change, BasisChange};
use crate::decomposition::{QElement, QLambda};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::group::{GroupSpec, KElement};
use crate::poset::OrderIdeal;

/// Matrices for one `(p, λ)`: every `Δ_L`, built once.
pub struct NumericalModel<'a> {
    spec: &'a GroupSpec,
    ql: &'a QLambda,
    deltas: Vec<ComplexOperator>,
    roots: RootTable,
    subspaces: Vec<OnceLock<ComplexOperator>>,
    n: usize,
    exec: Execution,
}

/// Result of recovering `α` from a projector.
#[derive(Clone, Debug)]
pub struct NumericalAlpha {
    /// `tr(E·W_k^†)/|A|` at `k = (a(J), 0)`, per ideal `J`.
    pub weyl: Vec<Complex64>,
    /// `α_L`, per ideal `L`.
    pub alpha: Vec<f64>,
}

impl<'a> NumericalModel<'a> {
    pub fn new(spec: &'a GroupSpec, ql: &'a QLambda, cap: u128, exec: Execution) -> Result<Self> {
        let n = operator::check_matrix_cap(spec, cap)?;
        if spec.partition() != ql.partition() {
            return Err(Error::InvalidPartition(format!("{} vs {}", spec.partition(), ql.partition())));
        }
        let deltas = ql
            .ideals()
            .iter()
            .map(|&l| delta_matrix(spec, l, cap, exec))
            .collect::<Result<Vec<_>>>()?;
        let subspaces = (0..ql.len()).map(|_| OnceLock::new()).collect();
        Ok(NumericalModel { spec, ql, deltas, roots: RootTable::new(spec), subspaces, n, exec })
    }

    pub fn spec(&self) -> &GroupSpec {
        self.spec
    }

    pub fn q_lambda(&self) -> &QLambda {
        self.ql
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn roots(&self) -> &RootTable {
        &self.roots
    }

    pub fn execution(&self) -> Execution {
        self.exec
    }

    fn ideal_index(&self, l: OrderIdeal) -> usize {
        self.ql.ideals().iter().position(|&x| x == l).expect("ideal of P_λ")
    }

    pub fn delta(&self, l: OrderIdeal) -> &ComplexOperator {
        &self.deltas[self.ideal_index(l)]
    }

    pub fn deltas(&self) -> &[ComplexOperator] {
        &self.deltas
    }

    /// `E_{I,φ} = Σ_L α_L(I,φ)·Δ_L`.
    pub fn projector_matrix(&self, qe: &QElement) -> Result<ComplexOperator> {
        let p = self.spec.p() as f64;
        let mut e = ComplexOperator::zeros(self.n);
        for (l, c) in alpha_expansion(self.ql, qe)? {
            e.add_scaled(c.to_f64(p), self.delta(l));
        }
        Ok(e)
    }

    fn members_steps(&self, ideal: OrderIdeal) -> Vec<u64> {
        self.spec.characteristic_steps(ideal)
    }

    fn in_subgroup(x: &[u64], steps: &[u64]) -> bool {
        x.iter().zip(steps).all(|(c, s)| c % s == 0)
    }

    /// Negates the coordinates in the segments of the chosen components.
    fn reflect(&self, qe: &QElement, mask: usize, x: &[u64]) -> Vec<u64> {
        let split = self.ql.split(qe.ideal).expect("validated");
        let moduli = self.spec.moduli();
        let mut out = x.to_vec();
        for (c, comp) in split.components.iter().enumerate() {
            if mask >> c & 1 == 1 {
                for &i in &comp.segment {
                    out[i - 1] = (moduli[i - 1] - out[i - 1]) % moduli[i - 1];
                }
            }
        }
        out
    }

    fn mask_sign(qe: &QElement, mask: usize) -> f64 {
        let odd = qe.signs.iter().enumerate().filter(|(c, &s)| mask >> c & 1 == 1 && s == 1).count();
        if odd % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    }

    /// Orthogonal projector onto functions supported on `A_{I^⊥}` and
    /// invariant under translation by `A_I`, for small `I`.
    pub fn invariant_projector(&self, ideal: OrderIdeal) -> Result<ComplexOperator> {
        if !self.ql.poset().is_small(ideal) {
            return Err(Error::NotSmall);
        }
        let spec = self.spec;
        let members = spec.characteristic_members(ideal, u128::MAX)?;
        let perp_steps = self.members_steps(self.ql.poset().perp(ideal));
        let weight = 1.0 / members.len() as f64;
        let mut m = ComplexOperator::zeros(self.n);
        for w in 0..self.n {
            let wx = spec.element_at(w);
            if Self::in_subgroup(&wx, &perp_steps) {
                for a in &members {
                    m.0[(spec.index_of(&spec.add(&wx, &a.0)), w)] += weight;
                }
            }
        }
        Ok(m)
    }

    /// Orthogonal projector onto `L²(A)_{I,φ}`: functions supported on
    /// `A_{I^⊥}`, invariant under `A_I`, with parity `φ(C)` under negating
    /// the coordinates of each segment `S_C`.
    pub fn subspace_projector(&self, qe: &QElement) -> Result<ComplexOperator> {
        self.ql.validate(qe)?;
        let spec = self.spec;
        let members: Vec<Vec<u64>> = spec.characteristic_members(qe.ideal, u128::MAX)?.into_iter().map(|e| e.0).collect();
        let perp_steps = self.members_steps(self.ql.poset().perp(qe.ideal));
        let r = qe.signs.len();
        let weight = 1.0 / ((1usize << r) as f64 * members.len() as f64);
        let mut m = ComplexOperator::zeros(self.n);
        for w in 0..self.n {
            let wx = spec.element_at(w);
            for mask in 0..(1usize << r) {
                let v = self.reflect(qe, mask, &wx);
                if !Self::in_subgroup(&v, &perp_steps) {
                    continue;
                }
                let s = Self::mask_sign(qe, mask) * weight;
                for a in &members {
                    m.0[(spec.index_of(&spec.add(&v, a)), w)] += s;
                }
            }
        }
        Ok(m)
    }

    /// `E_{I,φ} = Σ_{x ≤ (I,φ)} μ(x, (I,φ))·P_x` over subspace projectors.
    pub fn mobius_projector(&self, qe: &QElement) -> Result<ComplexOperator> {
        let y = self.ql.index_of(qe).ok_or_else(|| Error::BadElement(format!("{qe:?} not in Q_λ")))?;
        let mut e = ComplexOperator::zeros(self.n);
        for &(x, mu) in self.ql.mobius().interval_below(y) {
            e.add_scaled(mu as f64, self.cached_subspace(x)?);
        }
        Ok(e)
    }

    fn cached_subspace(&self, index: usize) -> Result<&ComplexOperator> {
        let slot = &self.subspaces[index];
        if let Some(m) = slot.get() {
            return Ok(m);
        }
        let m = self.subspace_projector(&self.ql.elements()[index])?;
        Ok(slot.get_or_init(|| m))
    }

    /// Recovers `α(I, φ)` from [`Self::mobius_projector`]: Weyl-basis
    /// coefficients on orbit representatives `(a(J), 0)`, read as
    /// `T_J`-coefficients, then converted to the `Δ` basis.
    pub fn numerical_alpha(&self, qe: &QElement) -> Result<NumericalAlpha> {
        let e = self.mobius_projector(qe)?;
        self.alpha_from_projector(&e)
    }

    pub fn alpha_from_projector(&self, e: &ComplexOperator) -> Result<NumericalAlpha> {
        let weyl: Vec<Complex64> = self
            .ql
            .ideals()
            .iter()
            .map(|&j| {
                let k = KElement { a: self.spec.canonical_element(j), chi: self.spec.zero_k().chi };
                WeylOperator::new(self.spec, &self.roots, &k).pair_with(e) / self.n as f64
            })
            .collect();
        let t: Vec<f64> = weyl.iter().map(|z| z.re).collect();
        let alpha = basis_change(self.ql.ideals(), &t, BasisChange::TToDelta);
        if alpha.iter().any(|x| !x.is_finite()) {
            return Err(Error::Singular("non-finite coefficient in the Δ-basis solve".into()));
        }
        Ok(NumericalAlpha { weyl, alpha })
    }

    /// The witness `f`: the indicator of `a(I^⊥) + A_I`, symmetrised by the
    /// signs `φ`. Lies in `L²(A)_{I,φ}` and in no smaller `L²(A)_{I',φ'}`.
    pub fn existence_witness(&self, qe: &QElement) -> Result<Vec<Complex64>> {
        self.ql.validate(qe)?;
        let spec = self.spec;
        let base = spec.canonical_element(self.ql.poset().perp(qe.ideal)).0;
        let members = spec.characteristic_members(qe.ideal, u128::MAX)?;
        let mut f = vec![Complex64::new(0.0, 0.0); self.n];
        for mask in 0..(1usize << qe.signs.len()) {
            let s = Self::mask_sign(qe, mask);
            for a in &members {
                let u = self.reflect(qe, mask, &spec.add(&base, &a.0));
                f[spec.index_of(&u)] += s;
            }
        }
        Ok(f)
    }

    pub fn existence_witness_check(&self, qe: &QElement, tol: f64) -> Result<bool> {
        let f = self.existence_witness(qe)?;
        let norm = f.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < tol {
            return Ok(false);
        }
        let residual = |x: &QElement| -> Result<f64> {
            let g = self.subspace_projector(x)?.apply(&f);
            Ok(g.iter().zip(&f).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt() / norm)
        };
        if residual(qe)? > tol {
            return Ok(false);
        }
        for x in self.ql.elements() {
            if x != qe && self.ql.q_leq(x, qe) && residual(x)? <= tol {
                return Ok(false);
            }
        }
        Ok(true)
    }
}
