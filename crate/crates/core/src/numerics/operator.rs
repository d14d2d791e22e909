use std::io::Write;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::group::{GroupSpec, KElement};
use crate::poset::OrderIdeal;

/// Default cap on `|A|` for dense matrices (≈ 64 MB per matrix).
pub const DEFAULT_MATRIX_CAP: u128 = 2000;

/// `exp(2πi·n/N)` for every numerator `n` over the group exponent `N`.
#[derive(Clone, Debug)]
pub struct RootTable {
    roots: Vec<Complex64>,
}

impl RootTable {
    pub fn new(spec: &GroupSpec) -> Self {
        let n = spec.exponent();
        let roots = (0..n)
            .map(|k| Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / n as f64))
            .collect();
        RootTable { roots }
    }

    #[inline]
    pub fn get(&self, numerator: u64) -> Complex64 {
        self.roots[numerator as usize]
    }
}

/// A dense operator on `L²(A)`, rows and columns indexed by the canonical
/// enumeration of `A`.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexOperator(pub DMatrix<Complex64>);

impl ComplexOperator {
    pub fn zeros(n: usize) -> Self {
        ComplexOperator(DMatrix::zeros(n, n))
    }

    pub fn identity(n: usize) -> Self {
        ComplexOperator(DMatrix::identity(n, n))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn mul(&self, other: &ComplexOperator) -> ComplexOperator {
        ComplexOperator(&self.0 * &other.0)
    }

    pub fn add_scaled(&mut self, c: f64, other: &ComplexOperator) {
        self.0.zip_apply(&other.0, |a, b| *a += b * c);
    }

    pub fn scale(&self, c: f64) -> ComplexOperator {
        ComplexOperator(self.0.map(|z| z * c))
    }

    pub fn adjoint(&self) -> ComplexOperator {
        ComplexOperator(self.0.adjoint())
    }

    pub fn trace(&self) -> Complex64 {
        self.0.trace()
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |m, z| crate::exec::fmax(m, z.norm()))
    }

    /// Largest entrywise `|a − b|`; NaN propagates.
    pub fn max_abs_diff(&self, other: &ComplexOperator) -> f64 {
        self.0.iter().zip(other.0.iter()).fold(0.0, |m, (a, b)| crate::exec::fmax(m, (a - b).norm()))
    }

    pub fn hermitian_defect(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    pub fn idempotent_defect(&self) -> f64 {
        self.mul(self).max_abs_diff(self)
    }

    /// `tr(self · other^†)`.
    pub fn trace_pairing(&self, other: &ComplexOperator) -> Complex64 {
        self.0.iter().zip(other.0.iter()).map(|(a, b)| a * b.conj()).sum()
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        let n = self.dim();
        (0..n).map(|u| (0..n).map(|w| self.0[(u, w)] * v[w]).sum()).collect()
    }

    /// Row-major little-endian `(re, im)` pairs of `f64`.
    pub fn write_binary<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        let n = self.dim();
        for u in 0..n {
            for w in 0..n {
                let z = self.0[(u, w)];
                out.write_all(&z.re.to_le_bytes())?;
                out.write_all(&z.im.to_le_bytes())?;
            }
        }
        Ok(())
    }
}

pub(crate) fn check_matrix_cap(spec: &GroupSpec, cap: u128) -> Result<usize> {
    match spec.order() {
        Some(n) if n <= cap => Ok(n as usize),
        n => Err(Error::CapExceeded { what: "|A| for dense matrices", size: n.unwrap_or(u128::MAX), cap }),
    }
}

/// `W_k` in permutation-times-diagonal form: `(W_k f)(u) = diag[u]·f(col[u])`
/// with `col[u] = u − x` and `diag[u] = χ(u − x/2)`.
#[derive(Clone, Debug, PartialEq)]
pub struct WeylOperator {
    pub col: Vec<usize>,
    pub diag: Vec<Complex64>,
}

impl WeylOperator {
    pub fn new(spec: &GroupSpec, roots: &RootTable, k: &KElement) -> Self {
        let n = spec.order().expect("group fits in memory") as usize;
        let half_x = spec.halve(&k.a.0);
        let mut col = Vec::with_capacity(n);
        let mut diag = Vec::with_capacity(n);
        for idx in 0..n {
            let u = spec.element_at(idx);
            col.push(spec.index_of(&spec.sub(&u, &k.a.0)));
            diag.push(roots.get(spec.pairing_numerator(&k.chi.0, &spec.sub(&u, &half_x))));
        }
        WeylOperator { col, diag }
    }

    pub fn to_dense(&self) -> ComplexOperator {
        let n = self.col.len();
        let mut m = ComplexOperator::zeros(n);
        for (u, (&w, &d)) in self.col.iter().zip(&self.diag).enumerate() {
            m.0[(u, w)] = d;
        }
        m
    }

    /// `tr(M · W^†)` for a dense `M`.
    pub fn pair_with(&self, m: &ComplexOperator) -> Complex64 {
        self.col.iter().zip(&self.diag).enumerate().map(|(u, (&w, d))| m.0[(u, w)] * d.conj()).sum()
    }
}

/// `W_k` as a dense matrix.
pub fn weyl_matrix(spec: &GroupSpec, k: &KElement, cap: u128) -> Result<ComplexOperator> {
    check_matrix_cap(spec, cap)?;
    Ok(WeylOperator::new(spec, &RootTable::new(spec), k).to_dense())
}

/// `Δ_I = Σ_{k ∈ K_I} W_k` with `K_I = A_I × Â_I`, summed term by term.
///
/// For a fixed translation `x ∈ A_I` every `W_{(x,χ)}` fills the same
/// entries `(u, u − x)`, so translations are independent work items.
pub fn delta_matrix(spec: &GroupSpec, ideal: OrderIdeal, cap: u128, exec: Execution) -> Result<ComplexOperator> {
    let n = check_matrix_cap(spec, cap)?;
    let roots = RootTable::new(spec);
    let members: Vec<Vec<u64>> = spec.characteristic_members(ideal, cap)?.into_iter().map(|e| e.0).collect();
    let columns = exec.map(&members, |x| {
        let half_x = spec.halve(x);
        (0..n)
            .map(|idx| {
                let u = spec.element_at(idx);
                let shifted = spec.sub(&u, &half_x);
                let value: Complex64 = members.iter().map(|chi| roots.get(spec.pairing_numerator(chi, &shifted))).sum();
                (spec.index_of(&spec.sub(&u, x)), value)
            })
            .collect::<Vec<_>>()
    });
    let mut m = ComplexOperator::zeros(n);
    for entries in columns {
        for (u, (w, value)) in entries.into_iter().enumerate() {
            m.0[(u, w)] += value;
        }
    }
    Ok(m)
}

/// The parity operator `f ↦ f(−·)`.
pub fn parity_matrix(spec: &GroupSpec, cap: u128) -> Result<ComplexOperator> {
    let n = check_matrix_cap(spec, cap)?;
    let mut m = ComplexOperator::zeros(n);
    for idx in 0..n {
        let u = spec.element_at(idx);
        m.0[(idx, spec.index_of(&spec.neg(&u)))] = Complex64::new(1.0, 0.0);
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::Partition;

    fn spec(p: u64, parts: &[u32]) -> GroupSpec {
        GroupSpec::new(p, Partition::new(parts.to_vec()).unwrap()).unwrap()
    }

    #[test]
    fn weyl_identity_and_unitarity() {
        let g = spec(3, &[2, 1]);
        let w0 = weyl_matrix(&g, &g.zero_k(), DEFAULT_MATRIX_CAP).unwrap();
        assert_eq!(w0, ComplexOperator::identity(27));
        let k = KElement::new(vec![4, 2], vec![7, 1]);
        let w = weyl_matrix(&g, &k, DEFAULT_MATRIX_CAP).unwrap();
        assert!(w.mul(&w.adjoint()).max_abs_diff(&ComplexOperator::identity(27)) < 1e-12);
        assert!(w.trace().norm() < 1e-12);
    }

    #[test]
    fn weyl_relation_small() {
        let g = spec(3, &[1]);
        let roots = RootTable::new(&g);
        for i in 0..9 {
            for j in 0..9 {
                let (k, l) = (g.k_at(i), g.k_at(j));
                let lhs = WeylOperator::new(&g, &roots, &k).to_dense().mul(&WeylOperator::new(&g, &roots, &l).to_dense());
                let c = g.cocycle(&k, &l).to_complex();
                let rhs = WeylOperator::new(&g, &roots, &g.add_k(&k, &l)).to_dense().scale(1.0);
                let rhs = ComplexOperator(rhs.0.map(|z| z * c));
                assert!(lhs.max_abs_diff(&rhs) < 1e-12, "k={k:?} l={l:?}");
            }
        }
    }

    #[test]
    fn delta_extremes() {
        let g = spec(3, &[1]);
        let d0 = delta_matrix(&g, OrderIdeal::EMPTY, DEFAULT_MATRIX_CAP, Execution::default()).unwrap();
        assert!(d0.max_abs_diff(&ComplexOperator::identity(3)) < 1e-12);
        let full = delta_matrix(&g, g.poset().full(), DEFAULT_MATRIX_CAP, Execution::default()).unwrap();
        let parity = parity_matrix(&g, DEFAULT_MATRIX_CAP).unwrap().scale(3.0);
        assert!(full.max_abs_diff(&parity) < 1e-12);
    }

    #[test]
    fn caps_are_enforced() {
        let g = spec(3, &[4, 3]);
        assert!(matches!(weyl_matrix(&g, &g.zero_k(), DEFAULT_MATRIX_CAP), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn binary_layout() {
        let m = ComplexOperator(DMatrix::from_row_slice(1, 1, &[Complex64::new(1.5, -2.0)]));
        let mut buf = Vec::new();
        m.write_binary(&mut buf).unwrap();
        assert_eq!(buf.len(), 16);
        assert_eq!(f64::from_le_bytes(buf[8..16].try_into().unwrap()), -2.0);
    }
}
