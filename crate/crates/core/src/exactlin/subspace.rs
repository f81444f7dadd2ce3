//! Exact linear subspaces of `Q(ζ_M)^n`, kept in a canonical basis.

use alloc::vec::Vec;

use crate::exactlin::cyclotomic::CycScalar;
use crate::exactlin::matrix::{ExactMatrix, ExactVector};

/// A subspace of an `ambient`-dimensional space.
///
/// The basis is the transpose of the RREF of the spanning rows, so two
/// subspaces are equal iff their stored bases are equal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    basis: ExactMatrix,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: ExactMatrix::zeros(ambient, 0, 1),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: ExactMatrix::identity(ambient, 1),
        }
    }

    /// Column span of `m`.
    pub fn column_span(m: &ExactMatrix) -> Self {
        let ambient = m.rows();
        if m.cols() == 0 {
            return Self::zero(ambient);
        }
        let (r, pivots) = m.transpose().rref();
        let k = pivots.len();
        let basis = ExactMatrix::from_fn(ambient, k, |row, c| r.get(c, row).clone());
        Subspace { ambient, basis }
    }

    pub fn span(ambient: usize, vectors: &[ExactVector]) -> Self {
        Self::column_span(&ExactMatrix::from_columns(ambient, vectors))
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    /// Basis vectors as the columns of a matrix.
    pub fn basis(&self) -> &ExactMatrix {
        &self.basis
    }

    pub fn vectors(&self) -> Vec<ExactVector> {
        self.basis.columns()
    }

    pub fn sum(&self, other: &Self) -> Self {
        Self::column_span(&self.basis.hstack(&other.basis))
    }

    pub fn intersect(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.ambient);
        }
        let stacked = self.basis.hstack(&other.basis.neg());
        let k = self.dim();
        let vecs: Vec<ExactVector> = stacked
            .kernel_basis()
            .into_iter()
            .map(|v| self.basis.mul_vec(&v[..k]))
            .collect();
        Self::span(self.ambient, &vecs)
    }

    pub fn contains_vector(&self, v: &[CycScalar]) -> bool {
        if v.iter().all(CycScalar::is_zero) {
            return true;
        }
        let m = self.basis.hstack(&ExactMatrix::from_columns(self.ambient, &[v.to_vec()]));
        m.rank() == self.dim()
    }

    pub fn contains(&self, other: &Self) -> bool {
        self.sum(other).dim() == self.dim()
    }

    /// Image `m·self`.
    pub fn image(&self, m: &ExactMatrix) -> Self {
        Self::column_span(&m.mul(&self.basis))
    }

    /// Kernel of `m` as a subspace.
    pub fn kernel_of(m: &ExactMatrix) -> Self {
        Self::span(m.cols(), &m.kernel_basis())
    }

    /// Column space of `m` as a subspace.
    pub fn image_of(m: &ExactMatrix) -> Self {
        Self::column_span(m)
    }

    /// The part of `self` orthogonal to `other` for the Hermitian form `q`
    /// (`⟨x, y⟩ = y* q x`).
    pub fn orthogonal_complement_within(&self, other: &Self, q: &ExactMatrix) -> Self {
        if other.is_zero() || self.is_zero() {
            return self.clone();
        }
        // coefficients c with other.basis* q self.basis c = 0
        let gram = other.basis.conj_transpose().mul(q).mul(&self.basis);
        let vecs: Vec<ExactVector> = gram
            .kernel_basis()
            .into_iter()
            .map(|c| self.basis.mul_vec(&c))
            .collect();
        Self::span(self.ambient, &vecs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: &[i64]) -> ExactVector {
        x.iter().map(|&a| CycScalar::from_int(a)).collect()
    }

    #[test]
    fn sum_and_intersection_dimensions() {
        let a = Subspace::span(3, &[v(&[1, 0, 0]), v(&[0, 1, 0])]);
        let b = Subspace::span(3, &[v(&[0, 1, 1]), v(&[0, 0, 1])]);
        assert_eq!(a.sum(&b).dim(), 3);
        let i = a.intersect(&b);
        assert_eq!(i.dim(), 1);
        assert!(i.contains_vector(&v(&[0, 2, 0])));
    }

    #[test]
    fn canonical_basis_makes_equality_exact() {
        let a = Subspace::span(2, &[v(&[1, 1]), v(&[2, 2])]);
        let b = Subspace::span(2, &[v(&[-3, -3])]);
        assert_eq!(a, b);
    }

    #[test]
    fn orthogonal_complement() {
        let full = Subspace::full(2);
        let line = Subspace::span(2, &[v(&[1, 1])]);
        let c = full.orthogonal_complement_within(&line, &ExactMatrix::identity(2, 1));
        assert_eq!(c, Subspace::span(2, &[v(&[1, -1])]));
    }
}
