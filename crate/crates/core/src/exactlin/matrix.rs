//! Dense matrices over `Q(ζ_M)`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_integer::Integer;

use crate::error::{Error, Result};
use crate::exactlin::cyclotomic::CycScalar;
use crate::exactlin::poly::Poly;

/// A column vector of exact scalars.
pub type ExactVector = Vec<CycScalar>;

/// Row-major dense matrix; every entry is stored at the same cyclotomic order.
///
/// Equality is value equality: matrices stored at different orders compare
/// equal when they agree after lifting.
#[derive(Clone, Debug)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    order: u32,
    entries: Vec<CycScalar>,
}

impl ExactMatrix {
    /// Builds a matrix, lifting all entries to the lcm of their orders.
    pub fn new(rows: usize, cols: usize, entries: Vec<CycScalar>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "expected {} entries for a {}x{} matrix, got {}",
                rows * cols,
                rows,
                cols,
                entries.len()
            )));
        }
        let order = entries.iter().map(CycScalar::order).fold(1, |a, b| a.lcm(&b));
        let entries = entries.into_iter().map(|e| e.lift(order)).collect();
        Ok(ExactMatrix {
            rows,
            cols,
            order,
            entries,
        })
    }

    pub fn from_ints(rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let entries = rows
            .iter()
            .flat_map(|row| row.iter().map(|&x| CycScalar::from_int(x)))
            .collect();
        ExactMatrix::new(r, c, entries).expect("ragged integer matrix")
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> CycScalar,
    ) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                entries.push(f(r, c));
            }
        }
        ExactMatrix::new(rows, cols, entries).unwrap()
    }

    pub fn from_columns(n: usize, columns: &[ExactVector]) -> Self {
        ExactMatrix::from_fn(n, columns.len(), |r, c| columns[c][r].clone())
    }

    pub fn diagonal(diag: &[CycScalar]) -> Self {
        let n = diag.len();
        let order = diag.iter().map(CycScalar::order).fold(1, |a, b| a.lcm(&b));
        ExactMatrix::from_fn(n, n, |r, c| {
            if r == c {
                diag[r].clone()
            } else {
                CycScalar::zero(order)
            }
        })
    }

    pub fn zeros(rows: usize, cols: usize, order: u32) -> Self {
        ExactMatrix {
            rows,
            cols,
            order,
            entries: vec![CycScalar::zero(order); rows * cols],
        }
    }

    pub fn identity(n: usize, order: u32) -> Self {
        let mut m = Self::zeros(n, n, order);
        for i in 0..n {
            m.entries[i * n + i] = CycScalar::one(order);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &CycScalar {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: CycScalar) {
        let v = self.harmonize_scalar(v);
        self.entries[r * self.cols + c] = v;
    }

    pub fn entries(&self) -> &[CycScalar] {
        &self.entries
    }

    pub fn column(&self, c: usize) -> ExactVector {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn columns(&self) -> Vec<ExactVector> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    /// Lifts a scalar (and, if needed, the whole matrix) to a common order.
    fn harmonize_scalar(&mut self, v: CycScalar) -> CycScalar {
        if v.order() == self.order {
            return v;
        }
        let l = self.order.lcm(&v.order());
        if l != self.order {
            *self = self.lift(l);
        }
        v.lift(l)
    }

    pub fn lift(&self, order: u32) -> Self {
        if order == self.order {
            return self.clone();
        }
        ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            order,
            entries: self.entries.iter().map(|e| e.lift(order)).collect(),
        }
    }

    fn aligned(&self, other: &Self) -> (Self, Self) {
        let l = self.order.lcm(&other.order);
        (self.lift(l), other.lift(l))
    }

    pub fn is_rational(&self) -> bool {
        self.entries.iter().all(CycScalar::is_rational)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(CycScalar::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == Self::identity(self.rows, self.order)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        if self.order != other.order {
            let (a, b) = self.aligned(other);
            return a.add(&b);
        }
        ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            order: self.order,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        if self.order != other.order {
            let (a, b) = self.aligned(other);
            return a.sub(&b);
        }
        ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            order: self.order,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn neg(&self) -> Self {
        ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            order: self.order,
            entries: self.entries.iter().map(|a| -a).collect(),
        }
    }

    pub fn scale(&self, c: &CycScalar) -> Self {
        let l = self.order.lcm(&c.order());
        let c = c.lift(l);
        let base = self.lift(l);
        ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            order: l,
            entries: base.entries.iter().map(|a| a * &c).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        if self.order != other.order {
            let (a, b) = self.aligned(other);
            return a.mul(&b);
        }
        let mut out = Self::zeros(self.rows, other.cols, self.order);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * other.cols + j;
                    out.entries[idx] = &out.entries[idx] + &(a * b);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[CycScalar]) -> ExactVector {
        assert_eq!(self.cols, v.len());
        let col = ExactMatrix::from_columns(v.len(), &[v.to_vec()]);
        self.mul(&col).column(0)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::identity(self.rows, self.order);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn transpose(&self) -> Self {
        ExactMatrix::from_fn(self.cols, self.rows, |r, c| self.get(c, r).clone())
    }

    pub fn conj_transpose(&self) -> Self {
        ExactMatrix::from_fn(self.cols, self.rows, |r, c| self.get(c, r).conj())
    }

    pub fn commutes_with(&self, other: &Self) -> bool {
        self.mul(other) == other.mul(self)
    }

    pub fn trace(&self) -> CycScalar {
        let mut t = CycScalar::zero(self.order);
        for i in 0..self.rows.min(self.cols) {
            t = &t + self.get(i, i);
        }
        t
    }

    /// Horizontal concatenation.
    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        let (a, b) = self.aligned(other);
        ExactMatrix::from_fn(self.rows, self.cols + other.cols, |r, c| {
            if c < a.cols {
                a.get(r, c).clone()
            } else {
                b.get(r, c - a.cols).clone()
            }
        })
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            if p != row {
                for c in 0..m.cols {
                    m.entries.swap(p * m.cols + c, row * m.cols + c);
                }
            }
            let inv = m.get(row, col).inv().expect("nonzero pivot");
            for c in col..m.cols {
                let idx = row * m.cols + c;
                m.entries[idx] = &m.entries[idx] * &inv;
            }
            for r in 0..m.rows {
                if r == row || m.get(r, col).is_zero() {
                    continue;
                }
                let f = m.get(r, col).clone();
                for c in col..m.cols {
                    let t = &f * m.get(row, c);
                    let idx = r * m.cols + c;
                    m.entries[idx] = &m.entries[idx] - &t;
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Exact basis of the kernel; empty iff the matrix is injective.
    pub fn kernel_basis(&self) -> Vec<ExactVector> {
        let (r, pivots) = self.rref();
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|c| !pivots.contains(c)) {
            let mut v = vec![CycScalar::zero(self.order); self.cols];
            v[free] = CycScalar::one(self.order);
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -r.get(i, free);
            }
            basis.push(v);
        }
        basis
    }

    /// Basis of the column space, given by the pivot columns of `self`.
    pub fn column_space(&self) -> Self {
        let (_, pivots) = self.rref();
        ExactMatrix::from_fn(self.rows, pivots.len(), |r, c| self.get(r, pivots[c]).clone())
    }

    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::Dimension("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let aug = self.hstack(&Self::identity(n, self.order));
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::NotInvertible);
        }
        Ok(ExactMatrix::from_fn(n, n, |i, j| r.get(i, n + j).clone()))
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    pub fn is_nilpotent(&self) -> bool {
        self.is_square() && self.pow(self.rows as u32).is_zero()
    }

    /// Characteristic polynomial `det(x·I − A)` (Faddeev–LeVerrier).
    pub fn charpoly(&self) -> Poly {
        assert!(self.is_square());
        let n = self.rows;
        let mut coeffs = vec![CycScalar::zero(self.order); n + 1];
        coeffs[n] = CycScalar::one(self.order);
        let id = Self::identity(n, self.order);
        let mut m = Self::zeros(n, n, self.order);
        for k in 1..=n {
            m = self.mul(&m).add(&id.scale(&coeffs[n - k + 1]));
            let am = self.mul(&m);
            let c = &(-&am.trace()) * &CycScalar::from_frac(1, k as i64);
            coeffs[n - k] = c;
        }
        Poly::new(coeffs)
    }

    /// Numerical image under `ζ ↦ e^{2πi/M}`.
    pub fn to_complex(&self) -> DMatrix<Complex64> {
        DMatrix::from_fn(self.rows, self.cols, |r, c| self.get(r, c).to_complex())
    }
}

impl PartialEq for ExactMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self.entries.iter().zip(&other.entries).all(|(a, b)| a == b)
    }
}

impl Eq for ExactMatrix {}

impl fmt::Display for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for r in 0..self.rows {
            if r > 0 {
                f.write_str(", ")?;
            }
            f.write_str("[")?;
            for c in 0..self.cols {
                if c > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{}", self.get(r, c))?;
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}

/// Free-standing form of [`ExactMatrix::kernel_basis`].
pub fn kernel_basis(m: &ExactMatrix) -> Vec<ExactVector> {
    m.kernel_basis()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_examples() {
        let z = ExactMatrix::zeros(2, 2, 1);
        let k = z.kernel_basis();
        assert_eq!(k.len(), 2);
        assert_eq!(k[0], vec![CycScalar::from_int(1), CycScalar::from_int(0)]);
        assert_eq!(k[1], vec![CycScalar::from_int(0), CycScalar::from_int(1)]);
        assert!(ExactMatrix::identity(2, 1).kernel_basis().is_empty());
        let n = ExactMatrix::from_ints(&[&[0, 1], &[0, 0]]);
        assert_eq!(
            n.kernel_basis(),
            vec![vec![CycScalar::from_int(1), CycScalar::from_int(0)]]
        );
    }

    #[test]
    fn inverse_roundtrip_and_singular() {
        let a = ExactMatrix::from_ints(&[&[2, 1], &[7, 4]]);
        let inv = a.inverse().unwrap();
        assert!(a.mul(&inv).is_identity());
        let s = ExactMatrix::from_ints(&[&[1, 2], &[2, 4]]);
        assert_eq!(s.inverse(), Err(Error::NotInvertible));
    }

    #[test]
    fn charpoly_of_companion() {
        // x^2 - 3x + 2
        let a = ExactMatrix::from_ints(&[&[0, -2], &[1, 3]]);
        let p = a.charpoly();
        let expected: Vec<CycScalar> = [2, -3, 1].iter().map(|&x| CycScalar::from_int(x)).collect();
        assert_eq!(p.coeffs(), expected.as_slice());
        assert!(p.eval_matrix(&a).is_zero());
    }

    #[test]
    fn mixed_orders_lift_on_construction() {
        let m = ExactMatrix::diagonal(&[CycScalar::root_of_unity(3, 1), CycScalar::root_of_unity(4, 1)]);
        assert_eq!(m.order(), 12);
        assert!(m.pow(12).is_identity());
    }
}
