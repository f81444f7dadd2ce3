//! Monodromy weight filtrations and the iterated multigrading they induce.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::exactlin::{ExactMatrix, Subspace};
use crate::numeric;

/// The weight filtration `W(N)` centred at `center`.
///
/// Stored for `l ∈ [center − r, center + r]`; below the range `W_l = 0`, above
/// it `W_l = V`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightFiltration {
    center: i32,
    rank: usize,
    steps: Vec<Subspace>,
}

/// Which axiom a candidate filtration violates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AxiomViolation {
    NotIncreasing(i32),
    NotExhaustive,
    Contraction(i32),
    Lefschetz(i32),
}

impl WeightFiltration {
    pub fn center(&self) -> i32 {
        self.center
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn lowest(&self) -> i32 {
        self.center - self.rank as i32
    }

    pub fn highest(&self) -> i32 {
        self.center + self.rank as i32
    }

    /// `W_l`.
    pub fn step(&self, l: i32) -> Subspace {
        if l < self.lowest() {
            Subspace::zero(self.rank)
        } else if l > self.highest() {
            Subspace::full(self.rank)
        } else {
            self.steps[(l - self.lowest()) as usize].clone()
        }
    }

    pub fn dim(&self, l: i32) -> usize {
        if l < self.lowest() {
            0
        } else if l > self.highest() {
            self.rank
        } else {
            self.steps[(l - self.lowest()) as usize].dim()
        }
    }

    /// `dim Gr_l`.
    pub fn graded_dim(&self, l: i32) -> usize {
        self.dim(l) - self.dim(l - 1)
    }

    /// Degrees with nonzero graded piece, ascending.
    pub fn degrees(&self) -> Vec<i32> {
        (self.lowest()..=self.highest())
            .filter(|&l| self.graded_dim(l) > 0)
            .collect()
    }

    /// Checks the defining properties against `n` exactly.
    pub fn verify(&self, n: &ExactMatrix) -> core::result::Result<(), AxiomViolation> {
        let (lo, hi) = (self.lowest() - 1, self.highest() + 1);
        if self.dim(lo) != 0 || self.dim(hi) != self.rank {
            return Err(AxiomViolation::NotExhaustive);
        }
        for l in lo + 1..=hi {
            if !self.step(l).contains(&self.step(l - 1)) {
                return Err(AxiomViolation::NotIncreasing(l));
            }
            if !self.step(l - 2).contains(&self.step(l).image(n)) {
                return Err(AxiomViolation::Contraction(l));
            }
        }
        let c = self.center;
        for l in 0..=self.rank as i32 {
            let top = self.graded_dim(c + l);
            if top != self.graded_dim(c - l) {
                return Err(AxiomViolation::Lefschetz(l));
            }
            if top == 0 {
                continue;
            }
            let below = self.step(c - l - 1);
            let image = self.step(c + l).image(&n.pow(l as u32)).sum(&below);
            if image.dim() - below.dim() != top {
                return Err(AxiomViolation::Lefschetz(l));
            }
        }
        Ok(())
    }
}

/// `W(N)` via `W_{c+l} = Σ_{j≥0} ker N^{l+1+j} ∩ im N^j`.
pub fn weight_filtration(n: &ExactMatrix, center: i32) -> Result<WeightFiltration> {
    if !n.is_nilpotent() {
        return Err(Error::NotNilpotent);
    }
    let r = n.rows();
    let kernels: Vec<Subspace> = (0..=2 * r + 1)
        .map(|a| Subspace::kernel_of(&n.pow(a as u32)))
        .collect();
    let images: Vec<Subspace> = (0..=r).map(|j| Subspace::image_of(&n.pow(j as u32))).collect();
    let ker = |a: i64| -> Subspace {
        if a <= 0 {
            Subspace::zero(r)
        } else {
            kernels[(a as usize).min(2 * r + 1)].clone()
        }
    };
    let mut steps = Vec::with_capacity(2 * r + 1);
    for l in -(r as i64)..=(r as i64) {
        let mut w = Subspace::zero(r);
        for (j, im) in images.iter().enumerate() {
            let a = l + 1 + j as i64;
            if a <= 0 || im.is_zero() {
                continue;
            }
            w = w.sum(&ker(a).intersect(im));
        }
        steps.push(w);
    }
    Ok(WeightFiltration {
        center,
        rank: r,
        steps,
    })
}

/// One summand `V_l` of a multigrading.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedPiece {
    pub degrees: Vec<i32>,
    /// Basis vectors as columns.
    pub basis: ExactMatrix,
}

/// A splitting `V = ⊕_l V_l` refining `W^{(j)} = W(N_1 + … + N_j)` for every `j`,
/// together with the restricted forms `Q_l`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiGrading {
    rank: usize,
    q: ExactMatrix,
    filtrations: Vec<WeightFiltration>,
    pieces: Vec<GradedPiece>,
}

impl MultiGrading {
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn variables(&self) -> usize {
        self.filtrations.len()
    }

    pub fn q(&self) -> &ExactMatrix {
        &self.q
    }

    pub fn filtrations(&self) -> &[WeightFiltration] {
        &self.filtrations
    }

    pub fn pieces(&self) -> &[GradedPiece] {
        &self.pieces
    }

    /// `Q_l = B_l* Q B_l` for the piece basis `B_l`.
    pub fn restricted_form(&self, piece: &GradedPiece) -> ExactMatrix {
        piece.basis.conj_transpose().mul(&self.q).mul(&piece.basis)
    }

    /// All piece bases side by side, in piece order.
    pub fn adapted_basis(&self) -> ExactMatrix {
        let mut m = ExactMatrix::zeros(self.rank, 0, 1);
        for p in &self.pieces {
            m = m.hstack(&p.basis);
        }
        m
    }

    /// Degree of every column of [`Self::adapted_basis`].
    pub fn column_degrees(&self) -> Vec<Vec<i32>> {
        self.pieces
            .iter()
            .flat_map(|p| core::iter::repeat_n(p.degrees.clone(), p.basis.cols()))
            .collect()
    }

    /// Whether `⊕_{l_j ≤ k} V_l = W^{(j)}_k` for every `j` and `k`.
    pub fn reproduces_filtrations(&self) -> bool {
        for (j, w) in self.filtrations.iter().enumerate() {
            for k in w.lowest() - 1..=w.highest() + 1 {
                let mut s = Subspace::zero(self.rank);
                for p in self.pieces.iter().filter(|p| p.degrees[j] <= k) {
                    s = s.sum(&Subspace::column_span(&p.basis));
                }
                if s != w.step(k) {
                    return false;
                }
            }
        }
        true
    }
}

/// Builds the multigrading of commuting nilpotents `N_1, …, N_n` with respect
/// to the Hermitian form `q`.
///
/// Pieces are visited in lexicographic order of their multidegree. With
/// `U(l) = ∩_j W^{(j)}_{l_j}` and `B(l) = Σ_i U(l_1, …, l_{i−1}, l_i − 1)`, the
/// piece `V_l` is the `q`-orthogonal complement of `U(l) ∩ B(l)` inside `U(l)`,
/// so every `V_l` lies in every `W^{(j)}_{l_j}`.
pub fn multi_grading(nilpotents: &[ExactMatrix], q: &ExactMatrix, center: i32) -> Result<MultiGrading> {
    let Some(first) = nilpotents.first() else {
        return Err(Error::InvalidInput("no nilpotent operators".into()));
    };
    let r = first.rows();
    if q.rows() != r || q.cols() != r {
        return Err(Error::Dimension("inner product has the wrong size".into()));
    }
    for i in 0..nilpotents.len() {
        for j in i + 1..nilpotents.len() {
            if !nilpotents[i].commutes_with(&nilpotents[j]) {
                return Err(Error::NonCommuting(i + 1, j + 1));
            }
        }
    }
    if *q != q.conj_transpose() {
        return Err(Error::NotPositiveDefinite("inner product is not Hermitian".into()));
    }
    if !numeric::is_positive_definite(&q.to_complex()) {
        return Err(Error::NotPositiveDefinite("inner product".into()));
    }
    let mut filtrations = Vec::with_capacity(nilpotents.len());
    let mut partial = ExactMatrix::zeros(r, r, first.order());
    for n in nilpotents {
        partial = partial.add(n);
        filtrations.push(weight_filtration(&partial, center)?);
    }
    let mut pieces = Vec::new();
    let mut prefix = Vec::new();
    collect_pieces(
        &filtrations,
        q,
        &Subspace::full(r),
        &Subspace::zero(r),
        &mut prefix,
        &mut pieces,
    );
    let grading = MultiGrading {
        rank: r,
        q: q.clone(),
        filtrations,
        pieces,
    };
    if grading.adapted_basis().rank() != r {
        return Err(Error::InvalidInput("multigrading pieces are not independent".into()));
    }
    Ok(grading)
}

fn collect_pieces(
    filtrations: &[WeightFiltration],
    q: &ExactMatrix,
    u: &Subspace,
    b: &Subspace,
    prefix: &mut Vec<i32>,
    out: &mut Vec<GradedPiece>,
) {
    let depth = prefix.len();
    let w = &filtrations[depth];
    for l in w.lowest()..=w.highest() {
        let u_next = u.intersect(&w.step(l));
        let b_next = b.sum(&u.intersect(&w.step(l - 1)));
        if u_next.sum(&b_next).dim() == b_next.dim() {
            continue;
        }
        prefix.push(l);
        if depth + 1 == filtrations.len() {
            let overlap = u_next.intersect(&b_next);
            let piece = u_next.orthogonal_complement_within(&overlap, q);
            out.push(GradedPiece {
                degrees: prefix.clone(),
                basis: piece.basis().clone(),
            });
        } else {
            collect_pieces(filtrations, q, &u_next, &b_next, prefix, out);
        }
        prefix.pop();
    }
}
