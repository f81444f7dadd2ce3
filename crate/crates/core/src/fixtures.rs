//! Seeded generators of valid inputs and the small worked models used by the
//! test suites and the CLI self-checks.

use alloc::vec::Vec;

use rand::Rng;

use crate::exactlin::{CycScalar, ExactMatrix};
use crate::hodgenum::NilpotentOrbitVHS;

/// Integer matrix with determinant 1: a product of elementary row operations.
pub fn random_unimodular<R: Rng>(rng: &mut R, n: usize) -> ExactMatrix {
    let mut m = ExactMatrix::identity(n, 1);
    if n < 2 {
        return m;
    }
    for _ in 0..2 * n {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let c = rng.gen_range(-2i64..=2);
        if c == 0 {
            continue;
        }
        let mut e = ExactMatrix::identity(n, 1);
        e.set(i, j, CycScalar::from_int(c));
        m = e.mul(&m);
    }
    m
}

/// A random partition of `n` into Jordan block sizes.
pub fn random_partition<R: Rng>(rng: &mut R, n: usize) -> Vec<usize> {
    let mut left = n;
    let mut out = Vec::new();
    while left > 0 {
        let b = rng.gen_range(1..=left);
        out.push(b);
        left -= b;
    }
    out
}

/// `P·D·U·P^{-1}` with `D` a diagonal of `m`-th roots of unity constant on
/// Jordan blocks, `U` unipotent on the same blocks and `P` unimodular.
pub fn random_quasi_unipotent<R: Rng>(rng: &mut R, n: usize, m: u32) -> ExactMatrix {
    let mut d = ExactMatrix::zeros(n, n, m);
    let mut u = ExactMatrix::identity(n, m);
    let mut start = 0;
    for b in random_partition(rng, n) {
        let lambda = CycScalar::root_of_unity(m, rng.gen_range(0..m as i64));
        for i in start..start + b {
            d.set(i, i, lambda.clone());
            if i + 1 < start + b {
                let c = rng.gen_range(1i64..=3);
                u.set(i, i + 1, CycScalar::from_int(c).lift(m));
            }
        }
        start += b;
    }
    let p = random_unimodular(rng, n).lift(m);
    let pinv = p.inverse().expect("unimodular");
    p.mul(&d).mul(&u).mul(&pinv)
}

/// `P·J·P^{-1}` with `J` a random direct sum of nilpotent Jordan blocks.
pub fn random_nilpotent<R: Rng>(rng: &mut R, n: usize) -> ExactMatrix {
    let j = nilpotent_of_type(&random_partition(rng, n));
    let p = random_unimodular(rng, n);
    p.mul(&j).mul(&p.inverse().expect("unimodular"))
}

/// Direct sum of nilpotent Jordan blocks of the given sizes.
pub fn nilpotent_of_type(blocks: &[usize]) -> ExactMatrix {
    let n: usize = blocks.iter().sum();
    let mut m = ExactMatrix::zeros(n, n, 1);
    let mut start = 0;
    for &b in blocks {
        for i in start..start + b.saturating_sub(1) {
            m.set(i, i + 1, CycScalar::from_int(1));
        }
        start += b;
    }
    m
}

/// Unipotent Jordan block `J_n(1)`.
pub fn unipotent_jordan(n: usize) -> ExactMatrix {
    ExactMatrix::identity(n, 1).add(&nilpotent_of_type(&[n]))
}

/// Weight-1 rank-2 orbit of a degenerating elliptic curve:
/// `S = [[0,−1],[1,0]]`, `F^1 = span(e₂)`, `N e₂ = e₁`.
pub fn elliptic_vhs() -> NilpotentOrbitVHS {
    NilpotentOrbitVHS::new(
        1,
        ExactMatrix::from_ints(&[&[0, -1], &[1, 0]]),
        alloc::vec![(1, ExactMatrix::from_ints(&[&[0], &[1]]))],
        alloc::vec![nilpotent_of_type(&[2])],
    )
    .expect("elliptic model is a valid orbit")
}

/// Monodromy of the elliptic model, `exp(N) = [[1,1],[0,1]]`.
pub fn elliptic_monodromy() -> ExactMatrix {
    unipotent_jordan(2)
}
