//! Monodromy tuples and their logarithms.
//!
//! For a quasi-unipotent `T = T_s·T_u` the logarithm is `R = 2πi·A + N` where
//! `A = Σ_α (−k_α/m)·P_α` acts on the `λ_α = e^{−2πi k_α/m}` eigenspace of `T_s`
//! with `0 ≤ k_α ≤ m−1`, and `N = log T_u` is the finite series
//! `−Σ_{k≥1} (I − T_u)^k / k`. The factor `2πi` is kept symbolic.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::exactlin::jordan::{
    jordan_chevalley, root_of_unity_order, roots_among_unity, semisimple_minimal_polynomial,
};
use crate::exactlin::{eigen_projectors, CycScalar, ExactMatrix, ExactVector, Subspace};

/// One eigenspace of a semisimple monodromy part.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EigenBlock {
    /// `λ = ζ_m^{-k}`.
    pub eigenvalue: CycScalar,
    /// Branch exponent, `0 ≤ k ≤ m − 1`.
    pub k: u32,
    pub projector: ExactMatrix,
}

impl EigenBlock {
    /// The eigenvalue `−k/m` of `A` (and of the residue) on this block.
    pub fn residue(&self, m: u32) -> BigRational {
        BigRational::new(BigInt::from(-(self.k as i64)), BigInt::from(m))
    }
}

/// `log T = 2πi·A + N` for a single operator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonodromyLog {
    /// Quasi-unipotency index `m`, the least `m ≥ 1` with `T_s^m = I`.
    pub index: u32,
    pub semisimple: ExactMatrix,
    pub unipotent: ExactMatrix,
    pub a: ExactMatrix,
    pub n: ExactMatrix,
    /// Sorted by increasing `k`.
    pub blocks: Vec<EigenBlock>,
}

impl MonodromyLog {
    /// `Σ_α ζ_m^{−k_α} P_α · exp(N)`, which equals `T` exactly.
    pub fn reconstruct(&self) -> ExactMatrix {
        let r = self.n.rows();
        let mut semisimple = ExactMatrix::zeros(r, r, self.n.order());
        for b in &self.blocks {
            let lambda = CycScalar::root_of_unity(self.index, -(b.k as i64));
            semisimple = semisimple.add(&b.projector.scale(&lambda));
        }
        semisimple.mul(&exp_nilpotent(&self.n))
    }

    /// Eigenvalues of `A`, one per block, as exact rationals in `(−1, 0]`.
    pub fn a_eigenvalues(&self) -> Vec<BigRational> {
        self.blocks.iter().map(|b| b.residue(self.index)).collect()
    }
}

/// Per-variable logarithms of a validated tuple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogDecomposition {
    pub logs: Vec<MonodromyLog>,
}

impl LogDecomposition {
    pub fn of(tuple: &MonodromyTuple) -> LogDecomposition {
        tuple.logs.clone()
    }

    /// Simultaneous eigenvectors of all semisimple parts, with the branch
    /// exponents `k_{αj}` of each vector.
    pub fn joint_eigenbasis(&self) -> Vec<(ExactVector, Vec<u32>)> {
        let Some(first) = self.logs.first() else {
            return Vec::new();
        };
        let r = first.n.rows();
        let order = first.n.order();
        let mut pieces: Vec<(ExactMatrix, Vec<u32>)> =
            alloc::vec![(ExactMatrix::identity(r, order), Vec::new())];
        for log in &self.logs {
            let mut next = Vec::new();
            for (p, ks) in &pieces {
                for b in &log.blocks {
                    let q = p.mul(&b.projector);
                    if !q.is_zero() {
                        let mut ks = ks.clone();
                        ks.push(b.k);
                        next.push((q, ks));
                    }
                }
            }
            pieces = next;
        }
        let mut out = Vec::new();
        for (p, ks) in pieces {
            for v in Subspace::image_of(&p).vectors() {
                out.push((v, ks.clone()));
            }
        }
        out
    }
}

/// Commuting quasi-unipotent operators `T_1, …, T_n` on a rank-`r` space,
/// stored over one cyclotomic field containing every eigenvalue.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonodromyTuple {
    rank: usize,
    order: u32,
    matrices: Vec<ExactMatrix>,
    indices: Vec<u32>,
    logs: LogDecomposition,
}

impl MonodromyTuple {
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn variables(&self) -> usize {
        self.matrices.len()
    }

    /// Cyclotomic order of the working field.
    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn matrices(&self) -> &[ExactMatrix] {
        &self.matrices
    }

    pub fn indices(&self) -> &[u32] {
        &self.indices
    }

    pub fn logs(&self) -> &LogDecomposition {
        &self.logs
    }

    pub fn is_unipotent(&self) -> bool {
        self.indices.iter().all(|&m| m == 1)
    }
}

/// Checks shape, invertibility, pairwise commutation and quasi-unipotency,
/// and computes the logarithm of every operator.
///
/// Pair indices in [`Error::NonCommuting`] are 1-based.
pub fn validate_tuple(matrices: &[ExactMatrix]) -> Result<MonodromyTuple> {
    let Some(first) = matrices.first() else {
        return Err(Error::InvalidInput("empty monodromy tuple".into()));
    };
    let r = first.rows();
    for m in matrices {
        if !m.is_square() || m.rows() != r {
            return Err(Error::Dimension(
                "monodromy matrices must be square of equal size".into(),
            ));
        }
        if !m.is_invertible() {
            return Err(Error::NotInvertible);
        }
    }
    for i in 0..matrices.len() {
        for j in i + 1..matrices.len() {
            if !matrices[i].commutes_with(&matrices[j]) {
                return Err(Error::NonCommuting(i + 1, j + 1));
            }
        }
    }
    let mut logs: Vec<MonodromyLog> = matrices.iter().map(log_monodromy).collect::<Result<_>>()?;
    let order = logs
        .iter()
        .map(|l| l.a.order().max(1))
        .chain(matrices.iter().map(ExactMatrix::order))
        .chain(logs.iter().map(|l| l.index))
        .fold(1, num_integer::lcm);
    for log in &mut logs {
        *log = lift_log(log, order);
    }
    Ok(MonodromyTuple {
        rank: r,
        order,
        indices: logs.iter().map(|l| l.index).collect(),
        matrices: matrices.iter().map(|m| m.lift(order)).collect(),
        logs: LogDecomposition { logs },
    })
}

fn lift_log(log: &MonodromyLog, order: u32) -> MonodromyLog {
    MonodromyLog {
        index: log.index,
        semisimple: log.semisimple.lift(order),
        unipotent: log.unipotent.lift(order),
        a: log.a.lift(order),
        n: log.n.lift(order),
        blocks: log
            .blocks
            .iter()
            .map(|b| EigenBlock {
                eigenvalue: b.eigenvalue.lift(order),
                k: b.k,
                projector: b.projector.lift(order),
            })
            .collect(),
    }
}

/// `exp(N) = Σ N^k / k!`, finite for nilpotent `N`.
pub fn exp_nilpotent(n: &ExactMatrix) -> ExactMatrix {
    let r = n.rows();
    let mut term = ExactMatrix::identity(r, n.order());
    let mut acc = term.clone();
    for k in 1..=r {
        term = term.mul(n).scale(&CycScalar::from_frac(1, k as i64));
        if term.is_zero() {
            break;
        }
        acc = acc.add(&term);
    }
    acc
}

/// `log T_u = −Σ_{k≥1} (I − T_u)^k / k`; the series stops at the nilpotency index.
pub fn log_unipotent(tu: &ExactMatrix) -> Result<ExactMatrix> {
    if !tu.is_square() {
        return Err(Error::Dimension("log of a non-square matrix".into()));
    }
    let r = tu.rows();
    let id = ExactMatrix::identity(r, tu.order());
    let e = id.sub(tu);
    if !e.is_nilpotent() {
        return Err(Error::NotUnipotent);
    }
    let mut acc = ExactMatrix::zeros(r, r, tu.order());
    let mut power = id;
    for k in 1..=r {
        power = power.mul(&e);
        if power.is_zero() {
            break;
        }
        acc = acc.sub(&power.scale(&CycScalar::from_frac(1, k as i64)));
    }
    Ok(acc)
}

/// Logarithm of a single quasi-unipotent operator.
pub fn log_monodromy(t: &ExactMatrix) -> Result<MonodromyLog> {
    let (ts, tu) = jordan_chevalley(t)?;
    let f = semisimple_minimal_polynomial(&ts)?;
    let m = root_of_unity_order(&f)?.ok_or(Error::NotQuasiUnipotent)?;
    let roots = roots_among_unity(&f, m);
    if Some(roots.len()) != f.degree() {
        return Err(Error::NotQuasiUnipotent);
    }
    let eigenvalues: Vec<CycScalar> = roots.iter().map(|(_, z)| z.clone()).collect();
    let projectors = eigen_projectors(&ts, &eigenvalues)?;
    let order = projectors
        .iter()
        .map(|(_, p)| p.order())
        .fold(ts.order(), num_integer::lcm);
    let mut blocks: Vec<EigenBlock> = roots
        .iter()
        .zip(projectors)
        .map(|((j, _), (lambda, p))| EigenBlock {
            eigenvalue: lambda.lift(order),
            // λ = ζ_m^j = e^{−2πi k/m}
            k: (m - j) % m,
            projector: p.lift(order),
        })
        .collect();
    blocks.sort_by_key(|b| b.k);
    let r = t.rows();
    let mut a = ExactMatrix::zeros(r, r, order);
    for b in &blocks {
        let c = CycScalar::from_rational(b.residue(m), 1);
        a = a.add(&b.projector.scale(&c));
    }
    let n = log_unipotent(&tu)?.lift(order);
    Ok(MonodromyLog {
        index: m,
        semisimple: ts.lift(order),
        unipotent: tu.lift(order),
        a,
        n,
        blocks,
    })
}
