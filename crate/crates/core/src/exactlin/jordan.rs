//! Jordan–Chevalley decomposition, minimal polynomials of semisimple parts,
//! root-of-unity spectra and Lagrange eigenprojectors.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::exactlin::cyclotomic::{totient, CycScalar};
use crate::exactlin::matrix::ExactMatrix;
use crate::exactlin::poly::Poly;

/// Splits an invertible `T` as `T = T_s·T_u` with `T_s` semisimple, `T_u`
/// unipotent, both polynomials in `T`.
///
/// `T_s` is the limit of the Newton iteration `X ← X − f(X)·f'(X)^{-1}` on the
/// squarefree part `f` of the characteristic polynomial; it terminates after
/// about `log2(n)` steps.
pub fn jordan_chevalley(t: &ExactMatrix) -> Result<(ExactMatrix, ExactMatrix)> {
    if !t.is_square() {
        return Err(Error::Dimension("Jordan–Chevalley needs a square matrix".into()));
    }
    if !t.is_invertible() {
        return Err(Error::NotInvertible);
    }
    let n = t.rows();
    let f = t.charpoly().squarefree_part()?;
    let df = f.derivative();
    let mut x = t.clone();
    for _ in 0..=(2 * n + 2) {
        let fx = f.eval_matrix(&x);
        if fx.is_zero() {
            let ts = x;
            let tu = ts.inverse()?.mul(t);
            return Ok((ts, tu));
        }
        let d = df.eval_matrix(&x).inverse()?;
        x = x.sub(&fx.mul(&d));
    }
    Err(Error::InvalidInput(
        "Jordan–Chevalley iteration failed to converge".into(),
    ))
}

/// Monic minimal polynomial of a semisimple matrix (the squarefree part of
/// its characteristic polynomial).
pub fn semisimple_minimal_polynomial(ts: &ExactMatrix) -> Result<Poly> {
    let f = ts.charpoly().squarefree_part()?;
    if !f.eval_matrix(ts).is_zero() {
        return Err(Error::NotSemisimple);
    }
    Ok(f)
}

/// Smallest `m ≥ 1` such that `f` divides `x^m − 1`, or `None` when some root
/// of `f` is not a root of unity.
///
/// Roots of a degree-`d` factor over `Q(ζ_M)` generate an extension of degree
/// at most `d·φ(M)` over `Q`, so `φ(m) ≤ d·φ(M)`; with `φ(m) ≥ √(m/2)` that
/// bounds the search.
pub fn root_of_unity_order(f: &Poly) -> Result<Option<u32>> {
    let Some(deg) = f.degree() else {
        return Err(Error::InvalidInput("zero polynomial".into()));
    };
    if deg == 0 {
        return Ok(Some(1));
    }
    let f = f.monic()?;
    if f.coeffs()[0].is_zero() {
        return Ok(None);
    }
    let order = f.order();
    let ext = deg as u64 * totient(order) as u64;
    let cap = 2 * ext * ext + 2;
    let x = Poly::new(alloc::vec![CycScalar::zero(order), CycScalar::one(order)]);
    let mut r = x.div_rem(&f)?.1;
    let one = Poly::constant(CycScalar::one(order));
    for m in 1..=cap {
        if r == one {
            return Ok(Some(m as u32));
        }
        r = r.mul(&x).div_rem(&f)?.1;
    }
    Ok(None)
}

/// Roots of `f` among the `m`-th roots of unity, returned as `(j, ζ_m^j)`
/// with the scalar lifted to `lcm(order(f), m)`.
pub fn roots_among_unity(f: &Poly, m: u32) -> Vec<(u32, CycScalar)> {
    let l = num_integer::lcm(f.order(), m);
    let fl = f.lift(l);
    (0..m)
        .filter_map(|j| {
            let z = CycScalar::root_of_unity(m, j as i64).lift(l);
            if fl.eval(&z).is_zero() {
                Some((j, z))
            } else {
                None
            }
        })
        .collect()
}

/// Lagrange projectors `P_α = ∏_{β≠α} (T_s − λ_β)/(λ_α − λ_β)`.
pub fn eigen_projectors(
    ts: &ExactMatrix,
    eigenvalues: &[CycScalar],
) -> Result<Vec<(CycScalar, ExactMatrix)>> {
    if !ts.is_square() {
        return Err(Error::Dimension("projectors need a square matrix".into()));
    }
    let n = ts.rows();
    for (i, a) in eigenvalues.iter().enumerate() {
        if eigenvalues[..i].iter().any(|b| b == a) {
            return Err(Error::RepeatedEigenvalue(format!("{a}")));
        }
    }
    let order = eigenvalues
        .iter()
        .map(CycScalar::order)
        .fold(ts.order(), num_integer::lcm);
    let ts = ts.lift(order);
    let id = ExactMatrix::identity(n, order);
    let shifted: Vec<ExactMatrix> = eigenvalues
        .iter()
        .map(|l| ts.sub(&id.scale(l)))
        .collect();
    for (l, s) in eigenvalues.iter().zip(&shifted) {
        if s.rank() == n {
            return Err(Error::NotAnEigenvalue(format!("{l}")));
        }
    }
    let full = shifted.iter().fold(id.clone(), |acc, s| acc.mul(s));
    if !full.is_zero() {
        return Err(if eigenvalues.is_empty() {
            Error::IncompleteSpectrum
        } else {
            // either the list misses a root or T_s is not semisimple
            let f = semisimple_minimal_polynomial(&ts)?;
            if f.degree() == Some(eigenvalues.len()) {
                Error::NotSemisimple
            } else {
                Error::IncompleteSpectrum
            }
        });
    }
    let mut out = Vec::with_capacity(eigenvalues.len());
    for (a, la) in eigenvalues.iter().enumerate() {
        let mut p = id.clone();
        for (b, lb) in eigenvalues.iter().enumerate() {
            if a == b {
                continue;
            }
            let denom = (la - lb).inv()?;
            p = p.mul(&shifted[b]).scale(&denom);
        }
        out.push((la.clone(), p));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn already_unipotent() {
        let t = ExactMatrix::from_ints(&[&[1, 1], &[0, 1]]);
        let (s, u) = jordan_chevalley(&t).unwrap();
        assert!(s.is_identity());
        assert_eq!(u, t);
    }

    #[test]
    fn minus_jordan_block() {
        let t = ExactMatrix::from_ints(&[&[-1, 1], &[0, -1]]);
        let (s, u) = jordan_chevalley(&t).unwrap();
        assert_eq!(s, ExactMatrix::identity(2, 1).neg());
        assert_eq!(u, ExactMatrix::from_ints(&[&[1, -1], &[0, 1]]));
        assert_eq!(s.mul(&u), t);
        assert!(s.mul(&s).is_identity());
    }

    #[test]
    fn already_semisimple_cyclotomic() {
        let t = ExactMatrix::diagonal(&[CycScalar::root_of_unity(3, 1), CycScalar::one(1)]);
        let (s, u) = jordan_chevalley(&t).unwrap();
        assert_eq!(s, t);
        assert!(u.is_identity());
    }

    #[test]
    fn singular_rejected() {
        let t = ExactMatrix::from_ints(&[&[0, 1], &[0, 0]]);
        assert_eq!(jordan_chevalley(&t), Err(Error::NotInvertible));
    }

    #[test]
    fn projector_examples() {
        let neg = ExactMatrix::identity(2, 1).neg();
        let p = eigen_projectors(&neg, &[CycScalar::from_int(-1)]).unwrap();
        assert_eq!(p.len(), 1);
        assert!(p[0].1.is_identity());

        let d = ExactMatrix::from_ints(&[&[1, 0], &[0, -1]]);
        let p = eigen_projectors(&d, &[CycScalar::from_int(1), CycScalar::from_int(-1)]).unwrap();
        assert_eq!(p[0].1, ExactMatrix::from_ints(&[&[1, 0], &[0, 0]]));
        assert_eq!(p[1].1, ExactMatrix::from_ints(&[&[0, 0], &[0, 1]]));

        let swap = ExactMatrix::from_ints(&[&[0, 1], &[1, 0]]);
        let p = eigen_projectors(&swap, &[CycScalar::from_int(1), CycScalar::from_int(-1)]).unwrap();
        let half = CycScalar::from_frac(1, 2);
        assert_eq!(p[0].1, ExactMatrix::from_ints(&[&[1, 1], &[1, 1]]).scale(&half));
        assert_eq!(p[1].1, ExactMatrix::from_ints(&[&[1, -1], &[-1, 1]]).scale(&half));
        for (_, q) in &p {
            assert_eq!(q.mul(q), *q);
        }
    }

    #[test]
    fn projector_errors() {
        let d = ExactMatrix::from_ints(&[&[1, 0], &[0, -1]]);
        assert!(matches!(
            eigen_projectors(&d, &[CycScalar::from_int(1), CycScalar::from_int(2)]),
            Err(Error::NotAnEigenvalue(_))
        ));
        assert!(matches!(
            eigen_projectors(&d, &[CycScalar::from_int(1), CycScalar::from_int(1)]),
            Err(Error::RepeatedEigenvalue(_))
        ));
        assert_eq!(
            eigen_projectors(&d, &[CycScalar::from_int(1)]),
            Err(Error::IncompleteSpectrum)
        );
    }

    #[test]
    fn root_of_unity_orders() {
        let rot = ExactMatrix::from_ints(&[&[0, -1], &[1, 0]]);
        let f = semisimple_minimal_polynomial(&rot).unwrap();
        assert_eq!(root_of_unity_order(&f).unwrap(), Some(4));
        let roots = roots_among_unity(&f, 4);
        assert_eq!(roots.iter().map(|r| r.0).collect::<Vec<_>>(), alloc::vec![1, 3]);
        let two = ExactMatrix::from_ints(&[&[2, 0], &[0, 1]]);
        let f = semisimple_minimal_polynomial(&two).unwrap();
        assert_eq!(root_of_unity_order(&f).unwrap(), None);
    }
}
