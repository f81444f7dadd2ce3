//! Elements of the cyclotomic field `Q(ζ_M)`.
//!
//! An element is stored in the power basis `1, ζ, …, ζ^{φ(M)-1}`, i.e. as the
//! unique residue of a rational polynomial modulo the cyclotomic polynomial
//! `Φ_M`. Operands of different orders are lifted to the lcm order before any
//! arithmetic, so equality is always decided on one canonical normal form.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Euler's totient.
pub fn totient(m: u32) -> u32 {
    let mut n = m;
    let mut result = m;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

fn mobius(m: u32) -> i32 {
    let mut n = m;
    let mut sign = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

/// Integer coefficients of `Φ_m`, lowest degree first.
///
/// Uses `Φ_m(x) = ∏_{d | m} (x^d − 1)^{μ(m/d)}`; the divisions are exact
/// divisions by monic binomials.
pub fn cyclotomic_polynomial(m: u32) -> Vec<i64> {
    assert!(m >= 1, "cyclotomic order must be positive");
    let mut num: Vec<i64> = vec![1];
    let mut dens: Vec<u32> = Vec::new();
    for d in 1..=m {
        if m % d != 0 {
            continue;
        }
        match mobius(m / d) {
            1 => {
                // multiply by x^d - 1
                let mut next = vec![0i64; num.len() + d as usize];
                for (i, c) in num.iter().enumerate() {
                    next[i + d as usize] += c;
                    next[i] -= c;
                }
                num = next;
            }
            -1 => dens.push(d),
            _ => {}
        }
    }
    for d in dens {
        // synthetic division by x^d - 1
        let d = d as usize;
        let deg = num.len() - 1;
        let mut q = vec![0i64; deg + 1 - d];
        let mut rem = num.clone();
        for i in (d..=deg).rev() {
            let c = rem[i];
            q[i - d] = c;
            rem[i] = 0;
            rem[i - d] += c;
        }
        debug_assert!(rem.iter().all(|&c| c == 0));
        num = q;
    }
    num
}

/// Reduces a rational polynomial (lowest degree first) modulo `Φ_m`.
fn reduce_mod_cyclotomic(mut poly: Vec<BigRational>, m: u32) -> Vec<BigRational> {
    let phi = cyclotomic_polynomial(m);
    let deg = phi.len() - 1;
    if poly.len() > deg {
        for i in (deg..poly.len()).rev() {
            if poly[i].is_zero() {
                continue;
            }
            let c = core::mem::replace(&mut poly[i], BigRational::zero());
            for (j, pj) in phi.iter().enumerate().take(deg) {
                if *pj != 0 {
                    let t = &c * BigRational::from_integer(BigInt::from(*pj));
                    poly[i - deg + j] -= t;
                }
            }
        }
    }
    poly.resize(deg, BigRational::zero());
    poly
}

/// An exact element of `Q(ζ_M)` with `ζ_M = e^{2πi/M}`.
#[derive(Clone, Debug)]
pub struct CycScalar {
    order: u32,
    coeffs: Vec<BigRational>,
}

impl CycScalar {
    pub fn zero(order: u32) -> Self {
        CycScalar {
            order,
            coeffs: vec![BigRational::zero(); totient(order) as usize],
        }
    }

    pub fn one(order: u32) -> Self {
        Self::from_rational(BigRational::one(), order)
    }

    pub fn from_rational(q: BigRational, order: u32) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = q;
        s
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(n)), 1)
    }

    pub fn from_frac(n: i64, d: i64) -> Self {
        Self::from_rational(BigRational::new(BigInt::from(n), BigInt::from(d)), 1)
    }

    /// `ζ_order^power`.
    pub fn root_of_unity(order: u32, power: i64) -> Self {
        let p = power.rem_euclid(order as i64) as usize;
        let mut poly = vec![BigRational::zero(); p + 1];
        poly[p] = BigRational::one();
        CycScalar {
            order,
            coeffs: reduce_mod_cyclotomic(poly, order),
        }
    }

    /// Builds `Σ c_i ζ^i` from an arbitrary-length coefficient list.
    pub fn from_power_coeffs(coeffs: Vec<BigRational>, order: u32) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidInput("cyclotomic order must be positive".into()));
        }
        // ζ^order = 1, so exponents fold mod `order` before reduction
        let mut folded = vec![BigRational::zero(); order as usize];
        for (i, c) in coeffs.into_iter().enumerate() {
            folded[i % order as usize] += c;
        }
        Ok(CycScalar {
            order,
            coeffs: reduce_mod_cyclotomic(folded, order),
        })
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs[1..].iter().all(Zero::is_zero)
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        if self.is_rational() {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }

    /// Re-expresses `self` in `Q(ζ_target)`; `target` must be a multiple of the order.
    pub fn lift(&self, target: u32) -> Self {
        if target == self.order {
            return self.clone();
        }
        assert!(
            target % self.order == 0,
            "cannot lift order {} to {}",
            self.order,
            target
        );
        if self.is_rational() {
            return Self::from_rational(self.coeffs[0].clone(), target);
        }
        let step = (target / self.order) as usize;
        let mut poly = vec![BigRational::zero(); (self.coeffs.len() - 1) * step + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            poly[i * step] = c.clone();
        }
        CycScalar {
            order: target,
            coeffs: reduce_mod_cyclotomic(poly, target),
        }
    }

    fn aligned(a: &Self, b: &Self) -> (Self, Self) {
        if a.order == b.order {
            (a.clone(), b.clone())
        } else {
            let l = a.order.lcm(&b.order);
            (a.lift(l), b.lift(l))
        }
    }

    /// Complex conjugate, `ζ ↦ ζ^{-1}`.
    pub fn conj(&self) -> Self {
        if self.is_rational() {
            return self.clone();
        }
        let m = self.order as usize;
        let mut poly = vec![BigRational::zero(); m];
        for (i, c) in self.coeffs.iter().enumerate() {
            poly[(m - i) % m] += c;
        }
        CycScalar {
            order: self.order,
            coeffs: reduce_mod_cyclotomic(poly, self.order),
        }
    }

    /// Multiplicative inverse; errors on zero.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.is_rational() {
            return Ok(Self::from_rational(self.coeffs[0].recip(), self.order));
        }
        // Solve (multiplication-by-self) · x = e_0 over Q.
        let d = self.coeffs.len();
        let mut cols: Vec<Vec<BigRational>> = Vec::with_capacity(d);
        for i in 0..d {
            let basis = Self::root_of_unity(self.order, i as i64);
            cols.push((self * &basis).coeffs);
        }
        let mut aug: Vec<Vec<BigRational>> = (0..d)
            .map(|r| {
                let mut row: Vec<BigRational> = (0..d).map(|c| cols[c][r].clone()).collect();
                row.push(if r == 0 {
                    BigRational::one()
                } else {
                    BigRational::zero()
                });
                row
            })
            .collect();
        for col in 0..d {
            let pivot = (col..d)
                .find(|&r| !aug[r][col].is_zero())
                .ok_or(Error::DivisionByZero)?;
            aug.swap(col, pivot);
            let p = aug[col][col].recip();
            for x in aug[col].iter_mut() {
                *x *= &p;
            }
            for r in 0..d {
                if r != col && !aug[r][col].is_zero() {
                    let f = aug[r][col].clone();
                    for c in col..=d {
                        let t = &f * &aug[col][c];
                        aug[r][c] -= t;
                    }
                }
            }
        }
        Ok(CycScalar {
            order: self.order,
            coeffs: aug.into_iter().map(|row| row[d].clone()).collect(),
        })
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.order);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Numerical value under `ζ_M ↦ e^{2πi/M}`.
    pub fn to_complex(&self) -> Complex64 {
        let m = self.order as f64;
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let v = c.to_f64().unwrap_or(f64::NAN);
            let theta = 2.0 * core::f64::consts::PI * (i as f64) / m;
            acc += Complex64::new(v * libm::cos(theta), v * libm::sin(theta));
        }
        acc
    }

    /// Sign of a rational value; `None` when irrational.
    pub fn rational_cmp_zero(&self) -> Option<Ordering> {
        self.as_rational().map(|q| {
            if q.is_positive() {
                Ordering::Greater
            } else if q.is_negative() {
                Ordering::Less
            } else {
                Ordering::Equal
            }
        })
    }
}

impl PartialEq for CycScalar {
    fn eq(&self, other: &Self) -> bool {
        if self.order == other.order {
            return self.coeffs == other.coeffs;
        }
        let (a, b) = Self::aligned(self, other);
        a.coeffs == b.coeffs
    }
}

impl Eq for CycScalar {}

impl<'a> Add<&'a CycScalar> for &'a CycScalar {
    type Output = CycScalar;
    fn add(self, rhs: &CycScalar) -> CycScalar {
        if self.order != rhs.order {
            let (a, b) = CycScalar::aligned(self, rhs);
            return &a + &b;
        }
        CycScalar {
            order: self.order,
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(x, y)| x + y)
                .collect(),
        }
    }
}

impl<'a> Sub<&'a CycScalar> for &'a CycScalar {
    type Output = CycScalar;
    fn sub(self, rhs: &CycScalar) -> CycScalar {
        if self.order != rhs.order {
            let (a, b) = CycScalar::aligned(self, rhs);
            return &a - &b;
        }
        CycScalar {
            order: self.order,
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(x, y)| x - y)
                .collect(),
        }
    }
}

impl<'a> Mul<&'a CycScalar> for &'a CycScalar {
    type Output = CycScalar;
    fn mul(self, rhs: &CycScalar) -> CycScalar {
        if self.order != rhs.order {
            let (a, b) = CycScalar::aligned(self, rhs);
            return &a * &b;
        }
        if rhs.is_rational() {
            let q = &rhs.coeffs[0];
            return CycScalar {
                order: self.order,
                coeffs: self.coeffs.iter().map(|c| c * q).collect(),
            };
        }
        if self.is_rational() {
            return rhs * self;
        }
        let d = self.coeffs.len();
        let mut prod = vec![BigRational::zero(); 2 * d - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        CycScalar {
            order: self.order,
            coeffs: reduce_mod_cyclotomic(prod, self.order),
        }
    }
}

impl Neg for &CycScalar {
    type Output = CycScalar;
    fn neg(self) -> CycScalar {
        CycScalar {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr<CycScalar> for CycScalar {
            type Output = CycScalar;
            fn $f(self, rhs: CycScalar) -> CycScalar {
                (&self).$f(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for CycScalar {
    type Output = CycScalar;
    fn neg(self) -> CycScalar {
        -&self
    }
}

impl fmt::Display for CycScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            return write!(f, "{}", self.coeffs[0]);
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{}", c)?,
                1 => write!(f, "{}*z{}", c, self.order)?,
                _ => write!(f, "{}*z{}^{}", c, self.order, i)?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomic_polynomials_small_orders() {
        assert_eq!(cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(cyclotomic_polynomial(2), vec![1, 1]);
        assert_eq!(cyclotomic_polynomial(3), vec![1, 1, 1]);
        assert_eq!(cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
        for m in 1..40 {
            assert_eq!(cyclotomic_polynomial(m).len() as u32 - 1, totient(m));
        }
    }

    #[test]
    fn roots_of_unity_multiply_exactly() {
        let z3 = CycScalar::root_of_unity(3, 1);
        assert!(z3.pow(3).is_one());
        assert_eq!(&z3 * &z3, CycScalar::root_of_unity(3, 2));
        // 1 + ζ3 + ζ3² = 0
        let s = &(&CycScalar::one(3) + &z3) + &z3.pow(2);
        assert!(s.is_zero());
        // ζ4² = -1
        assert_eq!(CycScalar::root_of_unity(4, 2), CycScalar::from_int(-1));
    }

    #[test]
    fn lifting_respects_equality() {
        let z3 = CycScalar::root_of_unity(3, 1);
        let z6sq = CycScalar::root_of_unity(6, 2);
        assert_eq!(z3, z6sq);
        let z4 = CycScalar::root_of_unity(4, 1);
        let prod = &z3 * &z4;
        assert_eq!(prod.order(), 12);
        assert_eq!(prod, CycScalar::root_of_unity(12, 7));
    }

    #[test]
    fn inverse_and_conjugate() {
        let x = &CycScalar::from_int(2) + &CycScalar::root_of_unity(5, 2);
        let y = x.inv().unwrap();
        assert!((&x * &y).is_one());
        let c = CycScalar::root_of_unity(7, 3).conj();
        assert_eq!(c, CycScalar::root_of_unity(7, 4));
        assert!(CycScalar::zero(4).inv().is_err());
        let v = CycScalar::root_of_unity(8, 1).to_complex();
        assert!((v.re - v.im).abs() < 1e-15);
    }
}
