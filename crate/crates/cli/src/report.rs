//! Encoding of exact and floating values in machine-readable reports.

use std::str::FromStr;

use hodge_lattice_core::exactlin::{CycScalar, ExactMatrix};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use serde_json::{json, Number, Value};

pub const SCHEMA_VERSION: u32 = 1;

/// A float with 17 significant digits; non-finite values become strings.
pub fn float(x: f64) -> Value {
    if x.is_finite() {
        Value::Number(Number::from_str(&format!("{x:.16e}")).expect("valid JSON number"))
    } else {
        Value::String(format!("{x}"))
    }
}

pub fn complex(z: Complex64) -> Value {
    json!({ "re": float(z.re), "im": float(z.im) })
}

fn int(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => Value::from(v),
        None => Value::String(x.to_string()),
    }
}

/// `[num, den]`.
pub fn rational(q: &BigRational) -> Value {
    json!([int(q.numer()), int(q.denom())])
}

/// Same `{num, den}` shape as document entries, over the scalar's own order.
pub fn scalar(x: &CycScalar) -> Value {
    let den = x
        .coeffs()
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let num: Vec<Value> = x
        .coeffs()
        .iter()
        .map(|c| int(&(c.numer() * (&den / c.denom()))))
        .collect();
    json!({ "num": num, "den": int(&den) })
}

pub fn matrix(m: &ExactMatrix) -> Value {
    let rows: Vec<Value> = (0..m.rows())
        .map(|r| Value::Array((0..m.cols()).map(|c| scalar(m.get(r, c))).collect()))
        .collect();
    json!({ "order": m.order(), "entries": rows })
}

/// `-1/2`, `0`, `3`.
pub fn rational_text(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}{}/{}", if q.is_negative() { "-" } else { "" }, q.numer().abs(), q.denom())
    }
}

pub fn list_text<T>(items: &[T], f: impl Fn(&T) -> String) -> String {
    let parts: Vec<String> = items.iter().map(f).collect();
    format!("[{}]", parts.join(", "))
}

/// 6 significant digits for human summaries.
pub fn short(x: f64) -> String {
    format!("{x:.6e}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_keep_seventeen_digits() {
        assert_eq!(float(0.1).to_string(), "1.0000000000000001e-1");
        assert_eq!(float(2.0 * std::f64::consts::PI).to_string(), "6.2831853071795862e+0");
        assert_eq!(float(f64::INFINITY), Value::String("inf".into()));
    }

    #[test]
    fn exact_values() {
        let half = BigRational::new((-1).into(), 2.into());
        assert_eq!(rational_text(&half), "-1/2");
        assert_eq!(rational(&half).to_string(), "[-1,2]");
        let x = &CycScalar::from_frac(1, 2) + &CycScalar::root_of_unity(3, 1);
        assert_eq!(scalar(&x).to_string(), r#"{"den":2,"num":[1,2]}"#);
    }
}
