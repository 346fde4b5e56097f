//! Dual arithmetic: every computation runs either on arbitrary-precision
//! rationals or on `f64`, selected by the scalar type parameter.

use std::fmt::{Debug, Display};
use std::ops::Neg;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};

/// Exact rational scalar.
pub type Rational = BigRational;

/// Numeric field used throughout the crate.
///
/// `EXACT` distinguishes the rational mode (identities hold with equality)
/// from the float mode (identities hold within a tolerance).
pub trait Scalar:
    Clone + Debug + Display + PartialEq + PartialOrd + Num + Neg<Output = Self> + Send + Sync + 'static
{
    const EXACT: bool;

    fn from_int(i: i64) -> Self;

    fn from_ratio(num: i64, den: i64) -> Self;

    fn from_f64(x: f64) -> Option<Self>;

    fn to_f64(&self) -> f64;

    fn abs_val(&self) -> Self {
        if *self < Self::zero() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    fn powi(&self, exp: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..exp {
            acc = acc * self.clone();
        }
        acc
    }

    /// JSON encoding: plain numbers for floats, `{"num": .., "den": ..}` for rationals.
    fn to_json(&self) -> Value;

    fn from_json(v: &Value) -> Result<Self>;

    /// Text form used by the CLI and CSV output.
    fn render(&self) -> String {
        self.to_string()
    }

    /// Parses CLI text: `"p/q"` and integers everywhere, decimals only in float mode.
    fn parse_literal(text: &str) -> Result<Self>;
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_int(i: i64) -> Self {
        i as f64
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn from_f64(x: f64) -> Option<Self> {
        Some(x)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn abs_val(&self) -> Self {
        self.abs()
    }

    fn powi(&self, exp: u32) -> Self {
        f64::powi(*self, exp as i32)
    }

    fn to_json(&self) -> Value {
        json!(*self)
    }

    fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::Number(n) => n
                .as_f64()
                .ok_or_else(|| Error::Parse(format!("not a finite number: {n}"))),
            Value::Object(_) => Rational::from_json(v).map(|r| Scalar::to_f64(&r)),
            other => Err(Error::Parse(format!("expected number, got {other}"))),
        }
    }

    fn render(&self) -> String {
        // shortest round-trip representation, always with '.' as decimal point
        format!("{self:?}")
    }

    fn parse_literal(text: &str) -> Result<Self> {
        if is_decimal_literal(text) {
            text.trim()
                .parse::<f64>()
                .map_err(|_| Error::Parse(format!("not a number: '{text}'")))
        } else {
            parse_rational(text).map(|r| Scalar::to_f64(&r))
        }
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn parse_literal(text: &str) -> Result<Self> {
        if is_decimal_literal(text) {
            return Err(Error::Parse(format!("decimal '{text}' in exact mode; write it as p/q")));
        }
        parse_rational(text)
    }

    fn from_int(i: i64) -> Self {
        Rational::from_integer(BigInt::from(i))
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Rational::new(BigInt::from(num), BigInt::from(den))
    }

    fn from_f64(x: f64) -> Option<Self> {
        Rational::from_float(x)
    }

    fn to_f64(&self) -> f64 {
        // BigRational::to_f64 handles huge numerators/denominators without overflow
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn abs_val(&self) -> Self {
        self.abs()
    }

    fn powi(&self, exp: u32) -> Self {
        num_traits::pow(self.clone(), exp as usize)
    }

    fn to_json(&self) -> Value {
        json!({ "num": bigint_json(self.numer()), "den": bigint_json(self.denom()) })
    }

    fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::Object(map) => {
                let part = |key: &str| -> Result<BigInt> {
                    let raw = map
                        .get(key)
                        .ok_or_else(|| Error::Parse(format!("missing field '{key}'")))?;
                    let text = match raw {
                        Value::Number(n) => n.to_string(),
                        Value::String(s) => s.clone(),
                        other => return Err(Error::Parse(format!("bad '{key}': {other}"))),
                    };
                    text.parse::<BigInt>()
                        .map_err(|e| Error::Parse(format!("bad '{key}': {e}")))
                };
                let den = part("den")?;
                if den.is_zero() {
                    return Err(Error::Parse("zero denominator".into()));
                }
                Ok(Rational::new(part("num")?, den))
            }
            Value::Number(n) => {
                if let Some(i) = n.as_i64() {
                    Ok(Rational::from_int(i))
                } else {
                    Err(Error::Parse(format!("non-integer number {n} in exact mode")))
                }
            }
            other => Err(Error::Parse(format!("expected rational, got {other}"))),
        }
    }
}

// integers beyond i64 are written as decimal strings
fn bigint_json(b: &BigInt) -> Value {
    b.to_i64()
        .map(Value::from)
        .unwrap_or_else(|| Value::String(b.to_string()))
}

/// Parses `"p/q"` or an integer into an exact rational.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num: BigInt = num
        .parse()
        .map_err(|_| Error::Parse(format!("not a rational: '{text}'")))?;
    let den: BigInt = den
        .parse()
        .map_err(|_| Error::Parse(format!("not a rational: '{text}'")))?;
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in '{text}'")));
    }
    Ok(Rational::new(num, den))
}

/// True when `text` is written as a decimal (selects float mode).
pub fn is_decimal_literal(text: &str) -> bool {
    let t = text.trim();
    !t.contains('/') && (t.contains('.') || t.contains('e') || t.contains('E') || t == "inf")
}

/// Binomial coefficient as a scalar.
pub fn binomial<S: Scalar>(n: u64, k: u64) -> S {
    if k > n {
        return S::zero();
    }
    let k = k.min(n - k);
    let mut acc = S::one();
    for i in 0..k {
        acc = acc * S::from_int((n - i) as i64) / S::from_int((i + 1) as i64);
    }
    acc
}

pub(crate) fn is_one<S: Scalar>(x: &S) -> bool {
    *x == S::one()
}
