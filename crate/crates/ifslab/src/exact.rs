//! Scalar arithmetic that is exact over the rationals when the input data
//! allows it, and falls back to `f64` otherwise.
//!
//! Flagship 1D systems (Cantor, the level-2 overlap system) carry rational
//! ratios and translations, and the separation sequences for them must come
//! out as exact rationals like `2/3^n`. Anything touching `log`, `sqrt` or
//! irrational parameters demotes to floats.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub type Rat = BigRational;

/// Build a rational from an integer pair.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Exact conversion: every finite f64 is a dyadic rational.
pub fn rat_from_f64(x: f64) -> Option<Rat> {
    Rat::from_f64(x)
}

/// A number that is either an exact rational or a float.
///
/// Mixed operations demote to `Float`; exactness survives only through
/// chains of rational operations.
#[derive(Debug, Clone)]
pub enum Scalar {
    Exact(Rat),
    Float(f64),
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Exact(Rat::zero())
    }

    pub fn one() -> Self {
        Scalar::Exact(Rat::one())
    }

    pub fn from_rat(r: Rat) -> Self {
        Scalar::Exact(r)
    }

    pub fn from_f64(x: f64) -> Self {
        Scalar::Float(x)
    }

    /// Lift an f64 into the exact representation (dyadic, lossless).
    pub fn exact_from_f64(x: f64) -> Option<Self> {
        rat_from_f64(x).map(Scalar::Exact)
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact(_))
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(r) => r.to_f64().unwrap_or(f64::NAN),
            Scalar::Float(x) => *x,
        }
    }

    pub fn as_rat(&self) -> Option<&Rat> {
        match self {
            Scalar::Exact(r) => Some(r),
            Scalar::Float(_) => None,
        }
    }

    pub fn abs(&self) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(r.abs()),
            Scalar::Float(x) => Scalar::Float(x.abs()),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(r) => r.is_zero(),
            Scalar::Float(x) => *x == 0.0,
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Scalar::Exact(r) => r.is_negative(),
            Scalar::Float(x) => *x < 0.0,
        }
    }

    /// Floor of `self * 2^k`, the dyadic cell index at level `k`.
    pub fn dyadic_cell(&self, k: u32) -> i64 {
        match self {
            Scalar::Exact(r) => {
                let scaled = r * Rat::from_integer(BigInt::one() << k);
                scaled.floor().to_integer().to_i64().expect("cell index overflow")
            }
            Scalar::Float(x) => (x * (1u64 << k) as f64).floor() as i64,
        }
    }

    pub fn min(self, other: Scalar) -> Scalar {
        if other < self {
            other
        } else {
            self
        }
    }

    pub fn max(self, other: Scalar) -> Scalar {
        if other > self {
            other
        } else {
            self
        }
    }

    /// `self^q` for integer q via exact powers, otherwise float `powf`.
    pub fn powq(&self, q: f64) -> Scalar {
        match self {
            Scalar::Exact(r) if q.fract() == 0.0 && q.abs() < 64.0 => {
                Scalar::Exact(r.pow(q as i32))
            }
            _ => Scalar::Float(self.to_f64().powf(q)),
        }
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a == b,
            _ => self.to_f64() == other.to_f64(),
        }
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a.partial_cmp(b),
            _ => self.to_f64().partial_cmp(&other.to_f64()),
        }
    }
}

macro_rules! scalar_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                match (self, rhs) {
                    (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a.$method(b)),
                    (a, b) => Scalar::Float(a.to_f64().$method(b.to_f64())),
                }
            }
        }
        impl<'a> $trait<&'a Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &'a Scalar) -> Scalar {
                self.clone().$method(rhs.clone())
            }
        }
    };
}

scalar_binop!(Add, add);
scalar_binop!(Sub, sub);
scalar_binop!(Mul, mul);
scalar_binop!(Div, div);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(-r),
            Scalar::Float(x) => Scalar::Float(-x),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(r) => write!(f, "{}", r),
            Scalar::Float(x) => write!(f, "{}", x),
        }
    }
}

/// JSON form: exact rationals as "p/q" strings, floats as numbers.
impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Scalar::Exact(r) => {
                if r.is_integer() {
                    serializer.serialize_str(&format!("{}", r.numer()))
                } else {
                    serializer.serialize_str(&format!("{}/{}", r.numer(), r.denom()))
                }
            }
            Scalar::Float(x) => serializer.serialize_f64(*x),
        }
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(f64),
            Str(String),
        }
        match Repr::deserialize(deserializer)? {
            Repr::Num(x) => Ok(Scalar::Float(x)),
            Repr::Str(s) => parse_rat(&s)
                .map(Scalar::Exact)
                .ok_or_else(|| D::Error::custom(format!("invalid rational literal: {s}"))),
        }
    }
}

/// Parse "p/q" or "p" into a rational.
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let num: BigInt = num.trim().parse().ok()?;
        let den: BigInt = den.trim().parse().ok()?;
        if den.is_zero() {
            return None;
        }
        Some(Rat::new(num, den))
    } else {
        let num: BigInt = s.parse().ok()?;
        Some(Rat::from_integer(num))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_arithmetic_stays_exact() {
        let a = Scalar::from_rat(rat(1, 3));
        let b = Scalar::from_rat(rat(2, 3));
        let c = a.clone() + b;
        assert!(c.is_exact());
        assert_eq!(c, Scalar::one());
        assert!((a * Scalar::from_rat(rat(1, 3))).as_rat() == Some(&rat(1, 9)));
    }

    #[test]
    fn mixed_arithmetic_demotes() {
        let a = Scalar::from_rat(rat(1, 2));
        let b = Scalar::from_f64(0.25);
        assert!(!(a + b).is_exact());
    }

    #[test]
    fn dyadic_cell_convention_half_open() {
        // atoms on a boundary go to the right cell
        assert_eq!(Scalar::from_rat(rat(1, 2)).dyadic_cell(1), 1);
        assert_eq!(Scalar::from_rat(rat(1, 2)).dyadic_cell(2), 2);
        assert_eq!(Scalar::from_rat(rat(-1, 4)).dyadic_cell(1), -1);
        assert_eq!(Scalar::from_f64(0.75).dyadic_cell(2), 3);
    }

    #[test]
    fn rational_roundtrip_via_json() {
        let s = Scalar::from_rat(rat(-7, 12));
        let j = serde_json::to_string(&s).unwrap();
        assert_eq!(j, "\"-7/12\"");
        let back: Scalar = serde_json::from_str(&j).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn parse_rat_rejects_zero_denominator() {
        assert!(parse_rat("1/0").is_none());
        assert_eq!(parse_rat(" 3 / 9 "), Some(rat(1, 3)));
    }
}
