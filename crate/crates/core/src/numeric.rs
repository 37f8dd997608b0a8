//! Exact rationals extended by one positive infinitesimal `δ`.
//!
//! Every "sufficiently small irrational" perturbation of a monodromy angle or
//! a filtration level is carried as an [`InfRat`] `r + s·δ`. Because every
//! quantity in the crate only ever needs `δ` to be small enough, comparison is
//! lexicographic: the rational part decides, and the `δ` coefficient breaks
//! ties.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer};
use serde::ser::{SerializeStruct, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Reduced rational number with arbitrary-precision numerator and denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Rat(BigRational);

impl Rat {
    /// Panics if `den == 0`.
    pub fn new(num: i64, den: i64) -> Self {
        Rat(BigRational::new(num.into(), den.into()))
    }

    pub fn from_big(num: BigInt, den: BigInt) -> Self {
        Rat(BigRational::new(num, den))
    }

    pub fn integer(n: i64) -> Self {
        Rat(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Rat(BigRational::zero())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    /// Always positive.
    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn floor(&self) -> BigInt {
        self.0.numer().div_floor(self.0.denom())
    }

    pub fn ceil(&self) -> BigInt {
        -((-self.numer()).div_floor(self.denom()))
    }

    pub fn abs(&self) -> Rat {
        Rat(self.0.abs())
    }

    pub fn recip(&self) -> Rat {
        Rat(self.0.recip())
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn as_big(&self) -> &BigRational {
        &self.0
    }
}

impl From<BigRational> for Rat {
    fn from(r: BigRational) -> Self {
        Rat(r)
    }
}

impl From<i64> for Rat {
    fn from(n: i64) -> Self {
        Rat::integer(n)
    }
}

impl From<BigInt> for Rat {
    fn from(n: BigInt) -> Self {
        Rat(BigRational::from_integer(n))
    }
}

macro_rules! rat_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat((self.0).$method(rhs.0))
            }
        }
        impl<'a> $trait<&'a Rat> for &'a Rat {
            type Output = Rat;
            fn $method(self, rhs: &'a Rat) -> Rat {
                Rat((&self.0).$method(&rhs.0))
            }
        }
    };
}

rat_binop!(Add, add);
rat_binop!(Sub, sub);
rat_binop!(Mul, mul);

impl std::ops::Div for Rat {
    type Output = Rat;
    fn div(self, rhs: Rat) -> Rat {
        Rat(self.0 / rhs.0)
    }
}

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0)
    }
}

/// Renders `a` for integers and `a/b` otherwise.
impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl FromStr for Rat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let err = || Error::Parse {
            what: "rational",
            input: s.to_string(),
        };
        let t = s.trim();
        match t.split_once('/') {
            Some((n, d)) => {
                let n: BigInt = n.trim().parse().map_err(|_| err())?;
                let d: BigInt = d.trim().parse().map_err(|_| err())?;
                if d.is_zero() {
                    return Err(err());
                }
                Ok(Rat::from_big(n, d))
            }
            None => t.parse::<BigInt>().map(Rat::from).map_err(|_| err()),
        }
    }
}

/// `r + s·δ` with `r` rational, `s` integer and `δ` a formal positive infinitesimal.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct InfRat {
    pub rat: Rat,
    pub delta: BigInt,
}

impl InfRat {
    pub fn new(rat: Rat, delta: impl Into<BigInt>) -> Self {
        InfRat {
            rat,
            delta: delta.into(),
        }
    }

    pub fn from_rat(rat: Rat) -> Self {
        InfRat {
            rat,
            delta: BigInt::zero(),
        }
    }

    pub fn integer(n: i64) -> Self {
        InfRat::from_rat(Rat::integer(n))
    }

    /// `num/den + delta·δ`.
    pub fn frac(num: i64, den: i64, delta: i64) -> Self {
        InfRat::new(Rat::new(num, den), delta)
    }

    pub fn zero() -> Self {
        InfRat::integer(0)
    }

    /// Largest integer `n` with `n ≤ self`.
    pub fn floor(&self) -> BigInt {
        if self.rat.is_integer() && self.delta.is_negative() {
            self.rat.floor() - BigInt::one()
        } else {
            self.rat.floor()
        }
    }

    /// Smallest integer `n` with `n ≥ self`.
    pub fn ceil(&self) -> BigInt {
        -(-self.clone()).floor()
    }

    pub fn scale(&self, n: &BigInt) -> InfRat {
        InfRat {
            rat: &self.rat * &Rat::from(n.clone()),
            delta: &self.delta * n,
        }
    }

    pub fn scale_i64(&self, n: i64) -> InfRat {
        self.scale(&BigInt::from(n))
    }

    pub fn is_standard(&self) -> bool {
        self.delta.is_zero()
    }
}

/// `⌊x⌋` for `x = r + s·δ`.
pub fn floor_inf(x: &InfRat) -> BigInt {
    x.floor()
}

/// Lexicographic comparison on `(rat, delta)`.
pub fn cmp_inf(x: &InfRat, y: &InfRat) -> Ordering {
    x.cmp(y)
}

impl Ord for InfRat {
    fn cmp(&self, other: &Self) -> Ordering {
        self.rat
            .cmp(&other.rat)
            .then_with(|| self.delta.cmp(&other.delta))
    }
}

impl PartialOrd for InfRat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for InfRat {
    type Output = InfRat;
    fn add(self, rhs: InfRat) -> InfRat {
        InfRat {
            rat: self.rat + rhs.rat,
            delta: self.delta + rhs.delta,
        }
    }
}

impl Sub for InfRat {
    type Output = InfRat;
    fn sub(self, rhs: InfRat) -> InfRat {
        InfRat {
            rat: self.rat - rhs.rat,
            delta: self.delta - rhs.delta,
        }
    }
}

impl Neg for InfRat {
    type Output = InfRat;
    fn neg(self) -> InfRat {
        InfRat {
            rat: -self.rat,
            delta: -self.delta,
        }
    }
}

impl Mul<i64> for &InfRat {
    type Output = InfRat;
    fn mul(self, rhs: i64) -> InfRat {
        self.scale_i64(rhs)
    }
}

impl From<Rat> for InfRat {
    fn from(r: Rat) -> Self {
        InfRat::from_rat(r)
    }
}

/// Renders `a/b`, `a/b+c*d` or `a/b-c*d`, where `d` stands for `δ`.
impl fmt::Display for InfRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.rat)?;
        if self.delta.is_positive() {
            write!(f, "+{}*d", self.delta)?;
        } else if self.delta.is_negative() {
            write!(f, "-{}*d", -&self.delta)?;
        }
        Ok(())
    }
}

impl FromStr for InfRat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let err = || Error::Parse {
            what: "infinitesimal rational",
            input: s.to_string(),
        };
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let Some(body) = t.strip_suffix("*d").or_else(|| t.strip_suffix('d')) else {
            return t.parse::<Rat>().map(InfRat::from_rat).map_err(|_| err());
        };
        // The δ term is introduced by the last sign that is not a leading sign.
        let split = body
            .char_indices()
            .rev()
            .find(|&(i, c)| i > 0 && (c == '+' || c == '-'))
            .map(|(i, _)| i);
        let (rat, coeff) = match split {
            Some(i) => (body[..i].parse::<Rat>().map_err(|_| err())?, &body[i..]),
            None => (Rat::zero(), body),
        };
        let coeff = match coeff {
            "" | "+" => BigInt::one(),
            "-" => -BigInt::one(),
            c => c
                .trim_start_matches('+')
                .parse::<BigInt>()
                .map_err(|_| err())?,
        };
        Ok(InfRat::new(rat, coeff))
    }
}

fn big_to_json(n: &BigInt) -> serde_json::Value {
    match n.to_i64() {
        Some(v) => serde_json::Value::from(v),
        None => serde_json::Value::from(n.to_string()),
    }
}

fn json_to_big<E: de::Error>(v: &serde_json::Value) -> std::result::Result<BigInt, E> {
    match v {
        serde_json::Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .ok_or_else(|| E::custom("integer out of range")),
        serde_json::Value::String(s) => s.parse().map_err(|_| E::custom("bad integer string")),
        _ => Err(E::custom("expected integer")),
    }
}

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Rat", 2)?;
        st.serialize_field("num", &big_to_json(self.numer()))?;
        st.serialize_field("den", &big_to_json(self.denom()))?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        let num = json_to_big(&v["num"])?;
        let den = json_to_big(&v["den"])?;
        if !den.is_positive() {
            return Err(de::Error::custom("denominator must be positive"));
        }
        Ok(Rat::from_big(num, den))
    }
}

/// JSON form `{"num": int, "den": int, "delta": int}`.
impl Serialize for InfRat {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("InfRat", 3)?;
        st.serialize_field("num", &big_to_json(self.rat.numer()))?;
        st.serialize_field("den", &big_to_json(self.rat.denom()))?;
        st.serialize_field("delta", &big_to_json(&self.delta))?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for InfRat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        let num = json_to_big(&v["num"])?;
        let den = json_to_big(&v["den"])?;
        let delta = json_to_big(&v["delta"])?;
        if !den.is_positive() {
            return Err(de::Error::custom("denominator must be positive"));
        }
        Ok(InfRat::new(Rat::from_big(num, den), delta))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn big(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn floor_examples() {
        assert_eq!(floor_inf(&InfRat::frac(7, 4, -1)), big(1));
        assert_eq!(floor_inf(&InfRat::frac(7, 1, -4)), big(6));
        assert_eq!(floor_inf(&InfRat::frac(3, 1, 2)), big(3));
        assert_eq!(floor_inf(&InfRat::frac(-7, 2, 5)), big(-4));
        assert_eq!(floor_inf(&InfRat::frac(0, 1, -1)), big(-1));
    }

    #[test]
    fn ceil_mirrors_floor() {
        assert_eq!(InfRat::frac(3, 1, -4).ceil(), big(3));
        assert_eq!(InfRat::frac(3, 1, 1).ceil(), big(4));
        assert_eq!(InfRat::frac(9, 4, 0).ceil(), big(3));
    }

    #[test]
    fn cmp_examples() {
        assert_eq!(
            cmp_inf(&InfRat::frac(12, 1, 0), &InfRat::frac(12, 1, 1)),
            Ordering::Less
        );
        assert_eq!(
            cmp_inf(&InfRat::frac(12, 1, 5), &InfRat::frac(13, 1, -9)),
            Ordering::Less
        );
        assert_eq!(
            cmp_inf(&InfRat::frac(3, 1, 0), &InfRat::frac(3, 1, 0)),
            Ordering::Equal
        );
    }

    #[test]
    fn display_and_parse() {
        assert_eq!(InfRat::frac(12, 1, 1).to_string(), "12+1*d");
        assert_eq!(InfRat::frac(3, 4, -2).to_string(), "3/4-2*d");
        assert_eq!(InfRat::frac(-1, 3, 0).to_string(), "-1/3");
        for s in ["12+1*d", "3/4-2*d", "-1/3", "0", "-5/2+7*d", "12+d", "-d"] {
            let x: InfRat = s.parse().unwrap();
            let again: InfRat = x.to_string().parse().unwrap();
            assert_eq!(x, again, "{s}");
        }
        assert_eq!("12+d".parse::<InfRat>().unwrap(), InfRat::frac(12, 1, 1));
        assert_eq!("-d".parse::<InfRat>().unwrap(), InfRat::frac(0, 1, -1));
        assert!("1/0".parse::<Rat>().is_err());
        assert!("x+d".parse::<InfRat>().is_err());
    }

    #[test]
    fn json_shape() {
        let x = InfRat::frac(-6, 4, 3);
        let v = serde_json::to_value(&x).unwrap();
        assert_eq!(v, serde_json::json!({"num": -3, "den": 2, "delta": 3}));
        let back: InfRat = serde_json::from_value(v).unwrap();
        assert_eq!(back, x);
    }

    fn arb_inf() -> impl Strategy<Value = InfRat> {
        (-500i64..500, 1i64..40, -20i64..20).prop_map(|(n, d, s)| InfRat::frac(n, d, s))
    }

    proptest! {
        #[test]
        fn floor_brackets(x in arb_inf()) {
            let f = InfRat::from_rat(Rat::from(floor_inf(&x)));
            prop_assert!(f <= x);
            prop_assert!(x < f + InfRat::integer(1));
        }

        #[test]
        fn floor_shifts_by_integers(x in arb_inf(), n in -1000i64..1000) {
            let shifted = x.clone() + InfRat::integer(n);
            prop_assert_eq!(floor_inf(&shifted), floor_inf(&x) + n);
        }

        #[test]
        fn order_is_total_and_additive(x in arb_inf(), y in arb_inf(), z in arb_inf()) {
            let xy = cmp_inf(&x, &y);
            prop_assert_eq!(xy.reverse(), cmp_inf(&y, &x));
            prop_assert_eq!(cmp_inf(&(x.clone() + z.clone()), &(y.clone() + z.clone())), xy);
            if x <= y && y <= z {
                prop_assert!(x <= z);
            }
        }
    }
}
