use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

/// An element of (1/2)Z, stored as twice its value. Used for valuations:
/// half-integer p-powers arise from modulus-character square roots, so
/// valuations live in (1/2)Z rather than Z.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfInt {
    twice: i64,
}

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt { twice: 0 };

    pub fn from_int(n: i64) -> Self {
        HalfInt { twice: 2 * n }
    }

    pub fn from_twice(twice: i64) -> Self {
        HalfInt { twice }
    }

    pub fn twice(self) -> i64 {
        self.twice
    }

    /// True when the value is an integer (even numerator over 2).
    pub fn is_integer(self) -> bool {
        self.twice % 2 == 0
    }

    /// The integer value; panics when the value is a strict half-integer.
    pub fn to_int(self) -> i64 {
        assert!(self.is_integer(), "half-integer is not an integer: {}", self);
        self.twice / 2
    }

    pub fn scale(self, k: i64) -> Self {
        HalfInt { twice: self.twice * k }
    }
}

impl Add for HalfInt {
    type Output = HalfInt;
    fn add(self, rhs: HalfInt) -> HalfInt {
        HalfInt { twice: self.twice + rhs.twice }
    }
}

impl AddAssign for HalfInt {
    fn add_assign(&mut self, rhs: HalfInt) {
        self.twice += rhs.twice;
    }
}

impl Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, rhs: HalfInt) -> HalfInt {
        HalfInt { twice: self.twice - rhs.twice }
    }
}

impl Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt { twice: -self.twice }
    }
}

impl Mul<i64> for HalfInt {
    type Output = HalfInt;
    fn mul(self, rhs: i64) -> HalfInt {
        self.scale(rhs)
    }
}

impl fmt::Display for HalfInt {
    /// Integers print plainly ("3"), strict half-integers as "r/2" ("3/2").
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.twice % 2 == 0 {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

impl Serialize for HalfInt {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for HalfInt {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        parse_halfint(&s).ok_or_else(|| serde::de::Error::custom(format!("bad half-integer: {s}")))
    }
}

/// Parses "r" (integer) or "r/2" (twice-value over two).
pub fn parse_halfint(s: &str) -> Option<HalfInt> {
    if let Some(num) = s.strip_suffix("/2") {
        num.trim().parse::<i64>().ok().map(HalfInt::from_twice)
    } else {
        s.trim().parse::<i64>().ok().map(HalfInt::from_int)
    }
}
