//! p-adic scalars at fixed finite precision: x = p^v * u with u a unit
//! residue known modulo p^N and v a half-integer valuation offset.
//! Half-integer valuations come from a globally adjoined square root of p;
//! addition is only defined between terms whose p-power offsets differ by an
//! integer power.

use crate::error::{Error, Result};
use crate::halfint::HalfInt;
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

/// p^n as a big unsigned integer.
pub fn pow_u(p: u64, n: u32) -> BigUint {
    BigUint::from(p).pow(n)
}

/// Multiplicative inverse of `a` modulo `m` (gcd(a, m) = 1).
pub fn mod_inverse(a: &BigUint, m: &BigUint) -> Result<BigUint> {
    let a = BigInt::from(a.clone());
    let m_int = BigInt::from(m.clone());
    let e = a.extended_gcd(&m_int);
    if !e.gcd.is_one() {
        return Err(Error::DivisionByZero);
    }
    let mut x = e.x % &m_int;
    if x.is_negative() {
        x += &m_int;
    }
    Ok(x.to_biguint().expect("reduced representative is nonnegative"))
}

/// Result of asking for the valuation of a scalar: exact for nonzero values,
/// a lower bound for the zero-at-precision element.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Valuation {
    Exact(HalfInt),
    AtLeast(HalfInt),
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Exact(v) => write!(f, "{v}"),
            Valuation::AtLeast(v) => write!(f, ">={v}"),
        }
    }
}

/// An element p^v * u of Q_p (possibly scaled by sqrt(p)) at relative
/// precision N: the unit u is known modulo p^N. The zero-at-precision
/// element stores only the bound "valuation >= v".
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PadicScalar {
    p: u64,
    prec: u32,
    /// Twice the valuation v (nonzero case) or twice the bound (zero case).
    two_val: i64,
    /// Unit residue, coprime to p and reduced mod p^prec; 0 encodes the
    /// zero-at-precision element.
    unit: BigUint,
}

impl PadicScalar {
    /// The zero-at-precision element with valuation bound `bound`.
    pub fn zero(p: u64, bound: HalfInt) -> Self {
        PadicScalar { p, prec: 0, two_val: bound.twice(), unit: BigUint::zero() }
    }

    pub fn one(p: u64, prec: u32) -> Self {
        PadicScalar { p, prec, two_val: 0, unit: BigUint::one() }
    }

    /// Builds p^val * unit, extracting any p-powers hiding in `unit`.
    pub fn from_parts(p: u64, prec: u32, val: HalfInt, unit: BigUint) -> Result<Self> {
        assert!(p >= 2 && prec > 0, "need a prime p >= 2 and positive precision");
        let modulus = pow_u(p, prec);
        let mut u = unit % &modulus;
        if u.is_zero() {
            return Ok(PadicScalar::zero(p, val + HalfInt::from_int(prec as i64)));
        }
        let pb = BigUint::from(p);
        let mut extra = 0i64;
        while (&u % &pb).is_zero() {
            u /= &pb;
            extra += 1;
        }
        // Extracting t powers of p loses t digits of relative precision.
        let prec = prec - extra as u32;
        Ok(PadicScalar { p, prec, two_val: val.twice() + 2 * extra, unit: u % pow_u(p, prec) })
    }

    pub fn from_bigint(p: u64, prec: u32, x: &BigInt) -> Self {
        let m = BigInt::from(pow_u(p, prec));
        let mut r = x % &m;
        if r.is_negative() {
            r += &m;
        }
        let u = r.to_biguint().expect("reduced representative is nonnegative");
        PadicScalar::from_parts(p, prec, HalfInt::ZERO, u).expect("integer input is well formed")
    }

    pub fn from_integer(p: u64, prec: u32, x: i64) -> Self {
        PadicScalar::from_bigint(p, prec, &BigInt::from(x))
    }

    /// Embeds an exact rational into Q_p at relative precision `prec`.
    pub fn from_rational(p: u64, prec: u32, r: &BigRational) -> Result<Self> {
        if r.is_zero() {
            return Ok(PadicScalar::zero(p, HalfInt::from_int(prec as i64)));
        }
        let pb = BigInt::from(p);
        let (mut num, mut den) = (r.numer().clone(), r.denom().clone());
        let mut val = 0i64;
        while (&num % &pb).is_zero() {
            num /= &pb;
            val += 1;
        }
        while (&den % &pb).is_zero() {
            den /= &pb;
            val -= 1;
        }
        let modulus = pow_u(p, prec);
        let num_u = {
            let mut t = num % BigInt::from(modulus.clone());
            if t.is_negative() {
                t += BigInt::from(modulus.clone());
            }
            t.to_biguint().expect("reduced representative is nonnegative")
        };
        let den_u = {
            let mut t = den % BigInt::from(modulus.clone());
            if t.is_negative() {
                t += BigInt::from(modulus.clone());
            }
            t.to_biguint().expect("reduced representative is nonnegative")
        };
        let u = (num_u * mod_inverse(&den_u, &modulus)?) % &modulus;
        Ok(PadicScalar { p, prec, two_val: 2 * val, unit: u })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn is_zero(&self) -> bool {
        self.unit.is_zero()
    }

    /// Unit residue u with x = p^v * u (zero for the zero element).
    pub fn unit_residue(&self) -> &BigUint {
        &self.unit
    }

    pub fn valuation(&self) -> Valuation {
        if self.is_zero() {
            Valuation::AtLeast(HalfInt::from_twice(self.two_val))
        } else {
            Valuation::Exact(HalfInt::from_twice(self.two_val))
        }
    }

    /// Exact valuation of a nonzero scalar.
    pub fn val(&self) -> Result<HalfInt> {
        if self.is_zero() {
            Err(Error::Domain("zero-at-precision has no exact valuation".into()))
        } else {
            Ok(HalfInt::from_twice(self.two_val))
        }
    }

    fn check_same_prime(&self, other: &Self) -> Result<()> {
        if self.p != other.p {
            return Err(Error::Mismatch(format!("primes differ: {} vs {}", self.p, other.p)));
        }
        Ok(())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same_prime(other)?;
        if self.is_zero() || other.is_zero() {
            // val(xy) >= bound + other's (bound or exact) valuation.
            return Ok(PadicScalar::zero(self.p, HalfInt::from_twice(self.two_val + other.two_val)));
        }
        let prec = self.prec.min(other.prec);
        let m = pow_u(self.p, prec);
        Ok(PadicScalar {
            p: self.p,
            prec,
            two_val: self.two_val + other.two_val,
            unit: (&self.unit * &other.unit) % m,
        })
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let m = pow_u(self.p, self.prec);
        Ok(PadicScalar {
            p: self.p,
            prec: self.prec,
            two_val: -self.two_val,
            unit: mod_inverse(&self.unit, &m)?,
        })
    }

    pub fn pow(&self, k: i64) -> Result<Self> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let mut out = PadicScalar::one(self.p, if self.is_zero() { 1 } else { self.prec });
        for _ in 0..k.unsigned_abs() {
            out = out.mul(&base)?;
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let m = pow_u(self.p, self.prec);
        PadicScalar {
            p: self.p,
            prec: self.prec,
            two_val: self.two_val,
            unit: (&m - &self.unit) % m,
        }
    }

    /// Twice the absolute precision: the sum is known modulo p^(abs/2).
    fn two_abs_prec(&self) -> i64 {
        if self.is_zero() {
            self.two_val
        } else {
            self.two_val + 2 * self.prec as i64
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_prime(other)?;
        let two_abs = self.two_abs_prec().min(other.two_abs_prec());
        if self.is_zero() && other.is_zero() {
            return Ok(PadicScalar::zero(self.p, HalfInt::from_twice(two_abs)));
        }
        if self.is_zero() || other.is_zero() {
            let x = if self.is_zero() { other } else { self };
            // Truncate the surviving term to the joint absolute precision.
            let rel = (two_abs - x.two_val) / 2;
            if rel <= 0 {
                return Ok(PadicScalar::zero(x.p, HalfInt::from_twice(two_abs)));
            }
            let prec = (rel as u32).min(x.prec);
            return Ok(PadicScalar {
                p: x.p,
                prec,
                two_val: x.two_val,
                unit: &x.unit % pow_u(x.p, prec),
            });
        }
        if (self.two_val - other.two_val) % 2 != 0 {
            return Err(Error::ValuationParity);
        }
        let (lo, hi) = if self.two_val <= other.two_val { (self, other) } else { (other, self) };
        let rel = (two_abs - lo.two_val) / 2;
        if rel <= 0 {
            return Ok(PadicScalar::zero(self.p, HalfInt::from_twice(two_abs)));
        }
        let rel = rel as u32;
        let m = pow_u(self.p, rel);
        let shift = ((hi.two_val - lo.two_val) / 2) as u32;
        let sum = if shift >= rel {
            &lo.unit % &m
        } else {
            (&lo.unit + &hi.unit * pow_u(self.p, shift)) % &m
        };
        PadicScalar::from_parts(self.p, rel, HalfInt::from_twice(lo.two_val), sum)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    /// True when the two scalars agree at their joint precision.
    pub fn congruent_to(&self, other: &Self) -> bool {
        if self.p != other.p {
            return false;
        }
        match self.sub(other) {
            Ok(d) => d.is_zero(),
            Err(_) => false,
        }
    }
}

impl fmt::Display for PadicScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            write!(f, "O({}^{})", self.p, HalfInt::from_twice(self.two_val))
        } else if self.two_val == 0 {
            write!(f, "{} + O({}^{})", self.unit, self.p, self.prec)
        } else {
            write!(
                f,
                "{}^{} * ({} + O({}^{}))",
                self.p,
                HalfInt::from_twice(self.two_val),
                self.unit,
                self.p,
                self.prec
            )
        }
    }
}

/// Wire form: {"p":..., "N":..., "val":"r/2"|"r", "unit":"<decimal string>"}.
#[derive(Serialize, Deserialize)]
struct PadicScalarWire {
    p: u64,
    #[serde(rename = "N")]
    n: u32,
    val: HalfInt,
    unit: String,
}

impl Serialize for PadicScalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PadicScalarWire {
            p: self.p,
            n: self.prec,
            val: HalfInt::from_twice(self.two_val),
            unit: self.unit.to_string(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PadicScalar {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = PadicScalarWire::deserialize(d)?;
        let unit: BigUint =
            w.unit.parse().map_err(|_| serde::de::Error::custom("bad unit digits"))?;
        if unit.is_zero() {
            return Ok(PadicScalar::zero(w.p, w.val));
        }
        if w.n == 0 {
            return Err(serde::de::Error::custom("nonzero scalar needs positive precision"));
        }
        PadicScalar::from_parts(w.p, w.n, w.val, unit)
            .map_err(|e| serde::de::Error::custom(e.to_string()))
    }
}

/// Teichmuller lift of a unit residue: the unique (p-1)-st root of unity in
/// Z_p congruent to `a` mod p. Computed by Newton iteration on x^(p-1) - 1,
/// doubling the working precision each step.
pub fn teichmuller(a: u64, p: u64, prec: u32) -> Result<PadicScalar> {
    if a % p == 0 {
        return Err(Error::Domain(format!("{a} is divisible by {p}")));
    }
    let target = pow_u(p, prec);
    let mut x = BigUint::from(a % p);
    let mut cur: u32 = 1;
    while cur < prec {
        cur = (2 * cur).min(prec);
        let m = pow_u(p, cur);
        // Newton step for f(x) = x^(p-1) - 1: x <- x - f(x)/f'(x) mod p^cur.
        let xp2 = x.modpow(&BigUint::from(p - 2), &m);
        let fx = (x.modpow(&BigUint::from(p - 1), &m) + &m - BigUint::one()) % &m;
        let fprime = (BigUint::from(p - 1) * &xp2) % &m;
        let step = (fx * mod_inverse(&fprime, &m)?) % &m;
        x = (&x + &m - step) % &m;
    }
    debug_assert!(x.modpow(&BigUint::from(p - 1), &target).is_one());
    PadicScalar::from_parts(p, prec, HalfInt::ZERO, x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn valuation_of_plain_integers() {
        // 50 = 2 * 5^2.
        let x = PadicScalar::from_integer(5, 10, 50);
        assert_eq!(x.val().unwrap(), HalfInt::from_int(2));
        let one = PadicScalar::from_integer(5, 10, 1);
        assert_eq!(one.val().unwrap(), HalfInt::ZERO);
    }

    #[test]
    fn valuation_of_offset_form() {
        // p^(3/2) * 2 by construction of the offset representation.
        let x = PadicScalar::from_parts(3, 8, HalfInt::from_twice(3), BigUint::from(2u32)).unwrap();
        assert_eq!(x.val().unwrap(), HalfInt::from_twice(3));
    }

    #[test]
    fn valuation_is_additive_on_units() {
        let u = PadicScalar::from_integer(7, 12, 3 * 49);
        let v = PadicScalar::from_integer(7, 12, 10 * 7);
        let w = u.mul(&v).unwrap();
        assert_eq!(w.val().unwrap(), HalfInt::from_int(3));
    }

    #[test]
    fn teichmuller_oracle_values() {
        // Newton-lift oracle: omega(2) in Z_5 at precision 2 is 7 (7^4 = 2401 = 96*25 + 1).
        let t = teichmuller(2, 5, 2).unwrap();
        assert_eq!(t.unit_residue(), &BigUint::from(7u32));
        // omega(3) in Z_7 at precision 2 is 31 (31^3 = -1 mod 49).
        let t = teichmuller(3, 7, 2).unwrap();
        assert_eq!(t.unit_residue(), &BigUint::from(31u32));
        // omega(1) = 1 at any precision.
        let t = teichmuller(1, 5, 10).unwrap();
        assert_eq!(t.unit_residue(), &BigUint::from(1u32));
        assert!(teichmuller(10, 5, 4).is_err());
    }

    #[test]
    fn teichmuller_is_multiplicative_and_torsion() {
        for p in [3u64, 5, 7, 11] {
            for a in 1..p {
                let ta = teichmuller(a, p, 20).unwrap();
                assert!(ta
                    .pow((p - 1) as i64)
                    .unwrap()
                    .congruent_to(&PadicScalar::one(p, 20)));
                for b in 1..p {
                    let tb = teichmuller(b, p, 20).unwrap();
                    let tab = teichmuller(a * b % p, p, 20).unwrap();
                    assert!(ta.mul(&tb).unwrap().congruent_to(&tab));
                }
            }
        }
    }

    #[test]
    fn addition_tracks_precision_and_cancellation() {
        let p = 5;
        let a = PadicScalar::from_integer(p, 6, 12);
        let b = PadicScalar::from_integer(p, 6, -12);
        let z = a.add(&b).unwrap();
        assert!(z.is_zero());
        assert_eq!(z.valuation(), Valuation::AtLeast(HalfInt::from_int(6)));

        // 25 + 100 = 125: adding valuation-2 terms that cancel a digit.
        let x = PadicScalar::from_integer(p, 6, 25);
        let y = PadicScalar::from_integer(p, 6, 100);
        let s = x.add(&y).unwrap();
        assert_eq!(s.val().unwrap(), HalfInt::from_int(3));
        // Both inputs are known mod 5^6 absolutely (relative precision 4 at
        // valuation 2); the sum has valuation 3, so 3 relative digits remain.
        assert_eq!(s.precision(), 3);
    }

    #[test]
    fn mixed_precision_truncates_to_minimum() {
        let a = PadicScalar::from_integer(5, 3, 2);
        let b = PadicScalar::from_integer(5, 9, 4);
        assert_eq!(a.mul(&b).unwrap().precision(), 3);
        assert_eq!(a.add(&b).unwrap().precision(), 3);
    }

    #[test]
    fn half_integer_addition_parity_guard() {
        let a = PadicScalar::from_parts(5, 6, HalfInt::from_twice(1), BigUint::from(1u32)).unwrap();
        let b = PadicScalar::one(5, 6);
        assert!(matches!(a.add(&b), Err(Error::ValuationParity)));
        // Same parity is fine: p^(1/2) + p^(3/2) = p^(1/2)(1 + p).
        let c = PadicScalar::from_parts(5, 6, HalfInt::from_twice(3), BigUint::from(1u32)).unwrap();
        let s = a.add(&c).unwrap();
        assert_eq!(s.val().unwrap(), HalfInt::from_twice(1));
        assert_eq!(s.unit_residue(), &BigUint::from(6u32));
    }

    #[test]
    fn rational_embedding() {
        use num_rational::BigRational;
        // 31/30 in Z_7: valuation 0; -1/5 in Z_5 has valuation -1.
        let r = BigRational::new(BigInt::from(31), BigInt::from(30));
        let x = PadicScalar::from_rational(7, 8, &r).unwrap();
        assert_eq!(x.val().unwrap(), HalfInt::ZERO);
        let times30 = x.mul(&PadicScalar::from_integer(7, 8, 30)).unwrap();
        assert!(times30.congruent_to(&PadicScalar::from_integer(7, 8, 31)));

        let r = BigRational::new(BigInt::from(-1), BigInt::from(5));
        let y = PadicScalar::from_rational(5, 8, &r).unwrap();
        assert_eq!(y.val().unwrap(), HalfInt::from_int(-1));
    }

    #[test]
    fn serde_round_trip() {
        let x = PadicScalar::from_parts(5, 6, HalfInt::from_twice(3), BigUint::from(4u32)).unwrap();
        let j = serde_json::to_string(&x).unwrap();
        assert!(j.contains("\"val\":\"3/2\""));
        let y: PadicScalar = serde_json::from_str(&j).unwrap();
        assert_eq!(x, y);
    }
}
