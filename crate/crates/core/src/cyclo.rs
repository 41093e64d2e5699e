//! Exact arithmetic in cyclotomic fields Q(zeta_M): elements are represented
//! as rational polynomials in zeta_M reduced modulo the M-th cyclotomic
//! polynomial. Operands over different conductors are unified by promotion
//! along M | M'. Includes the exact p-adic valuation on p-power-conductor
//! fields (totally ramified, via the pi = zeta - 1 expansion) and square
//! roots of prime powers via quadratic Gauss sums.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, Zero};
use once_cell::sync::Lazy;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::fmt;
use std::sync::Mutex;

/// Euler's totient.
pub fn euler_phi(m: u64) -> u64 {
    let mut n = m;
    let mut result = m;
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            while n % d == 0 {
                n /= d;
            }
            result -= result / d;
        }
        d += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

// ---- dense rational polynomials (ascending coefficients) ----

fn q_trim(v: &mut Vec<BigRational>) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

fn q_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            out[i + j] += ai * bj;
        }
    }
    q_trim(&mut out);
    out
}

fn q_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = a.to_vec();
    out.resize(out.len().max(b.len()), BigRational::zero());
    for (i, bi) in b.iter().enumerate() {
        out[i] -= bi;
    }
    q_trim(&mut out);
    out
}

/// Exact division with remainder in Q[x]; divisor must be nonzero.
fn q_divrem(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    assert!(!b.is_empty(), "division by the zero polynomial");
    let mut rem = a.to_vec();
    q_trim(&mut rem);
    if rem.len() < b.len() {
        return (vec![], rem);
    }
    let mut quo = vec![BigRational::zero(); rem.len() - b.len() + 1];
    let lead = b.last().unwrap().clone();
    while rem.len() >= b.len() {
        let k = rem.len() - b.len();
        let c = rem.last().unwrap() / &lead;
        quo[k] = c.clone();
        for (i, bi) in b.iter().enumerate() {
            let t = bi * &c;
            rem[k + i] -= t;
        }
        q_trim(&mut rem);
    }
    (quo, rem)
}

/// The M-th cyclotomic polynomial with integer coefficients, ascending.
/// Computed as (x^M - 1) / prod_{d | M, d < M} Phi_d, memoized.
pub fn cyclotomic_polynomial(m: u64) -> Vec<BigInt> {
    static CACHE: Lazy<Mutex<HashMap<u64, Vec<BigInt>>>> = Lazy::new(|| Mutex::new(HashMap::new()));
    if let Some(hit) = CACHE.lock().unwrap().get(&m) {
        return hit.clone();
    }
    let poly = if m == 1 {
        vec![BigInt::from(-1), BigInt::from(1)]
    } else {
        let mut num = vec![BigRational::zero(); (m + 1) as usize];
        num[0] = -BigRational::one();
        num[m as usize] = BigRational::one();
        let mut den = vec![BigRational::one()];
        for d in 1..m {
            if m % d == 0 {
                let phi_d: Vec<BigRational> = cyclotomic_polynomial(d)
                    .into_iter()
                    .map(BigRational::from_integer)
                    .collect();
                den = q_mul(&den, &phi_d);
            }
        }
        let (quo, rem) = q_divrem(&num, &den);
        assert!(rem.is_empty(), "cyclotomic division must be exact");
        quo.into_iter()
            .map(|c| {
                assert!(c.denom().is_one(), "cyclotomic coefficients are integers");
                c.numer().clone()
            })
            .collect()
    };
    CACHE.lock().unwrap().insert(m, poly.clone());
    poly
}

fn cyclo_poly_q(m: u64) -> Vec<BigRational> {
    cyclotomic_polynomial(m).into_iter().map(BigRational::from_integer).collect()
}

/// An element of Q(zeta_M): sum coeffs[i] * zeta_M^i with i < deg Phi_M.
#[derive(Clone, Debug)]
pub struct CycloRational {
    m: u64,
    coeffs: Vec<BigRational>,
}

impl CycloRational {
    fn reduce(m: u64, mut raw: Vec<BigRational>) -> Self {
        let phi = cyclo_poly_q(m);
        q_trim(&mut raw);
        let coeffs = if raw.len() >= phi.len() { q_divrem(&raw, &phi).1 } else { raw };
        let mut coeffs = coeffs;
        coeffs.resize(phi.len() - 1, BigRational::zero());
        CycloRational { m, coeffs }
    }

    pub fn zero(m: u64) -> Self {
        CycloRational::reduce(m, vec![])
    }

    pub fn one(m: u64) -> Self {
        CycloRational::reduce(m, vec![BigRational::one()])
    }

    pub fn from_rational(r: BigRational) -> Self {
        CycloRational::reduce(1, vec![r])
    }

    pub fn from_integer(n: i64) -> Self {
        CycloRational::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    /// zeta_M^exp (exp taken mod M).
    pub fn root_of_unity(m: u64, exp: i64) -> Self {
        let e = exp.rem_euclid(m as i64) as usize;
        let mut raw = vec![BigRational::zero(); e + 1];
        raw[e] = BigRational::one();
        CycloRational::reduce(m, raw)
    }

    pub fn conductor(&self) -> u64 {
        self.m
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// The rational value when the element lies in Q, else None.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.coeffs.iter().skip(1).all(|c| c.is_zero()) {
            Some(self.coeffs.first().cloned().unwrap_or_else(BigRational::zero))
        } else {
            None
        }
    }

    /// Re-expresses the element in Q(zeta_m2); requires M | m2.
    pub fn promote(&self, m2: u64) -> Result<Self> {
        if m2 == self.m {
            return Ok(self.clone());
        }
        if m2 % self.m != 0 {
            return Err(Error::Mismatch(format!(
                "cannot promote conductor {} into {}",
                self.m, m2
            )));
        }
        let k = (m2 / self.m) as usize;
        let mut raw = vec![BigRational::zero(); self.coeffs.len() * k + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            raw[i * k] = c.clone();
        }
        Ok(CycloRational::reduce(m2, raw))
    }

    /// Puts both operands into Q(zeta_lcm(M, M')).
    pub fn unify(&self, other: &Self) -> Result<(Self, Self)> {
        let m = self.m.lcm(&other.m);
        Ok((self.promote(m)?, other.promote(m)?))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let (a, b) = self.unify(other)?;
        let mut coeffs = a.coeffs;
        for (i, c) in b.coeffs.iter().enumerate() {
            coeffs[i] += c;
        }
        Ok(CycloRational { m: a.m, coeffs })
    }

    pub fn neg(&self) -> Self {
        CycloRational { m: self.m, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let (a, b) = self.unify(other)?;
        Ok(CycloRational::reduce(a.m, q_mul(&a.coeffs, &b.coeffs)))
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        CycloRational { m: self.m, coeffs: self.coeffs.iter().map(|c| c * r).collect() }
    }

    /// Multiplicative inverse via the extended Euclidean algorithm against
    /// Phi_M (irreducible, so every nonzero element is invertible).
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let phi = cyclo_poly_q(self.m);
        // Extended gcd of (self.coeffs, phi) in Q[x].
        let mut r0 = self.coeffs.clone();
        q_trim(&mut r0);
        let mut r1 = phi;
        let mut s0 = vec![BigRational::one()];
        let mut s1: Vec<BigRational> = vec![];
        while !r1.is_empty() {
            let (q, r) = q_divrem(&r0, &r1);
            let s = q_sub(&s0, &q_mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
        }
        if r0.len() != 1 {
            return Err(Error::DivisionByZero);
        }
        let lead = r0[0].clone();
        let inv: Vec<BigRational> = s0.into_iter().map(|c| c / &lead).collect();
        Ok(CycloRational::reduce(self.m, inv))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.mul(&other.inv()?)
    }

    pub fn pow(&self, k: i64) -> Result<Self> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let mut out = CycloRational::one(self.m);
        for _ in 0..k.unsigned_abs() {
            out = out.mul(&base)?;
        }
        Ok(out)
    }

    /// Galois action zeta_M -> zeta_M^t; requires gcd(t, M) = 1.
    pub fn galois(&self, t: u64) -> Result<Self> {
        if (t % self.m).gcd(&self.m) != 1 {
            return Err(Error::Domain(format!("galois exponent {t} not coprime to {}", self.m)));
        }
        let mut raw = vec![BigRational::zero(); self.m as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            let e = ((i as u64) * t % self.m) as usize;
            raw[e] += c;
        }
        Ok(CycloRational::reduce(self.m, raw))
    }

    /// Complex conjugation zeta -> zeta^(-1).
    pub fn conj(&self) -> Self {
        if self.m <= 2 {
            return self.clone();
        }
        self.galois(self.m - 1).expect("M-1 is coprime to M")
    }

    /// Numeric evaluation at zeta_M = exp(2 pi i/M); diagnostic only.
    pub fn eval_complex(&self) -> (f64, f64) {
        let mut re = 0.0;
        let mut im = 0.0;
        for (i, c) in self.coeffs.iter().enumerate() {
            let v = rational_to_f64(c);
            let t = 2.0 * std::f64::consts::PI * (i as f64) / (self.m as f64);
            re += v * t.cos();
            im += v * t.sin();
        }
        (re, im)
    }

    /// Exact p-adic valuation for elements of p-power conductor (or of Q).
    /// Returns None for zero. The field Q_p(zeta_{p^r}) is totally ramified
    /// of degree phi(p^r); with pi = zeta - 1 each nonzero element has
    /// v(sum e_i pi^i) = min_i (v_p(e_i) + i/phi) because the fractional
    /// parts i/phi are pairwise distinct.
    pub fn padic_valuation(&self, p: u64) -> Result<Option<Ratio<i64>>> {
        if self.is_zero() {
            return Ok(None);
        }
        if self.m != 1 {
            let mut n = self.m;
            while n % p == 0 {
                n /= p;
            }
            if n != 1 {
                return Err(Error::Domain(format!(
                    "p-adic valuation needs conductor 1 or a power of {p}, got {}",
                    self.m
                )));
            }
        }
        if self.m == 1 {
            let c = &self.coeffs[0];
            return Ok(Some(Ratio::from_integer(rational_p_valuation(c, p))));
        }
        let phi = self.coeffs.len() as i64;
        // Clear denominators: self = (1/d) * h(zeta) with h integral.
        let mut d = BigInt::one();
        for c in &self.coeffs {
            d = d.lcm(c.denom());
        }
        let h: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| {
                let t = c * BigRational::from_integer(d.clone());
                debug_assert!(t.denom().is_one());
                t.numer().clone()
            })
            .collect();
        // Coefficients of h(1 + X) by Horner: r(X) <- r(X)(X + 1) + h_i.
        let mut e: Vec<BigInt> = vec![];
        for hi in h.iter().rev() {
            let mut next = vec![BigInt::zero(); e.len() + 1];
            for (j, ej) in e.iter().enumerate() {
                next[j + 1] += ej;
                next[j] += ej;
            }
            if next.is_empty() {
                next.push(BigInt::zero());
            }
            next[0] += hi;
            e = next;
        }
        let pb = BigInt::from(p);
        let mut best: Option<Ratio<i64>> = None;
        for (i, ei) in e.iter().enumerate() {
            if ei.is_zero() {
                continue;
            }
            let mut v = 0i64;
            let mut t = ei.clone();
            while (&t % &pb).is_zero() {
                t /= &pb;
                v += 1;
            }
            let cand = Ratio::new(v * phi + i as i64, phi);
            best = Some(match best {
                None => cand,
                Some(b) => b.min(cand),
            });
        }
        let dval = {
            let mut v = 0i64;
            let mut t = d.clone();
            while (&t % &pb).is_zero() {
                t /= &pb;
                v += 1;
            }
            Ratio::from_integer(v)
        };
        Ok(best.map(|b| b - dval))
    }
}

fn rational_to_f64(r: &BigRational) -> f64 {
    let n: f64 = r.numer().to_string().parse().unwrap_or(f64::NAN);
    let d: f64 = r.denom().to_string().parse().unwrap_or(f64::NAN);
    n / d
}

/// v_p of a nonzero rational.
fn rational_p_valuation(r: &BigRational, p: u64) -> i64 {
    let pb = BigInt::from(p);
    let mut v = 0i64;
    let mut n = r.numer().abs();
    while (&n % &pb).is_zero() {
        n /= &pb;
        v += 1;
    }
    let mut d = r.denom().abs();
    while (&d % &pb).is_zero() {
        d /= &pb;
        v -= 1;
    }
    v
}

impl PartialEq for CycloRational {
    fn eq(&self, other: &Self) -> bool {
        match self.unify(other) {
            Ok((a, b)) => a.coeffs == b.coeffs,
            Err(_) => false,
        }
    }
}

impl Eq for CycloRational {}

impl fmt::Display for CycloRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if i == 0 {
                write!(f, "{c}")?;
            } else if c.is_one() {
                write!(f, "z{}^{}", self.m, i)?;
            } else {
                write!(f, "({c})*z{}^{}", self.m, i)?;
            }
        }
        Ok(())
    }
}

/// Wire form: {"M":..., "coeffs":["a/b", ...]}.
#[derive(Serialize, Deserialize)]
struct CycloWire {
    #[serde(rename = "M")]
    m: u64,
    coeffs: Vec<String>,
}

impl Serialize for CycloRational {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CycloWire {
            m: self.m,
            coeffs: self.coeffs.iter().map(|c| c.to_string()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CycloRational {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = CycloWire::deserialize(d)?;
        let mut coeffs = Vec::with_capacity(w.coeffs.len());
        for c in &w.coeffs {
            let r: BigRational =
                c.parse().map_err(|_| serde::de::Error::custom(format!("bad rational: {c}")))?;
            coeffs.push(r);
        }
        Ok(CycloRational::reduce(w.m, coeffs))
    }
}

/// Legendre symbol (a | p) for odd prime p.
fn legendre(a: u64, p: u64) -> i64 {
    let a = a % p;
    if a == 0 {
        return 0;
    }
    let mut r = 1u64;
    let mut base = a;
    let mut e = (p - 1) / 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    if r == 1 {
        1
    } else {
        -1
    }
}

/// The positive square root of q = p^f as an exact cyclotomic number:
/// rational for even f; for odd f, p^((f-1)/2) * sqrt(p) with sqrt(p)
/// realized by a quadratic Gauss sum (conductor 8 for p = 2, 4p otherwise).
pub fn sqrt_prime_power(p: u64, f: u32) -> CycloRational {
    if f % 2 == 0 {
        return CycloRational::from_rational(BigRational::from_integer(BigInt::from(p).pow(f / 2)));
    }
    let scale = BigRational::from_integer(BigInt::from(p).pow((f - 1) / 2));
    let sqrt_p = if p == 2 {
        // zeta_8 + zeta_8^(-1) squares to 2.
        CycloRational::root_of_unity(8, 1)
            .add(&CycloRational::root_of_unity(8, 7))
            .unwrap()
    } else {
        // g = sum (a|p) zeta_p^a squares to (-1)^((p-1)/2) p.
        let mut g = CycloRational::zero(p);
        for a in 1..p {
            let term = CycloRational::root_of_unity(p, a as i64);
            g = if legendre(a, p) == 1 { g.add(&term).unwrap() } else { g.sub(&term).unwrap() };
        }
        if p % 4 == 1 {
            g
        } else {
            // g^2 = -p, so sqrt(p) = g * zeta_4^(-1).
            g.mul(&CycloRational::root_of_unity(4, -1)).unwrap()
        }
    };
    sqrt_p.scale(&scale)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(m: u64, e: i64) -> CycloRational {
        CycloRational::root_of_unity(m, e)
    }

    #[test]
    fn cyclotomic_polynomials() {
        let to_i64 = |v: Vec<BigInt>| -> Vec<i64> {
            v.into_iter().map(|c| c.to_string().parse().unwrap()).collect()
        };
        assert_eq!(to_i64(cyclotomic_polynomial(1)), vec![-1, 1]);
        assert_eq!(to_i64(cyclotomic_polynomial(3)), vec![1, 1, 1]);
        assert_eq!(to_i64(cyclotomic_polynomial(4)), vec![1, 0, 1]);
        assert_eq!(to_i64(cyclotomic_polynomial(9)), vec![1, 0, 0, 1, 0, 0, 1]);
        assert_eq!(to_i64(cyclotomic_polynomial(12)), vec![1, 0, -1, 0, 1]);
        assert_eq!(euler_phi(49), 42);
        assert_eq!(cyclotomic_polynomial(105).len(), 49); // degree 48, coefficient -2 appears
    }

    #[test]
    fn minimal_polynomial_relations() {
        // zeta_3^2 + zeta_3 + 1 = 0.
        let s = z(3, 2).add(&z(3, 1)).unwrap().add(&CycloRational::one(3)).unwrap();
        assert!(s.is_zero());
        // zeta_4^2 = -1.
        assert_eq!(z(4, 1).mul(&z(4, 1)).unwrap(), CycloRational::from_integer(-1));
        // (1 - zeta_3)(1 - zeta_3^2) = 3.
        let a = CycloRational::one(3).sub(&z(3, 1)).unwrap();
        let b = CycloRational::one(3).sub(&z(3, 2)).unwrap();
        assert_eq!(a.mul(&b).unwrap(), CycloRational::from_integer(3));
    }

    #[test]
    fn conductor_promotion_and_mixed_arithmetic() {
        // zeta_3 * zeta_4 = zeta_12^7.
        let prod = z(3, 1).mul(&z(4, 1)).unwrap();
        assert_eq!(prod, z(12, 7));
        // Promotion then back-comparison.
        let a = z(3, 1).promote(12).unwrap();
        assert_eq!(a, z(12, 4));
        assert!(z(3, 1).promote(8).is_err());
    }

    #[test]
    fn inverse_and_division() {
        let x = CycloRational::one(5).add(&z(5, 1)).unwrap();
        let y = x.inv().unwrap();
        assert_eq!(x.mul(&y).unwrap(), CycloRational::one(5));
        assert!(CycloRational::zero(7).inv().is_err());
    }

    #[test]
    fn galois_and_conjugation() {
        let x = z(7, 1).add(&z(7, 2).scale(&BigRational::from_integer(BigInt::from(3)))).unwrap();
        let c = x.conj();
        // conj(zeta^k) = zeta^(-k); applying twice is the identity.
        assert_eq!(c.conj(), x);
        // |1 - zeta_5|^2 = (1-zeta)(1-zeta^4) is a positive rational only after
        // summing over conjugates; here just check norm-like product relation.
        let a = CycloRational::one(5).sub(&z(5, 1)).unwrap();
        let prod = a
            .mul(&a.galois(2).unwrap())
            .unwrap()
            .mul(&a.galois(3).unwrap())
            .unwrap()
            .mul(&a.galois(4).unwrap())
            .unwrap();
        assert_eq!(prod, CycloRational::from_integer(5)); // Phi_5(1) = 5
    }

    #[test]
    fn ring_axioms_on_random_triples() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let m = [3u64, 4, 5, 8, 9, 12][rng.gen_range(0..6)];
            let rand_el = |rng: &mut rand_chacha::ChaCha8Rng| {
                let mut x = CycloRational::zero(m);
                for _ in 0..3 {
                    let e = rng.gen_range(0..m as i64);
                    let c = BigRational::new(
                        BigInt::from(rng.gen_range(-5i64..=5)),
                        BigInt::from(rng.gen_range(1i64..=4)),
                    );
                    x = x.add(&z(m, e).scale(&c)).unwrap();
                }
                x
            };
            let (a, b, c) = (rand_el(&mut rng), rand_el(&mut rng), rand_el(&mut rng));
            assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
            assert_eq!(
                a.mul(&b).unwrap().mul(&c).unwrap(),
                a.mul(&b.mul(&c).unwrap()).unwrap()
            );
            assert_eq!(
                a.mul(&b.add(&c).unwrap()).unwrap(),
                a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap()
            );
        }
    }

    #[test]
    fn numeric_embedding_diagnostic() {
        // (1 - zeta_3)(1 - zeta_3^2) evaluates to 3 numerically.
        let a = CycloRational::one(3).sub(&z(3, 1)).unwrap();
        let b = CycloRational::one(3).sub(&z(3, 2)).unwrap();
        let (re, im) = a.mul(&b).unwrap().eval_complex();
        assert!((re - 3.0).abs() < 1e-9 && im.abs() < 1e-9);
    }

    #[test]
    fn padic_valuations_in_ramified_towers() {
        // v_3(zeta_3 - 1) = 1/2 in Q_3(zeta_3) (phi(3) = 2).
        let pi = z(3, 1).sub(&CycloRational::one(3)).unwrap();
        assert_eq!(pi.padic_valuation(3).unwrap(), Some(Ratio::new(1, 2)));
        // v_3((zeta_3 - 1)^2) = 1; and v_3(3) = 1 directly.
        assert_eq!(pi.mul(&pi).unwrap().padic_valuation(3).unwrap(), Some(Ratio::from_integer(1)));
        assert_eq!(
            CycloRational::from_integer(9).padic_valuation(3).unwrap(),
            Some(Ratio::from_integer(2))
        );
        // v_5(zeta_25 - 1) = 1/20.
        let pi = z(25, 1).sub(&CycloRational::one(25)).unwrap();
        assert_eq!(pi.padic_valuation(5).unwrap(), Some(Ratio::new(1, 20)));
        // Units have valuation 0.
        assert_eq!(z(25, 1).padic_valuation(5).unwrap(), Some(Ratio::from_integer(0)));
        // Mixed conductor is rejected.
        assert!(z(12, 1).padic_valuation(3).is_err());
        // Rational valuations include denominators.
        let r = CycloRational::from_rational(BigRational::new(BigInt::from(3), BigInt::from(50)));
        assert_eq!(r.padic_valuation(5).unwrap(), Some(Ratio::from_integer(-2)));
    }

    #[test]
    fn sqrt_prime_powers_square_correctly() {
        for (p, f) in [(2u64, 1u32), (2, 3), (3, 1), (5, 1), (7, 1), (7, 3), (3, 2), (5, 4)] {
            let s = sqrt_prime_power(p, f);
            let sq = s.mul(&s).unwrap();
            let expect =
                CycloRational::from_rational(BigRational::from_integer(BigInt::from(p).pow(f)));
            assert_eq!(sq, expect, "sqrt({p}^{f}) failed");
        }
    }

    #[test]
    fn serde_round_trip() {
        let x = z(12, 7).scale(&BigRational::new(BigInt::from(-3), BigInt::from(4)));
        let j = serde_json::to_string(&x).unwrap();
        let y: CycloRational = serde_json::from_str(&j).unwrap();
        assert_eq!(x, y);
    }
}
