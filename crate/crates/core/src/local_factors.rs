//! Exact local abelian L- and epsilon-factors, standard GL_n factors from
//! Satake data, the doubling normalizers d_{n,v}(s) / D_v(chi), and the
//! ordinary modified Euler factor at p, all as rational functions in
//! X = q^{-s} with cyclotomic coefficients.
//!
//! Half-integer powers of q are exact: sqrt(q) lives in a cyclotomic field.
//! Pure monomials q^{e s + f} (f in (1/2)Z) are carried symbolically as a
//! prefactor tag so no transcendental s ever appears.
//!
//! Frozen additive-character convention for epsilon: level-zero psi with
//! psi(a/p^c) = zeta_{p^c}^a, giving tau(xi) = sum over units a mod p^c of
//! xi(a) zeta_{p^c}^a, and the unitarily normalized
//! epsilon(s, xi) = [tau(xi)/q^{c/2}] * q^{c(1/2 - s)} = tau(xi) q^{-c s}.
//! The q^{-c/2} normalization is forced by the functional-equation pairing
//! epsilon(s, xi) epsilon(1-s, xi^{-1}) = xi(-1) together with the Gauss-sum
//! identity tau(xi) tau(xi^{-1}) = xi(-1) q^c; both are verified exactly, and
//! the modified-Euler alternative-form identity depends on them.

use crate::cyclo::{euler_phi, sqrt_prime_power, CycloRational};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

// ------------------------------------------------- polynomials over Q(zeta)

fn poly_trim(p: &mut Vec<CycloRational>) {
    while p.len() > 1 && p.last().map_or(false, |c| c.is_zero()) {
        p.pop();
    }
}

fn poly_is_zero(p: &[CycloRational]) -> bool {
    p.iter().all(|c| c.is_zero())
}

fn poly_mul(a: &[CycloRational], b: &[CycloRational]) -> Result<Vec<CycloRational>> {
    let mut out = vec![CycloRational::zero(1); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            out[i + j] = out[i + j].add(&ai.mul(bj)?)?;
        }
    }
    poly_trim(&mut out);
    Ok(out)
}

fn poly_scale(a: &[CycloRational], c: &CycloRational) -> Result<Vec<CycloRational>> {
    let mut out = Vec::with_capacity(a.len());
    for x in a {
        out.push(x.mul(c)?);
    }
    poly_trim(&mut out);
    Ok(out)
}

fn poly_divrem(
    num: &[CycloRational],
    den: &[CycloRational],
) -> Result<(Vec<CycloRational>, Vec<CycloRational>)> {
    let mut r: Vec<CycloRational> = num.to_vec();
    poly_trim(&mut r);
    let mut d: Vec<CycloRational> = den.to_vec();
    poly_trim(&mut d);
    if poly_is_zero(&d) {
        return Err(Error::DivisionByZero);
    }
    let lead_inv = d.last().unwrap().inv()?;
    let mut q = vec![CycloRational::zero(1); r.len().saturating_sub(d.len()) + 1];
    while !poly_is_zero(&r) && r.len() >= d.len() {
        let k = r.len() - d.len();
        let c = r.last().unwrap().mul(&lead_inv)?;
        q[k] = q[k].add(&c)?;
        for (i, di) in d.iter().enumerate() {
            r[k + i] = r[k + i].sub(&di.mul(&c)?)?;
        }
        poly_trim(&mut r);
        if r.len() == 1 && r[0].is_zero() {
            break;
        }
    }
    poly_trim(&mut q);
    Ok((q, r))
}

fn poly_gcd(a: &[CycloRational], b: &[CycloRational]) -> Result<Vec<CycloRational>> {
    let mut x: Vec<CycloRational> = a.to_vec();
    let mut y: Vec<CycloRational> = b.to_vec();
    poly_trim(&mut x);
    poly_trim(&mut y);
    while !poly_is_zero(&y) {
        let (_, r) = poly_divrem(&x, &y)?;
        x = y;
        y = r;
        poly_trim(&mut y);
    }
    if !poly_is_zero(&x) {
        let inv = x.last().unwrap().inv()?;
        x = poly_scale(&x, &inv)?;
    }
    Ok(x)
}

fn poly_eval(p: &[CycloRational], x: &CycloRational) -> Result<CycloRational> {
    let mut acc = CycloRational::zero(1);
    for c in p.iter().rev() {
        acc = acc.mul(x)?.add(c)?;
    }
    Ok(acc)
}

// -------------------------------------------------------------- characters

/// A character of the local multiplicative group: unramified value at the
/// uniformizer plus, when the conductor exponent is positive, the finite
/// character table on (Z/p^c)^x (keys are unit residues mod p^c).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocalCharacter {
    pub p: u64,
    pub f: u32,
    /// Value at the uniformizer.
    pub unram: CycloRational,
    pub cond: u32,
    pub table: BTreeMap<u64, CycloRational>,
}

/// An inert/split quadratic marker eta by its value at the uniformizer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum EtaSign {
    Plus,
    Minus,
}

impl LocalCharacter {
    pub fn unramified(p: u64, f: u32, value: CycloRational) -> Self {
        LocalCharacter { p, f, unram: value, cond: 0, table: BTreeMap::new() }
    }

    pub fn q(&self) -> u64 {
        self.p.pow(self.f)
    }

    pub fn is_ramified(&self) -> bool {
        self.cond > 0
    }

    pub fn validate(&self) -> Result<()> {
        if self.cond == 0 {
            if !self.table.is_empty() {
                return Err(Error::Schema("unramified character with a unit table".into()));
            }
            return Ok(());
        }
        let m = self.p.pow(self.cond);
        let units: Vec<u64> = (1..m).filter(|a| a % self.p != 0).collect();
        if self.table.len() != units.len() || units.iter().any(|a| !self.table.contains_key(a)) {
            return Err(Error::Schema("unit table does not cover (Z/p^c)^x".into()));
        }
        Ok(())
    }

    /// Value on the unit a (a coprime to p), read at the conductor level.
    pub fn unit_value(&self, a: u64) -> Result<CycloRational> {
        if self.cond == 0 {
            return Ok(CycloRational::one(1));
        }
        let m = self.p.pow(self.cond);
        let key = a % m;
        self.table
            .get(&key)
            .cloned()
            .ok_or_else(|| Error::Domain(format!("{a} is not a unit mod {m}")))
    }

    pub fn value_at_minus_one(&self) -> Result<CycloRational> {
        if self.cond == 0 {
            return Ok(CycloRational::one(1));
        }
        self.unit_value(self.p.pow(self.cond) - 1)
    }

    pub fn inverse(&self) -> Result<Self> {
        let mut table = BTreeMap::new();
        for (a, v) in &self.table {
            table.insert(*a, v.inv()?);
        }
        Ok(LocalCharacter { p: self.p, f: self.f, unram: self.unram.inv()?, cond: self.cond, table })
    }

    /// Pointwise product; the conductor of the product is recomputed, so
    /// cancellations (conductor drop) are detected exactly.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.p != other.p || self.f != other.f {
            return Err(Error::Mismatch("characters live over different local fields".into()));
        }
        let c = self.cond.max(other.cond);
        let unram = self.unram.mul(&other.unram)?;
        if c == 0 {
            return Ok(LocalCharacter::unramified(self.p, self.f, unram));
        }
        let m = self.p.pow(c);
        let mut table = BTreeMap::new();
        for a in (1..m).filter(|a| a % self.p != 0) {
            table.insert(a, self.unit_value(a)?.mul(&other.unit_value(a)?)?);
        }
        let mut out = LocalCharacter { p: self.p, f: self.f, unram, cond: c, table };
        out.reduce_conductor()?;
        Ok(out)
    }

    /// Shrinks the conductor to the genuine level: the smallest c' with the
    /// table factoring through (Z/p^c')^x.
    fn reduce_conductor(&mut self) -> Result<()> {
        'outer: while self.cond > 0 {
            let target = self.cond - 1;
            let m_lo = self.p.pow(target);
            let m = self.p.pow(self.cond);
            // Factoring through level c-1 means constancy on classes mod p^(c-1).
            let mut lowered: BTreeMap<u64, CycloRational> = BTreeMap::new();
            for (a, v) in &self.table {
                let key = a % m_lo.max(1);
                match lowered.get(&key) {
                    None => {
                        lowered.insert(key, v.clone());
                    }
                    Some(w) if w == v => {}
                    Some(_) => break 'outer,
                }
            }
            if target == 0 {
                // The table must be identically 1 to be unramified.
                if lowered.values().any(|v| *v != CycloRational::one(1)) {
                    break;
                }
                self.cond = 0;
                self.table.clear();
                return Ok(());
            }
            let _ = m;
            self.cond = target;
            self.table = lowered;
        }
        Ok(())
    }

    /// Gauss sum tau(xi) = sum over units a mod p^c of xi(a) zeta_{p^c}^a.
    pub fn gauss_sum(&self) -> Result<CycloRational> {
        if self.cond == 0 {
            return Err(Error::Domain("Gauss sum needs a ramified character".into()));
        }
        let m = self.p.pow(self.cond);
        let mut acc = CycloRational::zero(1);
        for (a, v) in &self.table {
            acc = acc.add(&v.mul(&CycloRational::root_of_unity(m, *a as i64))?)?;
        }
        Ok(acc)
    }
}

/// The k-th character of the cyclic group (Z/p^c)^x (odd p), with values
/// zeta_phi^(k j) on g^j for a fixed primitive root g.
pub fn unit_group_character(p: u64, c: u32, k: u64) -> Result<LocalCharacter> {
    if p < 3 {
        return Err(Error::Domain("odd residue characteristic required".into()));
    }
    let m = p.pow(c);
    let phi = euler_phi(m);
    let g = primitive_root(p, c)?;
    let mut table = BTreeMap::new();
    let mut x = 1u64;
    for j in 0..phi {
        table.insert(x, CycloRational::root_of_unity(phi, (k * j) as i64 % phi as i64));
        x = x * g % m;
    }
    let mut out = LocalCharacter {
        p,
        f: 1,
        unram: CycloRational::one(1),
        cond: c,
        table,
    };
    out.reduce_conductor()?;
    Ok(out)
}

fn primitive_root(p: u64, c: u32) -> Result<u64> {
    let m = p.pow(c);
    let phi = euler_phi(m);
    'next: for g in 2..m {
        if g % p == 0 {
            continue;
        }
        // Order check against the maximal proper divisors of phi.
        let mut n = phi;
        let mut primes = Vec::new();
        let mut d = 2;
        while d * d <= n {
            if n % d == 0 {
                primes.push(d);
                while n % d == 0 {
                    n /= d;
                }
            }
            d += 1;
        }
        if n > 1 {
            primes.push(n);
        }
        for q in &primes {
            if pow_mod(g, phi / q, m) == 1 {
                continue 'next;
            }
        }
        return Ok(g);
    }
    Err(Error::Domain(format!("no primitive root mod {m}")))
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u128;
    let mm = m as u128;
    let mut bb = b as u128 % mm;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * bb % mm;
        }
        bb = bb * bb % mm;
        e >>= 1;
    }
    b = acc as u64;
    b
}

// --------------------------------------------------------- rational factors

/// A local factor q^{e s + f} * num(X)/den(X) with X = q^{-s}; f is stored
/// doubled (two_f) so half-integer exponents stay exact. Canonical form:
/// num/den coprime, den constant term 1, no common X power.
#[derive(Clone, Debug)]
pub struct LocalFactorFn {
    pub p: u64,
    pub f_deg: u32,
    pub num: Vec<CycloRational>,
    pub den: Vec<CycloRational>,
    /// Coefficient of s in the monomial exponent of q.
    pub pref_e: i64,
    /// Twice the constant part of the monomial exponent of q.
    pub pref_two_f: i64,
}

impl LocalFactorFn {
    pub fn one(p: u64, f_deg: u32) -> Self {
        LocalFactorFn {
            p,
            f_deg,
            num: vec![CycloRational::one(1)],
            den: vec![CycloRational::one(1)],
            pref_e: 0,
            pref_two_f: 0,
        }
    }

    pub fn q(&self) -> u64 {
        self.p.pow(self.f_deg)
    }

    fn from_parts(
        p: u64,
        f_deg: u32,
        num: Vec<CycloRational>,
        den: Vec<CycloRational>,
        pref_e: i64,
        pref_two_f: i64,
    ) -> Result<Self> {
        let mut out = LocalFactorFn { p, f_deg, num, den, pref_e, pref_two_f };
        out.reduce()?;
        Ok(out)
    }

    fn reduce(&mut self) -> Result<()> {
        poly_trim(&mut self.num);
        poly_trim(&mut self.den);
        if poly_is_zero(&self.den) {
            return Err(Error::DivisionByZero);
        }
        if poly_is_zero(&self.num) {
            self.num = vec![CycloRational::zero(1)];
            self.den = vec![CycloRational::one(1)];
            self.pref_e = 0;
            self.pref_two_f = 0;
            return Ok(());
        }
        let g = poly_gcd(&self.num, &self.den)?;
        if g.len() > 1 {
            self.num = poly_divrem(&self.num, &g)?.0;
            self.den = poly_divrem(&self.den, &g)?.0;
        }
        // Fold common powers of X into the monomial tag: X = q^{-s}.
        let num_sh = self.num.iter().take_while(|c| c.is_zero()).count();
        if num_sh > 0 {
            self.num.drain(..num_sh);
            self.pref_e -= num_sh as i64;
        }
        let den_sh = self.den.iter().take_while(|c| c.is_zero()).count();
        if den_sh > 0 {
            self.den.drain(..den_sh);
            self.pref_e += den_sh as i64;
        }
        // Normalize the denominator constant term to 1.
        let c0 = self.den[0].inv()?;
        self.num = poly_scale(&self.num, &c0)?;
        self.den = poly_scale(&self.den, &c0)?;
        // Fold whole powers of q out of the half-exponent tag so equal
        // monomials have one representation (pref_two_f in {0, 1}).
        let whole = self.pref_two_f.div_euclid(2);
        if whole != 0 {
            self.pref_two_f -= 2 * whole;
            let scale = Self::q_half_power(self.p, self.f_deg, 2 * whole)?;
            self.num = poly_scale(&self.num, &scale)?;
        }
        Ok(())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.p != other.p || self.f_deg != other.f_deg {
            return Err(Error::Mismatch("factors live over different local fields".into()));
        }
        LocalFactorFn::from_parts(
            self.p,
            self.f_deg,
            poly_mul(&self.num, &other.num)?,
            poly_mul(&self.den, &other.den)?,
            self.pref_e + other.pref_e,
            self.pref_two_f + other.pref_two_f,
        )
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        if poly_is_zero(&other.num) {
            return Err(Error::DivisionByZero);
        }
        LocalFactorFn::from_parts(
            self.p,
            self.f_deg,
            poly_mul(&self.num, &other.den)?,
            poly_mul(&self.den, &other.num)?,
            self.pref_e - other.pref_e,
            self.pref_two_f - other.pref_two_f,
        )
    }

    pub fn inv(&self) -> Result<Self> {
        LocalFactorFn::one(self.p, self.f_deg).div(self)
    }

    pub fn scale(&self, c: &CycloRational) -> Result<Self> {
        LocalFactorFn::from_parts(
            self.p,
            self.f_deg,
            poly_scale(&self.num, c)?,
            self.den.clone(),
            self.pref_e,
            self.pref_two_f,
        )
    }

    /// Equality as rational functions (canonical forms compared directly).
    pub fn equal(&self, other: &Self) -> Result<bool> {
        if self.pref_e != other.pref_e || self.pref_two_f != other.pref_two_f {
            return Ok(false);
        }
        let lhs = poly_mul(&self.num, &other.den)?;
        let rhs = poly_mul(&other.num, &self.den)?;
        if lhs.len() != rhs.len() {
            return Ok(false);
        }
        for (a, b) in lhs.iter().zip(&rhs) {
            if a != b {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// q^t for t = two_t/2, exact (adjoins sqrt q when two_t is odd).
    pub fn q_half_power(p: u64, f_deg: u32, two_t: i64) -> Result<CycloRational> {
        let q = BigRational::from_integer(BigInt::from(p.pow(f_deg)));
        let whole = two_t.div_euclid(2);
        let rem = two_t.rem_euclid(2);
        let mut out = CycloRational::from_rational(q.pow(whole as i32));
        if rem == 1 {
            out = out.mul(&sqrt_prime_power(p, f_deg))?;
        }
        Ok(out)
    }

    /// Specializes s to the integer m and returns the exact scalar value.
    pub fn evaluate_at(&self, m: i64) -> Result<CycloRational> {
        let x = Self::q_half_power(self.p, self.f_deg, -2 * m)?; // X = q^{-m}
        let n = poly_eval(&self.num, &x)?;
        let d = poly_eval(&self.den, &x)?;
        let pref = Self::q_half_power(self.p, self.f_deg, 2 * self.pref_e * m + self.pref_two_f)?;
        pref.mul(&n.mul(&d.inv()?)?)
    }

    /// Power-series expansion of num/den to degree d (monomial tag must be
    /// trivial for a plain series to make sense).
    pub fn expand_series(&self, d: usize) -> Result<Vec<CycloRational>> {
        if self.pref_e != 0 || self.pref_two_f != 0 {
            return Err(Error::Domain("series expansion of a factor with a monomial tag".into()));
        }
        let mut out = Vec::with_capacity(d + 1);
        let mut rem: Vec<CycloRational> = self.num.clone();
        let d0_inv = self.den[0].inv()?;
        for _ in 0..=d {
            let c = rem.first().cloned().unwrap_or_else(|| CycloRational::zero(1));
            let c = c.mul(&d0_inv)?;
            out.push(c.clone());
            // rem = (rem - c*den) / X
            let mut next = Vec::new();
            for i in 1..rem.len().max(self.den.len()) {
                let a = rem.get(i).cloned().unwrap_or_else(|| CycloRational::zero(1));
                let b = self.den.get(i).cloned().unwrap_or_else(|| CycloRational::zero(1));
                next.push(a.sub(&b.mul(&c)?)?);
            }
            rem = next;
        }
        Ok(out)
    }
}

/// Wire form for JSON output: coefficient lists plus the monomial tag.
#[derive(Serialize, Deserialize)]
pub struct LocalFactorWire {
    pub p: u64,
    pub f: u32,
    pub num: Vec<CycloRational>,
    pub den: Vec<CycloRational>,
    pub pref_e: i64,
    pub pref_two_f: i64,
}

impl From<&LocalFactorFn> for LocalFactorWire {
    fn from(x: &LocalFactorFn) -> Self {
        LocalFactorWire {
            p: x.p,
            f: x.f_deg,
            num: x.num.clone(),
            den: x.den.clone(),
            pref_e: x.pref_e,
            pref_two_f: x.pref_two_f,
        }
    }
}

// ------------------------------------------------------------- the factors

/// Standard abelian (Tate) L-factor at plain s: (1 - xi(pi) X)^{-1} for
/// unramified xi, 1 otherwise.
#[allow(non_snake_case)]
pub fn abelian_L(xi: &LocalCharacter) -> Result<LocalFactorFn> {
    abelian_l_shift(xi, 1, 0)
}

/// L(sign*s + t, xi) as a function of X = q^{-s}, with t = two_t/2.
pub fn abelian_l_shift(xi: &LocalCharacter, sign: i64, two_t: i64) -> Result<LocalFactorFn> {
    if xi.is_ramified() {
        return Ok(LocalFactorFn::one(xi.p, xi.f));
    }
    let qmt = LocalFactorFn::q_half_power(xi.p, xi.f, -two_t)?; // q^{-t}
    let gamma = xi.unram.mul(&qmt)?;
    let one = CycloRational::one(1);
    match sign {
        // (1 - gamma X)^{-1}
        1 => LocalFactorFn::from_parts(
            xi.p,
            xi.f,
            vec![one.clone()],
            vec![one, gamma.neg()],
            0,
            0,
        ),
        // (1 - gamma X^{-1})^{-1} = X / (X - gamma)
        -1 => LocalFactorFn::from_parts(
            xi.p,
            xi.f,
            vec![CycloRational::zero(1), one.clone()],
            vec![gamma.neg(), one],
            0,
            0,
        ),
        _ => Err(Error::Domain("s-coefficient must be +1 or -1".into())),
    }
}

/// epsilon(sign*s + t, xi) under the frozen level-zero additive character:
/// 1 for unramified xi; tau(xi) * q^{-c (sign*s + t)} otherwise (the printed
/// tau q^{c(1/2 - arg)} shape divided by q^{c/2}, which the functional
/// equation requires).
pub fn abelian_epsilon(xi: &LocalCharacter, sign: i64, two_t: i64) -> Result<LocalFactorFn> {
    if !xi.is_ramified() {
        return Ok(LocalFactorFn::one(xi.p, xi.f));
    }
    let c = xi.cond as i64;
    let tau = xi.gauss_sum()?;
    LocalFactorFn::from_parts(
        xi.p,
        xi.f,
        vec![tau],
        vec![CycloRational::one(1)],
        -c * sign,
        -c * two_t,
    )
}

/// Standard Godement-Jacquet factor of an unramified principal series with
/// the given Satake values, twisted by xi: prod_i (1 - alpha_i xi(pi) X)^{-1}
/// for unramified xi; a ramified twist kills every factor.
#[allow(non_snake_case)]
pub fn standard_L(
    p: u64,
    f: u32,
    satake: &[CycloRational],
    twist: &LocalCharacter,
) -> Result<LocalFactorFn> {
    if twist.is_ramified() {
        return Ok(LocalFactorFn::one(p, f));
    }
    let mut out = LocalFactorFn::one(p, f);
    for a in satake {
        let xi = LocalCharacter::unramified(p, f, a.mul(&twist.unram)?);
        out = out.mul(&abelian_L(&xi)?)?;
    }
    Ok(out)
}

/// Doubling normalizer d_{n,v}(s) = prod_{r=0}^{n-1} L(2s + n - r, chi+ eta^r)
/// in the variable X = q^{-s} (so each factor is quadratic in X).
pub fn d_norm(n: u32, chi_plus: &LocalCharacter, eta: EtaSign) -> Result<LocalFactorFn> {
    let mut out = LocalFactorFn::one(chi_plus.p, chi_plus.f);
    if chi_plus.is_ramified() {
        return Ok(out);
    }
    let one = CycloRational::one(1);
    for r in 0..n {
        let eta_r = match (eta, r % 2) {
            (EtaSign::Minus, 1) => CycloRational::from_integer(-1),
            _ => one.clone(),
        };
        // gamma_r q^{-(n-r)}: the factor is (1 - gamma_r q^{r-n} X^2)^{-1}.
        let shift = LocalFactorFn::q_half_power(chi_plus.p, chi_plus.f, -2 * (n as i64 - r as i64))?;
        let gamma = chi_plus.unram.mul(&eta_r)?.mul(&shift)?;
        let factor = LocalFactorFn::from_parts(
            chi_plus.p,
            chi_plus.f,
            vec![one.clone()],
            vec![one.clone(), CycloRational::zero(1), gamma.neg()],
            0,
            0,
        )?;
        out = out.mul(&factor)?;
    }
    Ok(out)
}

/// Normalizing value D_v(chi) = d_{n,v}(s) specialized at s = m.
pub fn d_norm_at(n: u32, chi_plus: &LocalCharacter, eta: EtaSign, m: i64) -> Result<CycloRational> {
    d_norm(n, chi_plus, eta)?.evaluate_at(m)
}

/// The inducing data of pi_w = Ind(pi_a (x) pi_b): abelian character lists.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LocalRep {
    pub a: Vec<LocalCharacter>,
    pub b: Vec<LocalCharacter>,
}

fn product_l(chars: &[LocalCharacter], twist: &LocalCharacter, sign: i64) -> Result<LocalFactorFn> {
    let (p, f) = (twist.p, twist.f);
    let mut out = LocalFactorFn::one(p, f);
    for mu in chars {
        out = out.mul(&abelian_l_shift(&mu.mul(twist)?, sign, 1)?)?;
    }
    Ok(out)
}

fn product_eps(chars: &[LocalCharacter], twist: &LocalCharacter, sign: i64) -> Result<LocalFactorFn> {
    let (p, f) = (twist.p, twist.f);
    let mut out = LocalFactorFn::one(p, f);
    for mu in chars {
        out = out.mul(&abelian_epsilon(&mu.mul(twist)?, sign, 1)?)?;
    }
    Ok(out)
}

fn inverses(chars: &[LocalCharacter]) -> Result<Vec<LocalCharacter>> {
    chars.iter().map(|c| c.inverse()).collect()
}

/// Ordinary modified Euler factor at p:
///
///   I_w = [ L(s+1/2, pi_b (x) chi2)
///           / (eps(s+1/2, pi_b (x) chi2) L(-s+1/2, dual pi_b (x) chi2^{-1})) ]
///       * [ eps(-s+1/2, pi_a (x) chi1) L(s+1/2, dual pi_a (x) chi1^{-1})
///           / L(-s+1/2, pi_a (x) chi1) ].
pub fn modified_euler_p(
    rep: &LocalRep,
    chi1: &LocalCharacter,
    chi2: &LocalCharacter,
) -> Result<LocalFactorFn> {
    let chi2_inv = chi2.inverse()?;
    let chi1_inv = chi1.inverse()?;
    let b_dual = inverses(&rep.b)?;
    let a_dual = inverses(&rep.a)?;
    let bracket_b = product_l(&rep.b, chi2, 1)?
        .div(&product_eps(&rep.b, chi2, 1)?)?
        .div(&product_l(&b_dual, &chi2_inv, -1)?)?;
    let bracket_a = product_eps(&rep.a, chi1, -1)?
        .mul(&product_l(&a_dual, &chi1_inv, 1)?)?
        .div(&product_l(&rep.a, chi1, -1)?)?;
    bracket_b.mul(&bracket_a)
}

/// Alternative assembly replacing eps(-s+1/2, pi_a (x) chi1) by
/// omega_a(-1) / eps(s+1/2, dual pi_a (x) chi1^{-1}).
pub fn modified_euler_p_alt(
    rep: &LocalRep,
    chi1: &LocalCharacter,
    chi2: &LocalCharacter,
) -> Result<LocalFactorFn> {
    let chi2_inv = chi2.inverse()?;
    let chi1_inv = chi1.inverse()?;
    let b_dual = inverses(&rep.b)?;
    let a_dual = inverses(&rep.a)?;
    // omega_a(-1): the central sign of pi_a (x) chi1 at -1.
    let mut omega = CycloRational::one(1);
    for mu in &rep.a {
        omega = omega.mul(&mu.mul(chi1)?.value_at_minus_one()?)?;
    }
    let bracket_b = product_l(&rep.b, chi2, 1)?
        .div(&product_eps(&rep.b, chi2, 1)?)?
        .div(&product_l(&b_dual, &chi2_inv, -1)?)?;
    let bracket_a = product_eps(&a_dual, &chi1_inv, 1)?
        .inv()?
        .scale(&omega)?
        .mul(&product_l(&a_dual, &chi1_inv, 1)?)?
        .div(&product_l(&rep.a, chi1, -1)?)?;
    bracket_b.mul(&bracket_a)
}

/// True iff the two assemblies agree as reduced rational functions.
pub fn euler_alt_form_identity(
    rep: &LocalRep,
    chi1: &LocalCharacter,
    chi2: &LocalCharacter,
) -> Result<bool> {
    modified_euler_p(rep, chi1, chi2)?.equal(&modified_euler_p_alt(rep, chi1, chi2)?)
}

/// Brute-force GL1 zeta sum with the unit-ball test function:
/// sum_{k=0}^{D} xi(pi)^k X^k.
pub fn gj_series_oracle(xi: &LocalCharacter, d: usize) -> Result<Vec<CycloRational>> {
    if xi.is_ramified() {
        return Err(Error::Domain("oracle defined for unramified characters".into()));
    }
    let mut out = Vec::with_capacity(d + 1);
    let mut acc = CycloRational::one(1);
    for _ in 0..=d {
        out.push(acc.clone());
        acc = acc.mul(&xi.unram)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn cy(n: i64) -> CycloRational {
        CycloRational::from_integer(n)
    }

    fn cyr(n: i64, d: i64) -> CycloRational {
        CycloRational::from_rational(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    fn unram(p: u64, v: CycloRational) -> LocalCharacter {
        LocalCharacter::unramified(p, 1, v)
    }

    #[test]
    fn abelian_l_basics() {
        // Unramified with value alpha: 1/(1 - alpha X).
        let l = abelian_L(&unram(5, cy(3))).unwrap();
        assert_eq!(l.num, vec![cy(1)]);
        assert_eq!(l.den, vec![cy(1), cy(-3)]);
        // Trivial: 1/(1-X).
        let t = abelian_L(&unram(5, cy(1))).unwrap();
        assert_eq!(t.den, vec![cy(1), cy(-1)]);
        // Ramified: 1.
        let xi = unit_group_character(5, 1, 1).unwrap();
        assert!(xi.is_ramified());
        let r = abelian_L(&xi).unwrap();
        assert!(r.equal(&LocalFactorFn::one(5, 1)).unwrap());
    }

    #[test]
    fn quadratic_gauss_sum_mod_3() {
        // The quadratic character mod 3 has tau = zeta_3 - zeta_3^2; the
        // plain-s epsilon is tau * 3^{-s} in the unitary normalization.
        let xi = unit_group_character(3, 1, 1).unwrap();
        assert_eq!(xi.unit_value(2).unwrap(), cy(-1));
        let tau = xi.gauss_sum().unwrap();
        let expect = CycloRational::root_of_unity(3, 1)
            .sub(&CycloRational::root_of_unity(3, 2))
            .unwrap();
        assert_eq!(tau, expect);
        let eps = abelian_epsilon(&xi, 1, 0).unwrap();
        assert_eq!(eps.pref_e, -1);
        assert_eq!(eps.pref_two_f, 0);
        assert_eq!(eps.num, vec![expect]);
    }

    #[test]
    fn gauss_sum_norm_identity() {
        // tau(xi) tau(xi^{-1}) = xi(-1) q^c for every nontrivial character
        // mod p, p <= 7; hence tau conj(tau) = q^c.
        for p in [3u64, 5, 7] {
            for k in 1..(p - 1) {
                let xi = unit_group_character(p, 1, k).unwrap();
                let tau = xi.gauss_sum().unwrap();
                let tau_inv_char = xi.inverse().unwrap().gauss_sum().unwrap();
                let lhs = tau.mul(&tau_inv_char).unwrap();
                let rhs = xi.value_at_minus_one().unwrap().mul(&cy(p as i64)).unwrap();
                assert_eq!(lhs, rhs, "p={p} k={k}");
                let norm = tau.mul(&tau.conj()).unwrap();
                assert_eq!(norm, cy(p as i64), "p={p} k={k} norm");
            }
        }
    }

    #[test]
    fn conductor_drop_is_detected() {
        let xi = unit_group_character(5, 2, 1).unwrap();
        assert_eq!(xi.cond, 2);
        let prod = xi.mul(&xi.inverse().unwrap()).unwrap();
        assert_eq!(prod.cond, 0);
        // chi * chi^{-1} * chi keeps conductor 2.
        let back = prod.mul(&xi).unwrap();
        assert_eq!(back.cond, 2);
        // Characters trivial on 1 + 5Z/25Z but not on all units drop to level 1.
        let mut seen_drop = false;
        for k in 1..20u64 {
            let c = unit_group_character(5, 2, k).unwrap();
            if c.cond == 1 {
                seen_drop = true;
            }
        }
        assert!(seen_drop);
    }

    #[test]
    fn standard_l_examples() {
        let twist = unram(5, cy(2));
        let l = standard_L(5, 1, &[cy(3), cy(-1)], &twist).unwrap();
        // 1/((1-6X)(1+2X)) = 1/(1 - 4X - 12 X^2).
        assert_eq!(l.den, vec![cy(1), cy(-4), cy(-12)]);
        assert!(standard_L(5, 1, &[], &twist).unwrap().equal(&LocalFactorFn::one(5, 1)).unwrap());
        let triv = standard_L(5, 1, &[cy(1)], &unram(5, cy(1))).unwrap();
        assert_eq!(triv.den, vec![cy(1), cy(-1)]);
    }

    #[test]
    fn d_norm_examples() {
        // n=2, m=1, trivial chi+, eta(pi) = -1:
        // D_v = 1/((1 - q^{-4})(1 + q^{-3})).
        let q = 5i64;
        let chi = unram(5, cy(1));
        let v = d_norm_at(2, &chi, EtaSign::Minus, 1).unwrap();
        let expect = cy(1)
            .sub(&cyr(1, q.pow(4)))
            .unwrap()
            .mul(&cy(1).add(&cyr(1, q.pow(3))).unwrap())
            .unwrap()
            .inv()
            .unwrap();
        assert_eq!(v, expect);
        // n=1: the single factor L(2s+1, chi+) = 1/(1 - gamma q^{-1} X^2).
        let one_fac = d_norm(1, &chi, EtaSign::Plus).unwrap();
        assert_eq!(one_fac.den, vec![cy(1), cy(0), cyr(-1, q)]);
        // Ramified chi+: 1.
        let ram = unit_group_character(5, 1, 2).unwrap();
        assert!(d_norm(3, &ram, EtaSign::Minus).unwrap().equal(&LocalFactorFn::one(5, 1)).unwrap());
    }

    #[test]
    fn doubling_specializes_to_normalizer() {
        for (eta, m) in [(EtaSign::Plus, 2i64), (EtaSign::Minus, 1)] {
            for n in 1..=3u32 {
                let chi = unram(7, cy(2));
                let from_fn = d_norm(n, &chi, eta).unwrap().evaluate_at(m).unwrap();
                let direct = d_norm_at(n, &chi, eta, m).unwrap();
                assert_eq!(from_fn, direct);
            }
        }
    }

    #[test]
    fn modified_euler_unramified_oracle() {
        // n=2, a=b=1, all unramified: I_w = (1 - b^{-1}c2^{-1} q^{s-1/2})
        // (1 - a c1 q^{s-1/2}) / [(1 - b c2 q^{-s-1/2})(1 - a^{-1}c1^{-1} q^{-s-1/2})].
        let p = 5u64;
        let (alpha, beta, c1, c2) = (cy(2), cy(3), cy(-1), cyr(1, 2));
        let rep = LocalRep { a: vec![unram(p, alpha.clone())], b: vec![unram(p, beta.clone())] };
        let got = modified_euler_p(&rep, &unram(p, c1.clone()), &unram(p, c2.clone())).unwrap();
        // Build the expected reduced form: clearing X^{-1} gives pref q^{2s}
        // and num (X - g1 r)(X - g2 r), den (1 - g3 r X)(1 - g4 r X), with
        // r = q^{-1/2}.
        let r = LocalFactorFn::q_half_power(p, 1, -1).unwrap();
        let g1 = beta.inv().unwrap().mul(&c2.inv().unwrap()).unwrap();
        let g2 = alpha.mul(&c1).unwrap();
        let g3 = beta.mul(&c2).unwrap();
        let g4 = alpha.inv().unwrap().mul(&c1.inv().unwrap()).unwrap();
        let num = poly_mul(
            &[g1.mul(&r).unwrap().neg(), cy(1)],
            &[g2.mul(&r).unwrap().neg(), cy(1)],
        )
        .unwrap();
        let den = poly_mul(
            &[cy(1), g3.mul(&r).unwrap().neg()],
            &[cy(1), g4.mul(&r).unwrap().neg()],
        )
        .unwrap();
        let expect = LocalFactorFn::from_parts(p, 1, num, den, 2, 0).unwrap();
        assert!(got.equal(&expect).unwrap(), "got {:?}", got);
    }

    #[test]
    fn modified_euler_all_values_one() {
        // All inducing values 1: (1 - q^{s-1/2})^2 / (1 - q^{-s-1/2})^2.
        let p = 3u64;
        let rep = LocalRep { a: vec![unram(p, cy(1))], b: vec![unram(p, cy(1))] };
        let got = modified_euler_p(&rep, &unram(p, cy(1)), &unram(p, cy(1))).unwrap();
        let r = LocalFactorFn::q_half_power(p, 1, -1).unwrap();
        let lin_num = [r.neg(), cy(1)];
        let lin_den = [cy(1), r.neg()];
        let expect = LocalFactorFn::from_parts(
            p,
            1,
            poly_mul(&lin_num, &lin_num).unwrap(),
            poly_mul(&lin_den, &lin_den).unwrap(),
            2,
            0,
        )
        .unwrap();
        assert!(got.equal(&expect).unwrap());
    }

    #[test]
    fn definite_block_keeps_only_b_bracket() {
        let p = 5u64;
        let rep_full = LocalRep { a: vec![], b: vec![unram(p, cy(2))] };
        let got = modified_euler_p(&rep_full, &unram(p, cy(7)), &unram(p, cy(3))).unwrap();
        let rep_b = LocalRep { a: vec![], b: vec![unram(p, cy(2))] };
        let only_b = modified_euler_p(&rep_b, &unram(p, cy(1)), &unram(p, cy(3))).unwrap();
        // chi1 is irrelevant when a is empty.
        assert!(got.equal(&only_b).unwrap());
    }

    #[test]
    fn block_multiplicativity() {
        let p = 5u64;
        let chi1 = unram(p, cy(2));
        let chi2 = unram(p, cyr(1, 3));
        let block1 = LocalRep { a: vec![unram(p, cy(3))], b: vec![unram(p, cy(-1))] };
        let block2 = LocalRep { a: vec![unram(p, cyr(1, 2))], b: vec![unram(p, cy(7))] };
        let joint = LocalRep {
            a: vec![block1.a[0].clone(), block2.a[0].clone()],
            b: vec![block1.b[0].clone(), block2.b[0].clone()],
        };
        let lhs = modified_euler_p(&joint, &chi1, &chi2).unwrap();
        let rhs = modified_euler_p(&block1, &chi1, &chi2)
            .unwrap()
            .mul(&modified_euler_p(&block2, &chi1, &chi2).unwrap())
            .unwrap();
        assert!(lhs.equal(&rhs).unwrap());
    }

    fn random_character(rng: &mut ChaCha8Rng, p: u64) -> LocalCharacter {
        let vals = [cy(1), cy(-1), cy(2), cyr(1, 2), cy(3), cyr(-2, 3)];
        let unram_val = vals[rng.gen_range(0..vals.len())].clone();
        let ram = rng.gen_range(0..3u32); // 0 = unramified, else conductor level
        if ram == 0 {
            return LocalCharacter::unramified(p, 1, unram_val);
        }
        let c = if ram == 2 && p == 3 { 2 } else { 1 };
        let phi = euler_phi(p.pow(c));
        let k = rng.gen_range(1..phi);
        let mut xi = unit_group_character(p, c, k).unwrap();
        xi.unram = unram_val;
        xi
    }

    #[test]
    fn alt_form_identity_holds() {
        // Unramified case with omega(-1) = 1.
        let p = 5u64;
        let rep = LocalRep { a: vec![unram(p, cy(2))], b: vec![unram(p, cy(3))] };
        assert!(euler_alt_form_identity(&rep, &unram(p, cy(1)), &unram(p, cy(1))).unwrap());
        // Quadratic ramified a-block character.
        let quad = unit_group_character(5, 1, 2).unwrap();
        assert_eq!(quad.unit_value(4).unwrap(), cy(1)); // even character part
        let rep2 = LocalRep { a: vec![quad], b: vec![unram(p, cy(3))] };
        assert!(euler_alt_form_identity(&rep2, &unram(p, cy(1)), &unram(p, cy(2))).unwrap());
        // Randomized mixed trials.
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for trial in 0..60 {
            let p = [3u64, 5, 7][rng.gen_range(0..3)];
            let n = rng.gen_range(1..=4);
            let a_len = rng.gen_range(0..=n);
            let rep = LocalRep {
                a: (0..a_len).map(|_| random_character(&mut rng, p)).collect(),
                b: (0..(n - a_len)).map(|_| random_character(&mut rng, p)).collect(),
            };
            let chi1 = random_character(&mut rng, p);
            let chi2 = random_character(&mut rng, p);
            assert!(
                euler_alt_form_identity(&rep, &chi1, &chi2).unwrap(),
                "trial {trial} failed (p={p})"
            );
        }
    }

    #[test]
    fn gj_oracle_matches_series() {
        // Spec examples.
        let ones = gj_series_oracle(&unram(5, cy(1)), 3).unwrap();
        assert_eq!(ones, vec![cy(1); 4]);
        assert_eq!(gj_series_oracle(&unram(5, cy(2)), 0).unwrap(), vec![cy(1)]);
        // Expansion of 1/(1 - alpha X) matches the zeta sum.
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let vals = [cy(1), cy(-1), cy(2), cy(5), cyr(1, 2), cyr(-3, 7)];
        for _ in 0..100 {
            let alpha = vals[rng.gen_range(0..vals.len())].clone();
            let xi = unram(5, alpha);
            let l = abelian_L(&xi).unwrap();
            assert_eq!(l.expand_series(30).unwrap(), gj_series_oracle(&xi, 30).unwrap());
        }
    }

    #[test]
    fn factor_algebra_reduces() {
        // (1-2X)/(1-2X) = 1 after gcd reduction.
        let l = abelian_L(&unram(5, cy(2))).unwrap();
        let prod = l.mul(&l.inv().unwrap()).unwrap();
        assert!(prod.equal(&LocalFactorFn::one(5, 1)).unwrap());
        // X-power folding: X^2 num factor becomes a monomial tag.
        let x2 = LocalFactorFn::from_parts(
            5,
            1,
            vec![cy(0), cy(0), cy(3)],
            vec![cy(1)],
            0,
            0,
        )
        .unwrap();
        assert_eq!(x2.pref_e, -2);
        assert_eq!(x2.num, vec![cy(3)]);
    }
}
