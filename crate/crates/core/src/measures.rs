//! p-adic measures via Mazur's dictionary. Finite-level measures are group
//! ring elements on (Z/p^r)^d; measures on Z_p are truncated Amice series
//! F(T) = sum c_k T^k with c_k = integral of binom(x,k); measures on the
//! units Z_p^x are (p-1)-indexed families of branch series cut out by the
//! Teichmuller projectors (which are Z_p-valued, so no p-th roots of unity
//! enter the construction).
//!
//! The regularized Bernoulli measure E_c uses the FROZEN sign convention
//!
//!   E_c(a + p^r Z_p) = -[ B1({a/p^r}) - c * B1({c^{-1}a/p^r}) ],
//!
//! i.e. the global sign -1 relative to the raw regularized coset formula,
//! calibrated so that the unit moments satisfy
//!
//!   int_{Z_p^x} x^{k-1} dE_c = -(1 - c^k)(1 - p^{k-1}) B_k / k
//!
//! (checked against the exact Bernoulli oracle at (p,k) = (5,2) and (5,4)),
//! and hence kubota_leopoldt returns -(1 - p^{k-1}) B_k / k.
//!
//! Unit-group moments are computed exactly at finite level via the measure
//! identity int_{a+p^r} x^{k-1} dE_c = (1/k) E^(k)_c(a + p^r), with
//! E^(k)_c(a+p^r) = -p^{r(k-1)} [B_k(a/p^r) - c^k B_k({c^{-1}a/p^r})] the
//! degree-k regularized Bernoulli coset values (level-independent).

use crate::bernoulli::{bernoulli_polynomial, binomial, eval_poly, stirling_first};
use crate::cyclo::{euler_phi, CycloRational};
use crate::error::{Error, Result};
use crate::padic::{mod_inverse, pow_u, teichmuller, PadicScalar};
use num_bigint::{BigInt, BigUint};
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

fn q_int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// v_p of a nonzero rational; None for zero.
fn rational_val(r: &BigRational, p: u64) -> Option<i64> {
    if r.is_zero() {
        return None;
    }
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
    Some(v)
}

// ---------------------------------------------------------------- finite level

/// A measure on (Z/p^r)^d: a coefficient for every group element.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteLevelMeasure {
    p: u64,
    r: u32,
    d: u32,
    table: BTreeMap<Vec<u64>, CycloRational>,
}

/// All elements of (Z/p^r)^d in lexicographic order.
pub fn group_elements(p: u64, r: u32, d: u32) -> Vec<Vec<u64>> {
    let q = p.pow(r);
    let mut out = vec![vec![]];
    for _ in 0..d {
        let mut next = Vec::with_capacity(out.len() * q as usize);
        for g in &out {
            for x in 0..q {
                let mut h = g.clone();
                h.push(x);
                next.push(h);
            }
        }
        out = next;
    }
    out
}

/// Value table of the character chi_j(x) = zeta_{p^r}^(j . x) at level r.
pub fn character_table(p: u64, r: u32, d: u32, j: &[u64]) -> BTreeMap<Vec<u64>, CycloRational> {
    let q = p.pow(r);
    group_elements(p, r, d)
        .into_iter()
        .map(|g| {
            let dot: u64 = g.iter().zip(j).map(|(x, ji)| x * ji % q).sum::<u64>() % q;
            let v = CycloRational::root_of_unity(q, dot as i64);
            (g, v)
        })
        .collect()
}

impl FiniteLevelMeasure {
    pub fn new(p: u64, r: u32, d: u32, table: BTreeMap<Vec<u64>, CycloRational>) -> Result<Self> {
        let q = p.pow(r);
        for g in table.keys() {
            if g.len() != d as usize || g.iter().any(|&x| x >= q) {
                return Err(Error::Schema(format!("bad group element {g:?} at level {r}")));
            }
        }
        // Canonical form: no explicit zero coefficients (makes equality honest).
        let table = table.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Ok(FiniteLevelMeasure { p, r, d, table })
    }

    /// The point mass delta_a.
    pub fn point_mass(p: u64, r: u32, d: u32, a: &[u64]) -> Result<Self> {
        let mut table = BTreeMap::new();
        table.insert(a.to_vec(), CycloRational::one(1));
        FiniteLevelMeasure::new(p, r, d, table)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn level(&self) -> u32 {
        self.r
    }

    pub fn rank(&self) -> u32 {
        self.d
    }

    pub fn coeff(&self, g: &[u64]) -> CycloRational {
        self.table.get(g).cloned().unwrap_or_else(|| CycloRational::zero(1))
    }

    pub fn table(&self) -> &BTreeMap<Vec<u64>, CycloRational> {
        &self.table
    }

    /// Integrates a locally constant function given by its value table at
    /// level f_level <= r: sum_g coeff(g) f(g mod p^f_level).
    pub fn integrate_table(
        &self,
        f: &BTreeMap<Vec<u64>, CycloRational>,
        f_level: u32,
    ) -> Result<CycloRational> {
        if f_level > self.r {
            return Err(Error::Mismatch(format!(
                "test function lives at level {f_level} > measure level {} (no declared projection)",
                self.r
            )));
        }
        let qf = self.p.pow(f_level);
        let mut acc = CycloRational::zero(1);
        for (g, c) in &self.table {
            let key: Vec<u64> = g.iter().map(|x| x % qf).collect();
            let fv = f
                .get(&key)
                .ok_or_else(|| Error::Schema(format!("function table missing {key:?}")))?;
            acc = acc.add(&c.mul(fv)?)?;
        }
        Ok(acc)
    }

    /// mu(chi_j) = chi_j(f): the character evaluated on the group ring image.
    pub fn integrate_character(&self, j: &[u64]) -> Result<CycloRational> {
        let q = self.p.pow(self.r);
        let mut acc = CycloRational::zero(1);
        for (g, c) in &self.table {
            let dot: u64 = g.iter().zip(j).map(|(x, ji)| x * ji % q).sum::<u64>() % q;
            acc = acc.add(&c.mul(&CycloRational::root_of_unity(q, dot as i64))?)?;
        }
        Ok(acc)
    }

    /// Pushforward to level r2 < r: sum coefficients over fibers.
    pub fn pushforward(&self, r2: u32) -> Result<Self> {
        if r2 > self.r {
            return Err(Error::Mismatch("pushforward target level exceeds source".into()));
        }
        let q2 = self.p.pow(r2);
        let mut table: BTreeMap<Vec<u64>, CycloRational> = BTreeMap::new();
        for (g, c) in &self.table {
            let key: Vec<u64> = g.iter().map(|x| x % q2).collect();
            let entry = table.entry(key).or_insert_with(|| CycloRational::zero(1));
            *entry = entry.add(c)?;
        }
        FiniteLevelMeasure::new(self.p, r2, self.d, table)
    }

    /// Product measure on X1 x X2 (coefficientwise outer product).
    pub fn product(&self, other: &Self) -> Result<Self> {
        if self.p != other.p || self.r != other.r {
            return Err(Error::Mismatch("product needs matching prime and level".into()));
        }
        let mut table = BTreeMap::new();
        for (g1, c1) in &self.table {
            for (g2, c2) in &other.table {
                let mut g = g1.clone();
                g.extend_from_slice(g2);
                table.insert(g, c1.mul(c2)?);
            }
        }
        FiniteLevelMeasure::new(self.p, self.r, self.d + other.d, table)
    }

    /// Currying: a measure on X1 x X2 becomes a measure on X1 valued in
    /// measures on X2 (first d1 coordinates index the outer group).
    pub fn curry(&self, d1: u32) -> Result<Vec<(Vec<u64>, FiniteLevelMeasure)>> {
        if d1 > self.d {
            return Err(Error::Mismatch("curry split exceeds rank".into()));
        }
        let mut outer: BTreeMap<Vec<u64>, BTreeMap<Vec<u64>, CycloRational>> = BTreeMap::new();
        for (g, c) in &self.table {
            let (g1, g2) = g.split_at(d1 as usize);
            let inner = outer.entry(g1.to_vec()).or_default();
            let entry = inner.entry(g2.to_vec()).or_insert_with(|| CycloRational::zero(1));
            *entry = entry.add(c)?;
        }
        outer
            .into_iter()
            .map(|(g1, t)| {
                Ok((g1, FiniteLevelMeasure::new(self.p, self.r, self.d - d1, t)?))
            })
            .collect()
    }
}

/// Wire form: {"type":"finite","p":...,"r":...,"d":...,"table":{"a,b":cyclo}}.
#[derive(Serialize, Deserialize)]
struct FiniteWire {
    p: u64,
    r: u32,
    d: u32,
    table: BTreeMap<String, CycloRational>,
}

impl Serialize for FiniteLevelMeasure {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let table = self
            .table
            .iter()
            .map(|(g, c)| {
                let key = g.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
                (key, c.clone())
            })
            .collect();
        FiniteWire { p: self.p, r: self.r, d: self.d, table }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for FiniteLevelMeasure {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = FiniteWire::deserialize(d)?;
        let mut table = BTreeMap::new();
        for (k, v) in w.table {
            let g: std::result::Result<Vec<u64>, _> =
                k.split(',').map(|t| t.trim().parse::<u64>()).collect();
            let g = g.map_err(|_| serde::de::Error::custom(format!("bad group key: {k}")))?;
            table.insert(g, v);
        }
        FiniteLevelMeasure::new(w.p, w.r, w.d, table)
            .map_err(|e| serde::de::Error::custom(e.to_string()))
    }
}

// ---------------------------------------------------------------- Amice series

/// A measure on Z_p as a truncated Amice series F(T) = sum_{k<=D} c_k T^k,
/// c_k = integral of binom(x,k). Coefficients are exact rationals; when the
/// series was built from p-adic data they are integer representatives mod
/// p^precision.
#[derive(Clone, Debug, PartialEq)]
pub struct AmiceSeries {
    p: u64,
    precision: u32,
    coeffs: Vec<BigRational>,
}

/// Default truncation degree: N + p^r tail coefficients give a provable
/// error bound for evaluation at level-r characters.
pub fn default_truncation(n_prec: u32, p: u64, r: u32) -> usize {
    n_prec as usize + p.pow(r) as usize
}

impl AmiceSeries {
    pub fn new(p: u64, precision: u32, coeffs: Vec<BigRational>) -> Self {
        AmiceSeries { p, precision, coeffs }
    }

    /// The point mass delta_a: F(T) = (1+T)^a, c_k = C(a,k).
    pub fn point_mass(p: u64, precision: u32, a: u64, truncation: usize) -> Self {
        let coeffs = (0..=truncation as u64)
            .map(|k| BigRational::from_integer(binomial(a, k)))
            .collect();
        AmiceSeries { p, precision, coeffs }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn truncation(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// c_k = integral of binom(x,k).
    pub fn coeff(&self, k: usize) -> BigRational {
        self.coeffs.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Integrates the character x -> zeta^x u^x (zeta of p-power order,
    /// u = 1 mod p) as F(z-1) with z = zeta*u, by Horner with exact
    /// truncation-error accounting. Returns the value together with the
    /// guaranteed valuation of the truncation error; errors out when that
    /// bound falls below the series precision.
    pub fn integrate_character(
        &self,
        u: &PadicScalar,
        zeta: Option<&CycloRational>,
    ) -> Result<(CycloRational, Ratio<i64>)> {
        if u.p() != self.p {
            return Err(Error::Mismatch("character prime differs from series prime".into()));
        }
        let u_rep = CycloRational::from_rational(BigRational::from_integer(BigInt::from(
            u.unit_residue().clone(),
        )));
        match u.valuation() {
            crate::padic::Valuation::Exact(v) if v == crate::halfint::HalfInt::ZERO => {}
            _ => return Err(Error::Domain("u must be a unit congruent to 1 mod p".into())),
        }
        let z = match zeta {
            Some(z) => z.mul(&u_rep)?,
            None => u_rep,
        };
        let t = z.sub(&CycloRational::one(1))?; // z - 1
        let vt = match t.padic_valuation(self.p)? {
            // z = 1 exactly: F(0) = c_0, no truncation error at all.
            None => {
                return Ok((
                    CycloRational::from_rational(self.coeff(0)),
                    Ratio::from_integer(i64::MAX / 2),
                ))
            }
            Some(v) => v,
        };
        if vt <= Ratio::from_integer(0) {
            return Err(Error::Domain("z - 1 must be topologically nilpotent".into()));
        }
        let mut acc = CycloRational::zero(1);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(&t)?.add(&CycloRational::from_rational(c.clone()))?;
        }
        // Tail terms c_k (z-1)^k, k > D, have valuation >= (D+1) v(z-1).
        let bound = vt * Ratio::from_integer(self.coeffs.len() as i64);
        if bound < Ratio::from_integer(self.precision as i64) {
            return Err(Error::Precision(format!(
                "truncation bound {bound} below requested precision {}",
                self.precision
            )));
        }
        Ok((acc, bound))
    }
}

/// Wire form: {"type":"amice","p":...,"N":...,"D":...,"coeffs":[...]}.
#[derive(Serialize, Deserialize)]
struct AmiceWire {
    p: u64,
    #[serde(rename = "N")]
    n: u32,
    #[serde(rename = "D")]
    d: usize,
    coeffs: Vec<String>,
}

impl Serialize for AmiceSeries {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        AmiceWire {
            p: self.p,
            n: self.precision,
            d: self.truncation(),
            coeffs: self.coeffs.iter().map(|c| c.to_string()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for AmiceSeries {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = AmiceWire::deserialize(d)?;
        let mut coeffs = Vec::with_capacity(w.coeffs.len());
        for c in &w.coeffs {
            coeffs.push(
                c.parse::<BigRational>()
                    .map_err(|_| serde::de::Error::custom(format!("bad rational {c}")))?,
            );
        }
        if coeffs.len() != w.d + 1 {
            return Err(serde::de::Error::custom("D does not match coefficient count"));
        }
        Ok(AmiceSeries::new(w.p, w.n, coeffs))
    }
}

/// Tagged measure document for JSON I/O.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum MeasureDoc {
    Amice(AmiceSeries),
    Finite(FiniteLevelMeasure),
}

// ------------------------------------------------------- regularized Bernoulli

/// Degree-k regularized Bernoulli coset values (frozen sign convention):
/// E^(k)_c(a + p^r Z_p) = -p^{r(k-1)} [B_k(a/p^r) - c^k B_k({c^{-1}a/p^r})],
/// for all a in 0..p^r.
pub fn regularized_bernoulli_cosets(p: u64, c: u64, level: u32, k: usize) -> Result<Vec<BigRational>> {
    if c < 2 || c % p == 0 {
        return Err(Error::Domain(format!("regulator c = {c} must be >= 2 and a unit mod {p}")));
    }
    let q = p.pow(level);
    let qb = BigUint::from(q);
    let cinv = mod_inverse(&BigUint::from(c % q), &qb)?;
    let cinv: u64 = cinv.to_string().parse().expect("residue fits in u64");
    let bk = bernoulli_polynomial(k);
    let ck = BigRational::from_integer(BigInt::from(c).pow(k as u32));
    let scale = BigRational::from_integer(BigInt::from(q)).pow(k as i32 - 1);
    let mut out = Vec::with_capacity(q as usize);
    for a in 0..q {
        let b = (cinv as u128 * a as u128 % q as u128) as u64;
        let main = eval_poly(&bk, &BigRational::new(BigInt::from(a), BigInt::from(q)));
        let reg = eval_poly(&bk, &BigRational::new(BigInt::from(b), BigInt::from(q)));
        out.push(-(main - &ck * reg) * &scale);
    }
    Ok(out)
}

/// Exact unit moment of E_c at level `level`:
/// int_{Z_p^x} x^e dE_c = (1/(e+1)) sum_{a unit mod p^level} E^(e+1)_c(a).
pub fn unit_moment(p: u64, c: u64, level: u32, e: usize) -> Result<BigRational> {
    let cosets = regularized_bernoulli_cosets(p, c, level, e + 1)?;
    let q = p.pow(level);
    let mut acc = BigRational::zero();
    for a in 0..q {
        if a % p != 0 {
            acc += &cosets[a as usize];
        }
    }
    Ok(acc / q_int(e as i64 + 1))
}

/// A measure on Z_p^x as Teichmuller branch series over the regularized
/// Bernoulli measure E_c. Branch i has Amice coefficients
/// g_{i,k} = int_{Z_p^x} omega(x)^{-i} binom(x,k) dE_c, stored as integer
/// representatives mod p^precision.
#[derive(Clone, Debug)]
pub struct UnitsMeasure {
    p: u64,
    precision: u32,
    level: u32,
    c: u64,
    /// E_c(a + p^level Z_p) for a in 0..p^level (meaningful on units).
    coset: Vec<BigRational>,
    branches: Vec<AmiceSeries>,
}

impl UnitsMeasure {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn regulator(&self) -> u64 {
        self.c
    }

    pub fn coset_value(&self, a: u64) -> &BigRational {
        &self.coset[a as usize]
    }

    pub fn branch(&self, i: usize) -> &AmiceSeries {
        &self.branches[i]
    }

    pub fn branch_count(&self) -> usize {
        self.branches.len()
    }

    /// Exact unit moment: int_{Z_p^x} x^e dE_c = (1/(e+1)) sum_{a unit} E^(e+1)_c(a).
    pub fn unit_moment(&self, e: usize) -> Result<BigRational> {
        unit_moment(self.p, self.c, self.level, e)
    }

    /// Branch-i character integration: int omega^{-i}(x) u^x dE_c over units,
    /// reduced into Z_p at the stored precision.
    pub fn integrate_branch_character(&self, i: usize, u: &PadicScalar) -> Result<PadicScalar> {
        let (value, _bound) = self.branches[i].integrate_character(u, None)?;
        let r = value
            .as_rational()
            .ok_or_else(|| Error::Domain("branch integral must be rational".into()))?;
        PadicScalar::from_rational(self.p, self.precision, &r)
    }

    /// The finite-level coset-table image (rank 1) of this measure.
    pub fn to_finite_level(&self) -> Result<FiniteLevelMeasure> {
        let mut table = BTreeMap::new();
        let q = self.p.pow(self.level);
        for a in 0..q {
            table.insert(vec![a], CycloRational::from_rational(self.coset[a as usize].clone()));
        }
        FiniteLevelMeasure::new(self.p, self.level, 1, table)
    }
}

/// The regularized Bernoulli measure E_c on Z_p^x at precision p^n_prec and
/// coset level p^level, with Teichmuller branch series truncated at the
/// default degree N + p^level.
pub fn mazur_measure(p: u64, c: u64, n_prec: u32, level: u32) -> Result<UnitsMeasure> {
    if p < 3 {
        return Err(Error::Domain("p must be an odd prime".into()));
    }
    if c < 2 || c % p == 0 {
        return Err(Error::Domain(format!("regulator c = {c} must be >= 2 and a unit mod {p}")));
    }
    let coset = regularized_bernoulli_cosets(p, c, level, 1)?;
    let truncation = default_truncation(n_prec, p, level);
    // Guard digits absorb divisions by k! and (j+1) when converting
    // polynomial moments to binomial moments.
    let guard = 2 * (truncation as u32) / (p as u32 - 1) + 8;
    let work_prec = n_prec + guard;
    let q = p.pow(level);

    // Power moments against each Teichmuller projector branch:
    // m_i(j) = int omega^{-i}(x) x^j dE_c = (1/(j+1)) sum_a omega^{-i}(a) E^(j+1)(a).
    let mut omega_pow: Vec<Vec<BigRational>> = Vec::with_capacity((p - 1) as usize);
    for i in 0..(p - 1) {
        let mut row = Vec::with_capacity(q as usize);
        for a in 0..q {
            if a % p == 0 {
                row.push(BigRational::zero());
                continue;
            }
            // omega(a)^{-i} = omega(a^{p-1-i} mod p).
            let e = (p - 1 - i) % (p - 1);
            let base = {
                let mut t = 1u64;
                for _ in 0..e {
                    t = t * (a % p) % p;
                }
                t.max(1)
            };
            let w = teichmuller(base, p, work_prec)?;
            row.push(BigRational::from_integer(BigInt::from(w.unit_residue().clone())));
        }
        omega_pow.push(row);
    }

    let mut power_moments: Vec<Vec<BigRational>> =
        vec![Vec::with_capacity(truncation + 1); (p - 1) as usize];
    for j in 0..=truncation {
        let cosets = regularized_bernoulli_cosets(p, c, level, j + 1)?;
        for (i, row) in omega_pow.iter().enumerate() {
            let mut acc = BigRational::zero();
            for a in 0..q {
                if a % p != 0 {
                    acc += &row[a as usize] * &cosets[a as usize];
                }
            }
            power_moments[i].push(acc / q_int(j as i64 + 1));
        }
    }

    // Binomial moments: binom(x,k) = (1/k!) sum_j s(k,j) x^j.
    let modulus = BigInt::from(pow_u(p, work_prec));
    let mut branches = Vec::with_capacity((p - 1) as usize);
    for pm in &power_moments {
        let mut coeffs = Vec::with_capacity(truncation + 1);
        let mut factorial = BigRational::one();
        for k in 0..=truncation {
            if k > 0 {
                factorial *= q_int(k as i64);
            }
            let s = stirling_first(k);
            let mut acc = BigRational::zero();
            for (j, sj) in s.iter().enumerate() {
                acc += BigRational::from_integer(sj.clone()) * &pm[j];
            }
            let exact = acc / &factorial;
            // Store the integer representative mod p^work_prec.
            let rep = rational_mod(&exact, p, &modulus)?;
            coeffs.push(BigRational::from_integer(rep));
        }
        branches.push(AmiceSeries::new(p, n_prec, coeffs));
    }
    Ok(UnitsMeasure { p, precision: n_prec, level, c, coset, branches })
}

/// Integer representative of a p-integral rational modulo `modulus` = p^M.
fn rational_mod(r: &BigRational, p: u64, modulus: &BigInt) -> Result<BigInt> {
    if let Some(v) = rational_val(r, p) {
        if v < 0 {
            return Err(Error::Domain("rational is not p-integral".into()));
        }
    }
    let num = r.numer();
    let den = r.denom();
    let m_u = modulus.to_biguint().expect("modulus positive");
    let den_u = {
        let mut t = den % modulus;
        if t.is_negative() {
            t += modulus;
        }
        t.to_biguint().unwrap()
    };
    let inv = BigInt::from(mod_inverse(&den_u, &m_u)?);
    let mut out = num * inv % modulus;
    if out.is_negative() {
        out += modulus;
    }
    Ok(out)
}

// ------------------------------------------------------------ Kubota-Leopoldt

/// The exact rational (1-c^k)^{-1} int_{Z_p^x} x^{k-1} dE_c computed from the
/// level-`level` coset sums; equals -(1-p^{k-1}) B_k / k for every admissible c.
pub fn kl_rational(p: u64, k: usize, c: u64, level: u32) -> Result<BigRational> {
    if k == 0 {
        return Err(Error::Domain("evaluation point k must be positive".into()));
    }
    let cosets = regularized_bernoulli_cosets(p, c, level, k)?;
    let q = p.pow(level);
    let mut acc = BigRational::zero();
    for a in 0..q {
        if a % p != 0 {
            acc += &cosets[a as usize];
        }
    }
    let moment = acc / q_int(k as i64); // int_{Z_p^x} x^{k-1} dE_c
    let reg = BigRational::one() - BigRational::from_integer(BigInt::from(c).pow(k as u32));
    if reg.is_zero() {
        return Err(Error::Domain("regulator factor 1 - c^k vanishes".into()));
    }
    Ok(moment / reg)
}

/// Kubota-Leopoldt value at integer k on Teichmuller branch i (requires
/// k = i mod (p-1)): the calibrated value -(1-p^{k-1}) B_k/k as an element
/// of Q_p at precision N. Computed from E_c coset sums; regulators c = 2,3,4
/// are tried in turn and the first two admissible ones are cross-checked.
pub fn kubota_leopoldt(p: u64, n_prec: u32, branch: usize, k: usize) -> Result<PadicScalar> {
    if p < 3 {
        return Err(Error::Domain("p must be an odd prime".into()));
    }
    if branch >= (p - 1) as usize {
        return Err(Error::Domain(format!("branch {branch} out of range for p = {p}")));
    }
    if k == 0 || k % (p as usize - 1) != branch % (p as usize - 1) {
        return Err(Error::Domain(format!(
            "evaluation point k = {k} is not on Teichmuller branch {branch} mod {}",
            p - 1
        )));
    }
    let mut values = Vec::new();
    for c in [2u64, 3, 4] {
        if c % p == 0 {
            continue;
        }
        match kl_rational(p, k, c, 1) {
            Ok(v) => values.push(v),
            Err(Error::Domain(_)) => continue, // exceptional regulator; retry with next c
            Err(e) => return Err(e),
        }
        if values.len() == 2 {
            break;
        }
    }
    let v = values
        .first()
        .ok_or_else(|| Error::Domain("no admissible regulator c in {2,3,4}".into()))?;
    if let Some(w) = values.get(1) {
        if v != w {
            return Err(Error::Domain("regulator independence violated".into()));
        }
    }
    PadicScalar::from_rational(p, n_prec, v)
}

// --------------------------------------------------- congruence extension

/// Outcome of extending a character table to a measure: either the unique
/// finite-level measure, or a rejection with a witness pair of characters.
#[derive(Clone, Debug)]
pub enum CongruenceExtension {
    Measure(FiniteLevelMeasure),
    Rejected { chi1: Vec<u64>, chi2: Vec<u64>, a: Ratio<i64> },
}

/// min_x v_p(chi_{j1}(x) - chi_{j2}(x)) over x in (Z/p^r)^d, in closed form:
/// with s = min_i v_p(j1_i - j2_i), the difference is a primitive
/// p^{r-s}-th root of unity minus one times a unit, of valuation
/// 1/phi(p^{r-s}); None encodes equal characters (infinite valuation).
pub fn character_congruence_valuation(
    p: u64,
    r: u32,
    j1: &[u64],
    j2: &[u64],
) -> Option<Ratio<i64>> {
    let q = p.pow(r);
    let mut s = u32::MAX;
    for (a, b) in j1.iter().zip(j2) {
        let mut delta = (a + q - b) % q;
        if delta == 0 {
            continue;
        }
        let mut v = 0u32;
        while delta % p == 0 {
            delta /= p;
            v += 1;
        }
        s = s.min(v);
    }
    if s == u32::MAX {
        return None;
    }
    Some(Ratio::new(1, euler_phi(p.pow(r - s)) as i64))
}

/// Extends a full character-value table alpha to the unique level-r measure
/// when the congruence criterion holds at exponent `a`; otherwise rejects
/// with a violating pair. The measure is recovered by finite Fourier
/// inversion: coeff(g) = p^{-rd} sum_j alpha(j) chi_j(g)^{-1}.
pub fn extend_by_congruence(
    p: u64,
    r: u32,
    d: u32,
    alpha: &BTreeMap<Vec<u64>, CycloRational>,
    a: Ratio<i64>,
) -> Result<CongruenceExtension> {
    let elements = group_elements(p, r, d);
    if alpha.len() != elements.len() {
        return Err(Error::Schema(format!(
            "character table has {} entries; the dual group has {}",
            alpha.len(),
            elements.len()
        )));
    }
    // Congruence criterion: chi1 = chi2 mod p^a forces alpha values congruent.
    let keys: Vec<&Vec<u64>> = alpha.keys().collect();
    for (i, j1) in keys.iter().enumerate() {
        for j2 in keys.iter().skip(i + 1) {
            let h = match character_congruence_valuation(p, r, j1, j2) {
                None => continue, // identical characters cannot disagree
                Some(h) => h,
            };
            if h < a {
                continue;
            }
            let diff = alpha[*j1].sub(&alpha[*j2])?;
            let v = diff.padic_valuation(p)?;
            let ok = match v {
                None => true,
                Some(v) => v >= a,
            };
            if !ok {
                return Ok(CongruenceExtension::Rejected {
                    chi1: (**j1).clone(),
                    chi2: (**j2).clone(),
                    a,
                });
            }
        }
    }
    let q = p.pow(r);
    let order = BigRational::from_integer(BigInt::from(q).pow(d));
    let mut table = BTreeMap::new();
    for g in elements {
        let mut acc = CycloRational::zero(1);
        for (j, v) in alpha {
            let dot: u64 = g.iter().zip(j).map(|(x, ji)| x * ji % q).sum::<u64>() % q;
            // chi_j(g)^{-1} = zeta^{-dot}.
            acc = acc.add(&v.mul(&CycloRational::root_of_unity(q, -(dot as i64)))?)?;
        }
        table.insert(g, acc.scale(&order.recip()));
    }
    Ok(CongruenceExtension::Measure(FiniteLevelMeasure::new(p, r, d, table)?))
}

// ------------------------------------------------- admissible family metadata

/// Finite-level metadata of an admissible measure family: nebentypus psi,
/// shift character pair, twist involution label, and level labels.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct AdmissibleFamilyMeta {
    pub psi: String,
    /// (alpha(chi), beta(chi)) as algebraic character templates; the token
    /// "chi" is substituted by the specialization character.
    pub shift: (String, String),
    pub twist: String,
    pub kp_level: String,
    pub r: u32,
}

/// Result of specializing an admissible family at a character: the payload
/// integral plus exact weight/nebentypus bookkeeping labels.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct SpecializationTag {
    pub integral: CycloRational,
    pub weight_label: String,
    pub nebentypus_label: String,
}

fn shift_component(template: &str, chi_label: &str) -> String {
    if template == "chi" {
        // A chi-component of the shift acts through chi composed with det.
        format!("({chi_label}∘det)")
    } else {
        template.replace("chi", chi_label)
    }
}

/// Specializes an admissible family: integrates the finite-level payload
/// against chi_j and computes the output-weight label rho^Delta * sh*(chi)
/// and the nebentypus label psi^Delta_chi = psi * (chi∘det)^{-1}.
pub fn specialize_admissible(
    meta: &AdmissibleFamilyMeta,
    payload: &FiniteLevelMeasure,
    chi_j: &[u64],
    chi_label: &str,
    rho_label: &str,
) -> Result<SpecializationTag> {
    if payload.level() > meta.r {
        return Err(Error::Precision(format!(
            "payload level {} overflows the family level {}",
            payload.level(),
            meta.r
        )));
    }
    let integral = payload.integrate_character(chi_j)?;
    let sh = format!(
        "({}, {})",
        shift_component(&meta.shift.0, chi_label),
        shift_component(&meta.shift.1, chi_label)
    );
    let weight_label = if rho_label == "1" && meta.twist == "id" {
        format!("sh*({chi_label}) = {sh}")
    } else {
        format!("rho^Delta[{}; {}]·sh*({chi_label}) = {}·{sh}", rho_label, meta.twist, rho_label)
    };
    let nebentypus_label = format!("{}·({chi_label}∘det)^-1", meta.psi);
    Ok(SpecializationTag { integral, weight_label, nebentypus_label })
}
