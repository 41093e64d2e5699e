//! Ordinary and anti-ordinary bookkeeping at p: the normalized weight
//! exponents, the modulus-character exponents, the U-operator eigenvalue
//! valuations, ordinarity and theta-regularity tests, and the bridge from
//! eigenvalue data to Newton/Hodge polygons.

use crate::error::{Error, Result};
use crate::halfint::HalfInt;
use crate::padic::PadicScalar;
use crate::polygons::{HodgeData, Polygon};
use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::One;
use serde::{Deserialize, Serialize};

/// Signature (a, b) of the unitary group at the place: n = a + b.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Signature {
    pub a: usize,
    pub b: usize,
}

impl Signature {
    pub fn n(&self) -> usize {
        self.a + self.b
    }
}

/// Weight data of one embedding: kappa has a entries, kappa_c has b entries,
/// both weakly decreasing.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SigmaKappa {
    pub kappa: Vec<i64>,
    pub kappa_c: Vec<i64>,
}

/// Weight data over all embeddings above the fixed place.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrdinaryKappa {
    pub sigma: Vec<SigmaKappa>,
}

/// The exponents m_1..m_n of the normalized weight character on the diagonal
/// torus: m_1 >= ... >= m_a and m_n >= ... >= m_{a+1}.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalizedWeight {
    pub m: Vec<i64>,
}

/// An unramified character of the diagonal torus, given by the n values at
/// the uniformizer; residue cardinality q = p^f.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TorusCharacter {
    pub p: u64,
    pub f: u32,
    pub alpha: Vec<PadicScalar>,
}

impl TorusCharacter {
    pub fn new(p: u64, f: u32, alpha: Vec<PadicScalar>) -> Result<Self> {
        for x in &alpha {
            if x.p() != p {
                return Err(Error::Mismatch("character values must live over p".into()));
            }
            if x.is_zero() {
                return Err(Error::Domain("character values must be invertible".into()));
            }
        }
        Ok(TorusCharacter { p, f, alpha })
    }

    /// The inverse character, value-by-value.
    pub fn inverse(&self) -> Result<Self> {
        let alpha = self.alpha.iter().map(|x| x.inv()).collect::<Result<Vec<_>>>()?;
        Ok(TorusCharacter { p: self.p, f: self.f, alpha })
    }

    /// The Weyl-permuted character: value i taken from slot perm[i].
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.alpha.len() {
            return Err(Error::Schema("permutation length must be n".into()));
        }
        let alpha = perm.iter().map(|&i| self.alpha[i].clone()).collect();
        Ok(TorusCharacter { p: self.p, f: self.f, alpha })
    }
}

fn validate_kappa(kappa: &OrdinaryKappa, sig: Signature) -> Result<()> {
    if kappa.sigma.is_empty() {
        return Err(Error::Schema("need at least one embedding above the place".into()));
    }
    for s in &kappa.sigma {
        if s.kappa.len() != sig.a || s.kappa_c.len() != sig.b {
            return Err(Error::Schema(format!(
                "weight blocks must have {} and {} entries",
                sig.a, sig.b
            )));
        }
        if s.kappa.windows(2).any(|w| w[0] < w[1]) || s.kappa_c.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Domain("weight blocks must be weakly decreasing".into()));
        }
    }
    Ok(())
}

/// Normalized-weight exponents: m_i = sum_sigma (kappa_{sigma,i} - b) for
/// i <= a and m_{a+j} = -sum_sigma (kappa_{sigma c,j} - a) for j <= b.
pub fn kappa_norm(kappa: &OrdinaryKappa, sig: Signature) -> Result<NormalizedWeight> {
    validate_kappa(kappa, sig)?;
    let mut m = vec![0i64; sig.n()];
    for s in &kappa.sigma {
        for i in 0..sig.a {
            m[i] += s.kappa[i] - sig.b as i64;
        }
        for j in 0..sig.b {
            m[sig.a + j] -= s.kappa_c[j] - sig.a as i64;
        }
    }
    Ok(NormalizedWeight { m })
}

/// Exponents e_i of the modulus character |prod t_i^{e_i}|_p: the symmetric
/// progressions e_i = n+1-2i for i <= a and e_{a+j} = -(n+1-2j) for j <= b.
/// They sum to zero, so the character is trivial on the center.
pub fn delta_exponents(sig: Signature) -> Vec<i64> {
    let n = sig.n() as i64;
    let mut e = Vec::with_capacity(sig.n());
    for i in 1..=sig.a as i64 {
        e.push(n + 1 - 2 * i);
    }
    for j in 1..=sig.b as i64 {
        e.push(-(n + 1 - 2 * j));
    }
    e
}

/// Exponent E with delta(t) = |prod t_i^{e_i}|_p = p^E for diagonal t with
/// the given entry valuations.
pub fn modulus_delta(t_vals: &[i64], sig: Signature) -> Result<i64> {
    if t_vals.len() != sig.n() {
        return Err(Error::Schema("diagonal valuation list must have n entries".into()));
    }
    let e = delta_exponents(sig);
    Ok(-t_vals.iter().zip(&e).map(|(v, e)| v * e).sum::<i64>())
}

/// Valuation vector of the Hecke torus element t_j (j = 1..n):
/// diag(p 1_j, 1_{n-j}) for j <= a and diag(p 1_a, 1_{n-j}, p 1_{j-a})
/// beyond.
pub fn hecke_torus_valuations(sig: Signature, j: usize) -> Result<Vec<i64>> {
    let n = sig.n();
    if j == 0 || j > n {
        return Err(Error::Schema(format!("torus index {j} out of range 1..{n}")));
    }
    let mut v = vec![0i64; n];
    if j <= sig.a {
        for x in v.iter_mut().take(j) {
            *x = 1;
        }
    } else {
        for x in v.iter_mut().take(sig.a) {
            *x = 1;
        }
        for x in v.iter_mut().skip(n - (j - sig.a)) {
            *x = 1;
        }
    }
    Ok(v)
}

/// The n U-operator eigenvalues c_j = |kappa_norm(t_j)|_p^{-1}
/// delta(t_j)^{-1/2} alpha(t_j), with exact half-integer valuations.
pub fn ordinary_eigenvalues(
    alpha: &TorusCharacter,
    kappa: &OrdinaryKappa,
    sig: Signature,
) -> Result<Vec<PadicScalar>> {
    let n = sig.n();
    if alpha.alpha.len() != n {
        return Err(Error::Schema("character must have n values".into()));
    }
    let nw = kappa_norm(kappa, sig)?;
    let e = delta_exponents(sig);
    let prec = alpha.alpha.iter().map(|x| x.precision()).min().unwrap_or(1).max(1);
    let mut out = Vec::with_capacity(n);
    for j in 1..=n {
        let v = hecke_torus_valuations(sig, j)?;
        // |kappa_norm(t_j)|^{-1} contributes p^{sum v m}; delta^{-1/2}
        // contributes p^{(sum v e)/2}.
        let two_val: i64 = v.iter().zip(&nw.m).map(|(v, m)| 2 * v * m).sum::<i64>()
            + v.iter().zip(&e).map(|(v, e)| v * e).sum::<i64>();
        let mut c = PadicScalar::from_parts(
            alpha.p,
            prec,
            HalfInt::from_twice(two_val),
            BigUint::one(),
        )?;
        for (i, &vi) in v.iter().enumerate() {
            if vi == 1 {
                c = c.mul(&alpha.alpha[i])?;
            }
        }
        out.push(c);
    }
    Ok(out)
}

/// True iff all n eigenvalues are p-adic units.
pub fn is_ordinary(alpha: &TorusCharacter, kappa: &OrdinaryKappa, sig: Signature) -> Result<bool> {
    let cs = ordinary_eigenvalues(alpha, kappa, sig)?;
    Ok(cs.iter().all(|c| matches!(c.val(), Ok(h) if h.twice() == 0)))
}

/// Anti-ordinarity is ordinarity of the inverse character.
pub fn is_anti_ordinary(
    alpha: &TorusCharacter,
    kappa: &OrdinaryKappa,
    sig: Signature,
) -> Result<bool> {
    is_ordinary(&alpha.inverse()?, kappa, sig)
}

/// Doubled chain values whose strict decrease is theta-regularity:
/// 2 m_i + (n+1-2i) for i = 1..a, then 2 m_{a+j} - (n+1-2j) for j = b..1.
fn theta_chain(nw: &NormalizedWeight, sig: Signature) -> Vec<i64> {
    let n = sig.n() as i64;
    let mut chain = Vec::with_capacity(sig.n());
    for i in 1..=sig.a as i64 {
        chain.push(2 * nw.m[i as usize - 1] + (n + 1 - 2 * i));
    }
    for j in (1..=sig.b as i64).rev() {
        chain.push(2 * nw.m[sig.a + j as usize - 1] - (n + 1 - 2 * j));
    }
    chain
}

/// True iff the half-integer-shifted exponent chain is strictly decreasing,
/// i.e. the induced torus character is regular.
pub fn theta_regularity(kappa: &OrdinaryKappa, sig: Signature) -> Result<bool> {
    let nw = kappa_norm(kappa, sig)?;
    let chain = theta_chain(&nw, sig);
    Ok(chain.windows(2).all(|w| w[0] > w[1]))
}

/// The holomorphic-weight inequality kappa_a + kappa^c_b >= n at every
/// embedding (read off one block alone when the other is empty).
pub fn holo_weight_ineq(kappa: &OrdinaryKappa, sig: Signature) -> Result<bool> {
    validate_kappa(kappa, sig)?;
    let n = sig.n() as i64;
    Ok(kappa.sigma.iter().all(|s| {
        let last = s.kappa.last().copied().unwrap_or(0);
        let last_c = s.kappa_c.last().copied().unwrap_or(0);
        last + last_c >= n
    }))
}

/// The unique unramified character (unit values 1) making every eigenvalue a
/// unit: val alpha_i = -m_i - e_i/2.
pub fn ordinary_alpha(
    kappa: &OrdinaryKappa,
    sig: Signature,
    p: u64,
    f: u32,
    prec: u32,
) -> Result<TorusCharacter> {
    let nw = kappa_norm(kappa, sig)?;
    let e = delta_exponents(sig);
    let alpha = nw
        .m
        .iter()
        .zip(&e)
        .map(|(m, e)| {
            PadicScalar::from_parts(p, prec, HalfInt::from_twice(-2 * m - e), BigUint::one())
        })
        .collect::<Result<Vec<_>>>()?;
    TorusCharacter::new(p, f, alpha)
}

/// Satake valuations in the arithmetic normalization feeding the Newton
/// polygon: the second-block values are shifted by a, the twist by which the
/// normalized-weight exponents differ from the Hodge-type slopes.
pub fn satake_arithmetic_valuations(
    alpha: &TorusCharacter,
    sig: Signature,
) -> Result<Vec<Ratio<i64>>> {
    if alpha.alpha.len() != sig.n() {
        return Err(Error::Schema("character must have n values".into()));
    }
    alpha
        .alpha
        .iter()
        .enumerate()
        .map(|(i, x)| {
            let h = x.val()?;
            let shift = if i >= sig.a { sig.a as i64 } else { 0 };
            Ok(Ratio::new(h.twice() + 2 * shift, 2))
        })
        .collect()
}

/// Hodge polygon in the unitary normalization: slopes p_i - (n-1)/2 summed
/// over embeddings, sorted increasingly and accumulated from the origin; this
/// is the convex polygon comparable with the Newton polygon.
pub fn normalized_hodge_polygon(data: &[HodgeData]) -> Result<Polygon> {
    let n = data
        .first()
        .map(|d| d.n)
        .ok_or_else(|| Error::Schema("need at least one embedding".into()))?;
    if data.iter().any(|d| d.n != n) {
        return Err(Error::Mismatch("all embeddings must share n".into()));
    }
    let mut slopes: Vec<Ratio<i64>> = (0..2 * n as usize)
        .map(|i| {
            let s: i64 = data.iter().map(|d| 2 * d.pairs[i].0 - (n as i64 - 1)).sum();
            Ratio::new(s, 2)
        })
        .collect();
    slopes.sort();
    let mut vertices = vec![(Ratio::from_integer(0), Ratio::from_integer(0))];
    let mut acc = Ratio::from_integer(0);
    for (i, s) in slopes.iter().enumerate() {
        acc += s;
        vertices.push((Ratio::from_integer(i as i64 + 1), acc));
    }
    Ok(Polygon { vertices })
}
