//! Weight and character combinatorics: dominance, the involutions
//! star / D / flat / dagger, critical-set membership with the (r, s)
//! parameters, and the associated rho / shift data.
//!
//! A weight stores, per conjugate pair of archimedean places (sigma, sigma-c)
//! of signature (a, b) with a + b = n, the b-entry vector kappa at sigma and
//! the a-entry vector kappa_c at sigma-c. Conjugate data is stored explicitly
//! so the conjugate-swap involutions are total functions.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// One conjugate pair of places with its signature and both weight vectors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SigmaBlock {
    pub name: String,
    pub a: u32,
    pub b: u32,
    /// kappa_sigma: b entries.
    pub kappa: Vec<i64>,
    /// kappa_{sigma-c}: a entries.
    pub kappa_c: Vec<i64>,
}

/// A highest weight: the similitude component kappa0 plus per-pair vectors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Weight {
    pub kappa0: i64,
    pub sigma: Vec<SigmaBlock>,
}

/// The archimedean type of an algebraic Hecke character: the parallel
/// exponent m plus per-place exponents (a(chi_sigma), b(chi_sigma)).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InfinityType {
    pub m: i64,
    pub sigma: Vec<ChiSigma>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChiSigma {
    pub name: String,
    pub a_chi: i64,
    pub b_chi: i64,
}

/// Critical-set membership data at one place: descending nonnegative
/// parameter vectors plus the derived rho / rho-upsilon / shift data.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriticalSigma {
    pub name: String,
    /// r_1 >= ... >= r_b >= 0.
    pub r: Vec<i64>,
    /// s_1 >= ... >= s_a >= 0.
    pub s: Vec<i64>,
    /// rho_sigma = kappa_sigma - (alpha(chi), beta(chi)): first block then second.
    pub rho_first: Vec<i64>,
    pub rho_second: Vec<i64>,
    /// rho^upsilon: the sign-flipped first block (r ascending removed).
    pub rho_upsilon_first: Vec<i64>,
    pub rho_upsilon_second: Vec<i64>,
    /// (alpha(chi_sigma), beta(chi_sigma)) = (-m + b(chi), m - a(chi)).
    pub shift: (i64, i64),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriticalParams {
    pub sigma: Vec<CriticalSigma>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InvolutionKind {
    Star,
    D,
    Flat,
    Dagger,
}

impl Weight {
    /// Checks structural consistency: vector lengths match the signature and
    /// every block has the same n = a + b.
    pub fn validate(&self) -> Result<()> {
        let mut n = None;
        for s in &self.sigma {
            if s.kappa.len() != s.b as usize || s.kappa_c.len() != s.a as usize {
                return Err(Error::Schema(format!(
                    "block {}: kappa must have b = {} entries and kappa_c a = {}",
                    s.name, s.b, s.a
                )));
            }
            match n {
                None => n = Some(s.a + s.b),
                Some(m) if m == s.a + s.b => {}
                Some(m) => {
                    return Err(Error::Schema(format!(
                        "block {}: n = {} differs from {}",
                        s.name,
                        s.a + s.b,
                        m
                    )))
                }
            }
        }
        Ok(())
    }

    pub fn n(&self) -> Option<u32> {
        self.sigma.first().map(|s| s.a + s.b)
    }

    /// d = (1/2) sum over all places of a_sigma b_sigma; each stored block is
    /// a conjugate pair, so it contributes a*b once.
    pub fn d(&self) -> i64 {
        self.sigma.iter().map(|s| s.a as i64 * s.b as i64).sum()
    }
}

/// True iff every stored vector is weakly decreasing.
pub fn is_dominant(kappa: &Weight) -> bool {
    kappa
        .sigma
        .iter()
        .all(|s| is_descending(&s.kappa) && is_descending(&s.kappa_c))
}

fn is_descending(v: &[i64]) -> bool {
    v.windows(2).all(|w| w[0] >= w[1])
}

/// a(kappa) = 2 kappa0 + sum over all sigma of the entries of kappa_sigma.
pub fn a_kappa(kappa: &Weight) -> i64 {
    2 * kappa.kappa0
        + kappa
            .sigma
            .iter()
            .map(|s| s.kappa.iter().sum::<i64>() + s.kappa_c.iter().sum::<i64>())
            .sum::<i64>()
}

fn reverse_negate(v: &[i64]) -> Vec<i64> {
    v.iter().rev().map(|x| -x).collect()
}

/// The involutions: star is reverse-negate with kappa0 -> -kappa0 + a(kappa);
/// D adds the correction (-d; (2a_sigma,...)); dagger is the conjugate swap
/// twisted by nu^{-a(kappa)} (kappa0 -> kappa0 - a(kappa)); flat is the
/// untwisted conjugate swap.
pub fn involution(kappa: &Weight, kind: InvolutionKind) -> Result<Weight> {
    kappa.validate()?;
    let a = a_kappa(kappa);
    match kind {
        InvolutionKind::Star => {
            let sigma = kappa
                .sigma
                .iter()
                .map(|s| SigmaBlock {
                    name: s.name.clone(),
                    a: s.a,
                    b: s.b,
                    kappa: reverse_negate(&s.kappa),
                    kappa_c: reverse_negate(&s.kappa_c),
                })
                .collect();
            Ok(Weight { kappa0: -kappa.kappa0 + a, sigma })
        }
        InvolutionKind::D => {
            let star = involution(kappa, InvolutionKind::Star)?;
            let d = kappa.d();
            let sigma = star
                .sigma
                .iter()
                .map(|s| SigmaBlock {
                    name: s.name.clone(),
                    a: s.a,
                    b: s.b,
                    // kappa_h^+ adds 2 a_sigma at sigma and 2 a_{sigma-c} = 2 b_sigma
                    // at the conjugate place.
                    kappa: s.kappa.iter().map(|x| x + 2 * s.a as i64).collect(),
                    kappa_c: s.kappa_c.iter().map(|x| x + 2 * s.b as i64).collect(),
                })
                .collect();
            Ok(Weight { kappa0: star.kappa0 - d, sigma })
        }
        InvolutionKind::Dagger | InvolutionKind::Flat => {
            let sigma = kappa
                .sigma
                .iter()
                .map(|s| SigmaBlock {
                    name: s.name.clone(),
                    a: s.b,
                    b: s.a,
                    kappa: s.kappa_c.clone(),
                    kappa_c: s.kappa.clone(),
                })
                .collect();
            let kappa0 = match kind {
                InvolutionKind::Dagger => kappa.kappa0 - a,
                _ => kappa.kappa0,
            };
            Ok(Weight { kappa0, sigma })
        }
    }
}

/// Critical-set membership. The per-sigma highest weight is the full
/// (b then a)-component vector kappa ∥ kappa_c; membership requires
///
///   kappa = (-m + b(chi) - r_b, ..., -m + b(chi) - r_1;
///            m - a(chi) + s_1, ..., m - a(chi) + s_a)
///
/// with r, s descending and nonnegative at every place. Returns None when no
/// such parameters exist.
pub fn critical_membership(kappa: &Weight, chi: &InfinityType) -> Result<Option<CriticalParams>> {
    kappa.validate()?;
    if kappa.sigma.len() != chi.sigma.len() {
        return Err(Error::Mismatch("weight and character index different place sets".into()));
    }
    let mut out = Vec::with_capacity(kappa.sigma.len());
    for (s, x) in kappa.sigma.iter().zip(&chi.sigma) {
        if s.name != x.name {
            return Err(Error::Mismatch(format!(
                "place mismatch: weight block {} vs character block {}",
                s.name, x.name
            )));
        }
        let alpha = -chi.m + x.b_chi;
        let beta = chi.m - x.a_chi;
        // First block: kappa_i = alpha - r_{b+1-i} => r_j = alpha - kappa_{b+1-j}.
        let r: Vec<i64> = s.kappa.iter().rev().map(|k| alpha - k).collect();
        // Second block: kappa_c_j = beta + s_j.
        let sv: Vec<i64> = s.kappa_c.iter().map(|k| k - beta).collect();
        let ok = is_descending(&r)
            && is_descending(&sv)
            && r.last().map_or(true, |&x| x >= 0)
            && sv.last().map_or(true, |&x| x >= 0);
        if !ok {
            return Ok(None);
        }
        let rho_first: Vec<i64> = s.kappa.iter().map(|k| k - alpha).collect();
        let rho_second: Vec<i64> = s.kappa_c.iter().map(|k| k - beta).collect();
        out.push(CriticalSigma {
            name: s.name.clone(),
            rho_upsilon_first: r.clone(),
            rho_upsilon_second: sv.clone(),
            r,
            s: sv,
            rho_first,
            rho_second,
            shift: (alpha, beta),
        });
    }
    Ok(Some(CriticalParams { sigma: out }))
}

/// Reconstructs the weight vectors from (m, a(chi), b(chi), r, s); inverse of
/// critical_membership on members.
pub fn weight_from_critical(
    kappa0: i64,
    chi: &InfinityType,
    params: &CriticalParams,
    signature: &[(String, u32, u32)],
) -> Result<Weight> {
    if chi.sigma.len() != params.sigma.len() || signature.len() != params.sigma.len() {
        return Err(Error::Mismatch("critical data and signature lengths differ".into()));
    }
    let mut sigma = Vec::with_capacity(params.sigma.len());
    for ((x, cs), (name, a, b)) in chi.sigma.iter().zip(&params.sigma).zip(signature) {
        let alpha = -chi.m + x.b_chi;
        let beta = chi.m - x.a_chi;
        let kappa: Vec<i64> = cs.r.iter().rev().map(|r| alpha - r).collect();
        let kappa_c: Vec<i64> = cs.s.iter().map(|s| beta + s).collect();
        sigma.push(SigmaBlock { name: name.clone(), a: *a, b: *b, kappa, kappa_c });
    }
    let w = Weight { kappa0, sigma };
    w.validate()?;
    Ok(w)
}

/// Holomorphy inequality kappa_sigma + kappa_{sigma-c} >= n, read on the last
/// (smallest) entry of each block; empty blocks contribute 0.
pub fn holo_weight_check(kappa: &Weight) -> Result<bool> {
    kappa.validate()?;
    let n = kappa.n().ok_or_else(|| Error::Schema("weight has no places".into()))? as i64;
    Ok(kappa.sigma.iter().all(|s| {
        let x = s.kappa.last().copied().unwrap_or(0);
        let y = s.kappa_c.last().copied().unwrap_or(0);
        x + y >= n
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn block(name: &str, a: u32, b: u32, kappa: Vec<i64>, kappa_c: Vec<i64>) -> SigmaBlock {
        SigmaBlock { name: name.into(), a, b, kappa, kappa_c }
    }

    /// The spec running example: kappa0 = 1, one pair with b = 2 entries
    /// (3, 1) at sigma and a = 1 entry at the conjugate, chosen zero so the
    /// printed involution values are reproduced.
    fn sample() -> Weight {
        Weight { kappa0: 1, sigma: vec![block("s", 1, 2, vec![3, 1], vec![0])] }
    }

    fn random_weight(rng: &mut ChaCha8Rng) -> Weight {
        let pairs = rng.gen_range(1..=3);
        let n = rng.gen_range(1..=4u32);
        let mut sigma = Vec::new();
        for i in 0..pairs {
            let a = rng.gen_range(0..=n);
            let b = n - a;
            let kappa = (0..b).map(|_| rng.gen_range(-10..=10)).collect();
            let kappa_c = (0..a).map(|_| rng.gen_range(-10..=10)).collect();
            sigma.push(block(&format!("s{i}"), a, b, kappa, kappa_c));
        }
        Weight { kappa0: rng.gen_range(-5..=5), sigma }
    }

    fn random_dominant(rng: &mut ChaCha8Rng) -> Weight {
        let mut w = random_weight(rng);
        for s in &mut w.sigma {
            s.kappa.sort_unstable_by(|x, y| y.cmp(x));
            s.kappa_c.sort_unstable_by(|x, y| y.cmp(x));
        }
        w
    }

    #[test]
    fn dominance() {
        assert!(is_dominant(&Weight {
            kappa0: 0,
            sigma: vec![block("s", 0, 2, vec![3, 1], vec![])]
        }));
        assert!(!is_dominant(&Weight {
            kappa0: 0,
            sigma: vec![block("s", 0, 2, vec![1, 3], vec![])]
        }));
        assert!(is_dominant(&Weight {
            kappa0: 0,
            sigma: vec![block("s", 0, 3, vec![2, 2, 2], vec![])]
        }));
    }

    #[test]
    fn a_kappa_oracle() {
        assert_eq!(a_kappa(&sample()), 6);
        assert_eq!(
            a_kappa(&Weight { kappa0: 0, sigma: vec![block("s", 1, 1, vec![0], vec![0])] }),
            0
        );
        assert_eq!(
            a_kappa(&Weight { kappa0: -2, sigma: vec![block("s", 0, 1, vec![4], vec![])] }),
            0
        );
    }

    #[test]
    fn star_and_d_oracles() {
        let star = involution(&sample(), InvolutionKind::Star).unwrap();
        assert_eq!(star.kappa0, 5);
        assert_eq!(star.sigma[0].kappa, vec![-1, -3]);
        let d = involution(&sample(), InvolutionKind::D).unwrap();
        assert_eq!(d.kappa0, 3);
        assert_eq!(d.sigma[0].kappa, vec![1, -1]);
    }

    #[test]
    fn star_is_an_involution_preserving_a() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..1000 {
            let w = random_weight(&mut rng);
            let star = involution(&w, InvolutionKind::Star).unwrap();
            assert_eq!(a_kappa(&star), a_kappa(&w));
            assert_eq!(involution(&star, InvolutionKind::Star).unwrap(), w);
        }
    }

    #[test]
    fn star_preserves_dominance() {
        let mut rng = ChaCha8Rng::seed_from_u64(18);
        for _ in 0..200 {
            let w = random_dominant(&mut rng);
            assert!(is_dominant(&involution(&w, InvolutionKind::Star).unwrap()));
        }
    }

    #[test]
    fn double_d_differs_from_identity_by_a_weight_independent_constant() {
        // (kappa^D)^D - kappa depends only on the signature, not on kappa.
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        for _ in 0..50 {
            let w1 = random_weight(&mut rng);
            // Second weight with the SAME signature but different entries.
            let mut w2 = w1.clone();
            w2.kappa0 = w1.kappa0 + rng.gen_range(-7..=7);
            for s in &mut w2.sigma {
                for x in s.kappa.iter_mut().chain(s.kappa_c.iter_mut()) {
                    *x += rng.gen_range(-7..=7);
                }
            }
            let dd =
                |w: &Weight| involution(&involution(w, InvolutionKind::D).unwrap(), InvolutionKind::D).unwrap();
            let d1 = dd(&w1);
            let d2 = dd(&w2);
            assert_eq!(d1.kappa0 - w1.kappa0, d2.kappa0 - w2.kappa0);
            for (i, (s1, s2)) in d1.sigma.iter().zip(&d2.sigma).enumerate() {
                for j in 0..s1.kappa.len() {
                    assert_eq!(
                        s1.kappa[j] - w1.sigma[i].kappa[j],
                        s2.kappa[j] - w2.sigma[i].kappa[j]
                    );
                }
                for j in 0..s1.kappa_c.len() {
                    assert_eq!(
                        s1.kappa_c[j] - w1.sigma[i].kappa_c[j],
                        s2.kappa_c[j] - w2.sigma[i].kappa_c[j]
                    );
                }
            }
        }
    }

    #[test]
    fn dagger_and_flat_swap_conjugates() {
        let w = sample();
        let flat = involution(&w, InvolutionKind::Flat).unwrap();
        assert_eq!(flat.kappa0, 1);
        assert_eq!(flat.sigma[0].kappa, vec![0]);
        assert_eq!(flat.sigma[0].kappa_c, vec![3, 1]);
        assert_eq!((flat.sigma[0].a, flat.sigma[0].b), (2, 1));
        let dagger = involution(&w, InvolutionKind::Dagger).unwrap();
        assert_eq!(dagger.kappa0, 1 - 6);
        assert_eq!(dagger.sigma[0].kappa, flat.sigma[0].kappa);
        // flat = dagger twisted back by nu^{a(kappa)}.
        assert_eq!(flat.kappa0 - dagger.kappa0, a_kappa(&w));
    }

    #[test]
    fn critical_membership_oracle() {
        // a = b = 1, m = 2, a(chi) = b(chi) = 0, kappa = (-3; 5).
        let w = Weight { kappa0: 0, sigma: vec![block("s", 1, 1, vec![-3], vec![5])] };
        let chi = InfinityType {
            m: 2,
            sigma: vec![ChiSigma { name: "s".into(), a_chi: 0, b_chi: 0 }],
        };
        let got = critical_membership(&w, &chi).unwrap().unwrap();
        let cs = &got.sigma[0];
        assert_eq!(cs.r, vec![1]);
        assert_eq!(cs.s, vec![3]);
        assert_eq!(cs.rho_first, vec![-1]);
        assert_eq!(cs.rho_second, vec![3]);
        assert_eq!(cs.rho_upsilon_first, vec![1]);
        assert_eq!(cs.rho_upsilon_second, vec![3]);
        assert_eq!(cs.shift, (-2, 2));

        // kappa = (-1; 5) forces r = -1 < 0: absent.
        let w2 = Weight { kappa0: 0, sigma: vec![block("s", 1, 1, vec![-1], vec![5])] };
        assert!(critical_membership(&w2, &chi).unwrap().is_none());

        // Boundary: kappa = (-m + b(chi); m - a(chi)) gives r = s = 0, rho = 0.
        let w3 = Weight { kappa0: 0, sigma: vec![block("s", 1, 1, vec![-2], vec![2])] };
        let got3 = critical_membership(&w3, &chi).unwrap().unwrap();
        assert_eq!(got3.sigma[0].r, vec![0]);
        assert_eq!(got3.sigma[0].s, vec![0]);
        assert_eq!(got3.sigma[0].rho_first, vec![0]);
        assert_eq!(got3.sigma[0].rho_second, vec![0]);
    }

    #[test]
    fn critical_round_trip_and_shift_consistency() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let mut members = 0;
        for _ in 0..500 {
            let m = rng.gen_range(-3..=3i64);
            let pairs = rng.gen_range(1..=2);
            let n = rng.gen_range(1..=3u32);
            let mut sigma = Vec::new();
            let mut chis = Vec::new();
            for i in 0..pairs {
                let a = rng.gen_range(0..=n);
                let b = n - a;
                let a_chi = rng.gen_range(-2..=2);
                let b_chi = rng.gen_range(-2..=2);
                // Build kappa from random descending nonnegative (r, s) so the
                // instance is a member by construction.
                let mut r: Vec<i64> = (0..b).map(|_| rng.gen_range(0..=4)).collect();
                let mut s: Vec<i64> = (0..a).map(|_| rng.gen_range(0..=4)).collect();
                r.sort_unstable_by(|x, y| y.cmp(x));
                s.sort_unstable_by(|x, y| y.cmp(x));
                let alpha = -m + b_chi;
                let beta = m - a_chi;
                let kappa: Vec<i64> = r.iter().rev().map(|x| alpha - x).collect();
                let kappa_c: Vec<i64> = s.iter().map(|x| beta + x).collect();
                sigma.push(block(&format!("s{i}"), a, b, kappa, kappa_c));
                chis.push(ChiSigma { name: format!("s{i}"), a_chi, b_chi });
            }
            let w = Weight { kappa0: rng.gen_range(-3..=3), sigma };
            let chi = InfinityType { m, sigma: chis };
            let params = critical_membership(&w, &chi).unwrap().expect("member by construction");
            members += 1;
            // shift/rho consistency: rho + (alpha, beta) = kappa blockwise.
            for (cs, sb) in params.sigma.iter().zip(&w.sigma) {
                let (alpha, beta) = cs.shift;
                let back_first: Vec<i64> = cs.rho_first.iter().map(|x| x + alpha).collect();
                let back_second: Vec<i64> = cs.rho_second.iter().map(|x| x + beta).collect();
                assert_eq!(back_first, sb.kappa);
                assert_eq!(back_second, sb.kappa_c);
            }
            // Round trip through the reconstruction.
            let signature: Vec<(String, u32, u32)> =
                w.sigma.iter().map(|s| (s.name.clone(), s.a, s.b)).collect();
            let back = weight_from_critical(w.kappa0, &chi, &params, &signature).unwrap();
            assert_eq!(back, w);
        }
        assert_eq!(members, 500);
    }

    #[test]
    fn holomorphy_inequality() {
        let t = Weight { kappa0: 0, sigma: vec![block("s", 1, 1, vec![2], vec![1])] };
        assert!(holo_weight_check(&t).unwrap());
        let f = Weight { kappa0: 0, sigma: vec![block("s", 1, 1, vec![1], vec![0])] };
        assert!(!holo_weight_check(&f).unwrap());
        let z = Weight { kappa0: 0, sigma: vec![block("s", 1, 0, vec![], vec![0])] };
        assert!(!holo_weight_check(&z).unwrap());
    }

    #[test]
    fn json_schema_round_trip() {
        let w = sample();
        let json = serde_json::to_string(&w).unwrap();
        assert!(json.contains("\"kappa0\":1"));
        assert!(json.contains("\"kappa_c\":[0]"));
        let back: Weight = serde_json::from_str(&json).unwrap();
        assert_eq!(back, w);
    }
}
