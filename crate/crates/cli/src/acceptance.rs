//! The eight acceptance criteria, shared by the `acceptance` subcommand and
//! the integration test target. Every check is exact; randomness is seeded.

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use padicalc_core::bernoulli::bernoulli_numbers;
use padicalc_core::cyclo::{euler_phi, CycloRational};
use padicalc_core::local_factors::{
    abelian_L, euler_alt_form_identity, gj_series_oracle, unit_group_character, LocalCharacter,
    LocalRep,
};
use padicalc_core::measures::{character_congruence_valuation, kl_rational, kubota_leopoldt};
use padicalc_core::ordinarity::{
    is_ordinary, normalized_hodge_polygon, ordinary_alpha, satake_arithmetic_valuations,
    theta_regularity, OrdinaryKappa, Signature, SigmaKappa,
};
use padicalc_core::padic::PadicScalar;
use padicalc_core::polygons::{hodge_types, newton_polygon, panchishkin_check, HeckePolynomial};
use padicalc_core::schur_weyl::{
    block_weight, degree_decomposition_check, highest_weight_verify_block, p_polynomial,
    p_polynomial_degree,
};
use padicalc_core::weights::{
    a_kappa, critical_membership, involution, weight_from_critical, ChiSigma, InfinityType,
    InvolutionKind, SigmaBlock, Weight,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

pub struct CriterionOutcome {
    pub name: &'static str,
    pub pass: bool,
    pub millis: u128,
    pub budget_ms: u128,
    pub detail: String,
}

type Check = Result<(), String>;

pub fn run_all(seed: u64) -> Vec<CriterionOutcome> {
    let criteria: [(&'static str, u128, fn(u64) -> Check); 8] = [
        ("kubota-leopoldt-interpolation", 5_000, kl_interpolation),
        ("euler-factor-alternative-form", 10_000, euler_alt_form),
        ("gl1-zeta-series-oracle", 1_000, gj_oracle),
        ("panchishkin-midpoint", 1_000, panchishkin_midpoint),
        ("schur-weyl-decomposition", 5_000, schur_weyl),
        ("involution-algebra", 1_000, involution_algebra),
        ("ordinarity-uniqueness", 5_000, ordinarity_uniqueness),
        ("admissibility-congruence", 2_000, admissibility_congruence),
    ];
    criteria
        .into_iter()
        .map(|(name, budget_ms, f)| {
            let start = Instant::now();
            let result = f(seed);
            let millis = start.elapsed().as_millis();
            CriterionOutcome {
                name,
                pass: result.is_ok(),
                millis,
                budget_ms,
                detail: result.err().unwrap_or_default(),
            }
        })
        .collect()
}

fn big(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

// 1. Kubota-Leopoldt interpolation at p in {3,5,7}, even k <= 12, mod p^20,
//    with regulator independence across c in {2,3}.
fn kl_interpolation(_seed: u64) -> Check {
    let bern = bernoulli_numbers(12);
    for p in [3u64, 5, 7] {
        for k in [2usize, 4, 6, 8, 10, 12] {
            let oracle = -(big(1) - big(p as i64).pow(k as i32 - 1)) * &bern[k] / big(k as i64);
            let branch = k % (p as usize - 1);
            let value = kubota_leopoldt(p, 20, branch, k).map_err(|e| e.to_string())?;
            let expect = PadicScalar::from_rational(p, 20, &oracle).map_err(|e| e.to_string())?;
            if !value.congruent_to(&expect) {
                return Err(format!("p={p} k={k}: value differs from the Bernoulli oracle"));
            }
            for c in [2u64, 3] {
                if c % p == 0 {
                    continue;
                }
                let r = kl_rational(p, k, c, 1).map_err(|e| e.to_string())?;
                if r != oracle {
                    return Err(format!("p={p} k={k} c={c}: regulator dependence"));
                }
            }
        }
    }
    Ok(())
}

fn cy(n: i64) -> CycloRational {
    CycloRational::from_integer(n)
}

fn random_character(rng: &mut ChaCha8Rng, p: u64) -> LocalCharacter {
    let vals = [
        cy(1),
        cy(-1),
        cy(2),
        CycloRational::from_rational(BigRational::new(BigInt::from(1), BigInt::from(2))),
        cy(3),
        CycloRational::from_rational(BigRational::new(BigInt::from(-2), BigInt::from(3))),
    ];
    let unram_val = vals[rng.gen_range(0..vals.len())].clone();
    let ram = rng.gen_range(0..3u32);
    if ram == 0 {
        return LocalCharacter::unramified(p, 1, unram_val);
    }
    let c = if ram == 2 && p == 3 { 2 } else { 1 };
    let phi = euler_phi(p.pow(c));
    let k = rng.gen_range(1..phi);
    let mut xi = unit_group_character(p, c, k).expect("character construction");
    xi.unram = unram_val;
    xi
}

// 2. The two assemblies of the modified Euler factor agree as reduced
//    rational functions for 200 random configurations, n <= 4, mixed
//    ramified/unramified.
fn euler_alt_form(seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xE1);
    for trial in 0..200 {
        let p = [3u64, 5, 7][rng.gen_range(0..3)];
        let n = rng.gen_range(1..=4usize);
        let a_len = rng.gen_range(0..=n);
        let rep = LocalRep {
            a: (0..a_len).map(|_| random_character(&mut rng, p)).collect(),
            b: (0..(n - a_len)).map(|_| random_character(&mut rng, p)).collect(),
        };
        let chi1 = random_character(&mut rng, p);
        let chi2 = random_character(&mut rng, p);
        match euler_alt_form_identity(&rep, &chi1, &chi2) {
            Ok(true) => {}
            Ok(false) => return Err(format!("trial {trial} (p={p}): assemblies differ")),
            Err(e) => return Err(format!("trial {trial} (p={p}): {e}")),
        }
    }
    Ok(())
}

// 3. Series expansion of each abelian L-factor matches the truncated GL1
//    zeta sum to degree 30 for 100 random unramified characters.
fn gj_oracle(seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x63);
    let vals = [
        cy(1),
        cy(-1),
        cy(2),
        cy(5),
        CycloRational::from_rational(BigRational::new(BigInt::from(1), BigInt::from(2))),
        CycloRational::from_rational(BigRational::new(BigInt::from(-3), BigInt::from(7))),
    ];
    for trial in 0..100 {
        let p = [2u64, 3, 5, 7][rng.gen_range(0..4)];
        let xi = LocalCharacter::unramified(p, 1, vals[rng.gen_range(0..vals.len())].clone());
        let series = abelian_L(&xi)
            .and_then(|l| l.expand_series(30))
            .map_err(|e| e.to_string())?;
        let oracle = gj_series_oracle(&xi, 30).map_err(|e| e.to_string())?;
        if series != oracle {
            return Err(format!("trial {trial}: series mismatch"));
        }
    }
    Ok(())
}

fn random_critical_config(rng: &mut ChaCha8Rng) -> (Vec<i64>, Vec<i64>, Signature) {
    let a = rng.gen_range(1usize..=3);
    let b = rng.gen_range(1usize..=(4 - a).max(1));
    let sig = Signature { a, b };
    let n = sig.n() as i64;
    let mut kap = vec![(n + 1) / 2 + rng.gen_range(0i64..=3)];
    for _ in 1..a {
        let first = kap[0];
        kap.insert(0, first + rng.gen_range(0i64..=2));
    }
    let mut kc = vec![-(n + 1) / 2 - rng.gen_range(0i64..=3)];
    for _ in 1..b {
        let last = *kc.last().unwrap();
        kc.push(last - rng.gen_range(0i64..=2));
    }
    (kap, kc, sig)
}

// 4. Ordinary data meets the Hodge polygon at the midpoint x = n for 50
//    random configurations with n <= 4.
fn panchishkin_midpoint(seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xB4);
    for trial in 0..50 {
        let (kap, kc, sig) = random_critical_config(&mut rng);
        let hodge = hodge_types(&kap, &kc, sig.a as u32, sig.b as u32).map_err(|e| e.to_string())?;
        if !hodge.critint {
            return Err(format!("trial {trial}: config misses the critical interval"));
        }
        let k = OrdinaryKappa { sigma: vec![SigmaKappa { kappa: kap, kappa_c: kc }] };
        let alpha = ordinary_alpha(&k, sig, 5, 1, 10).map_err(|e| e.to_string())?;
        if !is_ordinary(&alpha, &k, sig).map_err(|e| e.to_string())? {
            return Err(format!("trial {trial}: constructed character not ordinary"));
        }
        let vals = satake_arithmetic_valuations(&alpha, sig).map_err(|e| e.to_string())?;
        let newton = newton_polygon(&HeckePolynomial { q: 5, alpha_vals: vals });
        let hodge_poly =
            normalized_hodge_polygon(std::slice::from_ref(&hodge)).map_err(|e| e.to_string())?;
        match panchishkin_check(&newton, &hodge_poly, sig.n() as u32) {
            Ok(true) => {}
            Ok(false) => return Err(format!("trial {trial}: midpoints differ")),
            Err(e) => return Err(format!("trial {trial}: {e}")),
        }
    }
    Ok(())
}

// 5. Degree decomposition count for u <= 3, d <= 4, and highest-weight
//    verification of the minor-product polynomials by exact substitution.
fn schur_weyl(_seed: u64) -> Check {
    for u in 1..=3usize {
        for d in 0..=4u32 {
            if !degree_decomposition_check(u, d) {
                return Err(format!("dimension count fails at u={u} d={d}"));
            }
        }
    }
    let configs: [(usize, usize, Vec<u32>, Vec<u32>); 6] = [
        (1, 1, vec![2], vec![1]),
        (2, 1, vec![1, 1], vec![2]),
        (2, 2, vec![0, 1], vec![1, 1]),
        (3, 1, vec![1, 0, 1], vec![0]),
        (1, 2, vec![1], vec![0, 2]),
        (2, 2, vec![1, 0], vec![0, 1]),
    ];
    for (a, b, rt, st) in configs {
        let p = p_polynomial(a, b, &rt, &st).map_err(|e| e.to_string())?;
        if !p.is_homogeneous_of_degree(p_polynomial_degree(&rt, &st)) {
            return Err(format!("degree bookkeeping fails for rt={rt:?} st={st:?}"));
        }
        let ok_a = highest_weight_verify_block(&p, &block_weight(&rt), 0, a)
            .map_err(|e| e.to_string())?;
        let ok_d = highest_weight_verify_block(&p, &block_weight(&st), a, b)
            .map_err(|e| e.to_string())?;
        if !(ok_a && ok_d) {
            return Err(format!("highest-weight check fails for rt={rt:?} st={st:?}"));
        }
    }
    Ok(())
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
        sigma.push(SigmaBlock { name: format!("s{i}"), a, b, kappa, kappa_c });
    }
    Weight { kappa0: rng.gen_range(-5..=5), sigma }
}

// 6. kappa** = kappa and a(kappa*) = a(kappa) on 1000 random weights, plus
//    exact critical-membership round trips on members by construction.
fn involution_algebra(seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x1A);
    for trial in 0..1000 {
        let w = random_weight(&mut rng);
        let star = involution(&w, InvolutionKind::Star).map_err(|e| e.to_string())?;
        if a_kappa(&star) != a_kappa(&w) {
            return Err(format!("trial {trial}: a(kappa*) != a(kappa)"));
        }
        if involution(&star, InvolutionKind::Star).map_err(|e| e.to_string())? != w {
            return Err(format!("trial {trial}: star is not an involution"));
        }
    }
    for trial in 0..200 {
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
            let mut r: Vec<i64> = (0..b).map(|_| rng.gen_range(0..=4)).collect();
            let mut s: Vec<i64> = (0..a).map(|_| rng.gen_range(0..=4)).collect();
            r.sort_unstable_by(|x, y| y.cmp(x));
            s.sort_unstable_by(|x, y| y.cmp(x));
            let alpha = -m + b_chi;
            let beta = m - a_chi;
            let kappa: Vec<i64> = r.iter().rev().map(|x| alpha - x).collect();
            let kappa_c: Vec<i64> = s.iter().map(|x| beta + x).collect();
            sigma.push(SigmaBlock { name: format!("s{i}"), a, b, kappa, kappa_c });
            chis.push(ChiSigma { name: format!("s{i}"), a_chi, b_chi });
        }
        let w = Weight { kappa0: rng.gen_range(-3..=3), sigma };
        let chi = InfinityType { m, sigma: chis };
        let params = critical_membership(&w, &chi)
            .map_err(|e| e.to_string())?
            .ok_or_else(|| format!("trial {trial}: member by construction rejected"))?;
        let signature: Vec<(String, u32, u32)> =
            w.sigma.iter().map(|s| (s.name.clone(), s.a, s.b)).collect();
        let back = weight_from_critical(w.kappa0, &chi, &params, &signature)
            .map_err(|e| e.to_string())?;
        if back != w {
            return Err(format!("trial {trial}: round trip lost the weight"));
        }
    }
    Ok(())
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 1 {
        return vec![vec![0]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..n {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

// 7. For 100 random ordinary characters with n <= 4, exactly one of the n!
//    Weyl permutations yields all-unit normalized eigenvalues.
fn ordinarity_uniqueness(seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x07);
    for trial in 0..100 {
        let a = rng.gen_range(1usize..=3);
        let b = rng.gen_range(1usize..=(4 - a).max(1));
        let sig = Signature { a, b };
        let n = sig.n() as i64;
        // Strictly dominant holomorphic-range weights keep the n target
        // valuations pairwise distinct.
        let mut kap = vec![n + rng.gen_range(1i64..=3)];
        for _ in 1..a {
            let first = kap[0];
            kap.insert(0, first + rng.gen_range(1i64..=3));
        }
        let mut kc = vec![rng.gen_range(0i64..=3)];
        for _ in 1..b {
            let first = kc[0];
            kc.insert(0, first + rng.gen_range(1i64..=3));
        }
        let k = OrdinaryKappa { sigma: vec![SigmaKappa { kappa: kap, kappa_c: kc }] };
        if !theta_regularity(&k, sig).map_err(|e| e.to_string())? {
            return Err(format!("trial {trial}: generated weight not theta-regular"));
        }
        let alpha = ordinary_alpha(&k, sig, 5, 1, 10).map_err(|e| e.to_string())?;
        let mut count = 0usize;
        for perm in permutations(sig.n()) {
            let permuted = alpha.permuted(&perm).map_err(|e| e.to_string())?;
            if is_ordinary(&permuted, &k, sig).map_err(|e| e.to_string())? {
                count += 1;
            }
        }
        if count != 1 {
            return Err(format!("trial {trial}: {count} ordinary permutations, expected 1"));
        }
    }
    Ok(())
}

// Closed-form valuation of zeta_{p^r}^x - 1 (None when the difference is 0):
// 1 / phi(p^{r-s}) with s = v_p(x).
fn rou_diff_val(p: u64, r: u32, x: u64) -> Option<Ratio<i64>> {
    let q = p.pow(r);
    let mut delta = x % q;
    if delta == 0 {
        return None;
    }
    let mut s = 0u32;
    while delta % p == 0 {
        delta /= p;
        s += 1;
    }
    Some(Ratio::new(1, euler_phi(p.pow(r - s)) as i64))
}

fn exact_rou_diff_val(p: u64, r: u32, x: u64, y: u64) -> Result<Option<Ratio<i64>>, String> {
    let q = p.pow(r);
    let d = CycloRational::root_of_unity(q, x as i64)
        .sub(&CycloRational::root_of_unity(q, y as i64))
        .map_err(|e| e.to_string())?;
    d.padic_valuation(p).map_err(|e| e.to_string())
}

// 8. Finite-level congruence of measure integrals against character
//    congruences for all character pairs at levels r <= 3, p <= 7. The
//    root-of-unity valuation formula is validated exactly at small sizes and
//    spot-checked exactly at the largest, then drives the all-pairs sweep.
fn admissibility_congruence(seed: u64) -> Check {
    // Exhaustive validation of the closed form at small conductors.
    for (p, r) in [(2u64, 1u32), (2, 2), (3, 1), (3, 2), (5, 1), (7, 1)] {
        let q = p.pow(r);
        for x in 1..q {
            let exact = exact_rou_diff_val(p, r, x, 0)?;
            if exact != rou_diff_val(p, r, x) {
                return Err(format!("closed-form valuation wrong at p={p} r={r} x={x}"));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xAD);
    // All-pairs sweep: mu = delta_a + p delta_b; the two terms of every
    // integral difference have distinct valuations, so the minimum is exact.
    for p in [2u64, 3, 5, 7] {
        for r in 1..=3u32 {
            let q = p.pow(r);
            let a = 1u64;
            let b = (1..q).find(|x| x % p != 0 && *x != a).unwrap_or(1);
            for j1 in 0..q {
                for j2 in (j1 + 1)..q {
                    let h = character_congruence_valuation(p, r, &[j1], &[j2])
                        .ok_or_else(|| "distinct characters reported equal".to_string())?;
                    let delta = j2 - j1;
                    let t1 = rou_diff_val(p, r, delta * a % q);
                    let t2 = rou_diff_val(p, r, delta * b % q).map(|v| v + Ratio::from_integer(1));
                    let val = match (t1, t2) {
                        (Some(v1), Some(v2)) => Some(v1.min(v2)),
                        (Some(v), None) | (None, Some(v)) => Some(v),
                        (None, None) => None,
                    };
                    if let Some(v) = val {
                        if v < h {
                            return Err(format!(
                                "congruence fails at p={p} r={r} pair ({j1},{j2}): {v} < {h}"
                            ));
                        }
                    }
                }
            }
        }
    }
    // Exact spot checks of the sweep's valuation model at the largest sizes.
    for (p, r, trials) in [(5u64, 3u32, 30usize), (7, 2, 50), (7, 3, 30)] {
        let q = p.pow(r);
        let b = (2..q).find(|x| x % p != 0).unwrap();
        for _ in 0..trials {
            let j1 = rng.gen_range(0..q);
            let j2 = rng.gen_range(0..q);
            if j1 == j2 {
                continue;
            }
            let delta = (j2 + q - j1) % q;
            let t1 = rou_diff_val(p, r, delta);
            let t2 = rou_diff_val(p, r, delta * b % q).map(|v| v + Ratio::from_integer(1));
            let predicted = match (t1, t2) {
                (Some(v1), Some(v2)) => Some(v1.min(v2)),
                (Some(v), None) | (None, Some(v)) => Some(v),
                (None, None) => None,
            };
            // alpha(j2) - alpha(j1) for mu = delta_1 + p delta_b.
            let q_i = q as i64;
            let term1 = CycloRational::root_of_unity(q, j2 as i64)
                .sub(&CycloRational::root_of_unity(q, j1 as i64))
                .map_err(|e| e.to_string())?;
            let term2 = CycloRational::root_of_unity(q, (j2 * b % q) as i64)
                .sub(&CycloRational::root_of_unity(q, (j1 * b % q) as i64))
                .map_err(|e| e.to_string())?
                .scale(&big(p as i64));
            let _ = q_i;
            let exact = term1
                .add(&term2)
                .map_err(|e| e.to_string())?
                .padic_valuation(p)
                .map_err(|e| e.to_string())?;
            if exact != predicted {
                return Err(format!(
                    "spot check p={p} r={r} ({j1},{j2}): exact {exact:?} != predicted {predicted:?}"
                ));
            }
        }
    }
    Ok(())
}
