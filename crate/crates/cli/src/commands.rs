//! One function per subcommand; each returns the output document as a string.

use crate::{read_json, to_output, CliError, CliResult};
use padicalc_core::cyclo::CycloRational;
use padicalc_core::local_factors::{
    d_norm, d_norm_at, modified_euler_p, EtaSign, LocalCharacter, LocalFactorWire, LocalRep,
};
use padicalc_core::measures::MeasureDoc;
use padicalc_core::ordinarity::{
    is_anti_ordinary, is_ordinary, ordinary_eigenvalues, theta_regularity, OrdinaryKappa,
    Signature, TorusCharacter,
};
use padicalc_core::padic::PadicScalar;
use padicalc_core::polygons::{
    hodge_polygon, newton_polygon, panchishkin_check, polygon_to_tsv, polygons_to_svg, HodgeData,
    HeckePolynomial, Polygon,
};
use padicalc_core::schur_weyl::{degree_decomposition_check, p_polynomial, p_polynomial_degree};
use padicalc_core::weights::{
    critical_membership, involution, InfinityType, InvolutionKind, Weight,
};
use serde::{Deserialize, Serialize};
use serde_json::json;
use std::path::Path;

// ------------------------------------------------------------- measure eval

#[derive(Deserialize)]
struct CharDoc {
    /// Character index vector for finite-level measures.
    #[serde(default)]
    j: Option<Vec<u64>>,
    /// Unit u (congruent to 1 mod p) for one-variable series measures.
    #[serde(default)]
    u: Option<PadicScalar>,
    /// Optional extra root of unity multiplying u.
    #[serde(default)]
    zeta: Option<CycloRational>,
}

pub fn measure_eval(measure: &Path, character: &Path) -> CliResult<String> {
    let doc: MeasureDoc = read_json(measure)?;
    let ch: CharDoc = read_json(character)?;
    match doc {
        MeasureDoc::Finite(m) => {
            let j = ch
                .j
                .ok_or_else(|| CliError::Schema("finite measure wants a character index \"j\"".into()))?;
            let value = m.integrate_character(&j)?;
            to_output(&json!({ "type": "finite", "j": j, "value": value }))
        }
        MeasureDoc::Amice(series) => {
            let u = ch
                .u
                .ok_or_else(|| CliError::Schema("series measure wants a unit \"u\"".into()))?;
            let (value, err_val) = series.integrate_character(&u, ch.zeta.as_ref())?;
            to_output(&json!({
                "type": "amice",
                "value": value,
                "error_valuation": format!("{}/{}", err_val.numer(), err_val.denom()),
            }))
        }
    }
}

// ----------------------------------------------------------------------- kl

pub fn kl(p: u64, k: usize, n_prec: u32) -> CliResult<String> {
    if p < 3 {
        return Err(CliError::Math("p must be an odd prime".into()));
    }
    let branch = k % (p as usize - 1);
    let value = padicalc_core::measures::kubota_leopoldt(p, n_prec, branch, k)?;
    to_output(&json!({
        "p": p,
        "k": k,
        "N": n_prec,
        "branch": branch,
        "value": value,
    }))
}

// -------------------------------------------------------------------- euler-p

#[derive(Deserialize)]
struct TwistDoc {
    chi1: LocalCharacter,
    chi2: LocalCharacter,
}

pub fn euler_p(rep: &Path, chi: &Path, at: Option<i64>) -> CliResult<String> {
    let rep: LocalRep = read_json(rep)?;
    let twist: TwistDoc = read_json(chi)?;
    for c in rep.a.iter().chain(&rep.b).chain([&twist.chi1, &twist.chi2]) {
        c.validate()?;
    }
    let factor = modified_euler_p(&rep, &twist.chi1, &twist.chi2)?;
    let value = match at {
        Some(m) => Some(factor.evaluate_at(m)?),
        None => None,
    };
    to_output(&json!({
        "factor": LocalFactorWire::from(&factor),
        "value": value,
    }))
}

// --------------------------------------------------------------------- dnorm

#[derive(Deserialize)]
struct DnormDoc {
    chi_plus: LocalCharacter,
    eta: EtaSign,
}

pub fn dnorm(chi: &Path, n: u32, at: Option<i64>) -> CliResult<String> {
    let doc: DnormDoc = read_json(chi)?;
    doc.chi_plus.validate()?;
    let factor = d_norm(n, &doc.chi_plus, doc.eta)?;
    let value = match at {
        Some(m) => Some(d_norm_at(n, &doc.chi_plus, doc.eta, m)?),
        None => None,
    };
    to_output(&json!({
        "factor": LocalFactorWire::from(&factor),
        "value": value,
    }))
}

// ------------------------------------------------------------------- weights

#[derive(Deserialize)]
struct CriticalDoc {
    kappa: Weight,
    chi: InfinityType,
}

pub fn weights_involution(input: &Path, kind: InvolutionKind) -> CliResult<String> {
    let w: Weight = read_json(input)?;
    w.validate()?;
    to_output(&involution(&w, kind)?)
}

pub fn weights_critical(input: &Path) -> CliResult<String> {
    let doc: CriticalDoc = read_json(input)?;
    doc.kappa.validate()?;
    let params = critical_membership(&doc.kappa, &doc.chi)?;
    to_output(&json!({
        "member": params.is_some(),
        "params": params,
    }))
}

// ------------------------------------------------------------------- polygon

#[derive(Deserialize)]
struct PanchishkinDoc {
    newton: Polygon,
    hodge: Polygon,
    n: u32,
}

#[derive(Serialize)]
struct PolygonOut {
    polygon: Polygon,
}

fn emit_plots(
    polys: &[(&str, &Polygon)],
    svg: Option<&Path>,
    tsv: Option<&Path>,
) -> CliResult<()> {
    if let Some(path) = svg {
        std::fs::write(path, polygons_to_svg(polys))?;
    }
    if let Some(path) = tsv {
        let mut text = String::new();
        for (_, poly) in polys {
            text.push_str(&polygon_to_tsv(poly));
        }
        std::fs::write(path, text)?;
    }
    Ok(())
}

pub fn polygon_newton(input: &Path, svg: Option<&Path>, tsv: Option<&Path>) -> CliResult<String> {
    let h: HeckePolynomial = read_json(input)?;
    let poly = newton_polygon(&h);
    emit_plots(&[("newton", &poly)], svg, tsv)?;
    to_output(&PolygonOut { polygon: poly })
}

pub fn polygon_hodge(input: &Path, svg: Option<&Path>, tsv: Option<&Path>) -> CliResult<String> {
    let data: Vec<HodgeData> = read_json(input)?;
    let poly = hodge_polygon(&data)?;
    emit_plots(&[("hodge", &poly)], svg, tsv)?;
    to_output(&PolygonOut { polygon: poly })
}

pub fn polygon_panchishkin(
    input: &Path,
    svg: Option<&Path>,
    tsv: Option<&Path>,
) -> CliResult<String> {
    let doc: PanchishkinDoc = read_json(input)?;
    let ok = panchishkin_check(&doc.newton, &doc.hodge, doc.n)?;
    emit_plots(&[("newton", &doc.newton), ("hodge", &doc.hodge)], svg, tsv)?;
    to_output(&json!({ "n": doc.n, "panchishkin": ok }))
}

// ----------------------------------------------------------------- schurweyl

pub fn schurweyl_check(u: usize, d: u32) -> CliResult<String> {
    if u == 0 || u > 6 || d > 8 {
        return Err(CliError::Math("supported ranges: 1 <= u <= 6, d <= 8".into()));
    }
    let mut table = Vec::new();
    let mut all = true;
    for uu in 1..=u {
        for dd in 0..=d {
            let ok = degree_decomposition_check(uu, dd);
            all &= ok;
            table.push(json!({ "u": uu, "d": dd, "ok": ok }));
        }
    }
    to_output(&json!({ "all": all, "checks": table }))
}

pub fn schurweyl_poly(rtilde: &[u32], stilde: &[u32]) -> CliResult<String> {
    let (a, b) = (rtilde.len(), stilde.len());
    if a + b == 0 {
        return Err(CliError::Schema("need at least one exponent".into()));
    }
    let p = p_polynomial(a, b, rtilde, stilde)?;
    to_output(&json!({
        "a": a,
        "b": b,
        "rtilde": rtilde,
        "stilde": stilde,
        "degree": p_polynomial_degree(rtilde, stilde),
        "polynomial": p.to_string(),
    }))
}

// ------------------------------------------------------------------ ordinary

pub fn ordinary_check(alpha: &Path, kappa: &Path, sig: &Path) -> CliResult<String> {
    let alpha_doc: TorusCharacter = read_json(alpha)?;
    let alpha = TorusCharacter::new(alpha_doc.p, alpha_doc.f, alpha_doc.alpha)?;
    let kappa: OrdinaryKappa = read_json(kappa)?;
    let sig: Signature = read_json(sig)?;
    let eigen = ordinary_eigenvalues(&alpha, &kappa, sig)?;
    let vals: Vec<String> = eigen
        .iter()
        .map(|c| c.val().map(|h| h.to_string()))
        .collect::<Result<_, _>>()?;
    to_output(&json!({
        "eigenvalue_valuations": vals,
        "ordinary": is_ordinary(&alpha, &kappa, sig)?,
        "anti_ordinary": is_anti_ordinary(&alpha, &kappa, sig)?,
        "theta_regular": theta_regularity(&kappa, sig)?,
    }))
}

// ---------------------------------------------------------------- acceptance

pub fn acceptance(seed: u64) -> CliResult<String> {
    let outcomes = crate::acceptance::run_all(seed);
    let mut out = String::new();
    let mut all = true;
    for o in &outcomes {
        all &= o.pass;
        out.push_str(&format!(
            "{} {}\n",
            if o.pass { "PASS" } else { "FAIL" },
            o.name
        ));
        if !o.pass {
            out.push_str(&format!("     {}\n", o.detail));
        }
    }
    if all {
        Ok(out)
    } else {
        Err(CliError::Math(format!("acceptance failures:\n{out}")))
    }
}
