//! `_padicalc`: Python bindings. Scalar p-adic arithmetic is exposed as a
//! native class; structured documents (weights, local data, polygons) cross
//! the boundary as JSON strings with the same schemas the CLI uses.

use num_bigint::BigInt;
use num_rational::BigRational;
use padicalc_core::local_factors::{d_norm, modified_euler_p, LocalCharacter, LocalFactorWire,
    LocalRep};
use padicalc_core::measures::MeasureDoc;
use padicalc_core::ordinarity::{
    is_anti_ordinary, is_ordinary, ordinary_eigenvalues, theta_regularity, OrdinaryKappa,
    Signature, TorusCharacter,
};
use padicalc_core::padic::PadicScalar;
use padicalc_core::polygons::{
    hodge_polygon as core_hodge_polygon, newton_polygon as core_newton_polygon,
    panchishkin_check as core_panchishkin, HeckePolynomial, HodgeData, Polygon,
};
use padicalc_core::schur_weyl::{
    degree_decomposition_check as core_degree_check, p_polynomial as core_p_polynomial,
    p_polynomial_degree,
};
use padicalc_core::weights::{
    critical_membership as core_critical, involution as core_involution, InfinityType,
    InvolutionKind, Weight,
};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn value_err<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn from_json<T: serde::de::DeserializeOwned>(text: &str) -> PyResult<T> {
    serde_json::from_str(text).map_err(value_err)
}

fn to_json<T: serde::Serialize>(value: &T) -> PyResult<String> {
    serde_json::to_string(value).map_err(value_err)
}

/// An element of Q_p known modulo p^(val + N): a unit times a power of p,
/// with half-integer valuations allowed.
#[pyclass(name = "PadicNumber", from_py_object)]
#[derive(Clone)]
struct PyPadic {
    inner: PadicScalar,
}

#[pymethods]
impl PyPadic {
    /// Reduction of numer/denom (denom prime to p) modulo p^N.
    #[staticmethod]
    fn from_rational(p: u64, prec: u32, numer: i64, denom: i64) -> PyResult<Self> {
        let r = BigRational::new(BigInt::from(numer), BigInt::from(denom));
        Ok(Self { inner: PadicScalar::from_rational(p, prec, &r).map_err(value_err)? })
    }

    #[staticmethod]
    fn from_integer(p: u64, prec: u32, x: i64) -> Self {
        Self { inner: PadicScalar::from_integer(p, prec, x) }
    }

    #[getter]
    fn p(&self) -> u64 {
        self.inner.p()
    }

    #[getter]
    fn precision(&self) -> u32 {
        self.inner.precision()
    }

    /// Valuation as a string ("3" or "3/2"); None for zero.
    fn val(&self) -> Option<String> {
        self.inner.val().ok().map(|h| h.to_string())
    }

    /// Unit part as a decimal string.
    fn unit(&self) -> String {
        self.inner.unit_residue().to_string()
    }

    fn is_zero(&self) -> bool {
        self.inner.is_zero()
    }

    fn __add__(&self, other: &Self) -> PyResult<Self> {
        Ok(Self { inner: self.inner.add(&other.inner).map_err(value_err)? })
    }

    fn __sub__(&self, other: &Self) -> PyResult<Self> {
        Ok(Self { inner: self.inner.sub(&other.inner).map_err(value_err)? })
    }

    fn __mul__(&self, other: &Self) -> PyResult<Self> {
        Ok(Self { inner: self.inner.mul(&other.inner).map_err(value_err)? })
    }

    fn __neg__(&self) -> Self {
        Self { inner: self.inner.neg() }
    }

    fn inv(&self) -> PyResult<Self> {
        Ok(Self { inner: self.inner.inv().map_err(value_err)? })
    }

    fn pow(&self, k: i64) -> PyResult<Self> {
        Ok(Self { inner: self.inner.pow(k).map_err(value_err)? })
    }

    /// Congruence at the shared precision.
    fn congruent_to(&self, other: &Self) -> bool {
        self.inner.congruent_to(&other.inner)
    }

    /// JSON document with fields p, N, val, unit.
    fn to_json(&self) -> PyResult<String> {
        to_json(&self.inner)
    }

    #[staticmethod]
    fn parse_json(text: &str) -> PyResult<Self> {
        Ok(Self { inner: from_json(text)? })
    }

    fn __repr__(&self) -> String {
        match self.inner.val().ok() {
            Some(v) => format!(
                "PadicNumber(p={}, val={}, unit={} mod {}^{})",
                self.inner.p(),
                v,
                self.inner.unit_residue(),
                self.inner.p(),
                self.inner.precision()
            ),
            None => format!("PadicNumber(p={}, 0)", self.inner.p()),
        }
    }
}

/// Kubota-Leopoldt value at the even integer k on its Teichmuller branch,
/// modulo p^N.
#[pyfunction]
fn kubota_leopoldt(p: u64, k: usize, n_prec: u32) -> PyResult<PyPadic> {
    if p < 3 {
        return Err(PyValueError::new_err("p must be an odd prime"));
    }
    let branch = k % (p as usize - 1);
    let inner =
        padicalc_core::measures::kubota_leopoldt(p, n_prec, branch, k).map_err(value_err)?;
    Ok(PyPadic { inner })
}

/// Integrates a character document against a measure document; both JSON.
#[pyfunction]
fn measure_eval(measure_json: &str, char_json: &str) -> PyResult<String> {
    let doc: MeasureDoc = from_json(measure_json)?;
    let ch: serde_json::Value = from_json(char_json)?;
    match doc {
        MeasureDoc::Finite(m) => {
            let j: Vec<u64> = serde_json::from_value(ch["j"].clone()).map_err(value_err)?;
            to_json(&m.integrate_character(&j).map_err(value_err)?)
        }
        MeasureDoc::Amice(series) => {
            let u: PadicScalar = serde_json::from_value(ch["u"].clone()).map_err(value_err)?;
            let zeta = match ch.get("zeta") {
                Some(z) if !z.is_null() => {
                    Some(serde_json::from_value(z.clone()).map_err(value_err)?)
                }
                _ => None,
            };
            let (value, err_val) = series.integrate_character(&u, zeta.as_ref()).map_err(value_err)?;
            to_json(&serde_json::json!({
                "value": value,
                "error_valuation": format!("{}/{}", err_val.numer(), err_val.denom()),
            }))
        }
    }
}

/// Ordinary modified Euler factor as a JSON rational-function document.
#[pyfunction]
fn euler_p(rep_json: &str, chi1_json: &str, chi2_json: &str) -> PyResult<String> {
    let rep: LocalRep = from_json(rep_json)?;
    let chi1: LocalCharacter = from_json(chi1_json)?;
    let chi2: LocalCharacter = from_json(chi2_json)?;
    for c in rep.a.iter().chain(&rep.b).chain([&chi1, &chi2]) {
        c.validate().map_err(value_err)?;
    }
    let factor = modified_euler_p(&rep, &chi1, &chi2).map_err(value_err)?;
    to_json(&LocalFactorWire::from(&factor))
}

/// Doubling normalizer product of abelian L-factors, as JSON.
#[pyfunction]
fn dnorm(chi_json: &str, eta_json: &str, n: u32) -> PyResult<String> {
    let chi: LocalCharacter = from_json(chi_json)?;
    chi.validate().map_err(value_err)?;
    let eta = from_json(eta_json)?;
    let factor = d_norm(n, &chi, eta).map_err(value_err)?;
    to_json(&LocalFactorWire::from(&factor))
}

/// Weight involution; kind is "star", "d", "flat", or "dagger".
#[pyfunction]
fn involution(weight_json: &str, kind: &str) -> PyResult<String> {
    let w: Weight = from_json(weight_json)?;
    let kind: InvolutionKind = serde_json::from_value(serde_json::Value::String(kind.into()))
        .map_err(|_| PyValueError::new_err("kind must be star, d, flat, or dagger"))?;
    to_json(&core_involution(&w, kind).map_err(value_err)?)
}

/// Critical-set membership; returns the parameter JSON or None.
#[pyfunction]
fn critical_membership(weight_json: &str, chi_json: &str) -> PyResult<Option<String>> {
    let w: Weight = from_json(weight_json)?;
    let chi: InfinityType = from_json(chi_json)?;
    match core_critical(&w, &chi).map_err(value_err)? {
        Some(params) => Ok(Some(to_json(&params)?)),
        None => Ok(None),
    }
}

/// Newton polygon of a Hecke polynomial document, as polygon JSON.
#[pyfunction]
fn newton_polygon(hecke_json: &str) -> PyResult<String> {
    let h: HeckePolynomial = from_json(hecke_json)?;
    to_json(&core_newton_polygon(&h))
}

/// Hodge polygon of a list of Hodge-type documents, as polygon JSON.
#[pyfunction]
fn hodge_polygon(data_json: &str) -> PyResult<String> {
    let data: Vec<HodgeData> = from_json(data_json)?;
    to_json(&core_hodge_polygon(&data).map_err(value_err)?)
}

/// True iff the two polygons agree at the abscissa x = n.
#[pyfunction]
fn panchishkin_check(newton_json: &str, hodge_json: &str, n: u32) -> PyResult<bool> {
    let newton: Polygon = from_json(newton_json)?;
    let hodge: Polygon = from_json(hodge_json)?;
    core_panchishkin(&newton, &hodge, n).map_err(value_err)
}

/// Dimension count for degree-d polynomials on u x u matrices.
#[pyfunction]
fn degree_decomposition_check(u: usize, d: u32) -> bool {
    core_degree_check(u, d)
}

/// Minor-product polynomial: returns (degree, canonical expansion).
#[pyfunction]
fn p_polynomial(rtilde: Vec<u32>, stilde: Vec<u32>) -> PyResult<(u32, String)> {
    let p = core_p_polynomial(rtilde.len(), stilde.len(), &rtilde, &stilde).map_err(value_err)?;
    Ok((p_polynomial_degree(&rtilde, &stilde), p.to_string()))
}

/// Ordinarity report for a torus character: eigenvalue valuations plus the
/// ordinary / anti-ordinary / theta-regularity flags, as JSON.
#[pyfunction]
fn ordinary_check(alpha_json: &str, kappa_json: &str, sig_json: &str) -> PyResult<String> {
    let alpha: TorusCharacter = from_json(alpha_json)?;
    let alpha = TorusCharacter::new(alpha.p, alpha.f, alpha.alpha).map_err(value_err)?;
    let kappa: OrdinaryKappa = from_json(kappa_json)?;
    let sig: Signature = from_json(sig_json)?;
    let eigen = ordinary_eigenvalues(&alpha, &kappa, sig).map_err(value_err)?;
    let vals: Vec<String> = eigen
        .iter()
        .map(|c| c.val().map(|h| h.to_string()))
        .collect::<Result<_, _>>()
        .map_err(value_err)?;
    to_json(&serde_json::json!({
        "eigenvalue_valuations": vals,
        "ordinary": is_ordinary(&alpha, &kappa, sig).map_err(value_err)?,
        "anti_ordinary": is_anti_ordinary(&alpha, &kappa, sig).map_err(value_err)?,
        "theta_regular": theta_regularity(&kappa, sig).map_err(value_err)?,
    }))
}

#[pymodule]
fn _padicalc(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPadic>()?;
    m.add_function(wrap_pyfunction!(kubota_leopoldt, m)?)?;
    m.add_function(wrap_pyfunction!(measure_eval, m)?)?;
    m.add_function(wrap_pyfunction!(euler_p, m)?)?;
    m.add_function(wrap_pyfunction!(dnorm, m)?)?;
    m.add_function(wrap_pyfunction!(involution, m)?)?;
    m.add_function(wrap_pyfunction!(critical_membership, m)?)?;
    m.add_function(wrap_pyfunction!(newton_polygon, m)?)?;
    m.add_function(wrap_pyfunction!(hodge_polygon, m)?)?;
    m.add_function(wrap_pyfunction!(panchishkin_check, m)?)?;
    m.add_function(wrap_pyfunction!(degree_decomposition_check, m)?)?;
    m.add_function(wrap_pyfunction!(p_polynomial, m)?)?;
    m.add_function(wrap_pyfunction!(ordinary_check, m)?)?;
    Ok(())
}
