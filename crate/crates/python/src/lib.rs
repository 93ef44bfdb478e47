//! Python bindings: the tri-graded series plus the character, matrix, and
//! verification entry points, driven from Python for exploratory work.

use num_bigint::BigInt;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use fschar_core::error::Error;
use fschar_core::fermionic;
use fschar_core::quasiparticle::{self, ChargeProfile, Color, QPFactor, QPMonomial};
use fschar_core::series::GradeKey;
use fschar_core::verify::verify as core_verify;
use fschar_core::{admissible, Method, TriGradedSeries, Weight};

fn py_err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn weight_from(components: Vec<u32>) -> Weight {
    Weight::new(components)
}

fn color_from(index: u32) -> PyResult<Color> {
    match index {
        1 => Ok(Color::Gamma1),
        2 => Ok(Color::Gamma2),
        other => Err(PyValueError::new_err(format!(
            "color must be 1 or 2, got {other}"
        ))),
    }
}

fn profile_from(gamma1: Vec<u32>, gamma2: Vec<u32>) -> PyResult<ChargeProfile> {
    ChargeProfile::new(gamma1, gamma2).map_err(py_err)
}

/// A color's factor list on the Python side: (charge, degree) pairs.
type FactorList = Vec<(u32, i64)>;

fn monomial_from(gamma1: FactorList, gamma2: FactorList) -> QPMonomial {
    let factors = |v: FactorList| v.into_iter().map(|(n, m)| QPFactor::new(n, m)).collect();
    QPMonomial::new(factors(gamma1), factors(gamma2))
}

fn monomial_parts(b: &QPMonomial) -> (FactorList, FactorList) {
    let parts = |color| {
        b.factors(color)
            .iter()
            .map(|f| (f.charge, f.degree))
            .collect()
    };
    (parts(Color::Gamma1), parts(Color::Gamma2))
}

/// A truncated tri-graded series with exact integer coefficients.
#[pyclass(name = "Series", from_py_object)]
#[derive(Clone)]
struct PySeries {
    inner: TriGradedSeries,
}

#[pymethods]
impl PySeries {
    /// Inclusive maximal q-degree the series is exact up to.
    #[getter]
    fn cutoff(&self) -> u32 {
        self.inner.cutoff()
    }

    /// Coefficient of z1^n1 z2^n2 q^d; raises when d exceeds the cutoff.
    fn coeff(&self, n1: u32, n2: u32, d: u32) -> PyResult<BigInt> {
        self.inner.coeff(GradeKey::new(n1, n2, d)).map_err(py_err)
    }

    /// All nonzero terms as (n1, n2, d, coefficient), sorted by (d, n1, n2).
    fn terms(&self) -> Vec<(u32, u32, u32, BigInt)> {
        self.inner
            .iter()
            .map(|(k, c)| (k.n1, k.n2, k.d, c.clone()))
            .collect()
    }

    fn equal_up_to(&self, other: &PySeries, max_degree: u32) -> PyResult<bool> {
        self.inner
            .equal_up_to(&other.inner, max_degree)
            .map_err(py_err)
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    fn to_csv(&self) -> String {
        self.inner.to_csv()
    }

    fn __eq__(&self, other: &PySeries) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!(
            "Series(cutoff={}, terms={})",
            self.inner.cutoff(),
            self.inner.num_terms()
        )
    }
}

/// Character by admissible-configuration enumeration.
#[pyfunction]
fn char_configs(weight: Vec<u32>, cutoff: u32) -> PyResult<PySeries> {
    admissible::char_configs(&weight_from(weight), cutoff)
        .map(|inner| PySeries { inner })
        .map_err(py_err)
}

/// Character by quasi-particle basis enumeration.
#[pyfunction]
fn char_qp(weight: Vec<u32>, cutoff: u32) -> PyResult<PySeries> {
    quasiparticle::char_qp(&weight_from(weight), cutoff)
        .map(|inner| PySeries { inner })
        .map_err(py_err)
}

/// Character by the fermionic sum; form is "m", "n", or "georgiev".
#[pyfunction]
fn char_fermionic(weight: Vec<u32>, cutoff: u32, form: &str) -> PyResult<PySeries> {
    let w = weight_from(weight);
    let result = match form {
        "m" => fermionic::char_fermionic_m(&w, cutoff),
        "n" => fermionic::char_fermionic_n(&w, cutoff),
        "georgiev" => fermionic::char_fermionic_georgiev(&w, cutoff),
        other => {
            return Err(PyValueError::new_err(format!(
                "form must be m, n, or georgiev, got {other}"
            )))
        }
    };
    result.map(|inner| PySeries { inner }).map_err(py_err)
}

/// Truncated expansion of 1/(q)_m.
#[pyfunction]
fn inv_pochhammer(m: u32, cutoff: u32) -> PySeries {
    PySeries {
        inner: fschar_core::series::inv_pochhammer(m, cutoff),
    }
}

/// Admissibility of a configuration against a weight.
#[pyfunction]
#[pyo3(signature = (entries, weight, ell = 2))]
fn is_admissible(entries: Vec<u32>, weight: Vec<u32>, ell: usize) -> PyResult<bool> {
    let c = admissible::Configuration::new(entries);
    admissible::is_admissible(&c, &weight_from(weight), ell).map_err(py_err)
}

/// Charges and degree of a configuration.
#[pyfunction]
#[pyo3(signature = (entries, ell = 2))]
fn grade(entries: Vec<u32>, ell: usize) -> (Vec<u32>, u32) {
    admissible::Configuration::new(entries).grade(ell)
}

/// All admissible configurations of degree <= dmax, as entry lists in
/// canonical order.
#[pyfunction]
#[pyo3(signature = (weight, dmax, ell = 2))]
fn enumerate_admissible(weight: Vec<u32>, dmax: u32, ell: usize) -> PyResult<Vec<Vec<u32>>> {
    admissible::enumerate_admissible(&weight_from(weight), ell, dmax)
        .map(|v| v.into_iter().map(|c| c.entries().to_vec()).collect())
        .map_err(py_err)
}

/// Maximal degree of a charge-n quasi-particle of the given color (1 or 2).
#[pyfunction]
fn dmax(charge: u32, color: u32, weight: Vec<u32>) -> PyResult<i64> {
    quasiparticle::dmax(charge, color_from(color)?, &weight_from(weight)).map_err(py_err)
}

/// The defining inequalities of the basis set, for a monomial given as two
/// lists of (charge, degree) pairs.
#[pyfunction]
fn satisfies_basis(gamma1: FactorList, gamma2: FactorList, weight: Vec<u32>) -> PyResult<bool> {
    quasiparticle::satisfies_basis(&monomial_from(gamma1, gamma2), &weight_from(weight))
        .map_err(py_err)
}

/// All basis monomials of degree <= cutoff, each as (gamma1, gamma2) lists
/// of (charge, degree) pairs.
#[pyfunction]
fn enumerate_basis(weight: Vec<u32>, cutoff: u32) -> PyResult<Vec<(FactorList, FactorList)>> {
    quasiparticle::enumerate_basis(&weight_from(weight), cutoff)
        .map(|v| v.iter().map(monomial_parts).collect())
        .map_err(py_err)
}

/// The minimal basis monomial of a charge profile.
#[pyfunction]
fn minimal_monomial(
    gamma1: Vec<u32>,
    gamma2: Vec<u32>,
    weight: Vec<u32>,
) -> PyResult<(FactorList, FactorList)> {
    let b = quasiparticle::minimal_monomial(&profile_from(gamma1, gamma2)?, &weight_from(weight))
        .map_err(py_err)?;
    Ok(monomial_parts(&b))
}

/// Dual charges (N1, N2) of a profile.
#[pyfunction]
fn dual_charges(gamma1: Vec<u32>, gamma2: Vec<u32>) -> PyResult<(Vec<u32>, Vec<u32>)> {
    Ok(quasiparticle::dual_charges(&profile_from(gamma1, gamma2)?))
}

/// Exponent tM Q M + L M of a profile's fermionic summand.
#[pyfunction]
fn exponent(gamma1: Vec<u32>, gamma2: Vec<u32>, weight: Vec<u32>) -> PyResult<u64> {
    fermionic::exponent(&profile_from(gamma1, gamma2)?, &weight_from(weight)).map_err(py_err)
}

/// The 2k x 2k quadratic-form matrix.
#[pyfunction]
fn build_q(k: u32) -> Vec<Vec<i64>> {
    fermionic::build_q(k).entries
}

/// The length-2k linear form of a formula-supported weight.
#[pyfunction]
fn build_l(weight: Vec<u32>) -> PyResult<Vec<i64>> {
    fermionic::build_l(&weight_from(weight))
        .map(|l| l.entries)
        .map_err(py_err)
}

/// The 2k x 2k dual-charge transition matrix.
#[pyfunction]
fn build_r(k: u32) -> Vec<Vec<i64>> {
    fermionic::build_r(k).entries
}

/// Determinant of the binomial matrix with entries C(p+j, i), i, j = 0..=r.
#[pyfunction]
fn binom_matrix_det(p: i64, r: u32) -> BigInt {
    fermionic::binom_matrix_det(p, r)
}

/// Runs every supported method and compares them; returns a dict with the
/// agreement verdict, per-method counts and timings, and the first
/// discrepancy if any.
#[pyfunction]
fn verify(py: Python<'_>, weight: Vec<u32>, cutoff: u32) -> PyResult<Py<PyDict>> {
    let report = core_verify(&weight_from(weight), cutoff).map_err(py_err)?;
    let dict = PyDict::new(py);
    dict.set_item("weight", report.weight)?;
    dict.set_item("cutoff", report.cutoff)?;
    dict.set_item("methods", report.methods)?;
    dict.set_item("agree", report.agree)?;
    match &report.first_discrepancy {
        None => dict.set_item("first_discrepancy", py.None())?,
        Some(d) => {
            let disc = PyDict::new(py);
            disc.set_item("key", (d.key.n1, d.key.n2, d.key.d))?;
            let coeffs = PyDict::new(py);
            for (m, c) in &d.coefficients {
                coeffs.set_item(m, c)?;
            }
            disc.set_item("coefficients", coeffs)?;
            dict.set_item("first_discrepancy", disc)?;
        }
    }
    let counts = PyDict::new(py);
    for (m, c) in &report.counts {
        counts.set_item(m, c)?;
    }
    dict.set_item("counts", counts)?;
    let errors = PyDict::new(py);
    for (m, e) in &report.errors {
        errors.set_item(m, e)?;
    }
    dict.set_item("errors", errors)?;
    let timings = PyDict::new(py);
    for (m, t) in &report.timings {
        timings.set_item(m, t.as_secs_f64())?;
    }
    dict.set_item("timings", timings)?;
    Ok(dict.into())
}

/// Names of the character methods, in canonical order.
#[pyfunction]
fn methods() -> Vec<&'static str> {
    Method::ALL.iter().map(|m| m.name()).collect()
}

#[pymodule]
fn fschar(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySeries>()?;
    m.add_function(wrap_pyfunction!(char_configs, m)?)?;
    m.add_function(wrap_pyfunction!(char_qp, m)?)?;
    m.add_function(wrap_pyfunction!(char_fermionic, m)?)?;
    m.add_function(wrap_pyfunction!(inv_pochhammer, m)?)?;
    m.add_function(wrap_pyfunction!(is_admissible, m)?)?;
    m.add_function(wrap_pyfunction!(grade, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_admissible, m)?)?;
    m.add_function(wrap_pyfunction!(dmax, m)?)?;
    m.add_function(wrap_pyfunction!(satisfies_basis, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_basis, m)?)?;
    m.add_function(wrap_pyfunction!(minimal_monomial, m)?)?;
    m.add_function(wrap_pyfunction!(dual_charges, m)?)?;
    m.add_function(wrap_pyfunction!(exponent, m)?)?;
    m.add_function(wrap_pyfunction!(build_q, m)?)?;
    m.add_function(wrap_pyfunction!(build_l, m)?)?;
    m.add_function(wrap_pyfunction!(build_r, m)?)?;
    m.add_function(wrap_pyfunction!(binom_matrix_det, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(methods, m)?)?;
    Ok(())
}
