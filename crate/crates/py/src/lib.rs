//! Python bindings: a `Matrix` class wrapping super interval matrices, the block
//! products, partition counting, the fuzzy operations and the structure checks
//! driven by carrier files.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use superint::lab::{
    check_group, check_proper_subgroup, check_semigroup, check_semiring, check_strictness, StructureReport,
};
use superint::{
    CarrierFile, EtaMap, FuzzySuperMatrix, PartitionSpec, RenderFormat, Scalar, ScalarDomain, SuperIntervalMatrix,
};

fn err(e: superint::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn domain(tag: &str) -> PyResult<ScalarDomain> {
    tag.parse().map_err(err)
}

fn scalar(d: &ScalarDomain, value: &Bound<'_, PyAny>) -> PyResult<Scalar> {
    let token = value.str()?.to_string();
    d.parse_scalar(&token).map_err(PyValueError::new_err)
}

fn fuzzy(m: &Matrix) -> PyResult<FuzzySuperMatrix> {
    FuzzySuperMatrix::new(m.inner.clone()).map_err(err)
}

#[pyclass(name = "Matrix", module = "superint", frozen, skip_from_py_object)]
#[derive(Clone)]
struct Matrix {
    inner: SuperIntervalMatrix,
}

impl From<SuperIntervalMatrix> for Matrix {
    fn from(inner: SuperIntervalMatrix) -> Self {
        Matrix { inner }
    }
}

#[pymethods]
impl Matrix {
    /// Builds a matrix from a domain tag, rows of endpoints (ints or strings such
    /// as "3/4") and optional cut positions.
    #[new]
    #[pyo3(signature = (domain_tag, rows, row_cuts = vec![], col_cuts = vec![]))]
    fn new(
        domain_tag: &str,
        rows: Vec<Vec<Bound<'_, PyAny>>>,
        row_cuts: Vec<usize>,
        col_cuts: Vec<usize>,
    ) -> PyResult<Self> {
        let d = domain(domain_tag)?;
        let cols = rows.first().map_or(0, Vec::len);
        let partition = PartitionSpec::new(rows.len(), cols, row_cuts, col_cuts).map_err(err)?;
        let grid = rows
            .iter()
            .map(|r| r.iter().map(|x| scalar(&d, x)).collect::<PyResult<Vec<_>>>())
            .collect::<PyResult<Vec<_>>>()?;
        Ok(SuperIntervalMatrix::build(d, partition, grid).map_err(err)?.into())
    }

    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        Ok(superint::parse_matrix(text).map_err(err)?.into())
    }

    #[getter]
    fn domain(&self) -> String {
        self.inner.domain().to_string()
    }

    #[getter]
    fn shape(&self) -> (usize, usize) {
        (self.inner.rows(), self.inner.cols())
    }

    #[getter]
    fn row_cuts(&self) -> Vec<usize> {
        self.inner.partition().row_cuts().to_vec()
    }

    #[getter]
    fn col_cuts(&self) -> Vec<usize> {
        self.inner.partition().col_cuts().to_vec()
    }

    #[getter]
    fn shape_kind(&self) -> &'static str {
        self.inner.shape_kind().name()
    }

    /// Right endpoints as exact strings, row by row.
    fn endpoints(&self) -> Vec<Vec<String>> {
        self.inner.grid().iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect()
    }

    fn is_zero(&self) -> bool {
        self.inner.is_zero()
    }

    fn transpose(&self) -> Self {
        self.inner.transpose().into()
    }

    fn hadamard(&self, other: &Matrix) -> PyResult<Self> {
        Ok(self.inner.hadamard(&other.inner).map_err(err)?.into())
    }

    fn scalar_mul(&self, s: &Bound<'_, PyAny>) -> PyResult<Self> {
        let s = scalar(&self.inner.domain(), s)?;
        Ok(self.inner.scalar_mul(&s).map_err(err)?.into())
    }

    fn extended(&self, other: &Matrix) -> PyResult<Self> {
        Ok(superint::extended_product(&self.inner, &other.inner).map_err(err)?.into())
    }

    #[pyo3(signature = (decimals = false))]
    fn to_text(&self, decimals: bool) -> String {
        superint::render_matrix(&self.inner, RenderFormat::Text, decimals)
    }

    #[pyo3(signature = (decimals = false))]
    fn to_json(&self, decimals: bool) -> String {
        superint::render_matrix(&self.inner, RenderFormat::Json, decimals)
    }

    fn __add__(&self, other: &Matrix) -> PyResult<Self> {
        Ok(self.inner.add(&other.inner).map_err(err)?.into())
    }

    fn __matmul__(&self, other: &Matrix) -> PyResult<Self> {
        Ok(superint::major_product(&self.inner, &other.inner).map_err(err)?.into())
    }

    fn __eq__(&self, other: &Matrix) -> bool {
        self.inner == other.inner
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Matrix({}, {})", self.inner.domain(), self.inner)
    }
}

#[pyfunction]
fn major_product(a: &Matrix, b: &Matrix) -> PyResult<Matrix> {
    Ok(superint::major_product(&a.inner, &b.inner).map_err(err)?.into())
}

#[pyfunction]
fn extended_product(a: &Matrix, b: &Matrix) -> PyResult<Matrix> {
    Ok(superint::extended_product(&a.inner, &b.inner).map_err(err)?.into())
}

#[pyfunction]
fn outer_product(col: &Matrix, row: &Matrix) -> PyResult<Matrix> {
    Ok(superint::outer_product(&col.inner, &row.inner).map_err(err)?.into())
}

#[pyfunction]
fn gram(a: &Matrix) -> PyResult<Matrix> {
    Ok(superint::gram(&a.inner).map_err(err)?.into())
}

/// Number of proper partitions of an m x n grid, as a decimal string.
#[pyfunction]
fn count_partitions(m: usize, n: usize) -> PyResult<String> {
    Ok(superint::count_proper_partitions(m, n).map_err(err)?.to_string())
}

/// Every partition of an m x n grid as a `(row_cuts, col_cuts)` pair.
#[pyfunction]
#[pyo3(signature = (m, n, include_trivial = false))]
fn enumerate_partitions(m: usize, n: usize, include_trivial: bool) -> PyResult<Vec<(Vec<usize>, Vec<usize>)>> {
    let parts = superint::enumerate_partitions(m, n, include_trivial).map_err(err)?;
    Ok(parts.iter().map(|p| (p.row_cuts().to_vec(), p.col_cuts().to_vec())).collect())
}

#[pyfunction]
fn fuzzy_min(a: &Matrix, b: &Matrix) -> PyResult<Matrix> {
    Ok(superint::fuzzy_min(&fuzzy(a)?, &fuzzy(b)?).map_err(err)?.into_inner().into())
}

#[pyfunction]
fn fuzzy_max(a: &Matrix, b: &Matrix) -> PyResult<Matrix> {
    Ok(superint::fuzzy_max(&fuzzy(a)?, &fuzzy(b)?).map_err(err)?.into_inner().into())
}

#[pyfunction]
fn scalar_min(s: &Bound<'_, PyAny>, a: &Matrix) -> PyResult<Matrix> {
    let s = scalar(&ScalarDomain::UnitRationals, s)?;
    Ok(superint::scalar_min(&s, &fuzzy(a)?).map_err(err)?.into_inner().into())
}

#[pyfunction]
fn scalar_max(s: &Bound<'_, PyAny>, a: &Matrix) -> PyResult<Matrix> {
    let s = scalar(&ScalarDomain::UnitRationals, s)?;
    Ok(superint::scalar_max(&s, &fuzzy(a)?).map_err(err)?.into_inner().into())
}

/// Maps endpoints into the unit interval with `a -> 1/a` and `0 -> eta_zero`.
#[pyfunction]
#[pyo3(signature = (a, eta_zero = "1"))]
fn fuzzify(a: &Matrix, eta_zero: &str) -> PyResult<Matrix> {
    let z = ScalarDomain::UnitRationals.parse_scalar(eta_zero).map_err(PyValueError::new_err)?;
    let eta = EtaMap::reciprocal(z).map_err(err)?;
    Ok(superint::fuzzify(&a.inner, &eta).map_err(err)?.into_inner().into())
}

fn report(r: StructureReport) -> (bool, String) {
    (r.holds(), r.render_text())
}

/// Runs a structure check on a carrier described in TOML. Returns whether it
/// holds and the rendered report.
#[pyfunction]
fn check(what: &str, carrier_toml: &str) -> PyResult<(bool, String)> {
    let file = CarrierFile::parse(carrier_toml).map_err(err)?;
    let (c, b) = (&file.carrier, &file.budget);
    let r = match what {
        "semigroup" => check_semigroup(c, b),
        "group" => check_group(c, b),
        "semiring" => check_semiring(c, b),
        "strict" => check_strictness(c),
        "lattice" => superint::fuzzy::check_lattice(c, b),
        "subgroup" => check_proper_subgroup(c),
        "eta" => {
            let eta = file.eta.clone().ok_or_else(|| PyValueError::new_err("carrier has no [eta] section"))?;
            superint::audit_eta(&eta, c, b).map(|a| a.report)
        }
        other => return Err(PyValueError::new_err(format!("unknown check {other:?}"))),
    };
    Ok(report(r.map_err(err)?))
}

#[pymodule]
#[pyo3(name = "superint")]
fn py_superint(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Matrix>()?;
    m.add_function(wrap_pyfunction!(major_product, m)?)?;
    m.add_function(wrap_pyfunction!(extended_product, m)?)?;
    m.add_function(wrap_pyfunction!(outer_product, m)?)?;
    m.add_function(wrap_pyfunction!(gram, m)?)?;
    m.add_function(wrap_pyfunction!(count_partitions, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_partitions, m)?)?;
    m.add_function(wrap_pyfunction!(fuzzy_min, m)?)?;
    m.add_function(wrap_pyfunction!(fuzzy_max, m)?)?;
    m.add_function(wrap_pyfunction!(scalar_min, m)?)?;
    m.add_function(wrap_pyfunction!(scalar_max, m)?)?;
    m.add_function(wrap_pyfunction!(fuzzify, m)?)?;
    m.add_function(wrap_pyfunction!(check, m)?)?;
    Ok(())
}
