//! Python module `pappus`: exact marked boxes, the deformed representation
//! in extended precision, and Hilbert-metric helpers on quadrilaterals.
//!
//! Numbers going into exact types are read through `str()`, so `"1/3"`,
//! `fractions.Fraction(1, 3)`, `2` and `0.25` are all taken exactly.

use pappus::anosov::{self, ConvexQuad, DistortionConfig};
use pappus::linalg::eigen_real;
use pappus::marked_box::{relation_suite, RELATION_NAMES};
use pappus::scalar::{self, parse_rational};
use pappus::{BoxModuli, GroupWord, Lambda, Mat3, MpFloat, OvermarkedBox, Rational, RepresentationParams, Scalar, Vec3};
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyBool, PyDict, PyList, PyString};
use serde::Serialize;
use serde_json::Value;

create_exception!(pappus, PappusError, PyValueError);

fn err(e: pappus::Error) -> PyErr {
    PappusError::new_err(e.to_string())
}

fn exact(x: &Bound<'_, PyAny>) -> PyResult<Rational> {
    parse_rational(&x.str()?.to_string_lossy()).map_err(err)
}

fn json_to_py<'py>(py: Python<'py>, v: &Value) -> PyResult<Bound<'py, PyAny>> {
    Ok(match v {
        Value::Null => py.None().into_bound(py),
        Value::Bool(b) => PyBool::new(py, *b).to_owned().into_any(),
        Value::Number(n) => match n.as_i64() {
            Some(i) => i.into_pyobject(py)?.into_any(),
            None => n.as_f64().unwrap_or(f64::NAN).into_pyobject(py)?.into_any(),
        },
        Value::String(s) => PyString::new(py, s).into_any(),
        Value::Array(a) => PyList::new(py, a.iter().map(|x| json_to_py(py, x)).collect::<PyResult<Vec<_>>>()?)?.into_any(),
        Value::Object(o) => {
            let d = PyDict::new(py);
            for (k, x) in o {
                d.set_item(k, json_to_py(py, x)?)?;
            }
            d.into_any()
        }
    })
}

fn to_py<'py, T: Serialize>(py: Python<'py>, x: &T) -> PyResult<Bound<'py, PyAny>> {
    json_to_py(py, &serde_json::to_value(x).map_err(|e| PyValueError::new_err(e.to_string()))?)
}

fn rows<S: Scalar>(m: &Mat3<S>) -> Vec<Vec<f64>> {
    m.to_f64().0.iter().map(|r| r.to_vec()).collect()
}

fn parse_word(w: &str) -> PyResult<GroupWord> {
    GroupWord::parse(w).map_err(err)
}

/// Sets the working precision in bits for extended-precision floats.
#[pyfunction]
fn set_precision(bits: u32) {
    scalar::set_precision(bits);
}

#[pyfunction]
fn precision() -> u32 {
    scalar::precision()
}

/// Normal form of a word over `I, R, Rr, T1, T2`.
#[pyfunction]
fn normal_form(word: &str) -> PyResult<String> {
    Ok(parse_word(word)?.normalize().to_string())
}

/// Solves `h(eps, delta) = 0` for `delta` on the extension curve.
#[pyfunction]
fn solve_delta_h(zt: &Bound<'_, PyAny>, zb: &Bound<'_, PyAny>, eps: &Bound<'_, PyAny>) -> PyResult<f64> {
    let m = BoxModuli::new(exact(zt)?, exact(zb)?).map_err(err)?.convert::<MpFloat>();
    let e = MpFloat::from_rational(&exact(eps)?);
    Ok(pappus::representation::solve_delta_h(&m, &e).map_err(err)?.to_f64())
}

/// Overmarked box with exact rational coordinates.
#[pyclass(name = "Box", module = "pappus", frozen)]
struct PyBox {
    inner: OvermarkedBox<Rational>,
}

fn lambda_exact(u: Option<&Bound<'_, PyAny>>, v: Option<&Bound<'_, PyAny>>) -> PyResult<Lambda<Rational>> {
    let one = Rational::one();
    let u = u.map(exact).transpose()?.unwrap_or_else(|| one.clone());
    let v = v.map(exact).transpose()?.unwrap_or(one);
    Lambda::from_exp(u, v).map_err(err)
}

#[pymethods]
impl PyBox {
    /// Standard box with moduli `(zt, zb)`.
    #[staticmethod]
    fn from_moduli(zt: &Bound<'_, PyAny>, zb: &Bound<'_, PyAny>) -> PyResult<Self> {
        let m = BoxModuli::new(exact(zt)?, exact(zb)?).map_err(err)?;
        Ok(PyBox { inner: OvermarkedBox::from_moduli(&m).map_err(err)? })
    }

    /// Box from six homogeneous points `p, q, r, s, t, b`.
    #[new]
    fn new(points: Vec<Vec<Bound<'_, PyAny>>>) -> PyResult<Self> {
        if points.len() != 6 || points.iter().any(|p| p.len() != 3) {
            return Err(PyValueError::new_err("expected six points with three coordinates"));
        }
        let mut v = Vec::with_capacity(6);
        for p in &points {
            v.push(Vec3::new(exact(&p[0])?, exact(&p[1])?, exact(&p[2])?));
        }
        let v: [Vec3<Rational>; 6] = v.try_into().expect("six points");
        Ok(PyBox { inner: OvermarkedBox::from_vecs(v).map_err(err)? })
    }

    /// The six points as strings `"a/b"`.
    fn points(&self) -> Vec<Vec<String>> {
        self.inner.points.iter().map(|p| p.0 .0.iter().map(|x| x.to_string()).collect()).collect()
    }

    fn lines(&self) -> Vec<Vec<String>> {
        self.inner.lines.iter().map(|l| l.0 .0.iter().map(|x| x.to_string()).collect()).collect()
    }

    /// `(zt, zb)` as strings.
    fn moduli(&self) -> PyResult<(String, String)> {
        let m = self.inner.moduli().map_err(err)?;
        Ok((m.zeta_t.to_string(), m.zeta_b.to_string()))
    }

    fn is_convex(&self) -> PyResult<bool> {
        self.inner.is_convex().map_err(err)
    }

    #[pyo3(signature = (u=None, v=None))]
    fn i(&self, u: Option<&Bound<'_, PyAny>>, v: Option<&Bound<'_, PyAny>>) -> PyResult<Self> {
        let l = lambda_exact(u, v)?;
        Ok(PyBox { inner: self.inner.i_lambda(&l).map_err(err)? })
    }

    #[pyo3(signature = (u=None, v=None))]
    fn tau1(&self, u: Option<&Bound<'_, PyAny>>, v: Option<&Bound<'_, PyAny>>) -> PyResult<Self> {
        let l = lambda_exact(u, v)?;
        Ok(PyBox { inner: self.inner.tau1_lambda(&l).map_err(err)? })
    }

    #[pyo3(signature = (u=None, v=None))]
    fn tau2(&self, u: Option<&Bound<'_, PyAny>>, v: Option<&Bound<'_, PyAny>>) -> PyResult<Self> {
        let l = lambda_exact(u, v)?;
        Ok(PyBox { inner: self.inner.tau2_lambda(&l).map_err(err)? })
    }

    /// Equality as marked boxes.
    fn eq_marked(&self, other: &PyBox) -> bool {
        self.inner.eq_marked(&other.inner)
    }

    fn __eq__(&self, other: &PyBox) -> bool {
        self.inner.eq_overmarked(&other.inner)
    }

    /// The defining relations at `(u, v)`, by name.
    #[pyo3(signature = (u=None, v=None, mutate=false))]
    fn relations<'py>(
        &self,
        py: Python<'py>,
        u: Option<&Bound<'py, PyAny>>,
        v: Option<&Bound<'py, PyAny>>,
        mutate: bool,
    ) -> PyResult<Bound<'py, PyDict>> {
        let l = lambda_exact(u, v)?;
        let res = relation_suite(&self.inner, &l, mutate).map_err(err)?;
        let d = PyDict::new(py);
        for (name, ok) in RELATION_NAMES.iter().zip(res) {
            d.set_item(name, ok)?;
        }
        Ok(d)
    }

    fn __repr__(&self) -> String {
        format!("Box({:?})", self.points())
    }
}

/// Deformed representation at moduli `(zt, zb)` and `lambda = (eps, delta)`,
/// evaluated at the current working precision.
#[pyclass(name = "Representation", module = "pappus", frozen)]
struct PyRep {
    params: RepresentationParams<MpFloat>,
}

impl PyRep {
    fn f64_params(&self) -> RepresentationParams<f64> {
        let m = &self.params.moduli;
        let l = &self.params.lambda;
        RepresentationParams::new(
            BoxModuli::new(m.zeta_t.to_f64(), m.zeta_b.to_f64()).expect("valid moduli"),
            Lambda::from_exp(l.u.to_f64(), l.v.to_f64()).expect("positive"),
        )
    }
}

#[pymethods]
impl PyRep {
    #[new]
    #[pyo3(signature = (zt, zb, eps=None, delta=None))]
    fn new(
        zt: &Bound<'_, PyAny>,
        zb: &Bound<'_, PyAny>,
        eps: Option<&Bound<'_, PyAny>>,
        delta: Option<&Bound<'_, PyAny>>,
    ) -> PyResult<Self> {
        let m = BoxModuli::new(exact(zt)?, exact(zb)?).map_err(err)?;
        let num = |x: Option<&Bound<'_, PyAny>>| -> PyResult<MpFloat> {
            Ok(x.map(exact).transpose()?.map(|q| MpFloat::from_rational(&q)).unwrap_or_else(MpFloat::zero))
        };
        let lambda = Lambda::from_eps_delta(num(eps)?, num(delta)?);
        Ok(PyRep { params: RepresentationParams::new(m.convert(), lambda) })
    }

    /// Images `(A, B)` of `R` and `I`.
    fn matrices(&self) -> PyResult<(Vec<Vec<f64>>, Vec<Vec<f64>>)> {
        let m = self.params.matrices().map_err(err)?;
        Ok((rows(&m.a), rows(&m.b)))
    }

    fn evaluate(&self, word: &str) -> PyResult<Vec<Vec<f64>>> {
        Ok(rows(&self.params.evaluate(&parse_word(word)?).map_err(err)?))
    }

    /// Sorted eigenvalue moduli of the image of `word`.
    fn spectrum(&self, word: &str) -> PyResult<Vec<f64>> {
        let img = self.params.evaluate(&parse_word(word)?).map_err(err)?;
        Ok(eigen_real(&img).map_err(err)?.moduli.to_vec())
    }

    fn in_region(&self) -> bool {
        self.params.lambda.in_region()
    }

    fn in_region_interior(&self) -> bool {
        self.params.lambda.in_region_interior()
    }

    #[pyo3(signature = (strict=true))]
    fn nesting<'py>(&self, py: Python<'py>, strict: bool) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &anosov::nesting_check(&self.params, strict).map_err(err)?)
    }

    #[pyo3(signature = (max_len=6))]
    fn loxodromy_scan<'py>(&self, py: Python<'py>, max_len: usize) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &anosov::loxodromy_scan(&self.params, max_len).map_err(err)?)
    }

    /// Distortion constant of the base box over the crossing letters.
    #[pyo3(signature = (resolution=32, directions=32, refine=4))]
    fn constant_c(&self, resolution: usize, directions: usize, refine: usize) -> PyResult<f64> {
        anosov::constant_c(&self.f64_params(), DistortionConfig { resolution, directions, refine }).map_err(err)
    }

    /// Limit point and dual line of a periodic word in the index-2 subgroup.
    #[pyo3(signature = (word, tol=1e-12, max_depth=20_000))]
    fn limit_point<'py>(&self, py: Python<'py>, word: &str, tol: f64, max_depth: usize) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &anosov::limit_point(&self.params, &parse_word(word)?, tol, max_depth).map_err(err)?)
    }

    /// Largest entry of `Psi` at the family point, zero up to rounding.
    fn psi_residual(&self) -> PyResult<f64> {
        pappus::variety::psi_residual(&self.params).map_err(err)
    }
}

/// Convex quadrilateral in the affine chart `z = 1`.
#[pyclass(name = "Quad", module = "pappus", frozen)]
struct PyQuad {
    inner: ConvexQuad<f64>,
}

fn affine(p: (f64, f64)) -> Vec3<f64> {
    Vec3::new(p.0, p.1, 1.0)
}

#[pymethods]
impl PyQuad {
    /// Vertices in cyclic order.
    #[new]
    fn new(corners: [(f64, f64); 4]) -> PyResult<Self> {
        Ok(PyQuad { inner: ConvexQuad::from_affine(corners).map_err(err)? })
    }

    #[pyo3(signature = (x, strict=true))]
    fn contains(&self, x: (f64, f64), strict: bool) -> bool {
        self.inner.contains(&affine(x), strict)
    }

    fn contains_quad(&self, other: &PyQuad, strict: bool) -> bool {
        self.inner.contains_quad(&other.inner, strict)
    }

    fn hilbert_distance(&self, x: (f64, f64), y: (f64, f64)) -> PyResult<f64> {
        self.inner.hilbert_distance(&affine(x), &affine(y)).map_err(err)
    }

    /// Finsler norm of the affine velocity `v` at `x`.
    fn hilbert_norm(&self, x: (f64, f64), v: (f64, f64)) -> PyResult<f64> {
        self.inner.hilbert_norm(&affine(x), &Vec3::new(v.0, v.1, 0.0)).map_err(err)
    }

    /// Infimum over `self` of the ratio of the `outer` norm to the `self` norm.
    #[pyo3(signature = (outer, resolution=32, directions=32, refine=4))]
    fn distortion(&self, outer: &PyQuad, resolution: usize, directions: usize, refine: usize) -> PyResult<f64> {
        anosov::distortion_estimate(&self.inner, &outer.inner, DistortionConfig { resolution, directions, refine }).map_err(err)
    }
}

#[pymodule]
#[pyo3(name = "pappus")]
fn pappus_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    if let Some(bits) = scalar::precision_from_env() {
        scalar::set_precision(bits);
    }
    m.add("PappusError", m.py().get_type::<PappusError>())?;
    m.add_function(wrap_pyfunction!(set_precision, m)?)?;
    m.add_function(wrap_pyfunction!(precision, m)?)?;
    m.add_function(wrap_pyfunction!(normal_form, m)?)?;
    m.add_function(wrap_pyfunction!(solve_delta_h, m)?)?;
    m.add_class::<PyBox>()?;
    m.add_class::<PyRep>()?;
    m.add_class::<PyQuad>()?;
    Ok(())
}
