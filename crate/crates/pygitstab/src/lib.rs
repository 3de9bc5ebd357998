//! Python bindings: exact tensors, Hilbert-Mumford pairings, the
//! within-torus instability solver, and a JSON passthrough to the command
//! dispatch. All rationals cross the boundary as `"p/q"` strings.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use gitstab::kempf;
use gitstab::lattice::{weighted_flag_of, OnePS, WeightedFlag};
use gitstab::oracles;
use gitstab::rat::{rat_from_str, rat_to_string, Rat};
use gitstab::tensor::{self, Component, DecType, SparseTensor};

fn to_py_err(e: gitstab::Error) -> PyErr {
    match e {
        gitstab::Error::Input(msg) => PyValueError::new_err(msg),
        gitstab::Error::Certificate(msg) => PyRuntimeError::new_err(msg),
    }
}

fn parse_lambda(weights: Vec<i64>) -> PyResult<OnePS> {
    if weights.iter().sum::<i64>() == 0 {
        OnePS::sl(weights).map_err(to_py_err)
    } else {
        Ok(OnePS::gl(weights))
    }
}

fn parse_alphas(alphas: Vec<String>) -> PyResult<Vec<Rat>> {
    alphas
        .iter()
        .map(|s| rat_from_str(s).map_err(to_py_err))
        .collect()
}

fn parse_flag(n: usize, dims: Vec<usize>, alphas: Vec<String>) -> PyResult<WeightedFlag> {
    WeightedFlag::new(n, dims, parse_alphas(alphas)?).map_err(to_py_err)
}

/// Verdict of the within-torus minimization with its certificate data.
#[pyclass(frozen)]
struct Instability {
    #[pyo3(get)]
    verdict: String,
    #[pyo3(get)]
    lambda_star: Option<Vec<i64>>,
    #[pyo3(get)]
    q: Option<i64>,
    #[pyo3(get)]
    m0_sq: Option<String>,
    #[pyo3(get)]
    flag_dims: Option<Vec<usize>>,
    #[pyo3(get)]
    flag_alphas: Option<Vec<String>>,
}

impl Instability {
    fn from_result(r: &kempf::InstabilityResult) -> Self {
        Instability {
            verdict: match r.verdict {
                kempf::Verdict::TorusSemistable => "torus-semistable".into(),
                kempf::Verdict::Unstable => "unstable".into(),
            },
            lambda_star: r.lambda_star.as_ref().map(|l| l.weights.clone()),
            q: r.q,
            m0_sq: r.m0_sq.as_ref().map(rat_to_string),
            flag_dims: r.flag.as_ref().map(|f| f.dims.clone()),
            flag_alphas: r
                .flag
                .as_ref()
                .map(|f| f.alphas.iter().map(rat_to_string).collect()),
        }
    }
}

/// A sparse exact tensor of a decoration type over a rank-`r` space.
/// Terms are `(component, copy, multiindex, coeff)` with 1-based
/// multiindex entries and `"p/q"` coefficients.
#[pyclass]
struct Tensor {
    inner: SparseTensor,
}

#[pymethods]
impl Tensor {
    #[new]
    fn new(
        r: usize,
        components: Vec<(u32, u32, u32)>,
        terms: Vec<(usize, usize, Vec<u8>, String)>,
    ) -> PyResult<Self> {
        let dec = DecType::new_unchecked(
            r,
            components
                .into_iter()
                .map(|(a, b, c)| Component { a, b, c })
                .collect(),
        );
        let raw = terms
            .into_iter()
            .map(|(comp, copy, mi, coeff)| {
                Ok(((comp, copy, mi), rat_from_str(&coeff).map_err(to_py_err)?))
            })
            .collect::<PyResult<Vec<_>>>()?;
        Ok(Tensor {
            inner: SparseTensor::new(dec, raw).map_err(to_py_err)?,
        })
    }

    #[getter]
    fn r(&self) -> usize {
        self.inner.r()
    }

    fn states(&self) -> Vec<Vec<i64>> {
        tensor::state_set(&self.inner)
            .into_iter()
            .map(|c| c.coords)
            .collect()
    }

    fn mu(&self, lam: Vec<i64>) -> PyResult<i64> {
        tensor::mu(&parse_lambda(lam)?, &self.inner).map_err(to_py_err)
    }

    fn mu_filtration(&self, dims: Vec<usize>, alphas: Vec<String>) -> PyResult<String> {
        let flag = parse_flag(self.inner.r(), dims, alphas)?;
        Ok(rat_to_string(
            &tensor::mu_filtration_tensor(&flag, &self.inner).map_err(to_py_err)?,
        ))
    }

    fn torus_instability(&self) -> PyResult<Instability> {
        Ok(Instability::from_result(
            &kempf::torus_instability(&self.inner).map_err(to_py_err)?,
        ))
    }

    fn torus_polystable(&self) -> PyResult<bool> {
        kempf::torus_polystable(&self.inner).map_err(to_py_err)
    }

    #[pyo3(signature = (restarts=0, seed=0))]
    fn kempf_search(&self, restarts: usize, seed: u64) -> PyResult<Instability> {
        Ok(Instability::from_result(
            &kempf::kempf_search(&self.inner, restarts, seed)
                .map_err(to_py_err)?
                .result,
        ))
    }

    fn brute_force(&self, box_bound: i64) -> PyResult<Option<(Vec<i64>, i64, i64)>> {
        Ok(oracles::brute_force_instability(&self.inner, box_bound)
            .map_err(to_py_err)?
            .map(|b| (b.lambda.weights, b.q, b.norm_sq)))
    }

    #[pyo3(signature = (dims, alphas, multiplier=1))]
    fn nu(&self, dims: Vec<usize>, alphas: Vec<String>, multiplier: i64) -> PyResult<String> {
        let flag = parse_flag(self.inner.r(), dims, alphas)?;
        let plan = gitstab::homogenize::choose_omega(&self.inner.dec_type, multiplier)
            .map_err(to_py_err)?;
        Ok(rat_to_string(
            &gitstab::homogenize::nu_filtration(&flag, &self.inner, &plan).map_err(to_py_err)?,
        ))
    }

    fn __repr__(&self) -> String {
        format!(
            "Tensor(r={}, components={}, terms={})",
            self.inner.r(),
            self.inner.dec_type.components.len(),
            self.inner.terms.len()
        )
    }
}

/// Weighted flag of a one-parameter subgroup:
/// `(dims, alphas, sorting_permutation)`.
#[pyfunction]
fn weighted_flag(lam: Vec<i64>) -> PyResult<(Vec<usize>, Vec<String>, Vec<usize>)> {
    let (flag, perm) = weighted_flag_of(&parse_lambda(lam)?);
    Ok((
        flag.dims,
        flag.alphas.iter().map(rat_to_string).collect(),
        perm,
    ))
}

/// Block sizes and exponents of the instability character.
#[pyfunction]
fn instability_character(lam: Vec<i64>) -> PyResult<Vec<(usize, i64)>> {
    Ok(kempf::instability_character(&parse_lambda(lam)?))
}

/// The invariant symmetric form example: `basis` is `"standard"` or
/// `"hyperbolic"`.
#[pyfunction]
fn orthogonal_example(r: usize, basis: &str) -> PyResult<Tensor> {
    let b = match basis {
        "standard" => oracles::OrthBasis::Standard,
        "hyperbolic" => oracles::OrthBasis::Hyperbolic,
        other => {
            return Err(PyValueError::new_err(format!(
                "basis must be \"standard\" or \"hyperbolic\", got {other:?}"
            )))
        }
    };
    let (_, w) = oracles::orthogonal_example(r, b).map_err(to_py_err)?;
    Ok(Tensor { inner: w })
}

/// The bracket of the three-dimensional simple Lie algebra.
#[pyfunction]
fn adjoint_example() -> Tensor {
    let (_, w) = oracles::adjoint_example();
    Tensor { inner: w }
}

/// Runs a command on a problem document (JSON text, format `gitstab/1`)
/// and returns the result document as JSON text. Commands as in
/// `gitstab::cli::run_on_document`.
#[pyfunction]
fn run(command: &str, problem_json: &str) -> PyResult<String> {
    let doc: serde_json::Value = serde_json::from_str(problem_json)
        .map_err(|e| PyValueError::new_err(format!("invalid JSON: {e}")))?;
    let out = gitstab::cli::run_on_document(command, &doc).map_err(to_py_err)?;
    serde_json::to_string_pretty(&out).map_err(|e| PyRuntimeError::new_err(e.to_string()))
}

/// The bundled example problem files as `(name, json_text)` pairs.
#[pyfunction]
fn example_documents() -> Vec<(String, String)> {
    gitstab::cli::example_documents()
        .into_iter()
        .map(|(name, doc)| {
            (
                name.to_string(),
                serde_json::to_string_pretty(&doc).expect("finite document"),
            )
        })
        .collect()
}

#[pymodule]
fn pygitstab(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Tensor>()?;
    m.add_class::<Instability>()?;
    m.add_function(wrap_pyfunction!(weighted_flag, m)?)?;
    m.add_function(wrap_pyfunction!(instability_character, m)?)?;
    m.add_function(wrap_pyfunction!(orthogonal_example, m)?)?;
    m.add_function(wrap_pyfunction!(adjoint_example, m)?)?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    m.add_function(wrap_pyfunction!(example_documents, m)?)?;
    Ok(())
}
