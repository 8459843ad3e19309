//! Python bindings. Results cross the boundary as plain dicts and lists
//! built from the JSON form of the Rust types.

use std::path::PathBuf;

use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;
use serde::Serialize;

use tempqa::eval::{load_benchmark, run_benchmark, EvalError};
use tempqa::model::{Interval, TimePoint};
use tempqa::pipeline::{BackendSelector, PipelineConfig, PipelineError};
use tempqa::reasoner;
use tempqa::timex::{EventDictionary, Tagger};
use tempqa::TemporalRelation;

create_exception!(
    tempqa,
    TempqaError,
    PyException,
    "Base class for pipeline errors."
);
create_exception!(
    tempqa,
    ConfigError,
    TempqaError,
    "Bad configuration or missing input file."
);
create_exception!(
    tempqa,
    DataError,
    TempqaError,
    "Malformed KB, dictionary or benchmark data."
);

fn pipeline_error(e: PipelineError) -> PyErr {
    if e.is_data_error() {
        DataError::new_err(e.to_string())
    } else {
        ConfigError::new_err(e.to_string())
    }
}

fn eval_error(e: EvalError) -> PyErr {
    match e {
        EvalError::Io { .. } => ConfigError::new_err(e.to_string()),
        _ => DataError::new_err(e.to_string()),
    }
}

fn to_py(py: Python<'_>, value: &impl Serialize) -> PyResult<Py<PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    Ok(py.import("json")?.call_method1("loads", (text,))?.unbind())
}

fn parse_date(s: &str) -> PyResult<TimePoint> {
    s.parse()
        .map_err(|e: tempqa::model::ModelError| PyValueError::new_err(e.to_string()))
}

fn parse_interval(bounds: (Option<String>, Option<String>)) -> PyResult<Interval> {
    let begin = bounds.0.as_deref().map(parse_date).transpose()?;
    let end = bounds.1.as_deref().map(parse_date).transpose()?;
    Interval::new(begin, end).map_err(|e| PyValueError::new_err(e.to_string()))
}

fn parse_relation(s: &str) -> PyResult<TemporalRelation> {
    s.parse()
        .map_err(|e: tempqa::model::ModelError| PyValueError::new_err(e.to_string()))
}

/// The full question answering pipeline.
#[pyclass(name = "Pipeline", frozen)]
struct PyPipeline {
    inner: tempqa::Pipeline,
}

#[pymethods]
impl PyPipeline {
    #[new]
    #[pyo3(signature = (kb=None, embeddings=None, reference_date=None, backend="builtin"))]
    fn new(
        kb: Option<PathBuf>,
        embeddings: Option<PathBuf>,
        reference_date: Option<&str>,
        backend: &str,
    ) -> PyResult<Self> {
        let mut config = PipelineConfig {
            kb,
            embeddings,
            ..PipelineConfig::default()
        };
        if let Some(date) = reference_date {
            config.reference_date = parse_date(date)?;
        }
        config.backend = backend.parse::<BackendSelector>().map_err(pipeline_error)?;
        let inner = tempqa::Pipeline::from_config(&config).map_err(pipeline_error)?;
        Ok(Self { inner })
    }

    /// Detection result as a dict with `is_temporal` and `cues`.
    fn detect(&self, py: Python<'_>, question: &str) -> PyResult<Py<PyAny>> {
        to_py(py, &self.inner.detect(question))
    }

    fn is_temporal(&self, question: &str) -> bool {
        self.inner.detect(question).is_temporal
    }

    /// Sub-questions, relation, ordinal and case as a dict.
    fn decompose(&self, py: Python<'_>, question: &str) -> PyResult<Py<PyAny>> {
        let d = self
            .inner
            .decompose(question)
            .map_err(|e| PyValueError::new_err(e.to_string()))?;
        to_py(py, &d)
    }

    /// Final answers as strings: entity ids or ISO dates.
    fn answer(&self, py: Python<'_>, question: &str) -> Vec<String> {
        let outcome = py.detach(|| self.inner.answer_question(question));
        outcome
            .answers
            .values()
            .iter()
            .map(ToString::to_string)
            .collect()
    }

    /// Everything the pipeline produced for a question, including
    /// diagnostics.
    fn answer_full(&self, py: Python<'_>, question: &str) -> PyResult<Py<PyAny>> {
        let outcome = py.detach(|| self.inner.answer_question(question));
        to_py(py, &outcome)
    }

    /// Runs a benchmark file and returns the report as a dict.
    fn evaluate(&self, py: Python<'_>, benchmark: PathBuf) -> PyResult<Py<PyAny>> {
        let report = py.detach(|| {
            let items = load_benchmark(&benchmark)?;
            run_benchmark(&self.inner, &items)
        });
        to_py(py, &report.map_err(eval_error)?)
    }

    fn __repr__(&self) -> String {
        format!("{:?}", self.inner)
    }
}

/// Tags dates and times in `text`; relative ones resolve against
/// `reference_date`.
#[pyfunction]
#[pyo3(signature = (text, reference_date="2018-01-15"))]
fn tag(py: Python<'_>, text: &str, reference_date: &str) -> PyResult<Py<PyAny>> {
    let spans =
        Tagger::new(EventDictionary::new()).tag_with_reference(text, parse_date(reference_date)?);
    to_py(py, &spans)
}

/// Whether an answer interval satisfies a constraint, with intervals given
/// as `(begin, end)` ISO strings and `None` for an open side.
#[pyfunction]
fn satisfies(
    relation: &str,
    answer: (Option<String>, Option<String>),
    constraint: (Option<String>, Option<String>),
) -> PyResult<bool> {
    Ok(reasoner::satisfies(
        parse_relation(relation)?,
        &parse_interval(answer)?,
        &parse_interval(constraint)?,
    ))
}

/// Allen relation name between two closed intervals.
#[pyfunction]
fn allen_relation(first: (String, String), second: (String, String)) -> PyResult<String> {
    let a = parse_interval((Some(first.0), Some(first.1)))?;
    let b = parse_interval((Some(second.0), Some(second.1)))?;
    let relation =
        reasoner::allen_relation(&a, &b).map_err(|e| PyValueError::new_err(e.to_string()))?;
    let name = serde_json::to_value(relation).map_err(|e| PyValueError::new_err(e.to_string()))?;
    Ok(name.as_str().unwrap_or_default().to_string())
}

#[pymodule]
#[pyo3(name = "tempqa")]
fn tempqa_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPipeline>()?;
    m.add_function(wrap_pyfunction!(tag, m)?)?;
    m.add_function(wrap_pyfunction!(satisfies, m)?)?;
    m.add_function(wrap_pyfunction!(allen_relation, m)?)?;
    m.add("TempqaError", m.py().get_type::<TempqaError>())?;
    m.add("ConfigError", m.py().get_type::<ConfigError>())?;
    m.add("DataError", m.py().get_type::<DataError>())?;
    Ok(())
}
