//! Python bindings: sentences, structures, forbidden families and the main
//! decision procedures.

use pyo3::create_exception;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use snp_core::amalgamation::{decide_ap, decide_asnp, ApOptions, FamilyLimits, ForbiddenFamily};
use snp_core::eval::{check_closure_properties, equivalent_up_to, models_up_to, EvalLimits, Evaluator};
use snp_core::logic::{classify, parse_sentence, SnpSentence};
use snp_core::rewrites::{rewrite_connected, split_disconnected};
use snp_core::structure::text::write_structure;
use snp_core::{Error, Signature, Structure};

create_exception!(snp, CapExceeded, PyRuntimeError);

fn err(e: Error) -> PyErr {
    if e.is_cap() {
        CapExceeded::new_err(e.to_string())
    } else {
        PyValueError::new_err(e.to_string())
    }
}

#[pyclass(name = "Signature", frozen)]
struct PySignature {
    inner: Signature,
}

#[pymethods]
impl PySignature {
    #[new]
    fn new(symbols: Vec<(String, usize)>) -> PyResult<Self> {
        Ok(PySignature { inner: Signature::new(symbols).map_err(err)? })
    }

    fn symbols(&self) -> Vec<(String, usize)> {
        self.inner.symbols().iter().map(|s| (s.name.clone(), s.arity)).collect()
    }

    fn __repr__(&self) -> String {
        format!("Signature({})", self.inner)
    }
}

#[pyclass(name = "Structure")]
struct PyStructure {
    inner: Structure,
}

#[pymethods]
impl PyStructure {
    #[new]
    fn new(signature: &PySignature, size: usize) -> Self {
        PyStructure { inner: Structure::new(signature.inner.clone(), size) }
    }

    #[getter]
    fn size(&self) -> usize {
        self.inner.size()
    }

    #[getter]
    fn signature(&self) -> PySignature {
        PySignature { inner: self.inner.signature().clone() }
    }

    /// Adds a tuple; returns False if it was already present.
    fn insert(&mut self, symbol: &str, tuple: Vec<usize>) -> PyResult<bool> {
        self.inner.insert(symbol, &tuple).map_err(err)
    }

    fn contains(&self, symbol: &str, tuple: Vec<usize>) -> bool {
        self.inner.contains_named(symbol, &tuple)
    }

    fn tuples(&self, symbol: &str) -> PyResult<Vec<Vec<usize>>> {
        let i = self
            .inner
            .signature()
            .index_of(symbol)
            .ok_or_else(|| PyValueError::new_err(format!("unknown symbol {symbol}")))?;
        Ok(self.inner.tuples(i).collect())
    }

    fn __eq__(&self, other: &PyStructure) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        write_structure("A", "S", &self.inner).trim_end().to_string()
    }
}

fn wrap(s: Structure) -> PyStructure {
    PyStructure { inner: s }
}

#[pyclass(name = "Sentence", frozen)]
struct PySentence {
    inner: SnpSentence,
}

#[pymethods]
impl PySentence {
    /// Parses a sentence. Symbols in `signature` are input symbols; without
    /// one, every unquantified symbol is.
    #[staticmethod]
    #[pyo3(signature = (text, signature = None))]
    fn parse(text: &str, signature: Option<&PySignature>) -> PyResult<Self> {
        Ok(PySentence { inner: parse_sentence(text, signature.map(|s| &s.inner)).map_err(err)? })
    }

    #[getter]
    fn input_signature(&self) -> PySignature {
        PySignature { inner: self.inner.input_sig().clone() }
    }

    #[getter]
    fn existential_signature(&self) -> PySignature {
        PySignature { inner: self.inner.exist_sig().clone() }
    }

    fn classify<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let c = classify(&self.inner);
        let d = PyDict::new(py);
        d.set_item("monotone", c.monotone)?;
        d.set_item("monadic", c.monadic)?;
        d.set_item("connected", c.connected)?;
        d.set_item("guarded", c.guarded)?;
        d.set_item("witnesses", c.witnesses.iter().map(|w| w.to_string()).collect::<Vec<_>>())?;
        Ok(d)
    }

    fn satisfies(&self, structure: &PyStructure) -> PyResult<bool> {
        Evaluator::new(&self.inner, EvalLimits::default()).satisfies(&structure.inner).map_err(err)
    }

    /// A structure over the input and existential symbols that satisfies the
    /// matrix, or None.
    fn expansion(&self, structure: &PyStructure) -> PyResult<Option<PyStructure>> {
        let e = Evaluator::new(&self.inner, EvalLimits::default()).expansion(&structure.inner).map_err(err)?;
        Ok(e.map(|e| wrap(e.combined())))
    }

    /// One model per isomorphism class, up to `max_size` elements.
    fn models(&self, max_size: usize) -> PyResult<Vec<PyStructure>> {
        Ok(models_up_to(&self.inner, max_size, EvalLimits::default())
            .map_err(err)?
            .into_iter()
            .map(wrap)
            .collect())
    }

    fn equivalent(&self, other: &PySentence, max_size: usize) -> PyResult<bool> {
        Ok(equivalent_up_to(&self.inner, &other.inner, max_size, EvalLimits::default()).map_err(err)?.holds)
    }

    fn closure<'py>(&self, py: Python<'py>, max_size: usize) -> PyResult<Bound<'py, PyDict>> {
        let r = check_closure_properties(&self.inner, max_size, EvalLimits::default()).map_err(err)?;
        let d = PyDict::new(py);
        d.set_item("models", r.models)?;
        d.set_item("classes", r.classes)?;
        d.set_item("union_violations", r.union_violations.len())?;
        d.set_item("homomorphism_violations", r.homomorphism_violations.len())?;
        d.set_item("clean", r.is_clean())?;
        Ok(d)
    }

    fn rewrite_connected(&self) -> PyResult<PySentence> {
        Ok(PySentence { inner: rewrite_connected(&self.inner).map_err(err)? })
    }

    fn split(&self) -> PyResult<Vec<PySentence>> {
        Ok(split_disconnected(&self.inner)
            .map_err(err)?
            .into_iter()
            .map(|inner| PySentence { inner })
            .collect())
    }

    /// Returns (in_asnp, failed_stage).
    fn check_asnp(&self) -> PyResult<(bool, Option<String>)> {
        let v = decide_asnp(&self.inner, FamilyLimits::default(), &ApOptions::default()).map_err(err)?;
        Ok((v.in_asnp, v.failed.map(|s| s.name().to_string())))
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Sentence({:?})", self.inner.to_string())
    }
}

#[pyclass(name = "ForbiddenFamily", frozen)]
struct PyFamily {
    inner: ForbiddenFamily,
}

#[pymethods]
impl PyFamily {
    #[new]
    fn new(signature: &PySignature, members: Vec<PyRef<'_, PyStructure>>) -> PyResult<Self> {
        let members = members.iter().map(|m| m.inner.clone()).collect();
        Ok(PyFamily { inner: ForbiddenFamily::new(signature.inner.clone(), members).map_err(err)? })
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn admits(&self, structure: &PyStructure) -> PyResult<bool> {
        self.inner.admits(&structure.inner).map_err(err)
    }

    /// Decides the amalgamation property. Returns a dict with `holds`,
    /// `bound` and, on failure, `witness` as a (b0, b1, b2) triple.
    #[pyo3(signature = (strong = false, max_b0 = 8))]
    fn decide_ap<'py>(&self, py: Python<'py>, strong: bool, max_b0: usize) -> PyResult<Bound<'py, PyDict>> {
        let opts = ApOptions { strong, max_b0, ..Default::default() };
        let v = decide_ap(&self.inner, &opts).map_err(err)?;
        let d = PyDict::new(py);
        d.set_item("holds", v.holds)?;
        d.set_item("bound", v.bound)?;
        d.set_item("diagrams", v.diagrams)?;
        let witness = v
            .witness
            .map(|w| (wrap(w.b0().clone()), wrap(w.b1().clone()), wrap(w.b2().clone())));
        d.set_item("witness", witness)?;
        Ok(d)
    }
}

#[pymodule]
fn snp(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySignature>()?;
    m.add_class::<PyStructure>()?;
    m.add_class::<PySentence>()?;
    m.add_class::<PyFamily>()?;
    m.add("CapExceeded", m.py().get_type::<CapExceeded>())?;
    Ok(())
}
