//! Python bindings for `nontrans-core`.

use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyInt};

use nontrans_core::adversary;
use nontrans_core::patterns::{self, Pattern};
use nontrans_core::recognizers::{self, builtin};
use nontrans_core::simulation::{self, SequenceDistribution};
use nontrans_core::tournament::{self, Entrant};
use nontrans_core::verify;

create_exception!(nontrans, NontransError, PyValueError);
create_exception!(nontrans, IncorrectTreeError, NontransError);

fn err(e: nontrans_core::Error) -> PyErr {
    match e {
        nontrans_core::Error::Incorrect(_) => IncorrectTreeError::new_err(e.to_string()),
        other => NontransError::new_err(other.to_string()),
    }
}

/// Arbitrary-precision integer from its decimal text.
fn big_int<'py>(py: Python<'py>, digits: &str) -> PyResult<Bound<'py, PyAny>> {
    py.get_type::<PyInt>().call1((digits,))
}

#[pyclass(module = "nontrans", frozen)]
struct Universe {
    inner: patterns::Universe,
}

#[pymethods]
impl Universe {
    #[staticmethod]
    fn theorem1() -> Self {
        Universe {
            inner: patterns::theorem1_universe(),
        }
    }

    #[staticmethod]
    fn theorem2(n: usize) -> PyResult<Self> {
        Ok(Universe {
            inner: patterns::theorem2_universe(n).map_err(err)?,
        })
    }

    /// Parses the `L=<n>` / `name: template ...` text format.
    #[staticmethod]
    fn from_text(text: &str) -> PyResult<Self> {
        Ok(Universe {
            inner: patterns::Universe::from_text(text).map_err(err)?,
        })
    }

    fn to_text(&self) -> String {
        self.inner.to_text()
    }

    fn fingerprint(&self) -> String {
        self.inner.fingerprint()
    }

    #[getter]
    fn sign_count(&self) -> usize {
        self.inner.sign_count()
    }

    fn image_names(&self) -> Vec<String> {
        self.inner
            .image_names()
            .into_iter()
            .map(String::from)
            .collect()
    }

    fn image_sizes(&self) -> Vec<usize> {
        self.inner.image_sizes()
    }

    /// Patterns as bit strings, in ordinal order.
    fn patterns(&self) -> Vec<String> {
        self.inner
            .patterns()
            .iter()
            .map(Pattern::to_string)
            .collect()
    }

    /// Image index of a bit-string pattern, or `None` outside the universe.
    fn image_of(&self, pattern: &str) -> PyResult<Option<usize>> {
        let x: Pattern = pattern.parse().map_err(err)?;
        Ok(self.inner.image_of(&x))
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!(
            "Universe(L={}, patterns={}, images={})",
            self.inner.sign_count(),
            self.inner.len(),
            self.inner.images().len()
        )
    }
}

#[pyclass(module = "nontrans", frozen, eq)]
#[derive(PartialEq)]
struct Tree {
    inner: recognizers::DecisionTree,
}

#[pymethods]
impl Tree {
    /// Parses `(P<k> <true> <false>)` / `a<i>` against `universe`.
    #[staticmethod]
    fn parse(text: &str, universe: &Universe) -> PyResult<Self> {
        Ok(Tree {
            inner: recognizers::parse_tree(text, &universe.inner).map_err(err)?,
        })
    }

    /// One of `A`, `B`, `C`, `C-misprinted`, `split-peel`, `split-separate`.
    #[staticmethod]
    fn builtin(name: &str) -> PyResult<Self> {
        builtin::by_name(name)
            .map(|inner| Tree { inner })
            .ok_or_else(|| NontransError::new_err(format!("unknown builtin {name:?}")))
    }

    #[staticmethod]
    fn spine(n: usize, q: usize) -> PyResult<Self> {
        Ok(Tree {
            inner: recognizers::spine_algorithm(n, q).map_err(err)?,
        })
    }

    fn format(&self, universe: &Universe) -> String {
        recognizers::format_tree(&self.inner, &universe.inner)
    }

    /// `(image, time)` for a bit-string pattern.
    fn classify(&self, pattern: &str) -> PyResult<(usize, u32)> {
        let x: Pattern = pattern.parse().map_err(err)?;
        let c = self.inner.classify(&x);
        Ok((c.image, c.time))
    }

    fn is_correct(&self, universe: &Universe) -> PyResult<bool> {
        Ok(recognizers::check_correct(&self.inner, &universe.inner)
            .map_err(err)?
            .is_correct())
    }

    fn is_reduced(&self, universe: &Universe) -> bool {
        self.inner.is_reduced(&universe.inner)
    }

    #[getter]
    fn depth(&self) -> u32 {
        self.inner.depth()
    }

    fn __repr__(&self) -> String {
        format!("Tree({:?})", self.inner)
    }
}

fn entrants(trees: Vec<(String, PyRef<'_, Tree>)>) -> Vec<Entrant> {
    trees
        .into_iter()
        .map(|(label, t)| Entrant::new(label, t.inner.clone()))
        .collect()
}

/// `(V(a, b), V(b, a))`.
#[pyfunction]
fn pairwise_wins(a: &Tree, b: &Tree, universe: &Universe) -> PyResult<(u64, u64)> {
    tournament::pairwise_wins(&a.inner, &b.inner, &universe.inner).map_err(err)
}

#[pyfunction]
fn compare<'py>(
    py: Python<'py>,
    a: &Tree,
    b: &Tree,
    universe: &Universe,
) -> PyResult<Bound<'py, PyDict>> {
    let c = tournament::compare(&a.inner, &b.inner, &universe.inner).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("outcome", c.outcome.as_str())?;
    d.set_item("wins_first", c.wins_first)?;
    d.set_item("wins_second", c.wins_second)?;
    d.set_item("ties", c.ties)?;
    d.set_item("margin", c.margin())?;
    Ok(d)
}

/// Rows of rendered recognition times, one per image.
#[pyfunction]
fn time_table(
    trees: Vec<(String, PyRef<'_, Tree>)>,
    universe: &Universe,
) -> PyResult<Vec<Vec<String>>> {
    let t = tournament::render_time_table(&entrants(trees), &universe.inner).map_err(err)?;
    Ok(t.cells)
}

/// Whether each tree beats the next, wrapping around.
#[pyfunction]
fn verify_cycle(trees: Vec<(String, PyRef<'_, Tree>)>, universe: &Universe) -> PyResult<bool> {
    Ok(tournament::verify_cycle(&entrants(trees), &universe.inner)
        .map_err(err)?
        .holds)
}

/// `(margin, witness, states_explored)` for the best correct reduced tree
/// against `target`.
#[pyfunction]
fn max_margin_vs(target: &Tree, universe: &Universe) -> PyResult<(i64, Tree, usize)> {
    let r = adversary::max_margin_vs(&target.inner, &universe.inner).map_err(err)?;
    Ok((r.margin, Tree { inner: r.witness }, r.states_explored))
}

/// `(min_margin, margins, witness)` maximizing the worst margin over all
/// targets at once.
#[pyfunction]
fn max_min_margin(
    targets: Vec<PyRef<'_, Tree>>,
    universe: &Universe,
) -> PyResult<(i64, Vec<i64>, Tree)> {
    let trees: Vec<_> = targets.iter().map(|t| t.inner.clone()).collect();
    let r = adversary::max_min_margin(&trees, &universe.inner).map_err(err)?;
    Ok((r.min_margin, r.margins, Tree { inner: r.witness }))
}

#[pyfunction]
fn count_reduced_trees<'py>(py: Python<'py>, universe: &Universe) -> PyResult<Bound<'py, PyAny>> {
    let n = adversary::count_reduced_trees(&universe.inner).map_err(err)?;
    big_int(py, &n.to_string())
}

/// Exact expected wins under the uniform distribution, as a `Fraction`.
#[pyfunction]
fn expected_wins<'py>(
    py: Python<'py>,
    a: &Tree,
    b: &Tree,
    universe: &Universe,
    steps: u64,
) -> PyResult<Bound<'py, PyAny>> {
    let dist = SequenceDistribution::uniform(&universe.inner);
    let e = simulation::expected_wins(&a.inner, &b.inner, &universe.inner, &dist, steps)
        .map_err(err)?;
    let fraction = py.import("fractions")?.getattr("Fraction")?;
    fraction.call1((
        big_int(py, &e.numer().to_string())?,
        big_int(py, &e.denom().to_string())?,
    ))
}

#[pyfunction]
#[pyo3(signature = (a, b, universe, steps, trials = 1, seed = 0))]
fn simulate<'py>(
    py: Python<'py>,
    a: &Tree,
    b: &Tree,
    universe: &Universe,
    steps: u64,
    trials: u64,
    seed: u64,
) -> PyResult<Bound<'py, PyDict>> {
    let dist = SequenceDistribution::uniform(&universe.inner);
    let r = py
        .detach(|| {
            simulation::simulate(
                &a.inner,
                &b.inner,
                &universe.inner,
                &dist,
                steps,
                trials,
                seed,
            )
        })
        .map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("steps", r.steps)?;
    d.set_item("trials", r.trials)?;
    d.set_item("seed", r.seed)?;
    d.set_item("wins", r.wins)?;
    d.set_item("empirical_win_fraction", r.empirical_win_fraction)?;
    d.set_item("exact_expectation", r.exact_expectation)?;
    d.set_item("exact_win_fraction", r.exact_win_fraction)?;
    d.set_item("standard_error", r.standard_error)?;
    Ok(d)
}

/// `(passed, report_text)`.
#[pyfunction]
fn verify_theorem1() -> (bool, String) {
    let r = verify::verify_theorem1();
    (r.passed, r.to_text())
}

/// `(passed, report_text)`; `mode` is `"exact"` or `"image-level"`.
#[pyfunction]
#[pyo3(signature = (n, mode = "exact"))]
fn verify_theorem2(n: usize, mode: &str) -> PyResult<(bool, String)> {
    let mode: verify::Mode = mode.parse().map_err(err)?;
    let r = verify::verify_theorem2(n, mode).map_err(err)?;
    Ok((r.passed, r.to_text()))
}

#[pymodule]
fn nontrans(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Universe>()?;
    m.add_class::<Tree>()?;
    m.add("NontransError", m.py().get_type::<NontransError>())?;
    m.add(
        "IncorrectTreeError",
        m.py().get_type::<IncorrectTreeError>(),
    )?;
    m.add_function(wrap_pyfunction!(pairwise_wins, m)?)?;
    m.add_function(wrap_pyfunction!(compare, m)?)?;
    m.add_function(wrap_pyfunction!(time_table, m)?)?;
    m.add_function(wrap_pyfunction!(verify_cycle, m)?)?;
    m.add_function(wrap_pyfunction!(max_margin_vs, m)?)?;
    m.add_function(wrap_pyfunction!(max_min_margin, m)?)?;
    m.add_function(wrap_pyfunction!(count_reduced_trees, m)?)?;
    m.add_function(wrap_pyfunction!(expected_wins, m)?)?;
    m.add_function(wrap_pyfunction!(simulate, m)?)?;
    m.add_function(wrap_pyfunction!(verify_theorem1, m)?)?;
    m.add_function(wrap_pyfunction!(verify_theorem2, m)?)?;
    Ok(())
}
