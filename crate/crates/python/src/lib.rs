//! Python bindings for `deplogic`.
//!
//! ```python
//! import deplogic
//! voc = deplogic.Vocabulary("constant c")
//! phi = deplogic.Formula.parse("forall x. exists y. dep(x, y) & y != c", voc)
//! m = deplogic.Model.parse("domain 3\nconstant c = 0")
//! assert deplogic.sentence_true(m, phi)
//! ```

use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use deplogic::approx::{approximation_chain_check, build_approximation, build_omega};
use deplogic::io::{
    parse_formula, parse_model, parse_proof, parse_team, parse_vocabulary, print_formula_with, print_model,
    print_team, Notation, ParseError as CoreParseError, SourceText,
};
use deplogic::kernel::check_proof as core_check_proof;
use deplogic::normal_form::to_normal_form;
use deplogic::semantics::{
    equiv_on_small_models, satisfies as core_satisfies, EvalError, Equivalence, Model as CoreModel, SearchBudget,
    Team as CoreTeam,
};
use deplogic::syntax::{alpha_equal, Formula as CoreFormula, Var, Vocabulary as CoreVocabulary};

create_exception!(deplogic, DeplogicError, PyValueError, "Base class for errors raised by deplogic.");
create_exception!(deplogic, ParseError, DeplogicError, "Malformed formula, model, team or proof text.");
create_exception!(deplogic, BudgetExceeded, DeplogicError, "The search budget ran out.");

fn parse_err(e: CoreParseError) -> PyErr {
    ParseError::new_err(e.to_string())
}

fn eval_err(e: EvalError) -> PyErr {
    match e {
        EvalError::BudgetExceeded(_) => BudgetExceeded::new_err(e.to_string()),
        other => DeplogicError::new_err(other.to_string()),
    }
}

fn other_err(e: impl std::fmt::Display) -> PyErr {
    DeplogicError::new_err(e.to_string())
}

fn budget(limit: Option<u64>) -> PyResult<SearchBudget> {
    match limit {
        None => Ok(SearchBudget::default()),
        Some(n) => SearchBudget::new(n).ok_or_else(|| DeplogicError::new_err("the budget must be positive")),
    }
}

fn vocabulary(voc: Option<&Vocabulary>) -> CoreVocabulary {
    voc.map(|v| v.inner.clone()).unwrap_or_default()
}

/// Declared constants, relation and function symbols.
#[pyclass(frozen, skip_from_py_object, module = "deplogic")]
#[derive(Clone)]
pub struct Vocabulary {
    inner: CoreVocabulary,
}

#[pymethods]
impl Vocabulary {
    /// Parses declarations such as `"constant c; relation R/2; function f/1"`.
    #[new]
    #[pyo3(signature = (declarations = ""))]
    fn new(declarations: &str) -> PyResult<Self> {
        let inner = parse_vocabulary(&SourceText::inline(declarations)).map_err(parse_err)?;
        Ok(Vocabulary { inner })
    }

    fn has_constant(&self, name: &str) -> bool {
        self.inner.has_constant(name)
    }

    fn relation_arity(&self, name: &str) -> Option<usize> {
        self.inner.relation_arity(name)
    }

    fn function_arity(&self, name: &str) -> Option<usize> {
        self.inner.function_arity(name)
    }

    fn __eq__(&self, other: &Vocabulary) -> bool {
        self.inner == other.inner
    }
}

#[pyclass(frozen, from_py_object, module = "deplogic")]
#[derive(Clone)]
pub struct Formula {
    inner: CoreFormula,
}

#[pymethods]
impl Formula {
    #[staticmethod]
    #[pyo3(signature = (text, vocabulary = None))]
    fn parse(text: &str, vocabulary: Option<&Vocabulary>) -> PyResult<Self> {
        let inner = parse_formula(&SourceText::inline(text), &self::vocabulary(vocabulary)).map_err(parse_err)?;
        Ok(Formula { inner })
    }

    /// Prints with `forall`, `exists`, `&`, `|` and `~`.
    fn to_ascii(&self) -> String {
        print_formula_with(&self.inner, Notation::Ascii)
    }

    fn free_vars(&self) -> Vec<String> {
        self.inner.free_vars_ordered().iter().map(|v| v.name().to_owned()).collect()
    }

    fn is_sentence(&self) -> bool {
        self.inner.is_sentence()
    }

    fn is_first_order(&self) -> bool {
        self.inner.is_first_order()
    }

    fn depth(&self) -> usize {
        self.inner.depth()
    }

    /// Equality up to renaming of bound variables.
    fn alpha_equal(&self, other: &Formula) -> bool {
        alpha_equal(&self.inner, &other.inner)
    }

    fn __eq__(&self, other: &Formula) -> bool {
        self.inner == other.inner
    }

    fn __str__(&self) -> String {
        print_formula_with(&self.inner, Notation::Unicode)
    }

    fn __repr__(&self) -> String {
        format!("Formula.parse({:?})", self.to_ascii())
    }
}

#[pyclass(frozen, skip_from_py_object, module = "deplogic")]
#[derive(Clone)]
pub struct Model {
    inner: CoreModel,
}

#[pymethods]
impl Model {
    /// Reads the model file format (`domain 3`, `constant c = 0`, ...).
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        let (_, inner) = parse_model(&SourceText::inline(text)).map_err(parse_err)?;
        Ok(Model { inner })
    }

    #[getter]
    fn size(&self) -> usize {
        self.inner.size()
    }

    fn vocabulary(&self) -> Vocabulary {
        Vocabulary {
            inner: self.inner.vocabulary(),
        }
    }

    fn constant(&self, name: &str) -> Option<usize> {
        self.inner.constant(name)
    }

    fn __eq__(&self, other: &Model) -> bool {
        self.inner == other.inner
    }

    fn __str__(&self) -> String {
        print_model(&self.inner)
    }
}

/// A set of assignments over a common list of variables.
#[pyclass(frozen, skip_from_py_object, module = "deplogic")]
#[derive(Clone)]
pub struct Team {
    inner: CoreTeam,
}

#[pymethods]
impl Team {
    /// The team holding only the empty assignment.
    #[staticmethod]
    fn unit() -> Self {
        Team { inner: CoreTeam::unit() }
    }

    #[staticmethod]
    fn from_rows(vars: Vec<String>, rows: Vec<Vec<usize>>) -> PyResult<Self> {
        let vars: Vec<Var> = vars.iter().map(|v| Var::new(v)).collect();
        let inner = CoreTeam::from_rows(&vars, rows).map_err(other_err)?;
        Ok(Team { inner })
    }

    /// Reads the team file format, checking values against `model`.
    #[staticmethod]
    fn parse(text: &str, model: &Model) -> PyResult<Self> {
        let inner = parse_team(&SourceText::inline(text), &model.inner).map_err(parse_err)?;
        Ok(Team { inner })
    }

    #[getter]
    fn vars(&self) -> Vec<String> {
        self.inner.vars().iter().map(|v| v.name().to_owned()).collect()
    }

    /// Rows in the order of `vars`.
    fn rows(&self) -> Vec<Vec<usize>> {
        self.inner.rows().iter().cloned().collect()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __eq__(&self, other: &Team) -> bool {
        self.inner == other.inner
    }

    fn __str__(&self) -> String {
        print_team(&self.inner)
    }
}

/// Outcome of checking a proof script.
#[pyclass(frozen, module = "deplogic")]
pub struct ProofReport {
    #[pyo3(get)]
    accepted: bool,
    /// `(step, message)` pairs.
    #[pyo3(get)]
    failures: Vec<(usize, String)>,
    #[pyo3(get)]
    open_assumptions: Vec<usize>,
    text: String,
}

#[pymethods]
impl ProofReport {
    fn __bool__(&self) -> bool {
        self.accepted
    }

    fn __str__(&self) -> String {
        self.text.clone()
    }
}

#[pyfunction]
#[pyo3(signature = (model, team, formula, budget = None))]
fn satisfies(model: &Model, team: &Team, formula: &Formula, budget: Option<u64>) -> PyResult<bool> {
    let size = model.inner.size();
    if team.inner.rows().iter().flatten().any(|&a| a >= size) {
        return Err(DeplogicError::new_err(format!("team values must be below the domain size {size}")));
    }
    core_satisfies(&model.inner, &team.inner, &formula.inner, self::budget(budget)?).map_err(eval_err)
}

#[pyfunction]
#[pyo3(signature = (model, formula, budget = None))]
fn sentence_true(model: &Model, formula: &Formula, budget: Option<u64>) -> PyResult<bool> {
    deplogic::semantics::sentence_true(&model.inner, &formula.inner, self::budget(budget)?).map_err(eval_err)
}

/// The normal form `forall* exists* (dep atoms & quantifier-free)` of a sentence.
#[pyfunction]
fn normalize(formula: &Formula) -> PyResult<Formula> {
    let nf = to_normal_form(&formula.inner).map_err(other_err)?;
    Ok(Formula { inner: nf.to_formula() })
}

/// The `n`th approximation of a sentence, taken through its normal form.
#[pyfunction]
#[pyo3(signature = (formula, n, omega = false))]
fn approximation(formula: &Formula, n: usize, omega: bool) -> PyResult<Formula> {
    let nf = to_normal_form(&formula.inner).map_err(other_err)?;
    let built = if omega { build_omega(&nf, n) } else { build_approximation(&nf, n) };
    Ok(Formula {
        inner: built.map_err(other_err)?,
    })
}

/// Truth of the first `up_to` approximations in `model`.
#[pyfunction]
#[pyo3(signature = (formula, model, up_to, budget = None))]
fn chain(formula: &Formula, model: &Model, up_to: usize, budget: Option<u64>) -> PyResult<Vec<bool>> {
    let nf = to_normal_form(&formula.inner).map_err(other_err)?;
    approximation_chain_check(&nf, &model.inner, up_to, self::budget(budget)?).map_err(eval_err)
}

/// `None` if no model up to `max_size` separates the formulas, otherwise
/// `(model, team, left, right)`.
#[pyfunction]
#[pyo3(signature = (left, right, max_size = 3, budget = None))]
fn counterexample(
    left: &Formula,
    right: &Formula,
    max_size: usize,
    budget: Option<u64>,
) -> PyResult<Option<(Model, Team, bool, bool)>> {
    match equiv_on_small_models(&left.inner, &right.inner, max_size, self::budget(budget)?).map_err(eval_err)? {
        Equivalence::Equivalent => Ok(None),
        Equivalence::Counterexample(c) => Ok(Some((Model { inner: c.model }, Team { inner: c.team }, c.left, c.right))),
    }
}

#[pyfunction]
#[pyo3(signature = (left, right, max_size = 3, budget = None))]
fn equivalent(left: &Formula, right: &Formula, max_size: usize, budget: Option<u64>) -> PyResult<bool> {
    Ok(counterexample(left, right, max_size, budget)?.is_none())
}

#[pyfunction]
#[pyo3(signature = (script, vocabulary = None, hypotheses = Vec::new()))]
fn check_proof(script: &str, vocabulary: Option<&Vocabulary>, hypotheses: Vec<Formula>) -> PyResult<ProofReport> {
    let proof = parse_proof(&SourceText::inline(script), &self::vocabulary(vocabulary)).map_err(parse_err)?;
    let hyps: Vec<CoreFormula> = hypotheses.into_iter().map(|h| h.inner).collect();
    let report = core_check_proof(&proof, &hyps);
    Ok(ProofReport {
        accepted: report.accepted,
        failures: report.failures.iter().map(|(i, d)| (*i, d.message.clone())).collect(),
        open_assumptions: report.open_assumptions.clone(),
        text: report.to_string(),
    })
}

#[pymodule]
#[pyo3(name = "deplogic")]
pub fn init(m: &Bound<'_, PyModule>) -> PyResult<()> {
    let py = m.py();
    m.add("DeplogicError", py.get_type::<DeplogicError>())?;
    m.add("ParseError", py.get_type::<ParseError>())?;
    m.add("BudgetExceeded", py.get_type::<BudgetExceeded>())?;
    m.add_class::<Vocabulary>()?;
    m.add_class::<Formula>()?;
    m.add_class::<Model>()?;
    m.add_class::<Team>()?;
    m.add_class::<ProofReport>()?;
    m.add_function(wrap_pyfunction!(satisfies, m)?)?;
    m.add_function(wrap_pyfunction!(sentence_true, m)?)?;
    m.add_function(wrap_pyfunction!(normalize, m)?)?;
    m.add_function(wrap_pyfunction!(approximation, m)?)?;
    m.add_function(wrap_pyfunction!(chain, m)?)?;
    m.add_function(wrap_pyfunction!(equivalent, m)?)?;
    m.add_function(wrap_pyfunction!(counterexample, m)?)?;
    m.add_function(wrap_pyfunction!(check_proof, m)?)?;
    Ok(())
}
