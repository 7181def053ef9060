use super::eval::{EvalError, Evaluator, SearchBudget};
use super::model::{tuples, Model};
use super::team::Team;
use crate::syntax::{Formula, Var, VariableSet, Vocabulary};

/// A model and team on which two formulas disagree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub model: Model,
    pub team: Team,
    pub left: bool,
    pub right: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Equivalence {
    Equivalent,
    Counterexample(Box<Counterexample>),
}

impl Equivalence {
    pub fn holds(&self) -> bool {
        matches!(self, Equivalence::Equivalent)
    }
}

/// Compares `lhs` and `rhs` on every model with at most `max_size`
/// elements over their joint vocabulary, and every team over their joint
/// free variables. Each satisfaction query gets its own `budget`; the
/// number of teams per model is also bounded by it.
pub fn equiv_on_small_models(
    lhs: &Formula,
    rhs: &Formula,
    max_size: usize,
    budget: SearchBudget,
) -> Result<Equivalence, EvalError> {
    let voc = Vocabulary::of_formulas([lhs, rhs])?;
    let vars: Vec<Var> = lhs
        .free_vars()
        .union(&rhs.free_vars())
        .cloned()
        .collect::<VariableSet>()
        .into_iter()
        .collect();
    for size in 1..=max_size {
        let cells: Vec<Vec<usize>> = tuples(size, vars.len()).collect();
        if cells.len() >= 63 || (1u64 << cells.len()) > budget.max_choice_points() {
            return Err(EvalError::BudgetExceeded(budget.max_choice_points()));
        }
        for model in Model::enumerate(&voc, size) {
            for mask in 0u64..1 << cells.len() {
                let rows = cells
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, r)| r.clone());
                let team = Team::from_rows(&vars, rows).expect("distinct variables");
                let left = Evaluator::new(&model, budget).satisfies(&team, lhs)?;
                let right = Evaluator::new(&model, budget).satisfies(&team, rhs)?;
                if left != right {
                    return Ok(Equivalence::Counterexample(Box::new(Counterexample {
                        model,
                        team,
                        left,
                        right,
                    })));
                }
            }
        }
    }
    Ok(Equivalence::Equivalent)
}
