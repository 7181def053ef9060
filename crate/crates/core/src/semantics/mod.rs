//! Team semantics over finite models.
//!
//! A formula is satisfied by a team (a set of assignments) rather than by a
//! single assignment. [`satisfies`] decides this by exhaustive search over
//! disjunction splits and existential witnesses, bounded by a
//! [`SearchBudget`].

mod equiv;
mod eval;
mod model;
mod team;

pub use equiv::{equiv_on_small_models, Counterexample, Equivalence};
pub use eval::{
    dep_holds, eval_term, fo_satisfies, satisfies, sentence_true, EvalError, Evaluator, SearchBudget,
};
pub use model::{tuples, Function, Model, ModelError, Relation};
pub use team::{Assignment, Team, TeamError};
