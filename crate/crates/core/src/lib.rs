//! Dependence logic under team semantics.
//!
//! The crate covers the syntax of dependence logic, a finite model checker,
//! the translation of sentences into the `∀∃` normal form with dependence
//! atoms, first-order approximations of normal forms, and a checker for
//! natural-deduction proofs.
//!
//! ```
//! use deplogic::io::{parse_formula, parse_model};
//! use deplogic::semantics::{sentence_true, SearchBudget};
//!
//! let (voc, model) = parse_model(&"domain 3\nconstant c = 0".into()).unwrap();
//! let phi = parse_formula(&"forall x. exists y. dep(x, y) & y != c".into(), &voc).unwrap();
//! assert!(sentence_true(&model, &phi, SearchBudget::default()).unwrap());
//! ```

pub mod approx;
pub mod cli;
pub mod io;
pub mod kernel;
pub mod normal_form;
pub mod semantics;
pub mod syntax;

pub use approx::{approximation_chain_check, build_approximation, build_guard_set, build_omega, GuardSet};
pub use kernel::{check_proof, check_step, CheckReport, Proof, ProofStep, RuleId};
pub use normal_form::{to_normal_form, DepConstraint, NormalFormSentence};
pub use semantics::{equiv_on_small_models, satisfies, sentence_true, Assignment, Model, SearchBudget, Team};
pub use syntax::{alpha_equal, Formula, Term, Var, Vocabulary};
