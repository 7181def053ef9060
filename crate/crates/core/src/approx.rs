//! First-order approximations of normal-form sentences.
//!
//! The `n`th approximation repeats the quantifier block of a normal form
//! `n` times with renamed variables. Dependence atoms are replaced by
//! guards saying that equal determining values in two rounds force equal
//! witnesses.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::normal_form::{DepConstraint, NormalFormSentence};
use crate::semantics::{sentence_true, EvalError, Model, SearchBudget};
use crate::syntax::{fresh_variable, Formula, Quantifier, Term, Var, VariableSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ApproxError {
    #[error("the number of rounds must be at least 1")]
    NoRounds,
}

/// One guard per existential: its own dependence atom when the normal form
/// has one, otherwise dependence on all universals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GuardSet {
    entries: Vec<DepConstraint>,
}

impl GuardSet {
    pub fn entries(&self) -> &[DepConstraint] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// The dependence atoms of `nf` in order, then `dep(x1, ..., xm, y)` for
/// each remaining existential `y` in quantifier order.
pub fn build_guard_set(nf: &NormalFormSentence) -> GuardSet {
    let mut entries: Vec<DepConstraint> = nf.dep_atoms().to_vec();
    for y in nf.existentials() {
        if !nf.dep_atoms().iter().any(|d| d.determined == *y) {
            entries.push(DepConstraint::new(nf.universals().to_vec(), y.clone()));
        }
    }
    GuardSet { entries }
}

/// Renamed copies `x_l`, `y_l` of the quantified variables, one map per
/// round.
struct Rounds {
    maps: Vec<BTreeMap<Var, Var>>,
}

impl Rounds {
    fn new(nf: &NormalFormSentence, n: usize) -> Rounds {
        let mut avoid: VariableSet = nf.to_formula().all_vars();
        avoid.extend(nf.matrix().symbol_names().into_iter().map(Var::from));
        let maps = (0..n)
            .map(|l| {
                nf.universals()
                    .iter()
                    .chain(nf.existentials())
                    .map(|v| {
                        let copy = fresh_variable(&avoid, &format!("{v}_{l}"));
                        avoid.insert(copy.clone());
                        (v.clone(), copy)
                    })
                    .collect()
            })
            .collect();
        Rounds { maps }
    }

    fn var(&self, l: usize, v: &Var) -> Var {
        self.maps[l][v].clone()
    }

    fn term(&self, l: usize, v: &Var) -> Term {
        Term::Var(self.var(l, v))
    }

    fn formula(&self, l: usize, f: &Formula) -> Formula {
        f.rename_all(&|x| self.maps[l].get(x).cloned())
    }
}

/// `w_i = w_l -> y_i = y_l`, or just `y_i = y_l` when `w` is empty.
pub(crate) fn guard(d: &DepConstraint, rename_i: impl Fn(&Var) -> Term, rename_l: impl Fn(&Var) -> Term) -> Formula {
    let same_witness = Formula::eq(rename_i(&d.determined), rename_l(&d.determined));
    let premises: Vec<Formula> = d
        .determining
        .iter()
        .map(|w| Formula::eq(rename_i(w), rename_l(w)))
        .collect();
    match Formula::conj(premises) {
        None => same_witness,
        Some(p) => Formula::implies(p, same_witness).expect("equations are first-order"),
    }
}

fn build(nf: &NormalFormSentence, n: usize, omega: bool) -> Result<Formula, ApproxError> {
    if n == 0 {
        return Err(ApproxError::NoRounds);
    }
    let guards = build_guard_set(nf);
    let rounds = Rounds::new(nf, n);
    let mut inner: Option<Formula> = None;
    for l in (0..n).rev() {
        let mut parts = Vec::new();
        if omega && l == n - 1 {
            parts.extend(nf.dep_atoms().iter().map(|d| rounds.formula(l, &d.to_formula())));
        }
        parts.push(rounds.formula(l, nf.matrix()));
        for i in 0..l {
            for d in guards.entries() {
                parts.push(guard(d, |v| rounds.term(i, v), |v| rounds.term(l, v)));
            }
        }
        parts.extend(inner.take());
        let body = Formula::conj(parts).expect("non-empty");
        let prefix: Vec<(Quantifier, Var)> = nf
            .universals()
            .iter()
            .map(|x| (Quantifier::Forall, rounds.var(l, x)))
            .chain(nf.existentials().iter().map(|y| (Quantifier::Exists, rounds.var(l, y))))
            .collect();
        inner = Some(Formula::with_prefix(&prefix, body));
    }
    Ok(inner.expect("n >= 1"))
}

/// Φⁿ: `n` nested rounds `∀x_l ∃y_l (ψ_l & guards & ...)`, where round `l`
/// is guarded against every earlier round. The result is first-order.
pub fn build_approximation(nf: &NormalFormSentence, n: usize) -> Result<Formula, ApproxError> {
    build(nf, n, false)
}

/// Ωⁿ: Φⁿ with the dependence atoms of `nf` restored in the innermost
/// round, placed before its matrix. Ω¹ is `nf` itself up to renaming.
pub fn build_omega(nf: &NormalFormSentence, n: usize) -> Result<Formula, ApproxError> {
    build(nf, n, true)
}

/// Truth of Φ¹, ..., Φ^up_to in `m`.
pub fn approximation_chain_check(
    nf: &NormalFormSentence,
    m: &Model,
    up_to: usize,
    budget: SearchBudget,
) -> Result<Vec<bool>, EvalError> {
    (1..=up_to)
        .map(|n| {
            let phi = build_approximation(nf, n).expect("n >= 1");
            sentence_true(m, &phi, budget)
        })
        .collect()
}
