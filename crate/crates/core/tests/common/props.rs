//! Semantic properties as reusable checks.

use deplogic::semantics::{eval_term, satisfies, Model, SearchBudget, Team};
use deplogic::syntax::{Formula, Term, Var, VariableSet};
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

use super::{classical, reference_cost, reference_sat, to_ref, vars};

pub fn sat(m: &Model, x: &Team, f: &Formula) -> bool {
    satisfies(m, x, f, SearchBudget::default()).unwrap_or_else(|e| panic!("{f}: {e}"))
}

fn subteam(x: &Team, mask: u64) -> Team {
    let mut i = 0;
    x.filter(|_| {
        let keep = mask >> (i % 64) & 1 == 1;
        i += 1;
        keep
    })
}

pub fn downward_closure(m: &Model, x: &Team, f: &Formula, mask: u64) -> Result<(), TestCaseError> {
    let y = subteam(x, mask);
    if sat(m, x, f) {
        prop_assert!(sat(m, &y, f), "{f} holds on\n{x}but not on the subteam\n{y}");
    }
    Ok(())
}

pub fn locality(m: &Model, x: &Team, f: &Formula, extra: u8) -> Result<(), TestCaseError> {
    let mut keep: VariableSet = f.free_vars();
    for (i, v) in vars().into_iter().enumerate() {
        if extra >> i & 1 == 1 {
            keep.insert(v);
        }
    }
    let y = x.restrict(&keep).unwrap();
    prop_assert_eq!(sat(m, x, f), sat(m, &y, f), "{} on\n{}and\n{}", f, x, y);
    Ok(())
}

pub fn flatness(m: &Model, x: &Team, f: &Formula) -> Result<(), TestCaseError> {
    prop_assert!(f.is_first_order());
    let whole = sat(m, x, f);
    let rows: Vec<bool> = x
        .assignments()
        .map(|s| sat(m, &Team::from_assignments(x.vars().iter().cloned(), [s]).unwrap(), f))
        .collect();
    prop_assert_eq!(whole, rows.iter().all(|b| *b), "{} on\n{}", f, x);
    let tarski: Vec<bool> = to_ref(x).iter().map(|s| classical(m, s, f)).collect();
    let mut tarski_sorted = tarski.clone();
    let mut rows_sorted = rows.clone();
    tarski_sorted.sort();
    rows_sorted.sort();
    prop_assert_eq!(rows_sorted, tarski_sorted, "{} on\n{}", f, x);
    Ok(())
}

pub fn empty_team(m: &Model, f: &Formula) -> Result<(), TestCaseError> {
    let x = Team::empty(vars()).unwrap();
    prop_assert!(sat(m, &x, f), "{f} fails on the empty team");
    Ok(())
}

/// X ⊨ φ(t/x) iff X(F/x) ⊨ φ with F(s) = t<s>. Returns false when the
/// substitution would capture a variable of `t`.
pub fn substitution(m: &Model, x: &Team, f: &Formula, v: &Var, t: &Term) -> Result<bool, TestCaseError> {
    let Ok(g) = f.substitute(t, v) else {
        return Ok(false);
    };
    let supplemented = x
        .supplement(v, |s| Some(eval_term(m, s, t).unwrap()))
        .unwrap();
    prop_assert_eq!(
        sat(m, x, &g),
        sat(m, &supplemented, f),
        "{} with {} := {} on\n{}",
        f,
        v,
        t,
        x
    );
    Ok(true)
}

pub const REFERENCE_LIMIT: f64 = 2e5;

/// Compares the evaluator with the literal reference evaluator. Returns
/// false when the instance is too large for the reference.
pub fn agrees_with_reference(m: &Model, x: &Team, f: &Formula) -> Result<bool, TestCaseError> {
    if reference_cost(f, x.len() as f64, m.size() as f64) > REFERENCE_LIMIT {
        return Ok(false);
    }
    prop_assert_eq!(sat(m, x, f), reference_sat(m, &to_ref(x), f), "{} on\n{}", f, x);
    Ok(true)
}
