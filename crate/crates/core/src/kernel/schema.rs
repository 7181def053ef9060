use thiserror::Error;

use crate::approx::{build_guard_set, guard};
use crate::normal_form::NormalFormSentence;
use crate::syntax::{fresh_variable, Formula, Term, Var, VariableSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("premise does not match the rule: {0}")]
pub struct SchemaError(pub String);

/// Dependence introduction: from `∃x∀y A` derive `∀y∃x(dep(z, x) & A)`,
/// where `z` lists `Fr(A) - {x, y}` in order of first occurrence.
pub fn apply_rule7(premise: &Formula) -> Result<Formula, SchemaError> {
    let Formula::Exists(x, inner) = premise else {
        return Err(SchemaError("expected `exists x. forall y. A`".into()));
    };
    let Formula::Forall(y, a) = &**inner else {
        return Err(SchemaError("expected `exists x. forall y. A`".into()));
    };
    if x == y {
        return Err(SchemaError(format!("both quantifiers bind `{x}`")));
    }
    let z: Vec<Var> = a
        .free_vars_ordered()
        .into_iter()
        .filter(|v| v != x && v != y)
        .collect();
    Ok(Formula::forall(
        y.clone(),
        Formula::exists(
            x.clone(),
            Formula::and(Formula::dep_vars(&z, x), (**a).clone()),
        ),
    ))
}

/// Dependence elimination: from a normal-form sentence
/// `∀x0 ∃y0 (dep... & B(x0, y0))` with at least one universal, derive
/// `∀x0 ∃y0 (B(x0, y0) & ∀x1 ∃y1 (B(x1, y1) & guards))` where the guards
/// range over the guard set.
pub fn apply_rule8(premise: &Formula) -> Result<Formula, SchemaError> {
    let nf = NormalFormSentence::from_formula(premise).map_err(|e| SchemaError(e.to_string()))?;
    if nf.universals().is_empty() {
        return Err(SchemaError("expected at least one universal quantifier".into()));
    }
    let mut avoid: VariableSet = premise.all_vars();
    avoid.extend(premise.symbol_names().into_iter().map(Var::from));
    let copies: Vec<(Var, Var)> = nf
        .universals()
        .iter()
        .chain(nf.existentials())
        .map(|v| {
            let c = fresh_variable(&avoid, &format!("{v}_1"));
            avoid.insert(c.clone());
            (v.clone(), c)
        })
        .collect();
    let second = |v: &Var| {
        copies
            .iter()
            .find(|(from, _)| from == v)
            .map(|(_, to)| to.clone())
    };
    let b1 = nf.matrix().rename_all(&second);
    let mut inner = vec![b1];
    for d in build_guard_set(&nf).entries() {
        inner.push(guard(
            d,
            |v| Term::Var(v.clone()),
            |v| Term::Var(second(v).expect("quantified variable")),
        ));
    }
    let mut block1 = Formula::conj(inner).expect("non-empty");
    for y in nf.existentials().iter().rev() {
        block1 = Formula::exists(second(y).expect("quantified variable"), block1);
    }
    for x in nf.universals().iter().rev() {
        block1 = Formula::forall(second(x).expect("quantified variable"), block1);
    }
    let mut out = Formula::and(nf.matrix().clone(), block1);
    for y in nf.existentials().iter().rev() {
        out = Formula::exists(y.clone(), out);
    }
    for x in nf.universals().iter().rev() {
        out = Formula::forall(x.clone(), out);
    }
    Ok(out)
}
