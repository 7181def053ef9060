//! Transformation of sentences into the normal form
//! `∀x1...∀xm ∃y1...∃yn (dep(w1, y_i1) & ... & dep(wk, y_ik) & θ)` with `θ`
//! quantifier-free and first-order.
//!
//! The pipeline has four stages: [`preprocess`] (distinct binders, unnested
//! dependence atoms), [`to_prenex`], [`hoist_dep_atoms`] on the prenex
//! matrix, and [`pull_existentials_left`], which moves existentials behind
//! universals and records the resulting dependence atoms.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::syntax::{
    fresh_variable, FirstOrder, Formula, Quantifier, Term, Var, VariableSet,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NormalFormError {
    #[error("not a sentence; free variables: {0}")]
    NotSentence(String),
    #[error("malformed normal form: {0}")]
    Shape(String),
}

fn shape(msg: impl Into<String>) -> NormalFormError {
    NormalFormError::Shape(msg.into())
}

/// `dep(determining..., determined)` over variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DepConstraint {
    pub determining: Vec<Var>,
    pub determined: Var,
}

impl DepConstraint {
    pub fn new(determining: Vec<Var>, determined: Var) -> Self {
        DepConstraint {
            determining,
            determined,
        }
    }

    pub fn to_formula(&self) -> Formula {
        Formula::dep_vars(&self.determining, &self.determined)
    }

    /// Reads `dep(x1, ..., xn, y)` with variable arguments.
    pub fn from_formula(f: &Formula) -> Option<DepConstraint> {
        let Formula::Dep(args) = f else { return None };
        let vars = args.iter().map(|t| t.as_var().cloned()).collect::<Option<Vec<Var>>>()?;
        let (last, init) = vars.split_last()?;
        Some(DepConstraint::new(init.to_vec(), last.clone()))
    }
}

impl fmt::Display for DepConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_formula())
    }
}

/// A sentence `∀U ∃E (dep_1 & ... & dep_k & matrix)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalFormSentence {
    universals: Vec<Var>,
    existentials: Vec<Var>,
    dep_atoms: Vec<DepConstraint>,
    matrix: Formula,
}

impl NormalFormSentence {
    /// Checks the normal-form invariants: distinct quantified variables, a
    /// quantifier-free first-order matrix over them, and dependence atoms
    /// that determine distinct existentials from earlier variables only.
    pub fn new(
        universals: Vec<Var>,
        existentials: Vec<Var>,
        dep_atoms: Vec<DepConstraint>,
        matrix: Formula,
    ) -> Result<Self, NormalFormError> {
        let mut seen = VariableSet::new();
        for x in universals.iter().chain(&existentials) {
            if !seen.insert(x.clone()) {
                return Err(shape(format!("variable `{x}` is quantified twice")));
            }
        }
        if !matrix.is_first_order() || !matrix.is_quantifier_free() {
            return Err(shape("the matrix must be quantifier-free and first-order"));
        }
        if let Some(x) = matrix.free_vars().iter().find(|x| !seen.contains(x)) {
            return Err(shape(format!("variable `{x}` is not quantified")));
        }
        let mut determined = VariableSet::new();
        for d in &dep_atoms {
            let Some(pos) = existentials.iter().position(|y| *y == d.determined) else {
                return Err(shape(format!(
                    "`{}` determines `{}`, which is not existential",
                    d, d.determined
                )));
            };
            if !determined.insert(d.determined.clone()) {
                return Err(shape(format!("`{}` is determined twice", d.determined)));
            }
            for w in &d.determining {
                if !universals.contains(w) && !existentials[..pos].contains(w) {
                    return Err(shape(format!(
                        "`{d}` depends on `{w}`, which is not quantified before `{}`",
                        d.determined
                    )));
                }
            }
        }
        Ok(NormalFormSentence {
            universals,
            existentials,
            dep_atoms,
            matrix,
        })
    }

    /// Reads a sentence already in normal form. The dependence atoms must be
    /// the leading conjuncts of the right-nested body.
    pub fn from_formula(f: &Formula) -> Result<Self, NormalFormError> {
        let mut universals = Vec::new();
        let mut existentials = Vec::new();
        let mut body = f;
        while let Formula::Forall(x, inner) = body {
            universals.push(x.clone());
            body = inner;
        }
        while let Formula::Exists(x, inner) = body {
            existentials.push(x.clone());
            body = inner;
        }
        let mut deps = Vec::new();
        while let Formula::And(a, rest) = body {
            if !matches!(**a, Formula::Dep(_)) {
                break;
            }
            deps.push(
                DepConstraint::from_formula(a)
                    .ok_or_else(|| shape("dependence atoms must have variable arguments"))?,
            );
            body = rest;
        }
        if matches!(body, Formula::Dep(_)) {
            return Err(shape("missing first-order matrix after the dependence atoms"));
        }
        Self::new(universals, existentials, deps, body.clone())
    }

    pub fn universals(&self) -> &[Var] {
        &self.universals
    }

    pub fn existentials(&self) -> &[Var] {
        &self.existentials
    }

    pub fn dep_atoms(&self) -> &[DepConstraint] {
        &self.dep_atoms
    }

    pub fn matrix(&self) -> &Formula {
        &self.matrix
    }

    /// `∀U ∃E (dep_1 & (... & (dep_k & matrix)))`.
    pub fn to_formula(&self) -> Formula {
        let mut parts: Vec<Formula> = self.dep_atoms.iter().map(DepConstraint::to_formula).collect();
        parts.push(self.matrix.clone());
        let body = Formula::conj(parts).expect("non-empty");
        let prefix: Vec<(Quantifier, Var)> = self
            .universals
            .iter()
            .map(|x| (Quantifier::Forall, x.clone()))
            .chain(self.existentials.iter().map(|y| (Quantifier::Exists, y.clone())))
            .collect();
        Formula::with_prefix(&prefix, body)
    }
}

impl fmt::Display for NormalFormSentence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_formula())
    }
}

/// Names in use: every variable and symbol of `f`.
fn names_of(f: &Formula) -> VariableSet {
    let mut avoid = f.all_vars();
    avoid.extend(f.symbol_names().into_iter().map(Var::from));
    avoid
}

fn fresh(avoid: &mut VariableSet, hint: &str) -> Var {
    let v = fresh_variable(avoid, hint);
    avoid.insert(v.clone());
    v
}

/// Renames bound variables apart (from each other and from free variables)
/// and unnests dependence atoms so that they only have variable arguments:
/// a complex argument `t` is replaced by a new `z` under `∃z(... & z = t)`.
pub fn preprocess(f: &Formula) -> Formula {
    let mut avoid = names_of(f);
    let mut used: VariableSet = f.free_vars();
    rename_apart(f, &mut avoid, &mut used, &mut Vec::new())
}

fn rename_apart(
    f: &Formula,
    avoid: &mut VariableSet,
    used: &mut VariableSet,
    env: &mut Vec<(Var, Var)>,
) -> Formula {
    let rename = |env: &Vec<(Var, Var)>, t: &Term| {
        t.rename(&|x: &Var| env.iter().rev().find(|(from, _)| from == x).map(|(_, to)| to.clone()))
    };
    match f {
        Formula::Rel(r, args) => {
            Formula::Rel(r.clone(), args.iter().map(|t| rename(env, t)).collect())
        }
        Formula::Eq(a, b) => Formula::Eq(rename(env, a), rename(env, b)),
        Formula::Dep(args) => {
            let args: Vec<Term> = args.iter().map(|t| rename(env, t)).collect();
            unnest(args, avoid)
        }
        Formula::Not(inner) => Formula::Not(FirstOrder::new_unchecked(rename_apart(
            inner, avoid, used, env,
        ))),
        Formula::And(a, b) => Formula::and(
            rename_apart(a, avoid, used, env),
            rename_apart(b, avoid, used, env),
        ),
        Formula::Or(a, b) => Formula::or(
            rename_apart(a, avoid, used, env),
            rename_apart(b, avoid, used, env),
        ),
        Formula::Exists(x, body) | Formula::Forall(x, body) => {
            let y = if used.contains(x) {
                fresh(avoid, x.name())
            } else {
                x.clone()
            };
            used.insert(y.clone());
            env.push((x.clone(), y.clone()));
            let body = rename_apart(body, avoid, used, env);
            env.pop();
            match f {
                Formula::Exists(..) => Formula::Exists(y, Box::new(body)),
                _ => Formula::Forall(y, Box::new(body)),
            }
        }
    }
}

// dep(t1, ..., tn) with complex ti becomes ∃z(dep(..., z, ...) & z = ti),
// one argument at a time from the left.
fn unnest(mut args: Vec<Term>, avoid: &mut VariableSet) -> Formula {
    let Some(i) = args.iter().position(|t| t.as_var().is_none()) else {
        return Formula::Dep(args);
    };
    let z = fresh(avoid, "z");
    let t = std::mem::replace(&mut args[i], Term::Var(z.clone()));
    Formula::exists(
        z.clone(),
        Formula::and(unnest(args, avoid), Formula::eq(Term::Var(z), t)),
    )
}

fn prenex_parts(f: &Formula) -> (Vec<(Quantifier, Var)>, Formula) {
    match f {
        Formula::Rel(..) | Formula::Eq(..) | Formula::Dep(_) => (Vec::new(), f.clone()),
        Formula::Not(inner) => {
            let (prefix, m) = prenex_parts(inner);
            let prefix = prefix.into_iter().map(|(q, x)| (q.dual(), x)).collect();
            (prefix, Formula::Not(FirstOrder::new_unchecked(m)))
        }
        Formula::And(a, b) | Formula::Or(a, b) => {
            let (mut pa, ma) = prenex_parts(a);
            let (pb, mb) = prenex_parts(b);
            pa.extend(pb);
            let m = match f {
                Formula::And(..) => Formula::and(ma, mb),
                _ => Formula::or(ma, mb),
            };
            (pa, m)
        }
        Formula::Exists(x, body) | Formula::Forall(x, body) => {
            let q = match f {
                Formula::Exists(..) => Quantifier::Exists,
                _ => Quantifier::Forall,
            };
            let (mut prefix, m) = prenex_parts(body);
            prefix.insert(0, (q, x.clone()));
            (prefix, m)
        }
    }
}

/// Moves all quantifiers to the front, left operand first. The input must
/// have pairwise distinct bound variables that do not occur free (see
/// [`preprocess`]); negations, which only cover first-order formulas, are
/// pushed through quantifiers classically.
pub fn to_prenex(f: &Formula) -> Formula {
    let (prefix, m) = prenex_parts(f);
    Formula::with_prefix(&prefix, m)
}

struct Hoisted {
    vars: Vec<Var>,
    deps: Vec<DepConstraint>,
    matrix: Formula,
}

fn hoist(f: &Formula, avoid: &mut VariableSet) -> Result<Hoisted, NormalFormError> {
    if f.is_first_order() {
        if !f.is_quantifier_free() {
            return Err(shape("hoisting expects a quantifier-free formula"));
        }
        return Ok(Hoisted {
            vars: Vec::new(),
            deps: Vec::new(),
            matrix: f.clone(),
        });
    }
    match f {
        Formula::Dep(args) => {
            let vars = args
                .iter()
                .map(|t| t.as_var().cloned())
                .collect::<Option<Vec<Var>>>()
                .ok_or_else(|| shape("dependence atoms must have variable arguments"))?;
            // dep() holds everywhere; ∃z(dep(z) & z = z) is a normal-form
            // rendering of it.
            let hint = vars.last().map_or("z", Var::name);
            let z = fresh(avoid, hint);
            let (determining, target) = match vars.split_last() {
                Some((last, init)) => (init.to_vec(), last.clone()),
                None => (Vec::new(), z.clone()),
            };
            Ok(Hoisted {
                vars: vec![z.clone()],
                deps: vec![DepConstraint::new(determining, z.clone())],
                matrix: Formula::eq(Term::Var(z), Term::Var(target)),
            })
        }
        Formula::And(a, b) | Formula::Or(a, b) => {
            let mut ha = hoist(a, avoid)?;
            let hb = hoist(b, avoid)?;
            ha.vars.extend(hb.vars);
            ha.deps.extend(hb.deps);
            ha.matrix = match f {
                Formula::And(..) => Formula::and(ha.matrix, hb.matrix),
                _ => Formula::or(ha.matrix, hb.matrix),
            };
            Ok(ha)
        }
        _ => Err(shape("hoisting expects a quantifier-free formula")),
    }
}

fn assemble(h: Hoisted) -> Formula {
    let mut parts: Vec<Formula> = h.deps.iter().map(DepConstraint::to_formula).collect();
    parts.push(h.matrix);
    let body = Formula::conj(parts).expect("non-empty");
    h.vars
        .into_iter()
        .rev()
        .fold(body, |acc, z| Formula::exists(z, acc))
}

/// Rewrites a quantifier-free formula as `∃z1...∃zn(dep(x1, z1) & ... &
/// dep(xn, zn) & θ*)` with `θ*` first-order. Disjunctions and conjunctions
/// merge the blocks of their operands.
pub fn hoist_dep_atoms(theta: &Formula) -> Result<Formula, NormalFormError> {
    let mut avoid = names_of(theta);
    Ok(assemble(hoist(theta, &mut avoid)?))
}

/// Turns `Q1x1...Qmxm ∃z(dep... & θ*)` into a ∀*∃* normal form. Working from
/// the innermost quantifier outwards, an existential that has universals
/// to its right is moved behind them and gains `dep(v, x)`, where `v`
/// lists the earlier variables free in its scope.
pub fn pull_existentials_left(f: &Formula) -> Result<NormalFormSentence, NormalFormError> {
    check_sentence(f)?;
    let mut prefix: Vec<(Quantifier, Var)> = Vec::new();
    let mut body = f;
    while let Formula::Exists(x, inner) | Formula::Forall(x, inner) = body {
        let q = match body {
            Formula::Exists(..) => Quantifier::Exists,
            _ => Quantifier::Forall,
        };
        prefix.push((q, x.clone()));
        body = inner;
    }
    let mut deps = Vec::new();
    while let Formula::And(a, rest) = body {
        let Some(d) = DepConstraint::from_formula(a) else { break };
        deps.push(d);
        body = rest;
    }
    if !body.is_first_order() || !body.is_quantifier_free() {
        return Err(shape("expected a quantifier prefix over dependence atoms and a first-order matrix"));
    }
    let matrix = body.clone();
    let mut universals: Vec<Var> = Vec::new();
    let mut existentials: Vec<Var> = Vec::new();
    for (i, (q, x)) in prefix.iter().enumerate().rev() {
        match q {
            Quantifier::Forall => universals.insert(0, x.clone()),
            Quantifier::Exists if universals.is_empty() => existentials.insert(0, x.clone()),
            Quantifier::Exists => {
                // Fr of the scope of x, in prefix order
                let scope = scope_free_vars(&universals, &existentials, &deps, &matrix);
                let z: Vec<Var> = prefix[..i]
                    .iter()
                    .map(|(_, v)| v.clone())
                    .filter(|v| scope.contains(v) && v != x)
                    .collect();
                match deps.iter().find(|d| d.determined == *x) {
                    Some(d) if d.determining.iter().all(|w| z.contains(w)) => {}
                    Some(d) => {
                        return Err(shape(format!(
                            "`{x}` is already constrained by `{d}` and cannot be moved"
                        )))
                    }
                    None => deps.push(DepConstraint::new(z, x.clone())),
                }
                existentials.insert(0, x.clone());
            }
        }
    }
    NormalFormSentence::new(universals, existentials, deps, matrix)
}

fn scope_free_vars(
    universals: &[Var],
    existentials: &[Var],
    deps: &[DepConstraint],
    matrix: &Formula,
) -> VariableSet {
    let mut free: VariableSet = matrix.free_vars();
    for d in deps {
        free.extend(d.determining.iter().cloned());
        free.insert(d.determined.clone());
    }
    let bound: BTreeSet<&Var> = universals.iter().chain(existentials).collect();
    free.retain(|v| !bound.contains(v));
    free
}

fn check_sentence(f: &Formula) -> Result<(), NormalFormError> {
    let free = f.free_vars();
    if free.is_empty() {
        Ok(())
    } else {
        let names: Vec<&str> = free.iter().map(Var::name).collect();
        Err(NormalFormError::NotSentence(names.join(", ")))
    }
}

/// The full pipeline. A sentence that is already in normal form is
/// returned as it stands.
pub fn to_normal_form(f: &Formula) -> Result<NormalFormSentence, NormalFormError> {
    check_sentence(f)?;
    if let Ok(nf) = NormalFormSentence::from_formula(f) {
        return Ok(nf);
    }
    let pre = preprocess(f);
    let (prefix, matrix) = prenex_parts(&pre);
    let mut avoid = names_of(&pre);
    let hoisted = hoist(&matrix, &mut avoid)?;
    pull_existentials_left(&Formula::with_prefix(&prefix, assemble(hoisted)))
}
