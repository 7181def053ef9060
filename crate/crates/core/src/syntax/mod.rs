//! Terms and formulas of dependence logic.
//!
//! A [`Formula`] is ordinary first-order syntax over `~ & | exists forall`
//! extended with dependence atoms `dep(t1, ..., tn)`. Negation may only be
//! applied to first-order formulas; the [`FirstOrder`] wrapper carried by
//! [`Formula::Not`] enforces this when the node is built.

mod subst;
mod vocab;

pub use subst::{alpha_equal, fresh_variable, CaptureError};
pub use vocab::{Vocabulary, VocabularyError};

use std::collections::BTreeSet;
use std::fmt;
use std::ops::Deref;
use std::sync::Arc;

use thiserror::Error;

/// A variable name.
#[derive(Clone, Eq, PartialOrd, Ord, Hash)]
pub struct Var(Arc<str>);

impl Var {
    pub fn new(name: &str) -> Self {
        Var(Arc::from(name))
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl PartialEq for Var {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl From<&str> for Var {
    fn from(name: &str) -> Self {
        Var::new(name)
    }
}

impl From<String> for Var {
    fn from(name: String) -> Self {
        Var(Arc::from(name))
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A finite set of variables, ordered by name.
pub type VariableSet = BTreeSet<Var>;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Term {
    Var(Var),
    Const(String),
    App(String, Vec<Term>),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(Var::new(name))
    }

    pub fn constant(name: &str) -> Term {
        Term::Const(name.to_owned())
    }

    pub fn app(function: &str, args: Vec<Term>) -> Term {
        Term::App(function.to_owned(), args)
    }

    pub fn as_var(&self) -> Option<&Var> {
        match self {
            Term::Var(v) => Some(v),
            _ => None,
        }
    }

    /// Var(t): the variables occurring in the term.
    pub fn vars(&self) -> VariableSet {
        let mut out = VariableSet::new();
        self.collect_vars(&mut out);
        out
    }

    pub(crate) fn collect_vars(&self, out: &mut VariableSet) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::Const(_) => {}
            Term::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    pub(crate) fn collect_vars_ordered(&self, out: &mut Vec<Var>) {
        match self {
            Term::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
            Term::Const(_) => {}
            Term::App(_, args) => args.iter().for_each(|a| a.collect_vars_ordered(out)),
        }
    }

    pub fn contains_var(&self, x: &Var) -> bool {
        match self {
            Term::Var(v) => v == x,
            Term::Const(_) => false,
            Term::App(_, args) => args.iter().any(|a| a.contains_var(x)),
        }
    }

    /// Replaces every occurrence of `x` by `t`.
    pub fn replace(&self, x: &Var, t: &Term) -> Term {
        match self {
            Term::Var(v) if v == x => t.clone(),
            Term::Var(_) | Term::Const(_) => self.clone(),
            Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| a.replace(x, t)).collect()),
        }
    }

    pub(crate) fn rename(&self, map: &dyn Fn(&Var) -> Option<Var>) -> Term {
        match self {
            Term::Var(v) => Term::Var(map(v).unwrap_or_else(|| v.clone())),
            Term::Const(_) => self.clone(),
            Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| a.rename(map)).collect()),
        }
    }
}

impl From<Var> for Term {
    fn from(v: Var) -> Self {
        Term::Var(v)
    }
}

/// Error raised when a formula node would violate a syntactic invariant.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SyntaxError {
    #[error("negation applied to a formula containing a dependence atom: {0}")]
    NegationScope(String),
}

/// A formula with no dependence atoms. Only constructible through
/// [`FirstOrder::new`], which checks the property.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct FirstOrder(Box<Formula>);

impl FirstOrder {
    pub fn new(formula: Formula) -> Result<Self, SyntaxError> {
        if formula.is_first_order() {
            Ok(FirstOrder(Box::new(formula)))
        } else {
            Err(SyntaxError::NegationScope(formula.to_string()))
        }
    }

    pub fn formula(&self) -> &Formula {
        &self.0
    }

    pub fn into_inner(self) -> Formula {
        *self.0
    }

    // Callers guarantee the argument has no dependence atoms.
    pub(crate) fn new_unchecked(formula: Formula) -> Self {
        debug_assert!(formula.is_first_order());
        FirstOrder(Box::new(formula))
    }
}

impl Deref for FirstOrder {
    type Target = Formula;

    fn deref(&self) -> &Formula {
        &self.0
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Formula {
    Rel(String, Vec<Term>),
    Eq(Term, Term),
    Dep(Vec<Term>),
    Not(FirstOrder),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Exists(Var, Box<Formula>),
    Forall(Var, Box<Formula>),
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Quantifier {
    Exists,
    Forall,
}

impl Quantifier {
    pub fn bind(self, x: Var, body: Formula) -> Formula {
        match self {
            Quantifier::Exists => Formula::Exists(x, Box::new(body)),
            Quantifier::Forall => Formula::Forall(x, Box::new(body)),
        }
    }

    pub fn dual(self) -> Quantifier {
        match self {
            Quantifier::Exists => Quantifier::Forall,
            Quantifier::Forall => Quantifier::Exists,
        }
    }
}

impl Formula {
    pub fn rel(name: &str, args: Vec<Term>) -> Formula {
        Formula::Rel(name.to_owned(), args)
    }

    pub fn eq(lhs: Term, rhs: Term) -> Formula {
        Formula::Eq(lhs, rhs)
    }

    pub fn dep(args: Vec<Term>) -> Formula {
        Formula::Dep(args)
    }

    /// `dep(xs..., y)` over variables.
    pub fn dep_vars(determining: &[Var], determined: &Var) -> Formula {
        let mut args: Vec<Term> = determining.iter().cloned().map(Term::Var).collect();
        args.push(Term::Var(determined.clone()));
        Formula::Dep(args)
    }

    pub fn not(inner: Formula) -> Result<Formula, SyntaxError> {
        Ok(Formula::Not(FirstOrder::new(inner)?))
    }

    pub fn neq(lhs: Term, rhs: Term) -> Formula {
        Formula::Not(FirstOrder::new_unchecked(Formula::Eq(lhs, rhs)))
    }

    pub fn and(lhs: Formula, rhs: Formula) -> Formula {
        Formula::And(Box::new(lhs), Box::new(rhs))
    }

    pub fn or(lhs: Formula, rhs: Formula) -> Formula {
        Formula::Or(Box::new(lhs), Box::new(rhs))
    }

    /// `a -> b`, encoded as `~a | b`.
    pub fn implies(antecedent: Formula, consequent: Formula) -> Result<Formula, SyntaxError> {
        Ok(Formula::or(Formula::not(antecedent)?, consequent))
    }

    pub fn exists(x: impl Into<Var>, body: Formula) -> Formula {
        Formula::Exists(x.into(), Box::new(body))
    }

    pub fn forall(x: impl Into<Var>, body: Formula) -> Formula {
        Formula::Forall(x.into(), Box::new(body))
    }

    /// Right-nested conjunction `f1 & (f2 & (... & fn))`; `None` for an empty list.
    pub fn conj(parts: Vec<Formula>) -> Option<Formula> {
        let mut iter = parts.into_iter().rev();
        let last = iter.next()?;
        Some(iter.fold(last, |acc, f| Formula::and(f, acc)))
    }

    /// Wraps `body` in the given quantifier prefix, outermost first.
    pub fn with_prefix(prefix: &[(Quantifier, Var)], body: Formula) -> Formula {
        prefix
            .iter()
            .rev()
            .fold(body, |acc, (q, x)| q.bind(x.clone(), acc))
    }

    /// Fr(φ).
    pub fn free_vars(&self) -> VariableSet {
        let mut out = VariableSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<Var>, out: &mut VariableSet) {
        let add_term = |t: &Term, bound: &Vec<Var>, out: &mut VariableSet| {
            let mut vs = VariableSet::new();
            t.collect_vars(&mut vs);
            out.extend(vs.into_iter().filter(|v| !bound.contains(v)));
        };
        match self {
            Formula::Rel(_, args) | Formula::Dep(args) => {
                args.iter().for_each(|t| add_term(t, bound, out))
            }
            Formula::Eq(a, b) => {
                add_term(a, bound, out);
                add_term(b, bound, out);
            }
            Formula::Not(inner) => inner.collect_free(bound, out),
            Formula::And(a, b) | Formula::Or(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Exists(x, body) | Formula::Forall(x, body) => {
                bound.push(x.clone());
                body.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// Free variables in order of first occurrence.
    pub fn free_vars_ordered(&self) -> Vec<Var> {
        fn go(f: &Formula, bound: &mut Vec<Var>, out: &mut Vec<Var>) {
            let add = |t: &Term, bound: &Vec<Var>, out: &mut Vec<Var>| {
                let mut vs = Vec::new();
                t.collect_vars_ordered(&mut vs);
                for v in vs {
                    if !bound.contains(&v) && !out.contains(&v) {
                        out.push(v);
                    }
                }
            };
            match f {
                Formula::Rel(_, args) | Formula::Dep(args) => {
                    args.iter().for_each(|t| add(t, bound, out))
                }
                Formula::Eq(a, b) => {
                    add(a, bound, out);
                    add(b, bound, out);
                }
                Formula::Not(inner) => go(inner, bound, out),
                Formula::And(a, b) | Formula::Or(a, b) => {
                    go(a, bound, out);
                    go(b, bound, out);
                }
                Formula::Exists(x, body) | Formula::Forall(x, body) => {
                    bound.push(x.clone());
                    go(body, bound, out);
                    bound.pop();
                }
            }
        }
        let mut out = Vec::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }

    pub fn is_sentence(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// True iff no dependence atom occurs anywhere in the formula.
    pub fn is_first_order(&self) -> bool {
        match self {
            Formula::Rel(..) | Formula::Eq(..) => true,
            Formula::Dep(_) => false,
            // invariant of FirstOrder
            Formula::Not(_) => true,
            Formula::And(a, b) | Formula::Or(a, b) => a.is_first_order() && b.is_first_order(),
            Formula::Exists(_, body) | Formula::Forall(_, body) => body.is_first_order(),
        }
    }

    pub fn is_quantifier_free(&self) -> bool {
        match self {
            Formula::Rel(..) | Formula::Eq(..) | Formula::Dep(_) => true,
            Formula::Not(inner) => inner.is_quantifier_free(),
            Formula::And(a, b) | Formula::Or(a, b) => {
                a.is_quantifier_free() && b.is_quantifier_free()
            }
            Formula::Exists(..) | Formula::Forall(..) => false,
        }
    }

    /// Every variable occurring in the formula, free or bound.
    pub fn all_vars(&self) -> VariableSet {
        let mut out = VariableSet::new();
        self.visit_terms(&mut |t| t.collect_vars(&mut out));
        self.visit_binders(&mut |x| {
            out.insert(x.clone());
        });
        out
    }

    /// Names of the relation, function and constant symbols used.
    pub fn symbol_names(&self) -> BTreeSet<String> {
        fn term_syms(t: &Term, out: &mut BTreeSet<String>) {
            match t {
                Term::Var(_) => {}
                Term::Const(c) => {
                    out.insert(c.clone());
                }
                Term::App(f, args) => {
                    out.insert(f.clone());
                    args.iter().for_each(|a| term_syms(a, out));
                }
            }
        }
        let mut out = BTreeSet::new();
        self.visit_terms(&mut |t| term_syms(t, &mut out));
        self.visit_atoms(&mut |f| {
            if let Formula::Rel(r, _) = f {
                out.insert(r.clone());
            }
        });
        out
    }

    pub(crate) fn visit_terms(&self, visit: &mut dyn FnMut(&Term)) {
        match self {
            Formula::Rel(_, args) | Formula::Dep(args) => args.iter().for_each(|t| visit(t)),
            Formula::Eq(a, b) => {
                visit(a);
                visit(b);
            }
            Formula::Not(inner) => inner.visit_terms(visit),
            Formula::And(a, b) | Formula::Or(a, b) => {
                a.visit_terms(visit);
                b.visit_terms(visit);
            }
            Formula::Exists(_, body) | Formula::Forall(_, body) => body.visit_terms(visit),
        }
    }

    fn visit_binders(&self, visit: &mut dyn FnMut(&Var)) {
        match self {
            Formula::Rel(..) | Formula::Eq(..) | Formula::Dep(_) => {}
            Formula::Not(inner) => inner.visit_binders(visit),
            Formula::And(a, b) | Formula::Or(a, b) => {
                a.visit_binders(visit);
                b.visit_binders(visit);
            }
            Formula::Exists(x, body) | Formula::Forall(x, body) => {
                visit(x);
                body.visit_binders(visit);
            }
        }
    }

    pub(crate) fn visit_atoms(&self, visit: &mut dyn FnMut(&Formula)) {
        match self {
            Formula::Rel(..) | Formula::Eq(..) | Formula::Dep(_) => visit(self),
            Formula::Not(inner) => inner.visit_atoms(visit),
            Formula::And(a, b) | Formula::Or(a, b) => {
                a.visit_atoms(visit);
                b.visit_atoms(visit);
            }
            Formula::Exists(_, body) | Formula::Forall(_, body) => body.visit_atoms(visit),
        }
    }

    /// Renames variables through `map`, which must be injective on the
    /// variables it touches. Binders are renamed with their occurrences.
    pub(crate) fn rename_all(&self, map: &dyn Fn(&Var) -> Option<Var>) -> Formula {
        match self {
            Formula::Rel(r, args) => {
                Formula::Rel(r.clone(), args.iter().map(|t| t.rename(map)).collect())
            }
            Formula::Dep(args) => Formula::Dep(args.iter().map(|t| t.rename(map)).collect()),
            Formula::Eq(a, b) => Formula::Eq(a.rename(map), b.rename(map)),
            Formula::Not(inner) => {
                Formula::Not(FirstOrder::new_unchecked(inner.rename_all(map)))
            }
            Formula::And(a, b) => Formula::and(a.rename_all(map), b.rename_all(map)),
            Formula::Or(a, b) => Formula::or(a.rename_all(map), b.rename_all(map)),
            Formula::Exists(x, body) => Formula::Exists(
                map(x).unwrap_or_else(|| x.clone()),
                Box::new(body.rename_all(map)),
            ),
            Formula::Forall(x, body) => Formula::Forall(
                map(x).unwrap_or_else(|| x.clone()),
                Box::new(body.rename_all(map)),
            ),
        }
    }

    /// φ(t/x): replaces the free occurrences of `x` by `t`, refusing to
    /// capture any variable of `t`.
    pub fn substitute(&self, t: &Term, x: &Var) -> Result<Formula, CaptureError> {
        subst::substitute(self, t, x)
    }

    /// Splits a right- or left-nested conjunction into its conjuncts.
    pub fn conjuncts(&self) -> Vec<&Formula> {
        let mut out = Vec::new();
        fn go<'a>(f: &'a Formula, out: &mut Vec<&'a Formula>) {
            match f {
                Formula::And(a, b) => {
                    go(a, out);
                    go(b, out);
                }
                other => out.push(other),
            }
        }
        go(self, &mut out);
        out
    }

    /// Number of nodes in the syntax tree.
    pub fn size(&self) -> usize {
        match self {
            Formula::Rel(..) | Formula::Eq(..) | Formula::Dep(_) => 1,
            Formula::Not(inner) => 1 + inner.size(),
            Formula::And(a, b) | Formula::Or(a, b) => 1 + a.size() + b.size(),
            Formula::Exists(_, body) | Formula::Forall(_, body) => 1 + body.size(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Formula::Rel(..) | Formula::Eq(..) | Formula::Dep(_) => 0,
            Formula::Not(inner) => 1 + inner.depth(),
            Formula::And(a, b) | Formula::Or(a, b) => 1 + a.depth().max(b.depth()),
            Formula::Exists(_, body) | Formula::Forall(_, body) => 1 + body.depth(),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::io::print_formula_with(self, crate::io::Notation::Ascii))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::Const(c) => f.write_str(c),
            Term::App(g, args) => {
                write!(f, "{g}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}
