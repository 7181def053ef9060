use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use super::{Formula, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VocabularyError {
    #[error("symbol `{0}` is declared more than once")]
    Duplicate(String),
    #[error("function `{0}` must have positive arity")]
    NullaryFunction(String),
    #[error("unknown relation symbol `{0}`")]
    UnknownRelation(String),
    #[error("unknown function symbol `{0}`")]
    UnknownFunction(String),
    #[error("unknown constant symbol `{0}`")]
    UnknownConstant(String),
    #[error("`{name}` expects {expected} argument(s), got {found}")]
    Arity {
        name: String,
        expected: usize,
        found: usize,
    },
}

/// The non-logical symbols available to formulas: relations and functions
/// with fixed arities, and constants. Names are pairwise distinct.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Vocabulary {
    relations: BTreeMap<String, usize>,
    functions: BTreeMap<String, usize>,
    constants: BTreeSet<String>,
}

impl Vocabulary {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_relation(mut self, name: &str, arity: usize) -> Result<Self, VocabularyError> {
        self.add_relation(name, arity)?;
        Ok(self)
    }

    pub fn with_function(mut self, name: &str, arity: usize) -> Result<Self, VocabularyError> {
        self.add_function(name, arity)?;
        Ok(self)
    }

    pub fn with_constant(mut self, name: &str) -> Result<Self, VocabularyError> {
        self.add_constant(name)?;
        Ok(self)
    }

    pub fn add_relation(&mut self, name: &str, arity: usize) -> Result<(), VocabularyError> {
        self.ensure_fresh(name)?;
        self.relations.insert(name.to_owned(), arity);
        Ok(())
    }

    pub fn add_function(&mut self, name: &str, arity: usize) -> Result<(), VocabularyError> {
        if arity == 0 {
            return Err(VocabularyError::NullaryFunction(name.to_owned()));
        }
        self.ensure_fresh(name)?;
        self.functions.insert(name.to_owned(), arity);
        Ok(())
    }

    pub fn add_constant(&mut self, name: &str) -> Result<(), VocabularyError> {
        self.ensure_fresh(name)?;
        self.constants.insert(name.to_owned());
        Ok(())
    }

    fn ensure_fresh(&self, name: &str) -> Result<(), VocabularyError> {
        if self.contains(name) {
            Err(VocabularyError::Duplicate(name.to_owned()))
        } else {
            Ok(())
        }
    }

    pub fn contains(&self, name: &str) -> bool {
        self.relations.contains_key(name)
            || self.functions.contains_key(name)
            || self.constants.contains(name)
    }

    pub fn relation_arity(&self, name: &str) -> Option<usize> {
        self.relations.get(name).copied()
    }

    pub fn function_arity(&self, name: &str) -> Option<usize> {
        self.functions.get(name).copied()
    }

    pub fn has_constant(&self, name: &str) -> bool {
        self.constants.contains(name)
    }

    pub fn relations(&self) -> impl Iterator<Item = (&str, usize)> {
        self.relations.iter().map(|(n, a)| (n.as_str(), *a))
    }

    pub fn functions(&self) -> impl Iterator<Item = (&str, usize)> {
        self.functions.iter().map(|(n, a)| (n.as_str(), *a))
    }

    pub fn constants(&self) -> impl Iterator<Item = &str> {
        self.constants.iter().map(String::as_str)
    }

    pub fn symbol_names(&self) -> BTreeSet<String> {
        self.relations
            .keys()
            .chain(self.functions.keys())
            .chain(self.constants.iter())
            .cloned()
            .collect()
    }

    /// Union of two vocabularies; a symbol declared in both must agree.
    pub fn merge(&self, other: &Vocabulary) -> Result<Vocabulary, VocabularyError> {
        let mut out = self.clone();
        for (name, arity) in other.relations() {
            match out.relation_arity(name) {
                Some(a) if a == arity => {}
                Some(_) => return Err(VocabularyError::Duplicate(name.to_owned())),
                None => out.add_relation(name, arity)?,
            }
        }
        for (name, arity) in other.functions() {
            match out.function_arity(name) {
                Some(a) if a == arity => {}
                Some(_) => return Err(VocabularyError::Duplicate(name.to_owned())),
                None => out.add_function(name, arity)?,
            }
        }
        for name in other.constants() {
            if !out.has_constant(name) {
                out.add_constant(name)?;
            }
        }
        Ok(out)
    }

    /// The smallest vocabulary covering the symbols used in `formulas`.
    pub fn of_formulas<'a>(
        formulas: impl IntoIterator<Item = &'a Formula>,
    ) -> Result<Vocabulary, VocabularyError> {
        let mut out = Vocabulary::new();
        for f in formulas {
            let mut err = None;
            f.visit_atoms(&mut |atom| {
                if let Formula::Rel(r, args) = atom {
                    let res = match out.relation_arity(r) {
                        Some(a) if a == args.len() => Ok(()),
                        Some(a) => Err(VocabularyError::Arity {
                            name: r.clone(),
                            expected: a,
                            found: args.len(),
                        }),
                        None => out.add_relation(r, args.len()),
                    };
                    if let Err(e) = res {
                        err.get_or_insert(e);
                    }
                }
            });
            f.visit_terms(&mut |t| {
                if let Err(e) = out.absorb_term(t) {
                    err.get_or_insert(e);
                }
            });
            if let Some(e) = err {
                return Err(e);
            }
        }
        Ok(out)
    }

    fn absorb_term(&mut self, t: &Term) -> Result<(), VocabularyError> {
        match t {
            Term::Var(_) => Ok(()),
            Term::Const(c) => {
                if !self.has_constant(c) {
                    self.add_constant(c)?;
                }
                Ok(())
            }
            Term::App(f, args) => {
                match self.function_arity(f) {
                    Some(a) if a == args.len() => {}
                    Some(a) => {
                        return Err(VocabularyError::Arity {
                            name: f.clone(),
                            expected: a,
                            found: args.len(),
                        })
                    }
                    None => self.add_function(f, args.len())?,
                }
                args.iter().try_for_each(|a| self.absorb_term(a))
            }
        }
    }

    pub fn check_term(&self, t: &Term) -> Result<(), VocabularyError> {
        match t {
            Term::Var(_) => Ok(()),
            Term::Const(c) if self.has_constant(c) => Ok(()),
            Term::Const(c) => Err(VocabularyError::UnknownConstant(c.clone())),
            Term::App(f, args) => {
                let arity = self
                    .function_arity(f)
                    .ok_or_else(|| VocabularyError::UnknownFunction(f.clone()))?;
                if arity != args.len() {
                    return Err(VocabularyError::Arity {
                        name: f.clone(),
                        expected: arity,
                        found: args.len(),
                    });
                }
                args.iter().try_for_each(|a| self.check_term(a))
            }
        }
    }

    /// Checks that every symbol of `f` is declared here with matching arity.
    pub fn check_formula(&self, f: &Formula) -> Result<(), VocabularyError> {
        match f {
            Formula::Rel(r, args) => {
                let arity = self
                    .relation_arity(r)
                    .ok_or_else(|| VocabularyError::UnknownRelation(r.clone()))?;
                if arity != args.len() {
                    return Err(VocabularyError::Arity {
                        name: r.clone(),
                        expected: arity,
                        found: args.len(),
                    });
                }
                args.iter().try_for_each(|a| self.check_term(a))
            }
            Formula::Dep(args) => args.iter().try_for_each(|a| self.check_term(a)),
            Formula::Eq(a, b) => {
                self.check_term(a)?;
                self.check_term(b)
            }
            Formula::Not(inner) => self.check_formula(inner),
            Formula::And(a, b) | Formula::Or(a, b) => {
                self.check_formula(a)?;
                self.check_formula(b)
            }
            Formula::Exists(_, body) | Formula::Forall(_, body) => self.check_formula(body),
        }
    }
}
