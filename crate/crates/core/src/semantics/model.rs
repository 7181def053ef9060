use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::syntax::Vocabulary;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("a model needs a non-empty domain")]
    EmptyDomain,
    #[error("symbol `{0}` is interpreted more than once")]
    Duplicate(String),
    #[error("`{symbol}`: element {value} is outside the domain 0..{size}")]
    OutOfDomain {
        symbol: String,
        value: usize,
        size: usize,
    },
    #[error("`{name}`: expected {expected} argument(s), got {found}")]
    Arity {
        name: String,
        expected: usize,
        found: usize,
    },
    #[error("function `{0}` must have positive arity")]
    NullaryFunction(String),
    #[error("function `{name}` is not defined on {}", fmt_tuple(missing))]
    PartialFunction { name: String, missing: Vec<usize> },
}

fn fmt_tuple(t: &[usize]) -> String {
    if t.len() == 1 {
        t[0].to_string()
    } else {
        let parts: Vec<String> = t.iter().map(usize::to_string).collect();
        format!("({})", parts.join(","))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    arity: usize,
    tuples: BTreeSet<Vec<usize>>,
}

impl Relation {
    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn tuples(&self) -> &BTreeSet<Vec<usize>> {
        &self.tuples
    }

    pub fn contains(&self, tuple: &[usize]) -> bool {
        self.tuples.contains(tuple)
    }
}

/// A total function stored as a dense table. Argument tuples are indexed
/// in mixed radix with the first argument most significant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Function {
    arity: usize,
    size: usize,
    table: Vec<usize>,
}

impl Function {
    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn get(&self, args: &[usize]) -> usize {
        let idx = args.iter().fold(0, |acc, a| acc * self.size + a);
        self.table[idx]
    }

    /// `(args, value)` pairs in lexicographic order of `args`.
    pub fn entries(&self) -> impl Iterator<Item = (Vec<usize>, usize)> + '_ {
        tuples(self.size, self.arity).zip(self.table.iter().copied())
    }
}

/// Every tuple in `0..size` of length `arity`, in lexicographic order.
pub fn tuples(size: usize, arity: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = size.pow(arity as u32);
    (0..total).map(move |mut idx| {
        let mut t = vec![0; arity];
        for slot in t.iter_mut().rev() {
            *slot = idx % size;
            idx /= size;
        }
        t
    })
}

/// A finite structure whose domain is `0..size`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Model {
    size: usize,
    constants: BTreeMap<String, usize>,
    relations: BTreeMap<String, Relation>,
    functions: BTreeMap<String, Function>,
}

impl Model {
    pub fn new(size: usize) -> Result<Model, ModelError> {
        if size == 0 {
            return Err(ModelError::EmptyDomain);
        }
        Ok(Model {
            size,
            constants: BTreeMap::new(),
            relations: BTreeMap::new(),
            functions: BTreeMap::new(),
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    fn ensure_fresh(&self, name: &str) -> Result<(), ModelError> {
        if self.constants.contains_key(name)
            || self.relations.contains_key(name)
            || self.functions.contains_key(name)
        {
            Err(ModelError::Duplicate(name.to_owned()))
        } else {
            Ok(())
        }
    }

    fn check_value(&self, symbol: &str, value: usize) -> Result<(), ModelError> {
        if value < self.size {
            Ok(())
        } else {
            Err(ModelError::OutOfDomain {
                symbol: symbol.to_owned(),
                value,
                size: self.size,
            })
        }
    }

    pub fn add_constant(&mut self, name: &str, value: usize) -> Result<(), ModelError> {
        self.ensure_fresh(name)?;
        self.check_value(name, value)?;
        self.constants.insert(name.to_owned(), value);
        Ok(())
    }

    pub fn add_relation(
        &mut self,
        name: &str,
        arity: usize,
        tuples: impl IntoIterator<Item = Vec<usize>>,
    ) -> Result<(), ModelError> {
        self.ensure_fresh(name)?;
        let mut set = BTreeSet::new();
        for t in tuples {
            if t.len() != arity {
                return Err(ModelError::Arity {
                    name: name.to_owned(),
                    expected: arity,
                    found: t.len(),
                });
            }
            for &v in &t {
                self.check_value(name, v)?;
            }
            set.insert(t);
        }
        self.relations
            .insert(name.to_owned(), Relation { arity, tuples: set });
        Ok(())
    }

    /// Adds a function from its dense table (see [`Function`]).
    pub fn add_function(&mut self, name: &str, arity: usize, table: Vec<usize>) -> Result<(), ModelError> {
        if arity == 0 {
            return Err(ModelError::NullaryFunction(name.to_owned()));
        }
        self.ensure_fresh(name)?;
        let total = self.size.pow(arity as u32);
        if table.len() < total {
            return Err(ModelError::PartialFunction {
                name: name.to_owned(),
                missing: tuples(self.size, arity).nth(table.len()).unwrap_or_default(),
            });
        }
        if table.len() > total {
            return Err(ModelError::Arity {
                name: name.to_owned(),
                expected: total,
                found: table.len(),
            });
        }
        for &v in &table {
            self.check_value(name, v)?;
        }
        self.functions.insert(
            name.to_owned(),
            Function {
                arity,
                size: self.size,
                table,
            },
        );
        Ok(())
    }

    /// Adds a function given as a map from argument tuples to values. The
    /// map must cover every tuple over the domain.
    pub fn add_function_map(
        &mut self,
        name: &str,
        arity: usize,
        entries: &BTreeMap<Vec<usize>, usize>,
    ) -> Result<(), ModelError> {
        for (args, &v) in entries {
            if args.len() != arity {
                return Err(ModelError::Arity {
                    name: name.to_owned(),
                    expected: arity,
                    found: args.len(),
                });
            }
            for &a in args {
                self.check_value(name, a)?;
            }
            self.check_value(name, v)?;
        }
        let mut table = Vec::new();
        for t in tuples(self.size, arity) {
            match entries.get(&t) {
                Some(&v) => table.push(v),
                None => {
                    return Err(ModelError::PartialFunction {
                        name: name.to_owned(),
                        missing: t,
                    })
                }
            }
        }
        self.add_function(name, arity, table)
    }

    pub fn with_constant(mut self, name: &str, value: usize) -> Result<Model, ModelError> {
        self.add_constant(name, value)?;
        Ok(self)
    }

    pub fn with_relation(
        mut self,
        name: &str,
        arity: usize,
        tuples: impl IntoIterator<Item = Vec<usize>>,
    ) -> Result<Model, ModelError> {
        self.add_relation(name, arity, tuples)?;
        Ok(self)
    }

    pub fn with_function(mut self, name: &str, arity: usize, table: Vec<usize>) -> Result<Model, ModelError> {
        self.add_function(name, arity, table)?;
        Ok(self)
    }

    pub fn constant(&self, name: &str) -> Option<usize> {
        self.constants.get(name).copied()
    }

    pub fn relation(&self, name: &str) -> Option<&Relation> {
        self.relations.get(name)
    }

    pub fn function(&self, name: &str) -> Option<&Function> {
        self.functions.get(name)
    }

    pub fn constants(&self) -> impl Iterator<Item = (&str, usize)> {
        self.constants.iter().map(|(n, v)| (n.as_str(), *v))
    }

    pub fn relations(&self) -> impl Iterator<Item = (&str, &Relation)> {
        self.relations.iter().map(|(n, r)| (n.as_str(), r))
    }

    pub fn functions(&self) -> impl Iterator<Item = (&str, &Function)> {
        self.functions.iter().map(|(n, f)| (n.as_str(), f))
    }

    pub fn vocabulary(&self) -> Vocabulary {
        let mut voc = Vocabulary::new();
        // names are disjoint and function arities positive, so these cannot fail
        for (n, r) in &self.relations {
            voc.add_relation(n, r.arity).expect("disjoint names");
        }
        for (n, f) in &self.functions {
            voc.add_function(n, f.arity).expect("disjoint names");
        }
        for n in self.constants.keys() {
            voc.add_constant(n).expect("disjoint names");
        }
        voc
    }

    /// Every model of the given size over `voc`, in a fixed order.
    pub fn enumerate(voc: &Vocabulary, size: usize) -> impl Iterator<Item = Model> {
        let mut axes: Vec<(Axis, u128)> = Vec::new();
        for c in voc.constants() {
            axes.push((Axis::Constant(c.to_owned()), size as u128));
        }
        for (r, a) in voc.relations() {
            let cells = size.pow(a as u32) as u32;
            axes.push((Axis::Relation(r.to_owned(), a), 1u128 << cells));
        }
        for (f, a) in voc.functions() {
            let cells = size.pow(a as u32) as u32;
            axes.push((Axis::Function(f.to_owned(), a), (size as u128).pow(cells)));
        }
        let total: u128 = axes.iter().map(|(_, n)| *n).product();
        (0..total).map(move |mut idx| {
            let mut m = Model::new(size).expect("positive size");
            for (axis, radix) in &axes {
                let digit = idx % radix;
                idx /= radix;
                match axis {
                    Axis::Constant(c) => m.add_constant(c, digit as usize),
                    Axis::Relation(r, a) => {
                        let ts = tuples(size, *a)
                            .enumerate()
                            .filter(|(i, _)| digit >> i & 1 == 1)
                            .map(|(_, t)| t);
                        m.add_relation(r, *a, ts)
                    }
                    Axis::Function(f, a) => {
                        let cells = size.pow(*a as u32);
                        let mut d = digit;
                        let table = (0..cells)
                            .map(|_| {
                                let v = (d % size as u128) as usize;
                                d /= size as u128;
                                v
                            })
                            .collect();
                        m.add_function(f, *a, table)
                    }
                }
                .expect("enumerated interpretations are well formed");
            }
            m
        })
    }
}

enum Axis {
    Constant(String),
    Relation(String, usize),
    Function(String, usize),
}
