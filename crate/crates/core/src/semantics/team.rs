use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::syntax::{Var, VariableSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TeamError {
    #[error("variable `{0}` is declared twice")]
    DuplicateVariable(Var),
    #[error("variable `{0}` is not in the team domain")]
    UnknownVariable(Var),
    #[error("row has {found} value(s) but the team has {expected} variable(s)")]
    RowArity { expected: usize, found: usize },
    #[error("supplement function is undefined on {0}")]
    Undefined(Assignment),
}

/// A finite map from variables to domain elements.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Assignment(BTreeMap<Var, usize>);

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, x: &Var) -> Option<usize> {
        self.0.get(x).copied()
    }

    /// s(a/x).
    pub fn with(mut self, x: Var, a: usize) -> Self {
        self.0.insert(x, a);
        self
    }

    pub fn set(&mut self, x: Var, a: usize) {
        self.0.insert(x, a);
    }

    pub fn domain(&self) -> VariableSet {
        self.0.keys().cloned().collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Var, usize)> {
        self.0.iter().map(|(x, a)| (x, *a))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl FromIterator<(Var, usize)> for Assignment {
    fn from_iter<I: IntoIterator<Item = (Var, usize)>>(iter: I) -> Self {
        Assignment(iter.into_iter().collect())
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (x, a)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x}->{a}")?;
        }
        f.write_str("}")
    }
}

/// A set of assignments sharing one variable domain. Rows store values in
/// the order of [`Team::vars`], which is sorted.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Team {
    vars: Vec<Var>,
    rows: BTreeSet<Vec<usize>>,
}

impl Team {
    /// The empty team over `vars`.
    pub fn empty(vars: impl IntoIterator<Item = Var>) -> Result<Team, TeamError> {
        let mut seen = BTreeSet::new();
        for x in vars {
            if !seen.insert(x.clone()) {
                return Err(TeamError::DuplicateVariable(x));
            }
        }
        Ok(Team {
            vars: seen.into_iter().collect(),
            rows: BTreeSet::new(),
        })
    }

    /// The team `{∅}` holding only the empty assignment.
    pub fn unit() -> Team {
        Team {
            vars: Vec::new(),
            rows: BTreeSet::from([Vec::new()]),
        }
    }

    /// Builds a team from rows given in the order of `vars`.
    pub fn from_rows(
        vars: &[Var],
        rows: impl IntoIterator<Item = Vec<usize>>,
    ) -> Result<Team, TeamError> {
        let mut team = Team::empty(vars.iter().cloned())?;
        let perm: Vec<usize> = team
            .vars
            .iter()
            .map(|x| vars.iter().position(|y| y == x).expect("same variables"))
            .collect();
        for row in rows {
            if row.len() != vars.len() {
                return Err(TeamError::RowArity {
                    expected: vars.len(),
                    found: row.len(),
                });
            }
            team.rows.insert(perm.iter().map(|&i| row[i]).collect());
        }
        Ok(team)
    }

    pub fn from_assignments(
        vars: impl IntoIterator<Item = Var>,
        rows: impl IntoIterator<Item = Assignment>,
    ) -> Result<Team, TeamError> {
        let mut team = Team::empty(vars)?;
        for s in rows {
            team.insert(&s)?;
        }
        Ok(team)
    }

    /// Adds the restriction of `s` to the team domain.
    pub fn insert(&mut self, s: &Assignment) -> Result<(), TeamError> {
        let row = self
            .vars
            .iter()
            .map(|x| s.get(x).ok_or_else(|| TeamError::UnknownVariable(x.clone())))
            .collect::<Result<Vec<_>, _>>()?;
        self.rows.insert(row);
        Ok(())
    }

    pub fn vars(&self) -> &[Var] {
        &self.vars
    }

    pub fn domain(&self) -> VariableSet {
        self.vars.iter().cloned().collect()
    }

    pub fn index_of(&self, x: &Var) -> Option<usize> {
        self.vars.binary_search(x).ok()
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rows(&self) -> &BTreeSet<Vec<usize>> {
        &self.rows
    }

    pub fn assignments(&self) -> impl Iterator<Item = Assignment> + '_ {
        self.rows.iter().map(|r| self.assignment(r))
    }

    pub(crate) fn assignment(&self, row: &[usize]) -> Assignment {
        self.vars.iter().cloned().zip(row.iter().copied()).collect()
    }

    pub(crate) fn from_parts(vars: Vec<Var>, rows: BTreeSet<Vec<usize>>) -> Team {
        debug_assert!(vars.windows(2).all(|w| w[0] < w[1]));
        Team { vars, rows }
    }

    /// Subteam of the rows selected by `keep`.
    pub fn filter(&self, mut keep: impl FnMut(&Assignment) -> bool) -> Team {
        Team {
            vars: self.vars.clone(),
            rows: self
                .rows
                .iter()
                .filter(|r| keep(&self.assignment(r)))
                .cloned()
                .collect(),
        }
    }

    /// Every subteam, selected by the bits of a mask over the rows in order.
    pub fn subteams(&self) -> impl Iterator<Item = Team> + '_ {
        let rows: Vec<&Vec<usize>> = self.rows.iter().collect();
        (0u64..1 << rows.len()).map(move |mask| Team {
            vars: self.vars.clone(),
            rows: rows
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, r)| (*r).clone())
                .collect(),
        })
    }

    pub fn is_subteam_of(&self, other: &Team) -> bool {
        self.vars == other.vars && self.rows.is_subset(&other.rows)
    }

    /// Positions at which a new variable `x` sits, and whether it replaces
    /// an existing column.
    fn slot(&self, x: &Var) -> (usize, bool) {
        match self.vars.binary_search(x) {
            Ok(i) => (i, true),
            Err(i) => (i, false),
        }
    }

    fn extended_vars(&self, x: &Var) -> Vec<Var> {
        let (i, present) = self.slot(x);
        let mut vars = self.vars.clone();
        if !present {
            vars.insert(i, x.clone());
        }
        vars
    }

    fn put(row: &[usize], i: usize, present: bool, a: usize) -> Vec<usize> {
        let mut r = row.to_vec();
        if present {
            r[i] = a;
        } else {
            r.insert(i, a);
        }
        r
    }

    /// X(A/x) for a domain of `size` elements.
    pub fn duplicate(&self, size: usize, x: &Var) -> Team {
        let (i, present) = self.slot(x);
        let mut rows = BTreeSet::new();
        for row in &self.rows {
            for a in 0..size {
                rows.insert(Self::put(row, i, present, a));
            }
        }
        Team {
            vars: self.extended_vars(x),
            rows,
        }
    }

    /// X(F/x). `f` must be defined on every row.
    pub fn supplement(
        &self,
        x: &Var,
        mut f: impl FnMut(&Assignment) -> Option<usize>,
    ) -> Result<Team, TeamError> {
        let (i, present) = self.slot(x);
        let mut rows = BTreeSet::new();
        for row in &self.rows {
            let s = self.assignment(row);
            let a = f(&s).ok_or(TeamError::Undefined(s))?;
            rows.insert(Self::put(row, i, present, a));
        }
        Ok(Team {
            vars: self.extended_vars(x),
            rows,
        })
    }

    /// X↾V. Requires `V ⊆ Dom(X)`.
    pub fn restrict(&self, keep: &VariableSet) -> Result<Team, TeamError> {
        if let Some(x) = keep.iter().find(|x| self.index_of(x).is_none()) {
            return Err(TeamError::UnknownVariable(x.clone()));
        }
        Ok(self.project(|x| keep.contains(x)))
    }

    pub(crate) fn project(&self, keep: impl Fn(&Var) -> bool) -> Team {
        let cols: Vec<usize> = (0..self.vars.len()).filter(|&i| keep(&self.vars[i])).collect();
        if cols.len() == self.vars.len() {
            return self.clone();
        }
        Team {
            vars: cols.iter().map(|&i| self.vars[i].clone()).collect(),
            rows: self
                .rows
                .iter()
                .map(|r| cols.iter().map(|&i| r[i]).collect())
                .collect(),
        }
    }

    /// Union of two teams over the same domain.
    pub fn union(&self, other: &Team) -> Option<Team> {
        if self.vars != other.vars {
            return None;
        }
        Some(Team {
            vars: self.vars.clone(),
            rows: self.rows.union(&other.rows).cloned().collect(),
        })
    }
}

impl fmt::Display for Team {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, s) in self.assignments().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{s}")?;
        }
        f.write_str("}")
    }
}
