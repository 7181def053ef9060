use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use super::model::Model;
use super::team::{Assignment, Team};
use crate::syntax::{Formula, Term, Var, VocabularyError};

/// Upper bound on the witnesses tried while deciding one query: values
/// for existential witnesses and candidate disjunction splits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBudget {
    max_choice_points: u64,
}

impl SearchBudget {
    pub const DEFAULT_LIMIT: u64 = 10_000_000;

    /// `None` for a zero limit.
    pub fn new(max_choice_points: u64) -> Option<SearchBudget> {
        (max_choice_points > 0).then_some(SearchBudget { max_choice_points })
    }

    pub fn max_choice_points(&self) -> u64 {
        self.max_choice_points
    }
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_choice_points: Self::DEFAULT_LIMIT,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("search budget of {0} choice points exceeded")]
    BudgetExceeded(u64),
    #[error("variable `{0}` is unbound")]
    Unbound(Var),
    #[error("free variable `{0}` is not in the team domain")]
    FreeVariable(Var),
    #[error("not a first-order formula: {0}")]
    NotFirstOrder(String),
    #[error("not a sentence; free variables: {0}")]
    NotSentence(String),
    #[error("model does not interpret the formula: {0}")]
    Vocabulary(#[from] VocabularyError),
}

/// t^A<s>.
pub fn eval_term(m: &Model, s: &Assignment, t: &Term) -> Result<usize, EvalError> {
    let env: Vec<(Var, usize)> = s.iter().map(|(x, a)| (x.clone(), a)).collect();
    check_term_symbols(m, t)?;
    term_value(m, &env, t)
}

/// Classical satisfaction of a first-order formula by one assignment.
pub fn fo_satisfies(m: &Model, s: &Assignment, f: &Formula) -> Result<bool, EvalError> {
    if !f.is_first_order() {
        return Err(EvalError::NotFirstOrder(f.to_string()));
    }
    m.vocabulary().check_formula(f)?;
    if let Some(x) = f.free_vars().into_iter().find(|x| s.get(x).is_none()) {
        return Err(EvalError::Unbound(x));
    }
    let mut env: Vec<(Var, usize)> = s.iter().map(|(x, a)| (x.clone(), a)).collect();
    fo_eval(m, f, &mut env)
}

/// Whether `dep(terms)` holds in `team`.
pub fn dep_holds(m: &Model, team: &Team, terms: &[Term]) -> Result<bool, EvalError> {
    for t in terms {
        check_term_symbols(m, t)?;
    }
    let rows: Vec<Vec<(Var, usize)>> = team.assignments().map(|s| env_of(&s)).collect();
    dep_check(m, terms, rows.iter().map(Vec::as_slice))
}

/// A ⊨_X φ.
pub fn satisfies(m: &Model, team: &Team, f: &Formula, budget: SearchBudget) -> Result<bool, EvalError> {
    Evaluator::new(m, budget).satisfies(team, f)
}

/// A ⊨ φ for a sentence φ, i.e. satisfaction by the team `{∅}`.
pub fn sentence_true(m: &Model, f: &Formula, budget: SearchBudget) -> Result<bool, EvalError> {
    let free = f.free_vars();
    if !free.is_empty() {
        let names: Vec<&str> = free.iter().map(Var::name).collect();
        return Err(EvalError::NotSentence(names.join(", ")));
    }
    satisfies(m, &Team::unit(), f, budget)
}

fn env_of(s: &Assignment) -> Vec<(Var, usize)> {
    s.iter().map(|(x, a)| (x.clone(), a)).collect()
}

fn check_term_symbols(m: &Model, t: &Term) -> Result<(), EvalError> {
    m.vocabulary().check_term(t).map_err(EvalError::from)
}

fn lookup(env: &[(Var, usize)], x: &Var) -> Option<usize> {
    env.iter().rev().find(|(y, _)| y == x).map(|(_, a)| *a)
}

// Symbols are checked against the model before evaluation starts.
fn term_value(m: &Model, env: &[(Var, usize)], t: &Term) -> Result<usize, EvalError> {
    match t {
        Term::Var(x) => lookup(env, x).ok_or_else(|| EvalError::Unbound(x.clone())),
        Term::Const(c) => Ok(m.constant(c).expect("checked constant")),
        Term::App(g, args) => {
            let vals = args
                .iter()
                .map(|a| term_value(m, env, a))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(m.function(g).expect("checked function").get(&vals))
        }
    }
}

fn fo_eval(m: &Model, f: &Formula, env: &mut Vec<(Var, usize)>) -> Result<bool, EvalError> {
    match f {
        Formula::Rel(r, args) => {
            let vals = args
                .iter()
                .map(|a| term_value(m, env, a))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(m.relation(r).expect("checked relation").contains(&vals))
        }
        Formula::Eq(a, b) => Ok(term_value(m, env, a)? == term_value(m, env, b)?),
        Formula::Dep(_) => Err(EvalError::NotFirstOrder(f.to_string())),
        Formula::Not(inner) => Ok(!fo_eval(m, inner, env)?),
        Formula::And(a, b) => Ok(fo_eval(m, a, env)? && fo_eval(m, b, env)?),
        Formula::Or(a, b) => Ok(fo_eval(m, a, env)? || fo_eval(m, b, env)?),
        Formula::Exists(x, body) | Formula::Forall(x, body) => {
            let want = matches!(f, Formula::Exists(..));
            for a in 0..m.size() {
                env.push((x.clone(), a));
                let r = fo_eval(m, body, env);
                env.pop();
                if r? == want {
                    return Ok(want);
                }
            }
            Ok(!want)
        }
    }
}

fn dep_check<'a>(
    m: &Model,
    terms: &[Term],
    rows: impl Iterator<Item = &'a [(Var, usize)]>,
) -> Result<bool, EvalError> {
    let Some((last, init)) = terms.split_last() else {
        return Ok(true);
    };
    let mut seen: HashMap<Vec<usize>, usize> = HashMap::new();
    for env in rows {
        let key = init
            .iter()
            .map(|t| term_value(m, env, t))
            .collect::<Result<Vec<_>, _>>()?;
        let val = term_value(m, env, last)?;
        if *seen.entry(key).or_insert(val) != val {
            return Ok(false);
        }
    }
    Ok(true)
}

struct NodeInfo {
    first_order: bool,
    free: BTreeSet<Var>,
}

/// Decides team satisfaction by exhaustive search, sharing a budget and a
/// memo table across the queries made through it.
pub struct Evaluator<'m> {
    model: &'m Model,
    budget: SearchBudget,
    used: u64,
    info: HashMap<*const Formula, NodeInfo>,
    memo: HashMap<(*const Formula, Team), bool>,
}

impl<'m> Evaluator<'m> {
    pub fn new(model: &'m Model, budget: SearchBudget) -> Self {
        Evaluator {
            model,
            budget,
            used: 0,
            info: HashMap::new(),
            memo: HashMap::new(),
        }
    }

    /// Choice points spent so far.
    pub fn choice_points(&self) -> u64 {
        self.used
    }

    pub fn satisfies(&mut self, team: &Team, f: &Formula) -> Result<bool, EvalError> {
        self.model.vocabulary().check_formula(f)?;
        let dom = team.domain();
        if let Some(x) = f.free_vars().into_iter().find(|x| !dom.contains(x)) {
            return Err(EvalError::FreeVariable(x));
        }
        // node addresses are only stable for the duration of one query
        self.info.clear();
        self.memo.clear();
        self.annotate(f);
        self.sat(f, team)
    }

    fn annotate(&mut self, f: &Formula) {
        let first_order = f.is_first_order();
        match f {
            Formula::And(a, b) | Formula::Or(a, b) => {
                self.annotate(a);
                self.annotate(b);
            }
            Formula::Exists(_, body) | Formula::Forall(_, body) => self.annotate(body),
            _ => {}
        }
        self.info.insert(
            f,
            NodeInfo {
                first_order,
                free: f.free_vars(),
            },
        );
    }

    fn node(&self, f: &Formula) -> &NodeInfo {
        &self.info[&(f as *const Formula)]
    }

    fn spend(&mut self) -> Result<(), EvalError> {
        self.used += 1;
        if self.used > self.budget.max_choice_points {
            Err(EvalError::BudgetExceeded(self.budget.max_choice_points))
        } else {
            Ok(())
        }
    }

    fn restricted(&self, f: &Formula, team: &Team) -> Team {
        let free = &self.node(f).free;
        team.project(|x| free.contains(x))
    }

    fn flat(&self, f: &Formula, team: &Team) -> Result<bool, EvalError> {
        for row in team.rows() {
            let mut env: Vec<(Var, usize)> =
                team.vars().iter().cloned().zip(row.iter().copied()).collect();
            if !fo_eval(self.model, f, &mut env)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn sat(&mut self, f: &Formula, team: &Team) -> Result<bool, EvalError> {
        if team.is_empty() {
            return Ok(true);
        }
        if self.node(f).first_order {
            return self.flat(f, team);
        }
        match f {
            Formula::Dep(args) => {
                let envs: Vec<Vec<(Var, usize)>> = team
                    .rows()
                    .iter()
                    .map(|r| team.vars().iter().cloned().zip(r.iter().copied()).collect())
                    .collect();
                dep_check(self.model, args, envs.iter().map(Vec::as_slice))
            }
            Formula::And(a, b) => Ok(self.sat(a, team)? && self.sat(b, team)?),
            Formula::Or(..) | Formula::Exists(..) | Formula::Forall(..) => {
                let t = self.restricted(f, team);
                let key = (f as *const Formula, t);
                if let Some(&v) = self.memo.get(&key) {
                    return Ok(v);
                }
                let t = &key.1;
                let v = match f {
                    Formula::Or(a, b) => self.split(a, b, t)?,
                    Formula::Forall(x, body) => {
                        let d = t.duplicate(self.model.size(), x);
                        self.sat(body, &d)?
                    }
                    _ => self.exists_block(f, t)?,
                };
                self.memo.insert(key, v);
                Ok(v)
            }
            Formula::Rel(..) | Formula::Eq(..) | Formula::Not(_) => {
                unreachable!("first-order nodes are decided row by row")
            }
        }
    }

    // X ⊨ a ∨ b iff X = Y ∪ Z with Y ⊨ a and Z ⊨ b. By downward closure
    // it suffices to try partitions of X.
    fn split(&mut self, a: &Formula, b: &Formula, team: &Team) -> Result<bool, EvalError> {
        let vars = team.vars().to_vec();
        if self.node(a).first_order || self.node(b).first_order {
            let (fo, other) = if self.node(a).first_order { (a, b) } else { (b, a) };
            self.spend()?;
            let mut rest = BTreeSet::new();
            for row in team.rows() {
                let mut env: Vec<(Var, usize)> =
                    vars.iter().cloned().zip(row.iter().copied()).collect();
                if !fo_eval(self.model, fo, &mut env)? {
                    rest.insert(row.clone());
                }
            }
            return self.sat(other, &Team::from_parts(vars, rest));
        }
        let rows: Vec<Vec<usize>> = team.rows().iter().cloned().collect();
        let mut left = BTreeSet::new();
        let mut right = BTreeSet::new();
        self.split_rows(a, b, &vars, &rows, 0, &mut left, &mut right)
    }

    #[allow(clippy::too_many_arguments)]
    fn split_rows(
        &mut self,
        a: &Formula,
        b: &Formula,
        vars: &[Var],
        rows: &[Vec<usize>],
        i: usize,
        left: &mut BTreeSet<Vec<usize>>,
        right: &mut BTreeSet<Vec<usize>>,
    ) -> Result<bool, EvalError> {
        if i == rows.len() {
            return Ok(true);
        }
        for side in [0, 1] {
            self.spend()?;
            let (set, f) = if side == 0 { (&mut *left, a) } else { (&mut *right, b) };
            set.insert(rows[i].clone());
            let part = Team::from_parts(vars.to_vec(), set.clone());
            let ok = self.sat(f, &part)? && self.split_rows(a, b, vars, rows, i + 1, left, right)?;
            let set = if side == 0 { &mut *left } else { &mut *right };
            set.remove(&rows[i]);
            if ok {
                return Ok(true);
            }
        }
        Ok(false)
    }

    // ∃x1...∃xk ψ on X: search for a tuple of witnesses per row of X, row
    // by row, checking first-order and dependence conjuncts of ψ as soon as
    // their variables are assigned.
    fn exists_block(&mut self, f: &Formula, team: &Team) -> Result<bool, EvalError> {
        let mut block: Vec<Var> = Vec::new();
        let mut body = f;
        while let Formula::Exists(x, inner) = body {
            if block.contains(x) {
                break;
            }
            block.push(x.clone());
            body = inner;
        }
        let pos = |x: &Var| block.iter().position(|y| y == x);
        let mut checks: Vec<Vec<Check>> = vec![Vec::new(); block.len()];
        let mut others: Vec<&Formula> = Vec::new();
        for c in body.conjuncts() {
            let level = self.node(c).free.iter().filter_map(pos).max();
            let kind = if self.node(c).first_order {
                Some(CheckKind::Row)
            } else if matches!(c, Formula::Dep(_)) {
                Some(CheckKind::Pairs)
            } else {
                None
            };
            match (kind, level) {
                (Some(kind), Some(j)) => checks[j].push(Check { kind, formula: c }),
                (Some(_), None) => {
                    if !self.sat(c, team)? {
                        return Ok(false);
                    }
                }
                (None, _) => others.push(c),
            }
        }
        let mut search = Search {
            block: &block,
            checks: &checks,
            others: &others,
            team_vars: team.vars(),
            rows: team.rows().iter().collect(),
            values: vec![Vec::with_capacity(block.len()); team.len()],
        };
        self.search(&mut search, 0, 0)
    }

    fn search(&mut self, s: &mut Search<'_>, i: usize, j: usize) -> Result<bool, EvalError> {
        if i == s.rows.len() {
            return self.check_others(s, s.rows.len());
        }
        for a in 0..self.model.size() {
            self.spend()?;
            s.values[i].push(a);
            let ok = self.check_level(s, i, j)? && {
                if j + 1 < s.block.len() {
                    self.search(s, i, j + 1)?
                } else if i + 1 < s.rows.len() && !self.check_others(s, i + 1)? {
                    false
                } else {
                    self.search(s, i + 1, 0)?
                }
            };
            s.values[i].pop();
            if ok {
                return Ok(true);
            }
        }
        Ok(false)
    }

    fn check_level(&self, s: &Search<'_>, i: usize, j: usize) -> Result<bool, EvalError> {
        for check in &s.checks[j] {
            let ok = match check.kind {
                CheckKind::Row => fo_eval(self.model, check.formula, &mut s.env(i))?,
                CheckKind::Pairs => {
                    let envs: Vec<Vec<(Var, usize)>> = (0..=i).map(|r| s.env(r)).collect();
                    let Formula::Dep(args) = check.formula else {
                        unreachable!()
                    };
                    dep_check(self.model, args, envs.iter().map(Vec::as_slice))?
                }
            };
            if !ok {
                return Ok(false);
            }
        }
        Ok(true)
    }

    // Checks the remaining conjuncts on the first `n` rows; a failure on a
    // prefix is final by downward closure.
    fn check_others(&mut self, s: &Search<'_>, n: usize) -> Result<bool, EvalError> {
        if s.others.is_empty() {
            return Ok(true);
        }
        let mut vars: Vec<(Var, usize)> = Vec::new();
        for (k, x) in s.team_vars.iter().enumerate() {
            if !s.block.contains(x) {
                vars.push((x.clone(), k));
            }
        }
        let base = s.team_vars.len();
        for (k, x) in s.block.iter().enumerate() {
            vars.push((x.clone(), base + k));
        }
        vars.sort();
        let rows: BTreeSet<Vec<usize>> = (0..n)
            .map(|r| {
                vars.iter()
                    .map(|(_, k)| {
                        if *k < base {
                            s.rows[r][*k]
                        } else {
                            s.values[r][*k - base]
                        }
                    })
                    .collect()
            })
            .collect();
        let team = Team::from_parts(vars.into_iter().map(|(x, _)| x).collect(), rows);
        for o in s.others {
            if !self.sat(o, &team)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

#[derive(Clone, Copy)]
enum CheckKind {
    Row,
    Pairs,
}

#[derive(Clone, Copy)]
struct Check<'f> {
    kind: CheckKind,
    formula: &'f Formula,
}

struct Search<'s> {
    block: &'s [Var],
    checks: &'s [Vec<Check<'s>>],
    others: &'s [&'s Formula],
    team_vars: &'s [Var],
    rows: Vec<&'s Vec<usize>>,
    values: Vec<Vec<usize>>,
}

impl Search<'_> {
    fn env(&self, r: usize) -> Vec<(Var, usize)> {
        let mut env: Vec<(Var, usize)> = self
            .team_vars
            .iter()
            .cloned()
            .zip(self.rows[r].iter().copied())
            .collect();
        env.extend(self.block.iter().cloned().zip(self.values[r].iter().copied()));
        env
    }
}
