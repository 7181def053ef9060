use std::collections::{BTreeMap, BTreeSet};

use super::schema::{apply_rule7, apply_rule8};
use super::{Proof, ProofStep, RuleId};
use crate::syntax::{alpha_equal, Formula, Term, Var, VariableSet};

type Deps = BTreeMap<usize, BTreeSet<usize>>;

fn formula_of(p: &Proof, label: usize) -> Option<&Formula> {
    p.step(label).map(|s| &s.formula)
}

/// Discharged assumptions that close over premise number `i` of `step`.
fn closed_in(p: &Proof, step: &ProofStep, i: usize) -> Vec<usize> {
    let matching = |target: &Formula| -> Vec<usize> {
        step.discharged
            .iter()
            .copied()
            .filter(|&d| formula_of(p, d).is_some_and(|f| alpha_equal(f, target)))
            .collect()
    };
    match (step.rule, i) {
        (RuleId::OrE, 1 | 2) => {
            let major = step.premises.first().and_then(|&m| formula_of(p, m));
            match major {
                Some(Formula::Or(a, b)) => matching(if i == 1 { a } else { b }),
                _ => step.discharged.clone(),
            }
        }
        (RuleId::NegI, 0) | (RuleId::ExistsE, 1) | (RuleId::DisjSubst, 1) => step.discharged.clone(),
        _ => Vec::new(),
    }
}

pub(super) fn dependencies(p: &Proof, step: &ProofStep, deps: &Deps) -> BTreeSet<usize> {
    let mut out = BTreeSet::new();
    for (i, label) in step.premises.iter().enumerate() {
        let Some(set) = deps.get(label) else { continue };
        let closed = closed_in(p, step, i);
        out.extend(set.iter().copied().filter(|a| !closed.contains(a)));
    }
    out
}

fn same(a: &Formula, b: &Formula) -> bool {
    alpha_equal(a, b)
}

fn expect(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn premises<'p>(p: &'p Proof, step: &ProofStep, n: usize) -> Result<Vec<&'p Formula>, String> {
    if step.premises.len() != n {
        return Err(format!(
            "{} takes {n} premise(s), found {}",
            step.rule,
            step.premises.len()
        ));
    }
    Ok(step
        .premises
        .iter()
        .map(|&l| formula_of(p, l).expect("references checked"))
        .collect())
}

fn shape(rule: RuleId, what: &str) -> String {
    format!("{rule} expects {what}")
}

fn discharges(rule: RuleId) -> bool {
    matches!(
        rule,
        RuleId::OrE | RuleId::NegI | RuleId::ExistsE | RuleId::DisjSubst
    )
}

/// Variables free in the assumptions `labels`, other than `except`.
fn free_in_assumptions(p: &Proof, labels: &BTreeSet<usize>, except: &[usize], x: &Var) -> Option<usize> {
    labels
        .iter()
        .copied()
        .filter(|a| !except.contains(a))
        .find(|&a| formula_of(p, a).is_some_and(|f| f.free_vars().contains(x)))
}

pub(super) fn check(p: &Proof, step: &ProofStep, deps: &Deps) -> Result<(), String> {
    let rule = step.rule;
    let c = &step.formula;
    if !discharges(rule) && !step.discharged.is_empty() {
        return Err(format!("{rule} does not discharge assumptions"));
    }
    match rule {
        RuleId::Assume => {
            premises(p, step, 0)?;
        }
        RuleId::AndI => {
            let ps = premises(p, step, 2)?;
            let Formula::And(a, b) = c else {
                return Err(shape(rule, "a conjunction"));
            };
            expect(same(a, ps[0]) && same(b, ps[1]), || {
                format!("{c} is not the conjunction of the premises")
            })?;
        }
        RuleId::AndEL | RuleId::AndER => {
            let ps = premises(p, step, 1)?;
            let Formula::And(a, b) = ps[0] else {
                return Err(shape(rule, "a conjunction as premise"));
            };
            let part = if rule == RuleId::AndEL { a } else { b };
            expect(same(part, c), || format!("{c} is not the selected conjunct"))?;
        }
        RuleId::OrIL | RuleId::OrIR => {
            let ps = premises(p, step, 1)?;
            let Formula::Or(a, b) = c else {
                return Err(shape(rule, "a disjunction"));
            };
            let part = if rule == RuleId::OrIL { a } else { b };
            expect(same(part, ps[0]), || {
                format!("the premise is not the {} disjunct", if rule == RuleId::OrIL { "left" } else { "right" })
            })?;
        }
        RuleId::OrE => {
            let ps = premises(p, step, 3)?;
            let Formula::Or(a, b) = ps[0] else {
                return Err(shape(rule, "a disjunction as first premise"));
            };
            expect(same(ps[1], c) && same(ps[2], c), || {
                "both cases must conclude the formula of this step".to_owned()
            })?;
            expect(c.is_first_order(), || {
                format!("Condition 1 violated: {c} is not first-order")
            })?;
            for &d in &step.discharged {
                let f = formula_of(p, d).expect("references checked");
                expect(same(f, a) || same(f, b), || {
                    format!("step {d} is neither disjunct of the first premise")
                })?;
            }
        }
        RuleId::NegI => {
            let ps = premises(p, step, 1)?;
            let Formula::Not(a) = c else {
                return Err(shape(rule, "a negation"));
            };
            let contradiction = match ps[0] {
                Formula::And(b, nb) => match &**nb {
                    Formula::Not(inner) => same(b, inner.formula()),
                    _ => false,
                },
                _ => false,
            };
            expect(contradiction, || shape(rule, "a premise of the form B & ~B"))?;
            expect(ps[0].is_first_order() && a.formula().is_first_order(), || {
                "Condition 2 violated: the formulas are not first-order".to_owned()
            })?;
            for &d in &step.discharged {
                let f = formula_of(p, d).expect("references checked");
                expect(same(f, a.formula()), || {
                    format!("step {d} is not the negated formula")
                })?;
            }
        }
        RuleId::NegE => {
            let ps = premises(p, step, 1)?;
            let inner = match ps[0] {
                Formula::Not(n) => match n.formula() {
                    Formula::Not(m) => Some(m.formula()),
                    _ => None,
                },
                _ => None,
            };
            let Some(inner) = inner else {
                return Err(shape(rule, "a double negation as premise"));
            };
            expect(same(inner, c), || format!("{c} does not match the premise"))?;
            expect(c.is_first_order(), || {
                "Condition 2 violated: the formulas are not first-order".to_owned()
            })?;
        }
        RuleId::ForallI => {
            let ps = premises(p, step, 1)?;
            let Formula::Forall(x, a) = c else {
                return Err(shape(rule, "a universal formula"));
            };
            expect(same(a, ps[0]), || "the body does not match the premise".to_owned())?;
            let open = &deps[&step.premises[0]];
            if let Some(bad) = free_in_assumptions(p, open, &[], x) {
                return Err(format!(
                    "Condition 3 violated: `{x}` is free in the open assumption at step {bad}"
                ));
            }
        }
        RuleId::ForallE => {
            let ps = premises(p, step, 1)?;
            let Formula::Forall(x, a) = ps[0] else {
                return Err(shape(rule, "a universal premise"));
            };
            expect(is_instance(a, x, c), || format!("{c} is not an instance of the premise"))?;
        }
        RuleId::ExistsI => {
            let ps = premises(p, step, 1)?;
            let Formula::Exists(x, a) = c else {
                return Err(shape(rule, "an existential formula"));
            };
            expect(is_instance(a, x, ps[0]), || {
                "the premise is not an instance of the body".to_owned()
            })?;
        }
        RuleId::ExistsE => {
            let ps = premises(p, step, 2)?;
            let Formula::Exists(x, a) = ps[0] else {
                return Err(shape(rule, "an existential first premise"));
            };
            expect(same(ps[1], c), || format!("{c} does not match the second premise"))?;
            for &d in &step.discharged {
                let f = formula_of(p, d).expect("references checked");
                expect(same(f, a), || format!("step {d} is not the body of the first premise"))?;
            }
            expect(!c.free_vars().contains(x), || {
                format!("Condition 4 violated: `{x}` is free in {c}")
            })?;
            let open = &deps[&step.premises[1]];
            if let Some(bad) = free_in_assumptions(p, open, &step.discharged, x) {
                return Err(format!(
                    "Condition 4 violated: `{x}` is free in the open assumption at step {bad}"
                ));
            }
        }
        RuleId::DisjSubst => {
            let ps = premises(p, step, 2)?;
            let (Formula::Or(a, b), Formula::Or(a2, c2)) = (ps[0], c) else {
                return Err(shape(rule, "disjunctions as first premise and conclusion"));
            };
            expect(same(a, a2), || "the left disjuncts differ".to_owned())?;
            expect(same(c2, ps[1]), || {
                "the right disjunct is not the second premise".to_owned()
            })?;
            for &d in &step.discharged {
                let f = formula_of(p, d).expect("references checked");
                expect(same(f, b), || format!("step {d} is not the replaced disjunct"))?;
            }
        }
        RuleId::DisjComm => {
            let ps = premises(p, step, 1)?;
            let ok = match (ps[0], c) {
                (Formula::Or(b, a), Formula::Or(a2, b2)) => same(a, a2) && same(b, b2),
                _ => false,
            };
            expect(ok, || shape(rule, "B | A as premise and A | B as conclusion"))?;
        }
        RuleId::DisjAssoc => {
            let ps = premises(p, step, 1)?;
            let ok = match (ps[0], c) {
                (Formula::Or(ab, c1), Formula::Or(a2, bc)) => match (&**ab, &**bc) {
                    (Formula::Or(a1, b1), Formula::Or(b2, c2)) => {
                        same(a1, a2) && same(b1, b2) && same(c1, c2)
                    }
                    _ => false,
                },
                _ => false,
            };
            expect(ok, || shape(rule, "(A | B) | C as premise and A | (B | C) as conclusion"))?;
        }
        RuleId::ScopeForall | RuleId::ScopeExists => {
            let ps = premises(p, step, 1)?;
            let forall = rule == RuleId::ScopeForall;
            let split = |f: &Formula| -> Option<(Var, Formula)> {
                match (f, forall) {
                    (Formula::Forall(x, a), true) | (Formula::Exists(x, a), false) => {
                        Some((x.clone(), (**a).clone()))
                    }
                    _ => None,
                }
            };
            let Formula::Or(qa, b) = ps[0] else {
                return Err(shape(rule, "a disjunction as premise"));
            };
            let (Some((x, a)), Some((y, body))) = (split(qa), split(c)) else {
                return Err(shape(rule, "matching quantifiers in premise and conclusion"));
            };
            expect(x == y, || "the quantified variables differ".to_owned())?;
            let Formula::Or(a2, b2) = body else {
                return Err(shape(rule, "a quantified disjunction"));
            };
            expect(same(&a, &a2) && same(b, &b2), || {
                "the conclusion does not match the premise".to_owned()
            })?;
            expect(!b.free_vars().contains(&x), || {
                format!("`{x}` is free in the right disjunct")
            })?;
        }
        RuleId::Unnest => {
            let ps = premises(p, step, 1)?;
            check_unnest(ps[0], c).map_err(|m| format!("unnest: {m}"))?;
        }
        RuleId::DepDistribute => {
            let ps = premises(p, step, 1)?;
            check_distribute(ps[0], c).map_err(|m| format!("dep_distribute: {m}"))?;
        }
        RuleId::DepIntro => {
            let ps = premises(p, step, 1)?;
            check_intro(ps[0], c).map_err(|m| format!("dep_intro: {m}"))?;
        }
        RuleId::DepElim => {
            let ps = premises(p, step, 1)?;
            let want = apply_rule8(ps[0]).map_err(|e| e.to_string())?;
            expect(same(&want, c), || format!("expected {want}"))?;
        }
        RuleId::Identity => check_identity(p, step)?,
    }
    Ok(())
}

/// Whether `target` is `pattern` with some term substituted for the free
/// occurrences of `x`.
fn is_instance(pattern: &Formula, x: &Var, target: &Formula) -> bool {
    let mut found = None;
    find_instance(pattern, target, x, &mut found);
    let t = found.unwrap_or_else(|| Term::Var(x.clone()));
    match pattern.substitute(&t, x) {
        Ok(f) => alpha_equal(&f, target),
        Err(_) => false,
    }
}

fn find_instance(p: &Formula, q: &Formula, x: &Var, out: &mut Option<Term>) {
    match (p, q) {
        (Formula::Rel(a, xs), Formula::Rel(b, ys)) if a == b => find_in_terms(xs, ys, x, out),
        (Formula::Dep(xs), Formula::Dep(ys)) => find_in_terms(xs, ys, x, out),
        (Formula::Eq(a, b), Formula::Eq(c, d)) => {
            find_in_terms(&[a.clone(), b.clone()], &[c.clone(), d.clone()], x, out)
        }
        (Formula::Not(a), Formula::Not(b)) => find_instance(a.formula(), b.formula(), x, out),
        (Formula::And(a, b), Formula::And(c, d)) | (Formula::Or(a, b), Formula::Or(c, d)) => {
            find_instance(a, c, x, out);
            find_instance(b, d, x, out);
        }
        (Formula::Exists(v, a), Formula::Exists(_, b)) | (Formula::Forall(v, a), Formula::Forall(_, b)) => {
            if v != x {
                find_instance(a, b, x, out);
            }
        }
        _ => {}
    }
}

fn find_in_terms(xs: &[Term], ys: &[Term], x: &Var, out: &mut Option<Term>) {
    if xs.len() != ys.len() {
        return;
    }
    for (s, t) in xs.iter().zip(ys) {
        if out.is_some() {
            return;
        }
        match s {
            Term::Var(v) if v == x => *out = Some(t.clone()),
            Term::App(f, args) => {
                if let Term::App(g, targs) = t {
                    if f == g {
                        find_in_terms(args, targs, x, out);
                    }
                }
            }
            _ => {}
        }
    }
}

fn check_unnest(premise: &Formula, c: &Formula) -> Result<(), String> {
    let Formula::Dep(ts) = premise else {
        return Err("the premise must be a dependence atom".into());
    };
    let shape = || "the conclusion must be `exists z. dep(...) & z = t`".to_owned();
    let Formula::Exists(z, body) = c else {
        return Err(shape());
    };
    let Formula::And(d, e) = &**body else {
        return Err(shape());
    };
    let (Formula::Dep(us), Formula::Eq(lhs, rhs)) = (&**d, &**e) else {
        return Err(shape());
    };
    if premise.all_vars().contains(z) {
        return Err(format!("`{z}` is not a new variable"));
    }
    if us.len() != ts.len() {
        return Err("the dependence atoms have different lengths".into());
    }
    let changed: Vec<usize> = (0..ts.len()).filter(|&i| ts[i] != us[i]).collect();
    let [i] = changed[..] else {
        return Err("exactly one argument must be replaced".into());
    };
    let zt = Term::Var(z.clone());
    if us[i] != zt || *lhs != zt || *rhs != ts[i] {
        return Err(format!("expected `{z}` in place of {} and the equation {z} = {}", ts[i], ts[i]));
    }
    Ok(())
}

struct DepBlock<'f> {
    vars: Vec<Var>,
    deps: Vec<&'f Formula>,
    body: &'f Formula,
}

/// Reads `exists y1 ... yn (dep(.., y1) & ... & dep(.., yn) & C)`.
fn dep_block(f: &Formula) -> Result<DepBlock<'_>, String> {
    let mut vars = Vec::new();
    let mut cur = f;
    while let Formula::Exists(y, inner) = cur {
        vars.push(y.clone());
        cur = inner;
    }
    let mut deps = Vec::new();
    for y in &vars {
        let Formula::And(d, rest) = cur else {
            return Err(format!("missing the dependence atom for `{y}`"));
        };
        let ok = matches!(&**d, Formula::Dep(args) if args.last() == Some(&Term::Var(y.clone())));
        if !ok {
            return Err(format!("expected a dependence atom determining `{y}`, found {d}"));
        }
        deps.push(&**d);
        cur = rest;
    }
    if !(cur.is_first_order() && cur.is_quantifier_free()) {
        return Err(format!("{cur} must be quantifier-free without dependence atoms"));
    }
    Ok(DepBlock { vars, deps, body: cur })
}

fn check_distribute(premise: &Formula, c: &Formula) -> Result<(), String> {
    let Formula::Or(a, b) = premise else {
        return Err("the premise must be a disjunction".into());
    };
    let left = dep_block(a)?;
    let right = dep_block(b)?;
    let (va, vb) = (a.all_vars(), b.all_vars());
    if let Some(y) = left.vars.iter().find(|y| vb.contains(*y)) {
        return Err(format!("`{y}` appears in the right disjunct"));
    }
    if let Some(y) = right.vars.iter().find(|y| va.contains(*y)) {
        return Err(format!("`{y}` appears in the left disjunct"));
    }
    let mut parts: Vec<Formula> = left.deps.iter().chain(&right.deps).map(|d| (*d).clone()).collect();
    parts.push(Formula::or(left.body.clone(), right.body.clone()));
    let mut want = Formula::conj(parts).expect("non-empty");
    for y in left.vars.iter().chain(&right.vars).rev() {
        want = Formula::exists(y.clone(), want);
    }
    if same(&want, c) {
        Ok(())
    } else {
        Err(format!("expected {want}"))
    }
}

fn check_intro(premise: &Formula, c: &Formula) -> Result<(), String> {
    let canonical = apply_rule7(premise).map_err(|e| e.to_string())?;
    let (Formula::Forall(y, inner), Formula::Forall(y2, inner2)) = (&canonical, c) else {
        return Err("the conclusion must be `forall y. exists x. dep(z, x) & A`".into());
    };
    let (Formula::Exists(x, body), Formula::Exists(x2, body2)) = (&**inner, &**inner2) else {
        return Err("the conclusion must be `forall y. exists x. dep(z, x) & A`".into());
    };
    if y != y2 || x != x2 {
        return Err("the quantified variables differ from the premise".into());
    }
    let (Formula::And(d, a), Formula::And(d2, a2)) = (&**body, &**body2) else {
        return Err("the conclusion must be `forall y. exists x. dep(z, x) & A`".into());
    };
    if !same(a, a2) {
        return Err("the matrix differs from the premise".into());
    }
    let (Formula::Dep(want), Formula::Dep(got)) = (&**d, &**d2) else {
        return Err("expected a dependence atom".into());
    };
    let as_set = |ts: &[Term]| -> Option<VariableSet> {
        let vars: Option<Vec<Var>> = ts.iter().map(|t| t.as_var().cloned()).collect();
        let vars = vars?;
        let set: VariableSet = vars.iter().cloned().collect();
        (set.len() == vars.len()).then_some(set)
    };
    let ok = got.last() == want.last()
        && got.len() == want.len()
        && as_set(&got[..got.len() - 1]) == as_set(&want[..want.len() - 1]);
    if ok {
        Ok(())
    } else {
        Err(format!("expected the dependence atom {d}"))
    }
}

fn check_identity(p: &Proof, step: &ProofStep) -> Result<(), String> {
    let c = &step.formula;
    match step.premises.len() {
        0 => match c {
            Formula::Eq(a, b) if a == b => Ok(()),
            _ => Err("identity without premises concludes `t = t`".into()),
        },
        1 => {
            let ps = premises(p, step, 1)?;
            match (ps[0], c) {
                (Formula::Eq(a, b), Formula::Eq(b2, a2)) if a == a2 && b == b2 => Ok(()),
                _ => Err("identity with one premise swaps an equation".into()),
            }
        }
        2 => {
            let ps = premises(p, step, 2)?;
            let by = |eq: &Formula, phi: &Formula| match eq {
                Formula::Eq(t1, t2) => {
                    phi.is_first_order()
                        && c.is_first_order()
                        && congruent(phi, c, t1, t2, &mut Vec::new())
                }
                _ => false,
            };
            if by(ps[0], ps[1]) || by(ps[1], ps[0]) {
                Ok(())
            } else {
                Err("the conclusion is not obtained by replacing equals for equals".into())
            }
        }
        n => Err(format!("identity takes at most 2 premises, found {n}")),
    }
}

/// Whether `b` is `a` with some free occurrences of `t1` replaced by `t2`.
fn congruent(a: &Formula, b: &Formula, t1: &Term, t2: &Term, bound: &mut Vec<Var>) -> bool {
    let terms = |xs: &[Term], ys: &[Term], bound: &Vec<Var>| {
        xs.len() == ys.len() && xs.iter().zip(ys).all(|(s, t)| term_congruent(s, t, t1, t2, bound))
    };
    match (a, b) {
        (Formula::Rel(f, xs), Formula::Rel(g, ys)) => f == g && terms(xs, ys, bound),
        (Formula::Eq(x1, x2), Formula::Eq(y1, y2)) => {
            term_congruent(x1, y1, t1, t2, bound) && term_congruent(x2, y2, t1, t2, bound)
        }
        (Formula::Not(x), Formula::Not(y)) => congruent(x.formula(), y.formula(), t1, t2, bound),
        (Formula::And(x1, x2), Formula::And(y1, y2)) | (Formula::Or(x1, x2), Formula::Or(y1, y2)) => {
            congruent(x1, y1, t1, t2, bound) && congruent(x2, y2, t1, t2, bound)
        }
        (Formula::Exists(v, x), Formula::Exists(w, y)) | (Formula::Forall(v, x), Formula::Forall(w, y)) => {
            if v != w {
                return false;
            }
            bound.push(v.clone());
            let ok = congruent(x, y, t1, t2, bound);
            bound.pop();
            ok
        }
        _ => false,
    }
}

fn term_congruent(s: &Term, t: &Term, t1: &Term, t2: &Term, bound: &[Var]) -> bool {
    if s == t {
        return true;
    }
    let free = |u: &Term| bound.iter().all(|v| !u.contains_var(v));
    if s == t1 && t == t2 && free(t1) && free(t2) {
        return true;
    }
    match (s, t) {
        (Term::App(f, xs), Term::App(g, ys)) => {
            f == g && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| term_congruent(x, y, t1, t2, bound))
        }
        _ => false,
    }
}
