//! Shared generators and a reference evaluator for the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use deplogic::semantics::{Model, Team};
use deplogic::syntax::{Formula, Term, Var, Vocabulary};
use proptest::prelude::*;

pub mod corpus;
pub mod proofs;
pub mod props;
pub mod soundness;

pub const VARS: [&str; 3] = ["x", "y", "z"];

pub fn voc() -> Vocabulary {
    Vocabulary::new()
        .with_constant("c")
        .unwrap()
        .with_relation("P", 1)
        .unwrap()
        .with_relation("R", 2)
        .unwrap()
        .with_function("f", 1)
        .unwrap()
}

pub fn vars() -> Vec<Var> {
    VARS.iter().map(|v| Var::new(v)).collect()
}

pub fn parse(s: &str) -> Formula {
    deplogic::io::parse_formula(&s.into(), &voc()).unwrap_or_else(|e| panic!("{s}: {e}"))
}

// ---------------------------------------------------------------------------
// Reference evaluator: the satisfaction clauses read literally. Teams are
// sets of finite maps; disjunction tries every cover X = Y ∪ Z and the
// existential tries every function F: X -> A.

pub type Row = BTreeMap<String, usize>;
pub type RefTeam = BTreeSet<Row>;

pub fn to_ref(team: &Team) -> RefTeam {
    team.assignments()
        .map(|s| s.iter().map(|(x, a)| (x.name().to_owned(), a)).collect())
        .collect()
}

fn term(m: &Model, s: &Row, t: &Term) -> usize {
    match t {
        Term::Var(x) => s[x.name()],
        Term::Const(c) => m.constant(c).unwrap(),
        Term::App(f, args) => {
            let vals: Vec<usize> = args.iter().map(|a| term(m, s, a)).collect();
            m.function(f).unwrap().get(&vals)
        }
    }
}

/// Tarski truth of a first-order formula under one assignment.
pub fn classical(m: &Model, s: &Row, f: &Formula) -> bool {
    match f {
        Formula::Rel(r, args) => {
            let vals: Vec<usize> = args.iter().map(|a| term(m, s, a)).collect();
            m.relation(r).unwrap().contains(&vals)
        }
        Formula::Eq(a, b) => term(m, s, a) == term(m, s, b),
        Formula::Dep(_) => panic!("dependence atom in a first-order formula"),
        Formula::Not(g) => !classical(m, s, g.formula()),
        Formula::And(a, b) => classical(m, s, a) && classical(m, s, b),
        Formula::Or(a, b) => classical(m, s, a) || classical(m, s, b),
        Formula::Exists(x, body) => (0..m.size()).any(|v| {
            let mut t = s.clone();
            t.insert(x.name().to_owned(), v);
            classical(m, &t, body)
        }),
        Formula::Forall(x, body) => (0..m.size()).all(|v| {
            let mut t = s.clone();
            t.insert(x.name().to_owned(), v);
            classical(m, &t, body)
        }),
    }
}

pub fn reference_sat(m: &Model, x: &RefTeam, f: &Formula) -> bool {
    if f.is_first_order() {
        return x.iter().all(|s| classical(m, s, f));
    }
    match f {
        Formula::Dep(ts) => {
            let (args, last) = ts.split_at(ts.len() - 1);
            x.iter().all(|s| {
                x.iter().all(|t| {
                    let agree = args.iter().all(|a| term(m, s, a) == term(m, t, a));
                    !agree || term(m, s, &last[0]) == term(m, t, &last[0])
                })
            })
        }
        Formula::And(a, b) => reference_sat(m, x, a) && reference_sat(m, x, b),
        Formula::Or(a, b) => {
            let rows: Vec<&Row> = x.iter().collect();
            let n = rows.len();
            // each row goes to Y only, Z only, or both
            let mut code = vec![0u8; n];
            loop {
                let y: RefTeam = (0..n).filter(|&i| code[i] != 1).map(|i| rows[i].clone()).collect();
                let z: RefTeam = (0..n).filter(|&i| code[i] != 0).map(|i| rows[i].clone()).collect();
                if reference_sat(m, &y, a) && reference_sat(m, &z, b) {
                    return true;
                }
                let mut i = 0;
                while i < n && code[i] == 2 {
                    code[i] = 0;
                    i += 1;
                }
                if i == n {
                    return false;
                }
                code[i] += 1;
            }
        }
        Formula::Exists(v, body) => {
            let rows: Vec<&Row> = x.iter().collect();
            let n = rows.len();
            let mut choice = vec![0usize; n];
            loop {
                let y: RefTeam = rows
                    .iter()
                    .zip(&choice)
                    .map(|(s, &a)| {
                        let mut t = (*s).clone();
                        t.insert(v.name().to_owned(), a);
                        t
                    })
                    .collect();
                if reference_sat(m, &y, body) {
                    return true;
                }
                let mut i = 0;
                while i < n && choice[i] + 1 == m.size() {
                    choice[i] = 0;
                    i += 1;
                }
                if i == n {
                    return false;
                }
                choice[i] += 1;
            }
        }
        Formula::Forall(v, body) => {
            let y: RefTeam = x
                .iter()
                .flat_map(|s| {
                    (0..m.size()).map(move |a| {
                        let mut t = s.clone();
                        t.insert(v.name().to_owned(), a);
                        t
                    })
                })
                .collect();
            reference_sat(m, &y, body)
        }
        Formula::Rel(..) | Formula::Eq(..) | Formula::Not(_) => unreachable!("first-order"),
    }
}

/// Rough number of steps the reference evaluator needs on a team of
/// `rows` assignments over a domain of `size` elements.
pub fn reference_cost(f: &Formula, rows: f64, size: f64) -> f64 {
    if f.is_first_order() {
        return rows.max(1.0);
    }
    match f {
        Formula::Dep(_) => rows * rows + 1.0,
        Formula::And(a, b) => reference_cost(a, rows, size) + reference_cost(b, rows, size),
        Formula::Or(a, b) => 3f64.powf(rows) * (reference_cost(a, rows, size) + reference_cost(b, rows, size)),
        Formula::Exists(_, body) => size.powf(rows) * reference_cost(body, rows, size),
        Formula::Forall(_, body) => reference_cost(body, rows * size, size),
        _ => rows,
    }
}

// ---------------------------------------------------------------------------
// Generators over the vocabulary {c, P/1, R/2, f/1} and variables x, y, z.

pub fn arb_var() -> impl Strategy<Value = Var> {
    prop::sample::select(VARS.to_vec()).prop_map(Var::new)
}

pub fn arb_term() -> impl Strategy<Value = Term> {
    prop_oneof![
        4 => arb_var().prop_map(Term::Var),
        1 => Just(Term::constant("c")),
        1 => arb_var().prop_map(|v| Term::app("f", vec![Term::Var(v)])),
    ]
}

pub fn arb_fo_atom() -> impl Strategy<Value = Formula> {
    prop_oneof![
        arb_term().prop_map(|t| Formula::rel("P", vec![t])),
        (arb_term(), arb_term()).prop_map(|(a, b)| Formula::rel("R", vec![a, b])),
        (arb_term(), arb_term()).prop_map(|(a, b)| Formula::eq(a, b)),
    ]
}

pub fn arb_literal() -> impl Strategy<Value = Formula> {
    prop_oneof![
        3 => arb_fo_atom(),
        1 => arb_fo_atom().prop_map(|a| Formula::not(a).unwrap()),
    ]
}

pub fn arb_dep() -> impl Strategy<Value = Formula> {
    prop::collection::vec(arb_term(), 1..=3).prop_map(Formula::dep)
}

/// Formulas of depth at most `depth`, with dependence atoms.
pub fn arb_formula(depth: u32) -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![3 => arb_literal(), 1 => arb_dep()];
    leaf.prop_recursive(depth, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (arb_var(), inner.clone()).prop_map(|(x, a)| Formula::exists(x, a)),
            (arb_var(), inner.clone()).prop_map(|(x, a)| Formula::forall(x, a)),
            inner.prop_map(|a| if a.is_first_order() { Formula::not(a).unwrap() } else { a }),
        ]
    })
}

/// First-order formulas of depth at most `depth`.
pub fn arb_fo_formula(depth: u32) -> impl Strategy<Value = Formula> {
    arb_literal().prop_recursive(depth, 16, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (arb_var(), inner.clone()).prop_map(|(x, a)| Formula::exists(x, a)),
            (arb_var(), inner.clone()).prop_map(|(x, a)| Formula::forall(x, a)),
            inner.prop_map(|a| Formula::not(a).unwrap()),
        ]
    })
}

/// Closes `f` by quantifying its free variables, choosing each quantifier
/// from `kinds`.
pub fn close(f: Formula, kinds: &[bool]) -> Formula {
    let mut out = f;
    for (i, x) in out.free_vars().into_iter().collect::<Vec<_>>().into_iter().rev().enumerate() {
        out = if kinds[i % kinds.len()] { Formula::forall(x, out) } else { Formula::exists(x, out) };
    }
    out
}

pub fn arb_sentence(depth: u32) -> impl Strategy<Value = Formula> {
    (arb_formula(depth), prop::collection::vec(any::<bool>(), 3)).prop_map(|(f, k)| close(f, &k))
}

pub fn arb_model(size: usize) -> impl Strategy<Value = Model> {
    let cells = |arity: u32| size.pow(arity);
    (
        0..size,
        prop::collection::vec(any::<bool>(), cells(1)),
        prop::collection::vec(any::<bool>(), cells(2)),
        prop::collection::vec(0..size, cells(1)),
    )
        .prop_map(move |(c, p, r, f)| {
            let pick = |bits: &[bool], arity: usize| -> Vec<Vec<usize>> {
                deplogic::semantics::tuples(size, arity)
                    .zip(bits)
                    .filter(|(_, b)| **b)
                    .map(|(t, _)| t)
                    .collect()
            };
            Model::new(size)
                .unwrap()
                .with_constant("c", c)
                .unwrap()
                .with_relation("P", 1, pick(&p, 1))
                .unwrap()
                .with_relation("R", 2, pick(&r, 2))
                .unwrap()
                .with_function("f", 1, f)
                .unwrap()
        })
}

/// A team over x, y, z with at most `max_rows` rows.
pub fn arb_team(size: usize, max_rows: usize) -> impl Strategy<Value = Team> {
    prop::collection::vec(prop::collection::vec(0..size, 3), 0..=max_rows)
        .prop_map(|rows| Team::from_rows(&vars(), rows).unwrap())
}

pub fn arb_model_and_team(max_size: usize, max_rows: usize) -> impl Strategy<Value = (Model, Team)> {
    (1..=max_size).prop_flat_map(move |n| (arb_model(n), arb_team(n, max_rows)))
}

fn arb_term_over(names: Vec<Var>) -> impl Strategy<Value = Term> + Clone {
    let pick = prop::sample::select(names);
    prop_oneof![
        4 => pick.clone().prop_map(Term::Var),
        1 => Just(Term::constant("c")),
        1 => pick.prop_map(|v| Term::app("f", vec![Term::Var(v)])),
    ]
}

/// Quantifier-free first-order formulas over `names`.
pub fn arb_qf_over(names: Vec<Var>, depth: u32) -> impl Strategy<Value = Formula> {
    let t = arb_term_over(names);
    let atom = prop_oneof![
        t.clone().prop_map(|a| Formula::rel("P", vec![a])),
        (t.clone(), t.clone()).prop_map(|(a, b)| Formula::rel("R", vec![a, b])),
        (t.clone(), t).prop_map(|(a, b)| Formula::eq(a, b)),
    ];
    let literal = prop_oneof![
        2 => atom.clone(),
        1 => atom.prop_map(|a| Formula::not(a).unwrap()),
    ];
    literal.prop_recursive(depth, 8, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Formula::or(a, b)),
        ]
    })
}

/// Random normal forms with universals from `x, y` and existentials from
/// `u, v`.
pub fn arb_nf() -> impl Strategy<Value = deplogic::normal_form::NormalFormSentence> {
    (1..=2usize, 1..=2usize)
        .prop_flat_map(|(m, n)| {
            let us: Vec<Var> = ["x", "y"][..m].iter().map(|v| Var::new(v)).collect();
            let es: Vec<Var> = ["u", "v"][..n].iter().map(|v| Var::new(v)).collect();
            let all: Vec<Var> = us.iter().chain(&es).cloned().collect();
            (
                Just(us),
                Just(es),
                prop::collection::vec((any::<bool>(), any::<u8>()), n),
                arb_qf_over(all, 2),
            )
        })
        .prop_map(|(us, es, dep_bits, matrix)| {
            let mut deps = Vec::new();
            for (j, (has, mask)) in dep_bits.into_iter().enumerate() {
                if !has {
                    continue;
                }
                let earlier: Vec<Var> = us.iter().chain(&es[..j]).cloned().collect();
                let determining: Vec<Var> = earlier
                    .into_iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, v)| v)
                    .collect();
                deps.push(deplogic::normal_form::DepConstraint::new(determining, es[j].clone()));
            }
            deplogic::normal_form::NormalFormSentence::new(us, es, deps, matrix).unwrap()
        })
}

/// A model of each size from 1 to 3, chosen independently.
pub fn arb_sized_model() -> impl Strategy<Value = Model> {
    (1..=3usize).prop_flat_map(arb_model)
}
