//! Per-rule soundness instances. Each instance builds a proof step the
//! kernel accepts, then checks on a concrete model and team that the
//! premises (and, for rules closing assumptions, the semantic contract of
//! the subderivations) imply the conclusion.

use deplogic::kernel::{apply_rule7, apply_rule8, check_step, Proof, ProofStep, RuleId};
use deplogic::normal_form::NormalFormSentence;
use deplogic::semantics::{sentence_true, Model, SearchBudget, Team};
use deplogic::syntax::{Formula, Term, Var};
use proptest::prelude::*;

use super::props::sat;
use super::*;

#[derive(Clone, Debug)]
pub struct Material {
    pub m: Model,
    pub x: Team,
    pub a: Formula,
    pub b: Formula,
    pub c: Formula,
    pub fa: Formula,
    pub fb: Formula,
    pub fc: Formula,
    pub qa: Formula,
    pub qb: Formula,
    pub d: Formula,
    pub v: Var,
    pub t: Term,
    pub bits: u64,
    pub nf: NormalFormSentence,
}

pub fn arb_material() -> impl Strategy<Value = Material> {
    let qf = || arb_qf_over(vars(), 1);
    (
        arb_model_and_team(3, 4),
        (arb_formula(2), arb_formula(2), arb_formula(2)),
        (arb_fo_formula(2), arb_fo_formula(2), arb_fo_formula(2)),
        (qf(), qf(), arb_dep()),
        (arb_var(), arb_term(), any::<u64>()),
        arb_nf(),
    )
        .prop_map(|((m, x), (a, b, c), (fa, fb, fc), (qa, qb, d), (v, t, bits), nf)| Material {
            m,
            x,
            a,
            b,
            c,
            fa,
            fb,
            fc,
            qa,
            qb,
            d,
            v,
            t,
            bits,
            nf,
        })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    /// The premises or contracts fail on this instance.
    Vacuous,
    Holds,
    Violated(String),
}

type Line = (Formula, RuleId, Vec<usize>, Vec<usize>);

fn assume(f: &Formula) -> Line {
    (f.clone(), RuleId::Assume, vec![], vec![])
}

/// Checks the last line of a script numbered from 1.
fn kernel_accepts(lines: Vec<Line>) -> Result<(), String> {
    let steps: Vec<ProofStep> = lines
        .into_iter()
        .enumerate()
        .map(|(i, (f, r, p, d))| ProofStep::new(i + 1, f, r, p, d))
        .collect();
    let n = steps.len();
    let proof = Proof::new(steps);
    let diags = check_step(&proof, n - 1);
    if diags.is_empty() {
        Ok(())
    } else {
        let text: Vec<String> = diags.iter().map(ToString::to_string).collect();
        Err(format!("{}\n{}", text.join("\n"), render(&proof)))
    }
}

fn render(p: &Proof) -> String {
    p.steps()
        .iter()
        .map(|s| format!("{}. {} {} {:?} {:?}", s.index, s.formula, s.rule, s.premises, s.discharged))
        .collect::<Vec<_>>()
        .join("\n")
}

fn verdict(premises: bool, conclusion: bool, what: impl FnOnce() -> String) -> Outcome {
    match (premises, conclusion) {
        (false, _) => Outcome::Vacuous,
        (true, true) => Outcome::Holds,
        (true, false) => Outcome::Violated(what()),
    }
}

fn subteams(x: &Team) -> Vec<Team> {
    x.subteams().collect()
}

/// Every team X(F/v) for F: X -> A.
fn supplements(m: &Model, x: &Team, v: &Var) -> Vec<Team> {
    let rows: Vec<Vec<usize>> = x.rows().iter().cloned().collect();
    let n = rows.len();
    let total = m.size().pow(n as u32);
    (0..total)
        .map(|mut code| {
            let mut values = std::collections::BTreeMap::new();
            for r in &rows {
                values.insert(r.clone(), code % m.size());
                code /= m.size();
            }
            let mut it = x.rows().iter();
            x.supplement(v, |_| it.next().map(|r| values[r])).unwrap()
        })
        .collect()
}

fn other_var(v: &Var) -> Var {
    let i = VARS.iter().position(|n| *n == v.name()).unwrap();
    Var::new(VARS[(i + 1) % VARS.len()])
}

/// Kernel check and semantic check for one instance of `rule`.
/// `Err` means the kernel rejected a step that should be accepted.
pub fn instance(rule: RuleId, mat: &Material) -> Result<Outcome, String> {
    let Material { m, x, a, b, c, fa, fb, fc, v, t, bits, .. } = mat;
    let s = |f: &Formula| sat(m, x, f);
    let show = |fs: &[&Formula]| -> String {
        let parts: Vec<String> = fs.iter().map(|f| f.to_string()).collect();
        format!("{} on\n{}{}", parts.join(" / "), deplogic::io::print_model(m), x)
    };
    Ok(match rule {
        RuleId::Assume => {
            kernel_accepts(vec![assume(a)])?;
            verdict(s(a), s(a), || show(&[a]))
        }
        RuleId::AndI => {
            let concl = Formula::and(a.clone(), b.clone());
            kernel_accepts(vec![assume(a), assume(b), (concl.clone(), rule, vec![1, 2], vec![])])?;
            verdict(s(a) && s(b), s(&concl), || show(&[a, b]))
        }
        RuleId::AndEL | RuleId::AndER => {
            let prem = Formula::and(a.clone(), b.clone());
            let concl = if rule == RuleId::AndEL { a } else { b };
            kernel_accepts(vec![assume(&prem), (concl.clone(), rule, vec![1], vec![])])?;
            verdict(s(&prem), s(concl), || show(&[&prem]))
        }
        RuleId::OrIL | RuleId::OrIR => {
            let concl = Formula::or(a.clone(), b.clone());
            let prem = if rule == RuleId::OrIL { a } else { b };
            kernel_accepts(vec![assume(prem), (concl.clone(), rule, vec![1], vec![])])?;
            verdict(s(prem), s(&concl), || show(&[prem]))
        }
        RuleId::OrE => {
            let (aa, bb) = (Formula::and(fa.clone(), a.clone()), Formula::and(fb.clone(), b.clone()));
            let cc = if bits & 1 == 1 { fc.clone() } else { Formula::or(fa.clone(), fb.clone()) };
            let major = Formula::or(aa.clone(), bb.clone());
            kernel_accepts(vec![
                assume(&major),
                assume(&aa),
                assume(&cc),
                assume(&bb),
                assume(&cc),
                (cc.clone(), rule, vec![1, 3, 5], vec![2, 4]),
            ])?;
            let contracts = subteams(x).iter().all(|y| {
                (!sat(m, y, &aa) || sat(m, y, &cc)) && (!sat(m, y, &bb) || sat(m, y, &cc))
            });
            verdict(s(&major) && contracts, s(&cc), || show(&[&major, &cc]))
        }
        RuleId::NegI => {
            let contradiction = Formula::and(fb.clone(), Formula::not(fb.clone()).unwrap());
            let concl = Formula::not(fa.clone()).unwrap();
            kernel_accepts(vec![
                assume(fa),
                assume(&contradiction),
                (concl.clone(), rule, vec![2], vec![1]),
            ])?;
            let contract = subteams(x)
                .iter()
                .all(|y| !sat(m, y, fa) || sat(m, y, &contradiction));
            verdict(contract, s(&concl), || show(&[fa]))
        }
        RuleId::NegE => {
            let prem = Formula::not(Formula::not(fa.clone()).unwrap()).unwrap();
            kernel_accepts(vec![assume(&prem), (fa.clone(), rule, vec![1], vec![])])?;
            verdict(s(&prem), s(fa), || show(&[&prem]))
        }
        RuleId::ForallI => {
            let gamma = Formula::forall(v.clone(), a.clone());
            let concl = Formula::forall(v.clone(), a.clone());
            kernel_accepts(vec![
                assume(&gamma),
                (a.clone(), RuleId::ForallE, vec![1], vec![]),
                (concl.clone(), rule, vec![2], vec![]),
            ])?;
            let wide = x.duplicate(m.size(), v);
            let contract = !sat(m, &wide, &gamma) || sat(m, &wide, a);
            verdict(s(&gamma) && contract, s(&concl), || show(&[&gamma, a]))
        }
        RuleId::ForallE => {
            let prem = Formula::forall(v.clone(), a.clone());
            let Ok(concl) = a.substitute(t, v) else {
                return Ok(Outcome::Vacuous);
            };
            kernel_accepts(vec![assume(&prem), (concl.clone(), rule, vec![1], vec![])])?;
            verdict(s(&prem), s(&concl), || show(&[&prem, &concl]))
        }
        RuleId::ExistsI => {
            let Ok(prem) = a.substitute(t, v) else {
                return Ok(Outcome::Vacuous);
            };
            let concl = Formula::exists(v.clone(), a.clone());
            kernel_accepts(vec![assume(&prem), (concl.clone(), rule, vec![1], vec![])])?;
            verdict(s(&prem), s(&concl), || show(&[&prem, &concl]))
        }
        RuleId::ExistsE => {
            let major = Formula::exists(v.clone(), a.clone());
            let bb = if bits & 1 == 1 {
                Formula::exists(v.clone(), a.clone())
            } else {
                Formula::forall(v.clone(), b.clone())
            };
            kernel_accepts(vec![
                assume(&major),
                assume(a),
                assume(&bb),
                (bb.clone(), rule, vec![1, 3], vec![2]),
            ])?;
            let contract = supplements(m, x, v)
                .iter()
                .all(|y| !sat(m, y, a) || sat(m, y, &bb));
            verdict(s(&major) && contract, s(&bb), || show(&[&major, &bb]))
        }
        RuleId::DisjSubst => {
            let major = Formula::or(a.clone(), b.clone());
            let cc = if bits & 1 == 1 { c.clone() } else { Formula::or(b.clone(), c.clone()) };
            let concl = Formula::or(a.clone(), cc.clone());
            kernel_accepts(vec![
                assume(&major),
                assume(b),
                assume(&cc),
                (concl.clone(), rule, vec![1, 3], vec![2]),
            ])?;
            let contract = subteams(x).iter().all(|z| !sat(m, z, b) || sat(m, z, &cc));
            verdict(s(&major) && contract, s(&concl), || show(&[&major, &cc]))
        }
        RuleId::DisjComm => {
            let prem = Formula::or(b.clone(), a.clone());
            let concl = Formula::or(a.clone(), b.clone());
            kernel_accepts(vec![assume(&prem), (concl.clone(), rule, vec![1], vec![])])?;
            verdict(s(&prem), s(&concl), || show(&[&prem]))
        }
        RuleId::DisjAssoc => {
            let prem = Formula::or(Formula::or(a.clone(), b.clone()), c.clone());
            let concl = Formula::or(a.clone(), Formula::or(b.clone(), c.clone()));
            kernel_accepts(vec![assume(&prem), (concl.clone(), rule, vec![1], vec![])])?;
            verdict(s(&prem), s(&concl), || show(&[&prem]))
        }
        RuleId::ScopeForall | RuleId::ScopeExists => {
            let q = |body: Formula| {
                if rule == RuleId::ScopeForall {
                    Formula::forall(v.clone(), body)
                } else {
                    Formula::exists(v.clone(), body)
                }
            };
            let bb = if bits & 1 == 1 { Formula::forall(v.clone(), b.clone()) } else { Formula::exists(v.clone(), b.clone()) };
            let prem = Formula::or(q(a.clone()), bb.clone());
            let concl = q(Formula::or(a.clone(), bb.clone()));
            kernel_accepts(vec![assume(&prem), (concl.clone(), rule, vec![1], vec![])])?;
            verdict(s(&prem), s(&concl), || show(&[&prem]))
        }
        RuleId::Unnest => {
            let Formula::Dep(ts) = &mat.d else { unreachable!() };
            let i = (*bits as usize) % ts.len();
            let z = Var::new("w");
            let mut us = ts.clone();
            us[i] = Term::Var(z.clone());
            let concl = Formula::exists(
                z.clone(),
                Formula::and(Formula::dep(us), Formula::eq(Term::Var(z), ts[i].clone())),
            );
            kernel_accepts(vec![assume(&mat.d), (concl.clone(), rule, vec![1], vec![])])?;
            verdict(s(&mat.d), s(&concl), || show(&[&mat.d]))
        }
        RuleId::DepDistribute => {
            let (u, w) = (Var::new("u"), Var::new("w"));
            let pick = |shift: u32| -> Vec<Var> {
                vars().into_iter().enumerate().filter(|(i, _)| bits >> (shift + *i as u32) & 1 == 1).map(|(_, x)| x).collect()
            };
            let block = |y: &Var, zs: Vec<Var>, body: &Formula, on: bool| -> (Vec<Var>, Vec<Formula>, Formula) {
                if on {
                    let body = body.substitute(&Term::Var(y.clone()), v).unwrap();
                    (vec![y.clone()], vec![Formula::dep_vars(&zs, y)], body)
                } else {
                    (vec![], vec![], body.clone())
                }
            };
            let (ys1, d1, c1) = block(&u, pick(2), &mat.qa, bits & 1 == 1);
            let (ys2, d2, c2) = block(&w, pick(5), &mat.qb, bits & 2 == 2);
            let wrap = |ys: &[Var], ds: &[Formula], body: Formula| {
                let mut parts = ds.to_vec();
                parts.push(body);
                let mut f = Formula::conj(parts).unwrap();
                for y in ys.iter().rev() {
                    f = Formula::exists(y.clone(), f);
                }
                f
            };
            let prem = Formula::or(wrap(&ys1, &d1, c1.clone()), wrap(&ys2, &d2, c2.clone()));
            let all_ys: Vec<Var> = ys1.iter().chain(&ys2).cloned().collect();
            let all_ds: Vec<Formula> = d1.iter().chain(&d2).cloned().collect();
            let concl = wrap(&all_ys, &all_ds, Formula::or(c1, c2));
            kernel_accepts(vec![assume(&prem), (concl.clone(), rule, vec![1], vec![])])?;
            verdict(s(&prem), s(&concl), || show(&[&prem, &concl]))
        }
        RuleId::DepIntro => {
            let y = other_var(v);
            let prem = Formula::exists(v.clone(), Formula::forall(y, a.clone()));
            let concl = apply_rule7(&prem).map_err(|e| e.to_string())?;
            kernel_accepts(vec![assume(&prem), (concl.clone(), rule, vec![1], vec![])])?;
            let (l, r) = (s(&prem), s(&concl));
            if l != r {
                Outcome::Violated(format!("not equivalent: {}", show(&[&prem, &concl])))
            } else {
                verdict(l, r, || unreachable!())
            }
        }
        RuleId::DepElim => {
            let prem = mat.nf.to_formula();
            let concl = apply_rule8(&prem).map_err(|e| e.to_string())?;
            kernel_accepts(vec![assume(&prem), (concl.clone(), rule, vec![1], vec![])])?;
            let truth = |f: &Formula| sentence_true(m, f, SearchBudget::default()).unwrap();
            verdict(truth(&prem), truth(&concl), || show(&[&prem, &concl]))
        }
        RuleId::Identity => {
            let vt = Term::Var(v.clone());
            match bits % 4 {
                0 => {
                    let refl = Formula::eq(t.clone(), t.clone());
                    kernel_accepts(vec![(refl.clone(), rule, vec![], vec![])])?;
                    verdict(true, s(&refl), || show(&[&refl]))
                }
                1 => {
                    let prem = Formula::eq(vt.clone(), t.clone());
                    let concl = Formula::eq(t.clone(), vt);
                    kernel_accepts(vec![assume(&prem), (concl.clone(), rule, vec![1], vec![])])?;
                    verdict(s(&prem), s(&concl), || show(&[&prem]))
                }
                2 => {
                    let mid = Term::Var(other_var(v));
                    let p1 = Formula::eq(vt.clone(), mid.clone());
                    let p2 = Formula::eq(mid, t.clone());
                    let concl = Formula::eq(vt, t.clone());
                    kernel_accepts(vec![assume(&p1), assume(&p2), (concl.clone(), rule, vec![1, 2], vec![])])?;
                    verdict(s(&p1) && s(&p2), s(&concl), || show(&[&p1, &p2]))
                }
                _ => {
                    let eq = Formula::eq(vt, t.clone());
                    let Ok(concl) = fa.substitute(t, v) else {
                        return Ok(Outcome::Vacuous);
                    };
                    kernel_accepts(vec![assume(&eq), assume(fa), (concl.clone(), rule, vec![1, 2], vec![])])?;
                    verdict(s(&eq) && s(fa), s(&concl), || show(&[&eq, fa]))
                }
            }
        }
    })
}

#[derive(Clone, Debug, Default)]
pub struct RuleReport {
    pub attempts: usize,
    pub non_vacuous: usize,
    pub violations: Vec<String>,
    pub kernel_rejections: Vec<String>,
}

impl RuleReport {
    pub fn passed(&self, wanted: usize) -> bool {
        self.non_vacuous >= wanted && self.violations.is_empty() && self.kernel_rejections.is_empty()
    }
}

/// Draws instances until `wanted` of them have satisfied premises, or
/// `max_attempts` are used up.
pub fn run_rule(rule: RuleId, wanted: usize, max_attempts: usize) -> RuleReport {
    use proptest::strategy::ValueTree;
    use proptest::test_runner::TestRunner;

    let mut runner = TestRunner::deterministic();
    let strategy = arb_material();
    let mut report = RuleReport::default();
    while report.non_vacuous < wanted && report.attempts < max_attempts {
        report.attempts += 1;
        let mat = strategy.new_tree(&mut runner).expect("strategy").current();
        match instance(rule, &mat) {
            Err(e) => report.kernel_rejections.push(e),
            Ok(Outcome::Vacuous) => {}
            Ok(Outcome::Holds) => report.non_vacuous += 1,
            Ok(Outcome::Violated(why)) => {
                report.non_vacuous += 1;
                report.violations.push(why);
            }
        }
    }
    report
}
