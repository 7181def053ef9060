use thiserror::Error;

use super::{FirstOrder, Formula, Term, Var, VariableSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("substituting {term} for {var} would capture {captured} under its binder")]
pub struct CaptureError {
    pub term: String,
    pub var: String,
    pub captured: String,
}

pub(super) fn substitute(f: &Formula, t: &Term, x: &Var) -> Result<Formula, CaptureError> {
    let term_vars = t.vars();
    go(f, t, x, &term_vars)
}

fn go(f: &Formula, t: &Term, x: &Var, term_vars: &VariableSet) -> Result<Formula, CaptureError> {
    Ok(match f {
        Formula::Rel(r, args) => {
            Formula::Rel(r.clone(), args.iter().map(|a| a.replace(x, t)).collect())
        }
        Formula::Dep(args) => Formula::Dep(args.iter().map(|a| a.replace(x, t)).collect()),
        Formula::Eq(a, b) => Formula::Eq(a.replace(x, t), b.replace(x, t)),
        Formula::Not(inner) => Formula::Not(FirstOrder::new_unchecked(go(inner, t, x, term_vars)?)),
        Formula::And(a, b) => Formula::and(go(a, t, x, term_vars)?, go(b, t, x, term_vars)?),
        Formula::Or(a, b) => Formula::or(go(a, t, x, term_vars)?, go(b, t, x, term_vars)?),
        Formula::Exists(y, body) | Formula::Forall(y, body) => {
            let body = if y == x {
                (**body).clone()
            } else {
                if term_vars.contains(y) && body.free_vars().contains(x) {
                    return Err(CaptureError {
                        term: t.to_string(),
                        var: x.to_string(),
                        captured: y.to_string(),
                    });
                }
                go(body, t, x, term_vars)?
            };
            match f {
                Formula::Exists(..) => Formula::Exists(y.clone(), Box::new(body)),
                _ => Formula::Forall(y.clone(), Box::new(body)),
            }
        }
    })
}

/// A variable outside `avoid`: `hint` itself if free, otherwise the first of
/// `hint_1`, `hint_2`, ... that is.
pub fn fresh_variable(avoid: &VariableSet, hint: &str) -> Var {
    let candidate = Var::new(hint);
    if !avoid.contains(&candidate) {
        return candidate;
    }
    (1..)
        .map(|i| Var::from(format!("{hint}_{i}")))
        .find(|v| !avoid.contains(v))
        .expect("unbounded search")
}

/// Equality up to consistent renaming of bound variables.
pub fn alpha_equal(lhs: &Formula, rhs: &Formula) -> bool {
    alpha(lhs, rhs, &mut Vec::new(), &mut Vec::new())
}

fn alpha(a: &Formula, b: &Formula, env_a: &mut Vec<Var>, env_b: &mut Vec<Var>) -> bool {
    match (a, b) {
        (Formula::Rel(r, xs), Formula::Rel(s, ys)) => r == s && terms_alpha(xs, ys, env_a, env_b),
        (Formula::Dep(xs), Formula::Dep(ys)) => terms_alpha(xs, ys, env_a, env_b),
        (Formula::Eq(a1, a2), Formula::Eq(b1, b2)) => {
            term_alpha(a1, b1, env_a, env_b) && term_alpha(a2, b2, env_a, env_b)
        }
        (Formula::Not(x), Formula::Not(y)) => alpha(x, y, env_a, env_b),
        (Formula::And(a1, a2), Formula::And(b1, b2)) | (Formula::Or(a1, a2), Formula::Or(b1, b2)) => {
            alpha(a1, b1, env_a, env_b) && alpha(a2, b2, env_a, env_b)
        }
        (Formula::Exists(x, fa), Formula::Exists(y, fb))
        | (Formula::Forall(x, fa), Formula::Forall(y, fb)) => {
            env_a.push(x.clone());
            env_b.push(y.clone());
            let ok = alpha(fa, fb, env_a, env_b);
            env_a.pop();
            env_b.pop();
            ok
        }
        _ => false,
    }
}

fn terms_alpha(xs: &[Term], ys: &[Term], env_a: &[Var], env_b: &[Var]) -> bool {
    xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| term_alpha(x, y, env_a, env_b))
}

fn term_alpha(x: &Term, y: &Term, env_a: &[Var], env_b: &[Var]) -> bool {
    match (x, y) {
        (Term::Var(u), Term::Var(v)) => {
            let iu = env_a.iter().rposition(|b| b == u);
            let iv = env_b.iter().rposition(|b| b == v);
            match (iu, iv) {
                (Some(i), Some(j)) => i == j,
                (None, None) => u == v,
                _ => false,
            }
        }
        (Term::Const(c), Term::Const(d)) => c == d,
        (Term::App(f, xs), Term::App(g, ys)) => f == g && terms_alpha(xs, ys, env_a, env_b),
        _ => false,
    }
}
