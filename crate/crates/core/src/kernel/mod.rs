//! Checker for natural-deduction proofs in dependence logic.
//!
//! A proof is a linear script of steps. Each step names a rule, the
//! earlier steps it uses as premises, and the assumption steps it
//! discharges. Every step depends on a set of open assumptions, computed as
//! the union of its premises' sets minus whatever it discharges.

mod rules;
mod schema;

pub use schema::{apply_rule7, apply_rule8, SchemaError};

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use crate::io::{Diagnostic, Span};
use crate::syntax::{alpha_equal, Formula};

macro_rules! rules {
    ($($variant:ident => $name:literal),* $(,)?) => {
        #[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum RuleId {
            $($variant),*
        }

        impl RuleId {
            pub const ALL: &'static [RuleId] = &[$(RuleId::$variant),*];

            pub fn name(self) -> &'static str {
                match self {
                    $(RuleId::$variant => $name),*
                }
            }
        }
    };
}

rules! {
    Assume => "assume",
    AndI => "and_i",
    AndEL => "and_e_l",
    AndER => "and_e_r",
    OrIL => "or_i_l",
    OrIR => "or_i_r",
    OrE => "or_e",
    NegI => "neg_i",
    NegE => "neg_e",
    ForallI => "forall_i",
    ForallE => "forall_e",
    ExistsI => "exists_i",
    ExistsE => "exists_e",
    DisjSubst => "disj_subst",
    DisjComm => "disj_comm",
    DisjAssoc => "disj_assoc",
    ScopeForall => "scope_forall",
    ScopeExists => "scope_exists",
    Unnest => "unnest",
    DepDistribute => "dep_distribute",
    DepIntro => "dep_intro",
    DepElim => "dep_elim",
    Identity => "identity",
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RuleId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        RuleId::ALL
            .iter()
            .copied()
            .find(|r| r.name() == s)
            .ok_or_else(|| format!("unknown rule `{s}`"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofStep {
    /// The label other steps use to refer to this one.
    pub index: usize,
    pub formula: Formula,
    pub rule: RuleId,
    pub premises: Vec<usize>,
    pub discharged: Vec<usize>,
    /// Source location, if the step was read from a script.
    pub span: Span,
}

impl ProofStep {
    pub fn new(index: usize, formula: Formula, rule: RuleId, premises: Vec<usize>, discharged: Vec<usize>) -> Self {
        ProofStep {
            index,
            formula,
            rule,
            premises,
            discharged,
            span: Span::new(index, 1, 1),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Proof {
    steps: Vec<ProofStep>,
    origin: String,
}

impl Proof {
    pub fn new(steps: Vec<ProofStep>) -> Proof {
        Self::with_origin(steps, "<proof>")
    }

    pub fn with_origin(steps: Vec<ProofStep>, origin: &str) -> Proof {
        Proof {
            steps,
            origin: origin.to_owned(),
        }
    }

    pub fn steps(&self) -> &[ProofStep] {
        &self.steps
    }

    pub fn origin(&self) -> &str {
        &self.origin
    }

    pub fn conclusion(&self) -> Option<&Formula> {
        self.steps.last().map(|s| &s.formula)
    }

    /// Position of the step labelled `index`.
    pub fn position(&self, index: usize) -> Option<usize> {
        self.steps.iter().position(|s| s.index == index)
    }

    fn step(&self, index: usize) -> Option<&ProofStep> {
        self.position(index).map(|i| &self.steps[i])
    }

    /// Problems with labels and references: duplicate labels, references
    /// to missing or later steps, and discharges of non-assumptions.
    pub fn structure_errors(&self) -> Vec<(usize, String)> {
        let mut out = Vec::new();
        let mut seen = BTreeSet::new();
        for step in &self.steps {
            if !seen.insert(step.index) {
                out.push((step.index, format!("step {} is defined twice", step.index)));
            }
            for &p in step.premises.iter().chain(&step.discharged) {
                if p >= step.index || !seen.contains(&p) {
                    out.push((step.index, format!("reference to step {p}, which is not an earlier step")));
                }
            }
            for &d in &step.discharged {
                if let Some(s) = self.step(d) {
                    if s.rule != RuleId::Assume {
                        out.push((step.index, format!("step {d} is not an assumption and cannot be discharged")));
                    }
                }
            }
        }
        out
    }

    /// The open assumptions each step depends on, keyed by step label.
    /// Steps with broken references are given an empty set.
    pub fn dependencies(&self) -> BTreeMap<usize, BTreeSet<usize>> {
        let mut deps: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
        for step in &self.steps {
            let set = if step.rule == RuleId::Assume {
                BTreeSet::from([step.index])
            } else {
                rules::dependencies(self, step, &deps)
            };
            deps.insert(step.index, set);
        }
        deps
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckReport {
    pub accepted: bool,
    /// Step label and diagnostic for every problem found.
    pub failures: Vec<(usize, Diagnostic)>,
    /// Assumptions the conclusion still depends on.
    pub open_assumptions: Vec<usize>,
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", if self.accepted { "accepted" } else { "rejected" })?;
        for (step, d) in &self.failures {
            writeln!(f, "step {step}: {d}")?;
        }
        if !self.open_assumptions.is_empty() {
            let open: Vec<String> = self.open_assumptions.iter().map(usize::to_string).collect();
            writeln!(f, "open assumptions: {}", open.join(", "))?;
        }
        Ok(())
    }
}

/// Diagnostics for step `k` (a position in `p.steps()`). Empty iff the
/// step follows from its premises by its rule with all side conditions met.
pub fn check_step(p: &Proof, k: usize) -> Vec<Diagnostic> {
    let deps = p.dependencies();
    check_step_with(p, k, &deps)
}

fn check_step_with(p: &Proof, k: usize, deps: &BTreeMap<usize, BTreeSet<usize>>) -> Vec<Diagnostic> {
    let step = &p.steps[k];
    let diag = |msg: String| Diagnostic::error(msg, step.span, &p.origin);
    let mut out: Vec<Diagnostic> = Vec::new();
    let mut broken = false;
    for (label, msg) in p.structure_errors() {
        if label == step.index {
            out.push(diag(msg));
            broken = true;
        }
    }
    if broken {
        return out;
    }
    if let Err(msg) = rules::check(p, step, deps) {
        out.push(diag(msg));
    }
    out
}

/// Checks every step, then that each assumption the conclusion depends on
/// is alpha-equivalent to one of `allowed_open`.
pub fn check_proof(p: &Proof, allowed_open: &[Formula]) -> CheckReport {
    let deps = p.dependencies();
    let mut failures = Vec::new();
    for k in 0..p.steps.len() {
        for d in check_step_with(p, k, &deps) {
            failures.push((p.steps[k].index, d));
        }
    }
    let open: Vec<usize> = match p.steps.last() {
        Some(last) => deps[&last.index].iter().copied().collect(),
        None => {
            failures.push((0, Diagnostic::error("the proof has no steps", Span::new(1, 1, 1), &p.origin)));
            Vec::new()
        }
    };
    for &a in &open {
        let step = p.step(a).expect("dependencies only name existing steps");
        if !allowed_open.iter().any(|h| alpha_equal(h, &step.formula)) {
            failures.push((
                a,
                Diagnostic::error(
                    format!("assumption {} is still open and is not a hypothesis", step.formula),
                    step.span,
                    &p.origin,
                ),
            ));
        }
    }
    CheckReport {
        accepted: failures.is_empty(),
        failures,
        open_assumptions: open,
    }
}
