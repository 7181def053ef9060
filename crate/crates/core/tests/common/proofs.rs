use deplogic::io::{parse_proof, ParseError};
use deplogic::kernel::{check_proof, CheckReport, Proof};
use deplogic::syntax::Formula;

use super::{parse, voc};

pub struct Script {
    pub name: &'static str,
    pub text: &'static str,
    pub hypotheses: &'static [&'static str],
}

impl Script {
    pub fn proof(&self) -> Result<Proof, ParseError> {
        parse_proof(&self.text.into(), &voc())
    }

    pub fn hypotheses(&self) -> Vec<Formula> {
        self.hypotheses.iter().map(|h| parse(h)).collect()
    }

    pub fn check(&self) -> Result<CheckReport, ParseError> {
        Ok(check_proof(&self.proof()?, &self.hypotheses()))
    }
}

/// Moving an existential out of a disjunction, as in the prenex step of the
/// normal-form construction.
pub const PRENEX: Script = Script {
    name: "prenex fragment",
    text: "\
1. P(c) | exists x. R(x, c)           assume
2. (exists x. R(x, c)) | P(c)         by disj_comm 1
3. exists x. R(x, c) | P(c)           by scope_exists 2
4. R(x, c) | P(c)                     assume
5. P(c) | R(x, c)                     by disj_comm 4
6. exists x. P(c) | R(x, c)           by exists_i 5
7. exists x. P(c) | R(x, c)           by exists_e 3, 6 discharge 4
",
    hypotheses: &["P(c) | exists x. R(x, c)"],
};

pub const DEP_INTRO: Script = Script {
    name: "dependence introduction",
    text: "\
1. exists x. forall y. R(x, y) & P(z)          assume
2. forall y. exists x. dep(z, x) & (R(x, y) & P(z))  by dep_intro 1
",
    hypotheses: &["exists x. forall y. R(x, y) & P(z)"],
};

pub const DEP_ELIM: Script = Script {
    name: "dependence elimination",
    text: "\
1. forall x. exists y. dep(x, y) & R(x, y)     assume
2. forall a. exists b. R(a, b) & forall a1. exists b1. R(a1, b1) & (a = a1 -> b = b1)  by dep_elim 1
",
    hypotheses: &["forall x. exists y. dep(x, y) & R(x, y)"],
};

pub const ACCEPTED: [Script; 3] = [PRENEX, DEP_INTRO, DEP_ELIM];

/// Generalizes over a variable free in an open assumption.
pub const BAD_FORALL: Script = Script {
    name: "generalizing a free variable",
    text: "\
1. R(x, c)              assume
2. forall x. R(x, c)    by forall_i 1
",
    hypotheses: &["R(x, c)"],
};

/// Case analysis with a conclusion that is not first-order.
pub const BAD_CASES: Script = Script {
    name: "case analysis into a dependence atom",
    text: "\
1. P(x) | ~P(x)         assume
2. dep(x)               assume
3. P(x)                 assume
4. dep(x) | P(x)        by or_i_l 2
5. ~P(x)                assume
6. dep(x) | P(x)        by or_i_l 2
7. dep(x) | P(x)        by or_e 1, 4, 6 discharge 3, 5
",
    hypotheses: &["P(x) | ~P(x)", "dep(x)"],
};

pub const DANGLING: Script = Script {
    name: "reference to a missing step",
    text: "\
1. P(c)                 assume
2. P(c) & P(c)          by and_i 1 5
",
    hypotheses: &["P(c)"],
};

/// Line number of the step at fault for each mutant.
pub const REJECTED: [(Script, usize, &str); 3] = [
    (BAD_FORALL, 2, "Condition 3"),
    (BAD_CASES, 7, "Condition 1"),
    (DANGLING, 2, "step 5"),
];
