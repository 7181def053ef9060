mod common;

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use common::proofs::{BAD_FORALL, PRENEX};
use common::*;
use deplogic::io::parse_formula;
use deplogic::syntax::{alpha_equal, Vocabulary};

const THETA: &str = "exists z. forall x. exists y. dep(y, x) & y != z";
const EXAMPLE: &str = "forall x. exists y z. dep(y, z) & x = z & y != c";

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_deplogic"));
    c.env_remove("DEPLOGIC_BUDGET");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("deplogic-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path
}

fn constant_model(size: usize) -> PathBuf {
    scratch(&format!("m{size}.model"), &format!("domain {size}\nconstant c = 0\n"))
}

fn reparses(text: &str, voc: &Vocabulary) -> deplogic::syntax::Formula {
    parse_formula(&text.trim_end().into(), voc).unwrap_or_else(|e| panic!("{text}: {e}"))
}

#[test]
fn approx_prints_the_first_round() {
    let o = run(&["--vocab", "constant c", "approx", "--formula", EXAMPLE, "--n", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let voc = Vocabulary::new().with_constant("c").unwrap();
    let got = reparses(&stdout(&o), &voc);
    let want = reparses("forall x0. exists y0 z0. x0 = z0 & y0 != c", &voc);
    assert!(alpha_equal(&got, &want), "{got}");
}

#[test]
fn eval_reports_through_the_exit_status() {
    let m = constant_model(2);
    let o = run(&["eval", "--model", m.to_str().unwrap(), "--formula", THETA]);
    assert_eq!((o.status.code(), stdout(&o).trim()), (Some(1), "false"));
    let o = run(&["eval", "--model", m.to_str().unwrap(), "--formula", "exists x. x != c"]);
    assert_eq!((o.status.code(), stdout(&o).trim()), (Some(0), "true"));
    let team = scratch("t.team", "vars x\n0\n1\n");
    let o = run(&["eval", "--model", m.to_str().unwrap(), "--team", team.to_str().unwrap(), "--formula", "dep(x)"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn equiv_with_own_normal_form() {
    let o = run(&["normalize", "--formula", THETA]);
    assert_eq!(o.status.code(), Some(0));
    let nf = stdout(&o);
    let o = run(&["equiv", "--f1", THETA, "--f2", nf.trim(), "--max-size", "3"]);
    assert_eq!((o.status.code(), stdout(&o).trim()), (Some(0), "true"));
    let o = run(&["--vocab", "relation P/1", "equiv", "--f1", "exists x. P(x)", "--f2", "forall x. P(x)", "--max-size", "2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("false\n"));
}

#[test]
fn input_errors_exit_with_two() {
    assert_eq!(run(&["parse", "--formula", "~dep(x)"]).status.code(), Some(2));
    assert_eq!(run(&["eval", "--model", "/nonexistent/model", "--formula", "x = x"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&[]).status.code(), Some(2));
    let o = run(&["--budget", "0", "parse", "--formula", "x = x"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn budget_flag_beats_environment() {
    let m = constant_model(4);
    let args = ["eval", "--model", m.to_str().unwrap(), "--formula", THETA];
    let o = bin().args(["--budget", "5"]).args(args).output().unwrap();
    assert_eq!(o.status.code(), Some(3));
    let o = bin().env("DEPLOGIC_BUDGET", "5").args(args).output().unwrap();
    assert_eq!(o.status.code(), Some(3));
    let o = bin().env("DEPLOGIC_BUDGET", "5").args(["--budget", "10000000"]).args(args).output().unwrap();
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn check_proof_files() {
    let voc = "constant c; relation P/1; relation R/2; function f/1";
    let good = scratch("good.proof", PRENEX.text);
    let hyps = scratch("good.hyp", &PRENEX.hypotheses.join("\n"));
    let o = run(&["--vocab", voc, "check-proof", "--proof", good.to_str().unwrap(), "--hypotheses", hyps.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("accepted\n"));
    let o = run(&["--vocab", voc, "check-proof", "--proof", good.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("open assumptions: 1"));

    let bad = scratch("bad.proof", BAD_FORALL.text);
    let hyps = scratch("bad.hyp", &BAD_FORALL.hypotheses.join("\n"));
    let o = run(&["--vocab", voc, "check-proof", "--proof", bad.to_str().unwrap(), "--hypotheses", hyps.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("step 2: "), "{}", stdout(&o));
}

#[test]
fn chain_lists_truth_values() {
    let m = constant_model(3);
    let o = run(&["chain", "--model", m.to_str().unwrap(), "--formula", EXAMPLE, "--up-to", "4"]);
    assert_eq!((o.status.code(), stdout(&o).trim()), (Some(0), "true true false false"));
}

#[test]
fn normalize_and_approx_outputs_reparse() {
    let v = voc();
    assert!(parse(EXAMPLE).is_sentence());
    let vocab = "constant c; relation P/1; relation R/2; function f/1";
    for src in [THETA, EXAMPLE, "(forall x. exists y. dep(x, y) & R(x, y)) | exists z. P(f(z))", "forall x. (P(x) | exists y. dep(y) & R(x, y))"] {
        for ascii in [false, true] {
            let mut base = vec!["--vocab", vocab];
            if ascii {
                base.push("--ascii");
            }
            let o = run(&[&base[..], &["normalize", "--formula", src]].concat());
            assert_eq!(o.status.code(), Some(0));
            let nf = reparses(&stdout(&o), &v);
            assert!(nf.is_sentence());
            assert!(deplogic::normal_form::NormalFormSentence::from_formula(&nf).is_ok());
            for n in ["1", "2", "3"] {
                for omega in [false, true] {
                    let mut args = [&base[..], &["approx", "--formula", src, "--n", n]].concat();
                    if omega {
                        args.push("--omega");
                    }
                    let o = run(&args);
                    assert_eq!(o.status.code(), Some(0));
                    let text = stdout(&o);
                    if ascii {
                        assert!(text.is_ascii(), "{text}");
                    }
                    assert!(reparses(&text, &v).is_sentence());
                }
            }
        }
    }
}
