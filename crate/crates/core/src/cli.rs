//! Command-line front end.
//!
//! Exit status: 0 on success, a true verdict or an accepted proof; 1 on a
//! false verdict, a rejected proof or a counterexample; 2 on usage or input
//! errors; 3 when the search budget runs out.

use std::ffi::OsString;
use std::fs;
use std::io::Write;

use clap::{Args, Parser, Subcommand};

use crate::approx::{approximation_chain_check, build_approximation, build_omega};
use crate::io::{
    parse_formula, parse_formula_at, parse_model, parse_proof, parse_team, parse_vocabulary, print_formula_with, print_model,
    print_team, Notation, ParseError, SourceText,
};
use crate::kernel::check_proof;
use crate::normal_form::{to_normal_form, NormalFormError};
use crate::semantics::{equiv_on_small_models, satisfies, EvalError, Equivalence, Model, SearchBudget, Team};
use crate::syntax::{Formula, Vocabulary};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "deplogic", version, about = "Dependence logic toolkit")]
struct Cli {
    /// Maximum number of choice points per satisfaction query.
    #[arg(long, global = true, env = "DEPLOGIC_BUDGET")]
    budget: Option<u64>,
    /// Print formulas with ASCII connectives.
    #[arg(long, global = true)]
    ascii: bool,
    /// Vocabulary declarations, inline or `@file`.
    #[arg(long, global = true)]
    vocab: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct FormulaArg {
    /// Formula text, or `@file`.
    #[arg(long)]
    formula: String,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse a formula and print it in canonical form.
    Parse(FormulaArg),
    /// Decide whether a model and team satisfy a formula.
    Eval {
        #[arg(long)]
        model: String,
        /// Team file; defaults to the team containing only the empty assignment.
        #[arg(long)]
        team: Option<String>,
        #[command(flatten)]
        formula: FormulaArg,
    },
    /// Translate a sentence into normal form.
    Normalize(FormulaArg),
    /// Print the n-th approximation of a sentence.
    Approx {
        #[command(flatten)]
        formula: FormulaArg,
        #[arg(long)]
        n: usize,
        /// Keep the dependence atoms in the innermost round.
        #[arg(long)]
        omega: bool,
    },
    /// Check a proof script.
    CheckProof {
        #[arg(long)]
        proof: String,
        /// File with one hypothesis per line.
        #[arg(long)]
        hypotheses: Option<String>,
    },
    /// Search small models for a team separating two formulas.
    Equiv {
        #[arg(long)]
        f1: String,
        #[arg(long)]
        f2: String,
        #[arg(long, default_value_t = 3)]
        max_size: usize,
    },
    /// Truth values of the first approximations of a sentence in a model.
    Chain {
        #[command(flatten)]
        formula: FormulaArg,
        #[arg(long)]
        model: String,
        #[arg(long)]
        up_to: usize,
    },
}

#[derive(Debug)]
enum Failure {
    Input(String),
    Budget(String),
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<EvalError> for Failure {
    fn from(e: EvalError) -> Self {
        match e {
            EvalError::BudgetExceeded(_) => Failure::Budget(e.to_string()),
            other => Failure::Input(other.to_string()),
        }
    }
}

impl From<NormalFormError> for Failure {
    fn from(e: NormalFormError) -> Self {
        Failure::Input(e.to_string())
    }
}

struct Context {
    budget: SearchBudget,
    notation: Notation,
    vocab: Vocabulary,
}

fn read_file(path: &str) -> Result<SourceText, Failure> {
    fs::read_to_string(path)
        .map(|text| SourceText::new(text, path))
        .map_err(|e| Failure::Input(format!("{path}: {e}")))
}

/// Inline text, or the contents of a file when the argument starts with `@`.
fn read_arg(arg: &str) -> Result<SourceText, Failure> {
    match arg.strip_prefix('@') {
        Some(path) => read_file(path),
        None => Ok(SourceText::inline(arg)),
    }
}

impl Context {
    fn formula(&self, arg: &str, voc: &Vocabulary) -> Result<Formula, Failure> {
        Ok(parse_formula(&read_arg(arg)?, voc)?)
    }

    fn print(&self, f: &Formula) -> String {
        print_formula_with(f, self.notation)
    }

    fn model(&self, path: &str) -> Result<(Vocabulary, Model), Failure> {
        let (voc, m) = parse_model(&read_file(path)?)?;
        let voc = voc
            .merge(&self.vocab)
            .map_err(|e| Failure::Input(format!("--vocab disagrees with the model: {e}")))?;
        Ok((voc, m))
    }
}

fn verdict(out: &mut dyn Write, b: bool) -> std::io::Result<i32> {
    writeln!(out, "{b}")?;
    Ok(if b { EXIT_OK } else { EXIT_FALSE })
}

fn execute(cx: &Context, command: Command, out: &mut dyn Write) -> Result<i32, Failure> {
    let io = |e: std::io::Error| Failure::Input(e.to_string());
    match command {
        Command::Parse(FormulaArg { formula }) => {
            let f = cx.formula(&formula, &cx.vocab)?;
            writeln!(out, "{}", cx.print(&f)).map_err(io)?;
            Ok(EXIT_OK)
        }
        Command::Eval { model, team, formula } => {
            let (voc, m) = cx.model(&model)?;
            let f = cx.formula(&formula.formula, &voc)?;
            let team = match team {
                Some(path) => parse_team(&read_file(&path)?, &m)?,
                None => Team::unit(),
            };
            let b = satisfies(&m, &team, &f, cx.budget)?;
            verdict(out, b).map_err(io)
        }
        Command::Normalize(FormulaArg { formula }) => {
            let f = cx.formula(&formula, &cx.vocab)?;
            let nf = to_normal_form(&f)?;
            writeln!(out, "{}", cx.print(&nf.to_formula())).map_err(io)?;
            Ok(EXIT_OK)
        }
        Command::Approx { formula, n, omega } => {
            let f = cx.formula(&formula.formula, &cx.vocab)?;
            let nf = to_normal_form(&f)?;
            let built = if omega { build_omega(&nf, n) } else { build_approximation(&nf, n) };
            let phi = built.map_err(|e| Failure::Input(e.to_string()))?;
            writeln!(out, "{}", cx.print(&phi)).map_err(io)?;
            Ok(EXIT_OK)
        }
        Command::CheckProof { proof, hypotheses } => {
            let p = parse_proof(&read_file(&proof)?, &cx.vocab)?;
            let mut hyps = Vec::new();
            if let Some(path) = hypotheses {
                let src = read_file(&path)?;
                for (i, line) in src.text.lines().enumerate() {
                    let text = line.split('#').next().unwrap_or("");
                    if text.trim().is_empty() {
                        continue;
                    }
                    let f = parse_formula_at(text, &cx.vocab, &src.origin, i + 1, 1)?;
                    hyps.push(f);
                }
            }
            let report = check_proof(&p, &hyps);
            write!(out, "{report}").map_err(io)?;
            Ok(if report.accepted { EXIT_OK } else { EXIT_FALSE })
        }
        Command::Equiv { f1, f2, max_size } => {
            let a = cx.formula(&f1, &cx.vocab)?;
            let b = cx.formula(&f2, &cx.vocab)?;
            match equiv_on_small_models(&a, &b, max_size, cx.budget)? {
                Equivalence::Equivalent => verdict(out, true).map_err(io),
                Equivalence::Counterexample(c) => {
                    writeln!(out, "false").map_err(io)?;
                    writeln!(out, "f1 is {}, f2 is {} on", c.left, c.right).map_err(io)?;
                    write!(out, "{}{}", print_model(&c.model), print_team(&c.team)).map_err(io)?;
                    Ok(EXIT_FALSE)
                }
            }
        }
        Command::Chain { formula, model, up_to } => {
            let (voc, m) = cx.model(&model)?;
            let f = cx.formula(&formula.formula, &voc)?;
            let nf = to_normal_form(&f)?;
            let values = approximation_chain_check(&nf, &m, up_to, cx.budget)?;
            let words: Vec<String> = values.iter().map(bool::to_string).collect();
            writeln!(out, "{}", words.join(" ")).map_err(io)?;
            Ok(EXIT_OK)
        }
    }
}

/// Runs the command line `args` (including the program name), writing the
/// report to `out` and diagnostics to `err`. Returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                EXIT_INPUT
            } else {
                let _ = write!(out, "{text}");
                EXIT_OK
            };
        }
    };
    let budget = match cli.budget {
        None => SearchBudget::default(),
        Some(n) => match SearchBudget::new(n) {
            Some(b) => b,
            None => {
                let _ = writeln!(err, "error: the budget must be positive");
                return EXIT_INPUT;
            }
        },
    };
    let vocab = match cli.vocab.as_deref().map(read_arg) {
        None => Ok(Vocabulary::new()),
        Some(Ok(src)) => parse_vocabulary(&src).map_err(Failure::from),
        Some(Err(e)) => Err(e),
    };
    let result = vocab.and_then(|vocab| {
        let cx = Context {
            budget,
            notation: if cli.ascii { Notation::Ascii } else { Notation::Unicode },
            vocab,
        };
        execute(&cx, cli.command, out)
    });
    match result {
        Ok(code) => code,
        Err(Failure::Input(msg)) => {
            let _ = writeln!(err, "{msg}");
            EXIT_INPUT
        }
        Err(Failure::Budget(msg)) => {
            let _ = writeln!(err, "{msg}");
            EXIT_BUDGET
        }
    }
}
