use std::collections::BTreeSet;

use super::formula::parse_formula_at;
use super::lexer::{tokenize, Tok, Token};
use super::source::{SourceText, Span};
use super::{ParseError, ParseErrorKind};
use crate::kernel::{Proof, ProofStep, RuleId};
use crate::syntax::Vocabulary;

/// Parses a proof script, one step per line:
///
/// ```text
/// 1. R(c) assume
/// 2. R(c) & R(c) by and_i 1, 1
/// 3. exists x. R(x) by exists_i 1
/// ```
///
/// After the rule name come the premise labels, then optionally
/// `discharge` and the labels of the assumptions closed by the step.
pub fn parse_proof(src: &SourceText, voc: &Vocabulary) -> Result<Proof, ParseError> {
    let origin = src.origin.as_str();
    let err = |kind, msg: String, span| ParseError::new(kind, msg, span, origin);
    let mut steps = Vec::new();
    let mut labels = BTreeSet::new();
    for (i, line) in src.text.lines().enumerate() {
        let lineno = i + 1;
        let toks = tokenize(line, lineno, 1).map_err(|e| err(ParseErrorKind::Syntax, e.message, e.span))?;
        let toks = &toks[..toks.len() - 1];
        if toks.is_empty() {
            continue;
        }
        let line_span = Span::line(lineno, line.chars().count());
        let index = match (&toks[0].tok, toks.get(1).map(|t| &t.tok)) {
            (Tok::Int(n), Some(Tok::Dot)) => *n,
            _ => {
                return Err(err(
                    ParseErrorKind::Syntax,
                    "a step starts with its label, as in `3.`".into(),
                    toks[0].span,
                ))
            }
        };
        let mut end = toks.len();
        let mut trailing = take_labels(toks, &mut end);
        let mut discharged = Vec::new();
        if end > 2 && matches!(&toks[end - 1].tok, Tok::Ident(k) if k == "discharge") {
            end -= 1;
            discharged = trailing;
            trailing = take_labels(toks, &mut end);
        }
        let premises = trailing;
        let Some(rule_tok) = toks[..end].last().filter(|_| end > 2) else {
            return Err(err(ParseErrorKind::Syntax, "missing formula or rule name".into(), line_span));
        };
        let Tok::Ident(name) = &rule_tok.tok else {
            return Err(err(
                ParseErrorKind::Syntax,
                format!("expected a rule name, found {}", rule_tok.tok.describe()),
                rule_tok.span,
            ));
        };
        let rule: RuleId = name
            .parse()
            .map_err(|m: String| err(ParseErrorKind::UnknownRule, m, rule_tok.span))?;
        end -= 1;
        if end > 3 && matches!(&toks[end - 1].tok, Tok::Ident(k) if k == "by") {
            end -= 1;
        }
        if end <= 2 {
            return Err(err(ParseErrorKind::Syntax, "missing formula".into(), line_span));
        }
        let (first, last) = (toks[2].span.col_start, toks[end - 1].span.col_end);
        let text: String = line.chars().skip(first - 1).take(last - first).collect();
        let formula = parse_formula_at(&text, voc, origin, lineno, first)?;
        if !labels.insert(index) {
            return Err(err(
                ParseErrorKind::Syntax,
                format!("step {index} is defined twice"),
                toks[0].span,
            ));
        }
        for &r in premises.iter().chain(&discharged) {
            if r >= index || !labels.contains(&r) {
                return Err(err(
                    ParseErrorKind::DanglingReference,
                    format!("step {index} refers to step {r}, which is not an earlier step"),
                    line_span,
                ));
            }
        }
        let mut step = ProofStep::new(index, formula, rule, premises, discharged);
        step.span = line_span;
        steps.push(step);
    }
    Ok(Proof::with_origin(steps, origin))
}

/// Pops trailing integers (and commas) off `toks[..end]`.
fn take_labels(toks: &[Token], end: &mut usize) -> Vec<usize> {
    let mut out = Vec::new();
    while *end > 2 {
        match toks[*end - 1].tok {
            Tok::Int(n) => out.push(n),
            Tok::Comma => {}
            _ => break,
        }
        *end -= 1;
    }
    out.reverse();
    out
}
