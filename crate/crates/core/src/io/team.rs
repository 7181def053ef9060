use std::fmt::Write as _;

use super::lexer::{tokenize, Tok};
use super::source::{SourceText, Span};
use super::{ParseError, ParseErrorKind};
use crate::semantics::{Model, Team};
use crate::syntax::Var;

/// Parses a team file: a `vars` header followed by one row of domain
/// elements per line. Rows may repeat; a team is a set. With no variables
/// the row `()` stands for the empty assignment.
///
/// ```text
/// vars x y
/// 0 1
/// 1 0
/// ```
pub fn parse_team(src: &SourceText, m: &Model) -> Result<Team, ParseError> {
    let origin = src.origin.as_str();
    let err = |kind, msg: String, span| ParseError::new(kind, msg, span, origin);
    let mut vars: Option<Vec<Var>> = None;
    let mut rows = Vec::new();
    let voc = m.vocabulary();
    for (i, line) in src.text.lines().enumerate() {
        let lineno = i + 1;
        let toks = tokenize(line, lineno, 1)
            .map_err(|e| err(ParseErrorKind::Syntax, e.message, e.span))?;
        if toks.len() == 1 {
            continue;
        }
        let Some(declared) = &vars else {
            match &toks[0].tok {
                Tok::Ident(kw) if kw == "vars" => {}
                other => {
                    return Err(err(
                        ParseErrorKind::Syntax,
                        format!("expected `vars`, found {}", other.describe()),
                        toks[0].span,
                    ))
                }
            }
            let mut list: Vec<Var> = Vec::new();
            for t in &toks[1..toks.len() - 1] {
                let Tok::Ident(name) = &t.tok else {
                    return Err(err(
                        ParseErrorKind::Syntax,
                        format!("expected a variable, found {}", t.tok.describe()),
                        t.span,
                    ));
                };
                if voc.contains(name) {
                    return Err(err(
                        ParseErrorKind::Vocabulary,
                        format!("`{name}` is a symbol of the model, not a variable"),
                        t.span,
                    ));
                }
                let x = Var::from(name.as_str());
                if list.contains(&x) {
                    return Err(err(
                        ParseErrorKind::DuplicateVariable,
                        format!("variable `{name}` is declared twice"),
                        t.span,
                    ));
                }
                list.push(x);
            }
            vars = Some(list);
            continue;
        };
        let body = &toks[..toks.len() - 1];
        let unit_row = matches!(body, [a, b] if a.tok == Tok::LParen && b.tok == Tok::RParen);
        let mut row = Vec::new();
        if !unit_row {
            for t in body {
                match t.tok {
                    Tok::Int(n) if n < m.size() => row.push(n),
                    Tok::Int(n) => {
                        return Err(err(
                            ParseErrorKind::OutOfDomain,
                            format!("element {n} is outside the domain 0..{}", m.size()),
                            t.span,
                        ))
                    }
                    Tok::Comma => {}
                    ref other => {
                        return Err(err(
                            ParseErrorKind::Syntax,
                            format!("expected a domain element, found {}", other.describe()),
                            t.span,
                        ))
                    }
                }
            }
        }
        if row.len() != declared.len() {
            return Err(err(
                ParseErrorKind::Arity,
                format!(
                    "row has {} value(s) but {} variable(s) are declared",
                    row.len(),
                    declared.len()
                ),
                Span::line(lineno, line.chars().count()),
            ));
        }
        rows.push(row);
    }
    let Some(vars) = vars else {
        return Err(err(
            ParseErrorKind::Syntax,
            "missing `vars` header".to_owned(),
            Span::new(1, 1, 1),
        ));
    };
    Ok(Team::from_rows(&vars, rows).expect("variables checked distinct"))
}

/// Renders a team in the format read by [`parse_team`].
pub fn print_team(team: &Team) -> String {
    let mut out = String::from("vars");
    for x in team.vars() {
        let _ = write!(out, " {x}");
    }
    out.push('\n');
    for row in team.rows() {
        if row.is_empty() {
            out.push_str("()\n");
        } else {
            let cells: Vec<String> = row.iter().map(usize::to_string).collect();
            let _ = writeln!(out, "{}", cells.join(" "));
        }
    }
    out
}
