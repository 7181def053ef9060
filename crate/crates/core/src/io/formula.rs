use super::lexer::{tokenize, Tok, Token};
use super::source::{SourceText, Span};
use super::{ParseError, ParseErrorKind};
use crate::syntax::{FirstOrder, Formula, Term, Var, Vocabulary};

/// Parses a formula over `voc`.
pub fn parse_formula(src: &SourceText, voc: &Vocabulary) -> Result<Formula, ParseError> {
    parse_formula_at(&src.text, voc, &src.origin, 1, 1)
}

/// Parses `text` whose first character sits at `line`:`col` of `origin`.
pub fn parse_formula_at(
    text: &str,
    voc: &Vocabulary,
    origin: &str,
    line: usize,
    col: usize,
) -> Result<Formula, ParseError> {
    let tokens = tokenize(text, line, col)
        .map_err(|e| ParseError::new(ParseErrorKind::Syntax, e.message, e.span, origin))?;
    let mut p = Parser {
        tokens,
        pos: 0,
        voc,
        origin,
    };
    let f = p.formula()?;
    p.expect(Tok::Eof)?;
    Ok(f)
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    voc: &'a Vocabulary,
    origin: &'a str,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.pos + k).min(self.tokens.len() - 1);
        &self.tokens[i].tok
    }

    fn span(&self) -> Span {
        self.tokens[self.pos].span
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn err(&self, kind: ParseErrorKind, message: impl Into<String>, span: Span) -> ParseError {
        ParseError::new(kind, message, span, self.origin)
    }

    fn expect(&mut self, tok: Tok) -> Result<Token, ParseError> {
        if *self.peek() == tok {
            Ok(self.bump())
        } else {
            Err(self.err(
                ParseErrorKind::Syntax,
                format!("expected {}, found {}", tok.describe(), self.peek().describe()),
                self.span(),
            ))
        }
    }

    fn negate(&self, inner: Formula, span: Span) -> Result<Formula, ParseError> {
        FirstOrder::new(inner).map(Formula::Not).map_err(|_| {
            self.err(
                ParseErrorKind::NegationScope,
                "negation may only be applied to first-order formulas",
                span,
            )
        })
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let start = self.span();
        let lhs = self.disj()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.formula()?;
            let ante = self.negate(lhs, start)?;
            return Ok(Formula::or(ante, rhs));
        }
        Ok(lhs)
    }

    fn disj(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.conj()?;
        if *self.peek() == Tok::Bar {
            self.bump();
            let rhs = self.disj()?;
            return Ok(Formula::or(lhs, rhs));
        }
        Ok(lhs)
    }

    fn conj(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.unary()?;
        if *self.peek() == Tok::Amp {
            self.bump();
            let rhs = self.conj()?;
            return Ok(Formula::and(lhs, rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Tok::Tilde => {
                let span = self.bump().span;
                let inner = self.unary()?;
                self.negate(inner, span)
            }
            Tok::Forall | Tok::Exists => {
                let forall = *self.peek() == Tok::Forall;
                self.bump();
                let mut vars = vec![self.binder()?];
                while *self.peek() != Tok::Dot {
                    vars.push(self.binder()?);
                }
                self.bump();
                let body = self.formula()?;
                Ok(vars.into_iter().rev().fold(body, |acc, x| {
                    if forall {
                        Formula::forall(x, acc)
                    } else {
                        Formula::exists(x, acc)
                    }
                }))
            }
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            _ => self.atom(),
        }
    }

    fn binder(&mut self) -> Result<Var, ParseError> {
        let span = self.span();
        match self.bump().tok {
            Tok::Ident(name) => {
                if self.voc.contains(&name) {
                    Err(self.err(
                        ParseErrorKind::Vocabulary,
                        format!("`{name}` is a vocabulary symbol and cannot be bound"),
                        span,
                    ))
                } else {
                    Ok(Var::from(name))
                }
            }
            other => Err(self.err(
                ParseErrorKind::Syntax,
                format!("expected a variable, found {}", other.describe()),
                span,
            )),
        }
    }

    fn args(&mut self) -> Result<Vec<Term>, ParseError> {
        self.expect(Tok::LParen)?;
        let mut out = Vec::new();
        if *self.peek() == Tok::RParen {
            self.bump();
            return Ok(out);
        }
        loop {
            out.push(self.term()?);
            match self.peek() {
                Tok::Comma => {
                    self.bump();
                }
                Tok::RParen => {
                    self.bump();
                    return Ok(out);
                }
                other => {
                    return Err(self.err(
                        ParseErrorKind::Syntax,
                        format!("expected `,` or `)`, found {}", other.describe()),
                        self.span(),
                    ))
                }
            }
        }
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        let span = self.span();
        match self.peek().clone() {
            Tok::Dep => {
                self.bump();
                Ok(Formula::Dep(self.args()?))
            }
            Tok::Eq if *self.peek_at(1) == Tok::LParen => {
                self.bump();
                let args = self.args()?;
                if args.is_empty() {
                    return Err(self.err(
                        ParseErrorKind::Syntax,
                        "`=()` needs at least one argument; write `dep()`",
                        span,
                    ));
                }
                Ok(Formula::Dep(args))
            }
            Tok::Ident(name) if self.voc.relation_arity(&name).is_some() => {
                let arity = self.voc.relation_arity(&name).unwrap_or(0);
                self.bump();
                let args = if *self.peek() == Tok::LParen {
                    self.args()?
                } else {
                    Vec::new()
                };
                if args.len() != arity {
                    return Err(self.err(
                        ParseErrorKind::Vocabulary,
                        format!("relation `{name}` expects {arity} argument(s), got {}", args.len()),
                        span,
                    ));
                }
                Ok(Formula::Rel(name, args))
            }
            Tok::Ident(_) => {
                let lhs = self.term()?;
                let op_span = self.span();
                match self.bump().tok {
                    Tok::Eq => Ok(Formula::Eq(lhs, self.term()?)),
                    Tok::Neq => Ok(Formula::neq(lhs, self.term()?)),
                    other => Err(self.err(
                        ParseErrorKind::Syntax,
                        format!("expected `=` or `!=` after term, found {}", other.describe()),
                        op_span,
                    )),
                }
            }
            other => Err(self.err(
                ParseErrorKind::Syntax,
                format!("expected a formula, found {}", other.describe()),
                span,
            )),
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let span = self.span();
        let name = match self.bump().tok {
            Tok::Ident(name) => name,
            other => {
                return Err(self.err(
                    ParseErrorKind::Syntax,
                    format!("expected a term, found {}", other.describe()),
                    span,
                ))
            }
        };
        let applied = *self.peek() == Tok::LParen;
        if let Some(arity) = self.voc.function_arity(&name) {
            if !applied {
                return Err(self.err(
                    ParseErrorKind::Vocabulary,
                    format!("function `{name}` must be applied to {arity} argument(s)"),
                    span,
                ));
            }
            let args = self.args()?;
            if args.len() != arity {
                return Err(self.err(
                    ParseErrorKind::Vocabulary,
                    format!("function `{name}` expects {arity} argument(s), got {}", args.len()),
                    span,
                ));
            }
            return Ok(Term::App(name, args));
        }
        if self.voc.has_constant(&name) {
            if applied {
                return Err(self.err(
                    ParseErrorKind::Vocabulary,
                    format!("constant `{name}` cannot take arguments"),
                    span,
                ));
            }
            return Ok(Term::Const(name));
        }
        if self.voc.relation_arity(&name).is_some() {
            return Err(self.err(
                ParseErrorKind::Vocabulary,
                format!("relation `{name}` used as a term"),
                span,
            ));
        }
        if applied {
            return Err(self.err(
                ParseErrorKind::Vocabulary,
                format!("unknown function symbol `{name}`"),
                span,
            ));
        }
        Ok(Term::Var(Var::from(name)))
    }
}

/// Output alphabet for printed formulas.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Notation {
    #[default]
    Ascii,
    Unicode,
}

struct Symbols {
    forall: &'static str,
    exists: &'static str,
    not: &'static str,
    and: &'static str,
    or: &'static str,
    neq: &'static str,
    implies: &'static str,
}

const ASCII: Symbols = Symbols {
    forall: "forall ",
    exists: "exists ",
    not: "~",
    and: " & ",
    or: " | ",
    neq: " != ",
    implies: " -> ",
};

const UNICODE: Symbols = Symbols {
    forall: "∀",
    exists: "∃",
    not: "¬",
    and: " ∧ ",
    or: " ∨ ",
    neq: " ≠ ",
    implies: " → ",
};

/// Canonical ASCII rendering; `parse_formula` maps it back to the same tree.
pub fn print_formula(f: &Formula) -> String {
    print_formula_with(f, Notation::Ascii)
}

pub fn print_formula_with(f: &Formula, notation: Notation) -> String {
    let sym = match notation {
        Notation::Ascii => &ASCII,
        Notation::Unicode => &UNICODE,
    };
    let mut out = String::new();
    write_formula(f, sym, &mut out);
    out
}

fn is_implication(f: &Formula) -> bool {
    matches!(f, Formula::Or(a, _) if matches!(**a, Formula::Not(_)))
}

// Atoms and negations never need parentheses.
fn is_tight(f: &Formula) -> bool {
    matches!(
        f,
        Formula::Rel(..) | Formula::Eq(..) | Formula::Dep(_) | Formula::Not(_)
    )
}

fn write_wrapped(f: &Formula, wrap: bool, sym: &Symbols, out: &mut String) {
    if wrap {
        out.push('(');
        write_formula(f, sym, out);
        out.push(')');
    } else {
        write_formula(f, sym, out);
    }
}

fn write_terms(args: &[Term], out: &mut String) {
    out.push('(');
    for (i, a) in args.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        out.push_str(&a.to_string());
    }
    out.push(')');
}

fn write_formula(f: &Formula, sym: &Symbols, out: &mut String) {
    match f {
        Formula::Rel(r, args) => {
            out.push_str(r);
            if !args.is_empty() {
                write_terms(args, out);
            }
        }
        Formula::Eq(a, b) => {
            out.push_str(&format!("{a} = {b}"));
        }
        Formula::Dep(args) => {
            out.push_str("dep");
            write_terms(args, out);
        }
        Formula::Not(inner) => match inner.formula() {
            Formula::Eq(a, b) => out.push_str(&format!("{a}{}{b}", sym.neq)),
            g => {
                out.push_str(sym.not);
                write_wrapped(g, !is_tight(g), sym, out);
            }
        },
        Formula::Or(a, b) if is_implication(f) => {
            let Formula::Not(ante) = &**a else {
                unreachable!()
            };
            write_wrapped(ante, !is_tight(ante), sym, out);
            out.push_str(sym.implies);
            write_wrapped(b, !(is_tight(b) || is_implication(b)), sym, out);
        }
        Formula::And(a, b) | Formula::Or(a, b) => {
            let is_and = matches!(f, Formula::And(..));
            write_wrapped(a, !is_tight(a), sym, out);
            out.push_str(if is_and { sym.and } else { sym.or });
            let chain = match &**b {
                Formula::And(..) => is_and,
                Formula::Or(..) => !is_and && !is_implication(b),
                _ => false,
            };
            write_wrapped(b, !(is_tight(b) || chain), sym, out);
        }
        Formula::Exists(..) | Formula::Forall(..) => {
            let forall = matches!(f, Formula::Forall(..));
            out.push_str(if forall { sym.forall } else { sym.exists });
            let mut cur = f;
            let mut first = true;
            loop {
                match (cur, forall) {
                    (Formula::Forall(x, body), true) | (Formula::Exists(x, body), false) => {
                        if !first {
                            out.push(' ');
                        }
                        out.push_str(x.name());
                        first = false;
                        cur = body;
                    }
                    _ => break,
                }
            }
            out.push_str(". ");
            write_formula(cur, sym, out);
        }
    }
}
