use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::lexer::{tokenize, Tok, Token};
use super::source::{SourceText, Span};
use super::{ParseError, ParseErrorKind};
use crate::semantics::{Model, ModelError};
use crate::syntax::{Vocabulary, VocabularyError};

struct Cursor<'a> {
    tokens: Vec<Token>,
    pos: usize,
    origin: &'a str,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a SourceText) -> Result<Self, ParseError> {
        let tokens = tokenize(&src.text, 1, 1).map_err(|e| {
            ParseError::new(ParseErrorKind::Syntax, e.message, e.span, &src.origin)
        })?;
        Ok(Cursor {
            tokens,
            pos: 0,
            origin: &src.origin,
        })
    }

    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].tok
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

    fn expect(&mut self, tok: Tok) -> Result<Span, ParseError> {
        if *self.peek() == tok {
            Ok(self.bump().span)
        } else {
            Err(self.unexpected(&tok.describe()))
        }
    }

    fn unexpected(&self, wanted: &str) -> ParseError {
        self.err(
            ParseErrorKind::Syntax,
            format!("expected {wanted}, found {}", self.peek().describe()),
            self.span(),
        )
    }

    fn ident(&mut self) -> Result<(String, Span), ParseError> {
        match self.peek().clone() {
            Tok::Ident(name) => Ok((name, self.bump().span)),
            _ => Err(self.unexpected("a name")),
        }
    }

    fn int(&mut self) -> Result<(usize, Span), ParseError> {
        match *self.peek() {
            Tok::Int(n) => Ok((n, self.bump().span)),
            _ => Err(self.unexpected("a number")),
        }
    }

    fn skip_separators(&mut self) {
        while *self.peek() == Tok::Semi {
            self.bump();
        }
    }

    /// `name/arity`
    fn signature(&mut self) -> Result<(String, Span, usize), ParseError> {
        let (name, span) = self.ident()?;
        self.expect(Tok::Slash)?;
        let (arity, _) = self.int()?;
        Ok((name, span, arity))
    }

    /// `(a, b, ...)` or a bare element for a 1-tuple.
    fn tuple(&mut self) -> Result<(Vec<(usize, Span)>, Span), ParseError> {
        let start = self.span();
        if *self.peek() != Tok::LParen {
            let (n, span) = self.int()?;
            return Ok((vec![(n, span)], span));
        }
        self.bump();
        let mut out = Vec::new();
        if *self.peek() != Tok::RParen {
            loop {
                out.push(self.int()?);
                if *self.peek() == Tok::Comma {
                    self.bump();
                } else {
                    break;
                }
            }
        }
        let end = self.expect(Tok::RParen)?;
        Ok((out, Span::new(start.line, start.col_start, end.col_end)))
    }
}

fn keyword(tok: &Tok) -> Option<&str> {
    match tok {
        Tok::Ident(s) if matches!(s.as_str(), "domain" | "constant" | "relation" | "function") => {
            Some(s)
        }
        _ => None,
    }
}

fn check_arity(cur: &Cursor<'_>, name: &str, arity: usize, found: usize, span: Span) -> Result<(), ParseError> {
    if found == arity {
        Ok(())
    } else {
        Err(cur.err(
            ParseErrorKind::Arity,
            format!("`{name}` has arity {arity} but this tuple has {found} element(s)"),
            span,
        ))
    }
}

fn check_elements(cur: &Cursor<'_>, size: usize, elems: &[(usize, Span)]) -> Result<(), ParseError> {
    for &(n, span) in elems {
        if n >= size {
            return Err(cur.err(
                ParseErrorKind::OutOfDomain,
                format!("element {n} is outside the domain 0..{size}"),
                span,
            ));
        }
    }
    Ok(())
}

fn model_error(cur: &Cursor<'_>, e: ModelError, span: Span) -> ParseError {
    let kind = match e {
        ModelError::Duplicate(_) => ParseErrorKind::DuplicateSymbol,
        ModelError::PartialFunction { .. } => ParseErrorKind::PartialFunction,
        ModelError::OutOfDomain { .. } => ParseErrorKind::OutOfDomain,
        ModelError::Arity { .. } | ModelError::NullaryFunction(_) => ParseErrorKind::Arity,
        ModelError::EmptyDomain => ParseErrorKind::Syntax,
    };
    cur.err(kind, e.to_string(), span)
}

/// Parses a model file. Returns the vocabulary it interprets along with
/// the structure.
///
/// ```text
/// domain 3
/// constant c = 0
/// relation R/2 = {(0,1), (1,2)}
/// relation P/1 = {0, 2}
/// function f/1 = [0->1, 1->2, 2->0]
/// function g/2 = [(0,0)->0, (0,1)->1, ...]
/// ```
pub fn parse_model(src: &SourceText) -> Result<(Vocabulary, Model), ParseError> {
    let mut cur = Cursor::new(src)?;
    cur.skip_separators();
    match cur.peek() {
        Tok::Ident(s) if s == "domain" => {
            cur.bump();
        }
        _ => return Err(cur.unexpected("`domain <size>` as the first declaration")),
    }
    let (size, size_span) = cur.int()?;
    let mut model =
        Model::new(size).map_err(|e| model_error(&cur, e, size_span))?;
    loop {
        cur.skip_separators();
        if *cur.peek() == Tok::Eof {
            break;
        }
        let kw_span = cur.span();
        let kw = match keyword(cur.peek()) {
            Some(k) => k.to_owned(),
            None => return Err(cur.unexpected("a declaration")),
        };
        cur.bump();
        match kw.as_str() {
            "domain" => {
                return Err(cur.err(
                    ParseErrorKind::DuplicateSymbol,
                    "the domain is declared more than once",
                    kw_span,
                ))
            }
            "constant" => {
                let (name, span) = cur.ident()?;
                cur.expect(Tok::Eq)?;
                let (n, vspan) = cur.int()?;
                check_elements(&cur, size, &[(n, vspan)])?;
                model
                    .add_constant(&name, n)
                    .map_err(|e| model_error(&cur, e, span))?;
            }
            "relation" => {
                let (name, span, arity) = cur.signature()?;
                cur.expect(Tok::Eq)?;
                cur.expect(Tok::LBrace)?;
                let mut tuples = Vec::new();
                if *cur.peek() != Tok::RBrace {
                    loop {
                        let (t, tspan) = cur.tuple()?;
                        check_arity(&cur, &name, arity, t.len(), tspan)?;
                        check_elements(&cur, size, &t)?;
                        tuples.push(t.into_iter().map(|(n, _)| n).collect());
                        if *cur.peek() == Tok::Comma {
                            cur.bump();
                        } else {
                            break;
                        }
                    }
                }
                cur.expect(Tok::RBrace)?;
                model
                    .add_relation(&name, arity, tuples)
                    .map_err(|e| model_error(&cur, e, span))?;
            }
            _ => {
                let (name, span, arity) = cur.signature()?;
                if arity == 0 {
                    return Err(cur.err(
                        ParseErrorKind::Arity,
                        format!("function `{name}` must have positive arity; declare a constant instead"),
                        span,
                    ));
                }
                cur.expect(Tok::Eq)?;
                cur.expect(Tok::LBracket)?;
                let mut entries = BTreeMap::new();
                if *cur.peek() != Tok::RBracket {
                    loop {
                        let (t, tspan) = cur.tuple()?;
                        check_arity(&cur, &name, arity, t.len(), tspan)?;
                        check_elements(&cur, size, &t)?;
                        cur.expect(Tok::Arrow)?;
                        let (v, vspan) = cur.int()?;
                        check_elements(&cur, size, &[(v, vspan)])?;
                        let args: Vec<usize> = t.into_iter().map(|(n, _)| n).collect();
                        if entries.get(&args).is_some_and(|&old| old != v) {
                            return Err(cur.err(
                                ParseErrorKind::Syntax,
                                format!("`{name}` is given two values on the same arguments"),
                                tspan,
                            ));
                        }
                        entries.insert(args, v);
                        if *cur.peek() == Tok::Comma {
                            cur.bump();
                        } else {
                            break;
                        }
                    }
                }
                cur.expect(Tok::RBracket)?;
                model
                    .add_function_map(&name, arity, &entries)
                    .map_err(|e| model_error(&cur, e, span))?;
            }
        }
    }
    Ok((model.vocabulary(), model))
}

/// Parses a vocabulary declaration list such as
/// `constant c; relation R/2; function f/1`. Declarations are separated by
/// newlines or `;`.
pub fn parse_vocabulary(src: &SourceText) -> Result<Vocabulary, ParseError> {
    let mut cur = Cursor::new(src)?;
    let mut voc = Vocabulary::new();
    loop {
        cur.skip_separators();
        if *cur.peek() == Tok::Eof {
            return Ok(voc);
        }
        let kw = match keyword(cur.peek()) {
            Some(k) if k != "domain" => k.to_owned(),
            _ => return Err(cur.unexpected("`constant`, `relation` or `function`")),
        };
        cur.bump();
        let (res, span) = match kw.as_str() {
            "constant" => {
                let (name, span) = cur.ident()?;
                (voc.add_constant(&name), span)
            }
            "relation" => {
                let (name, span, arity) = cur.signature()?;
                (voc.add_relation(&name, arity), span)
            }
            _ => {
                let (name, span, arity) = cur.signature()?;
                (voc.add_function(&name, arity), span)
            }
        };
        res.map_err(|e| {
            let kind = match e {
                VocabularyError::Duplicate(_) => ParseErrorKind::DuplicateSymbol,
                _ => ParseErrorKind::Arity,
            };
            cur.err(kind, e.to_string(), span)
        })?;
    }
}

fn tuple_text(t: &[usize]) -> String {
    if t.len() == 1 {
        t[0].to_string()
    } else {
        let parts: Vec<String> = t.iter().map(usize::to_string).collect();
        format!("({})", parts.join(","))
    }
}

/// Renders a model in the format read by [`parse_model`].
pub fn print_model(m: &Model) -> String {
    let mut out = format!("domain {}\n", m.size());
    for (c, v) in m.constants() {
        let _ = writeln!(out, "constant {c} = {v}");
    }
    for (r, rel) in m.relations() {
        let tuples: Vec<String> = rel.tuples().iter().map(|t| tuple_text(t)).collect();
        let _ = writeln!(out, "relation {r}/{} = {{{}}}", rel.arity(), tuples.join(", "));
    }
    for (f, fun) in m.functions() {
        let entries: Vec<String> = fun
            .entries()
            .map(|(args, v)| format!("{}->{v}", tuple_text(&args)))
            .collect();
        let _ = writeln!(out, "function {f}/{} = [{}]", fun.arity(), entries.join(", "));
    }
    out
}
