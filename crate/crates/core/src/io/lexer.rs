use super::source::Span;

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    Int(usize),
    LParen,
    RParen,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Comma,
    Semi,
    Dot,
    Slash,
    Tilde,
    Amp,
    Bar,
    Eq,
    Neq,
    Arrow,
    Forall,
    Exists,
    Dep,
    Eof,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Int(n) => format!("number `{n}`"),
            Tok::Eof => "end of input".to_owned(),
            other => format!("`{}`", other.text()),
        }
    }

    fn text(&self) -> &'static str {
        match self {
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::LBrace => "{",
            Tok::RBrace => "}",
            Tok::LBracket => "[",
            Tok::RBracket => "]",
            Tok::Comma => ",",
            Tok::Semi => ";",
            Tok::Dot => ".",
            Tok::Slash => "/",
            Tok::Tilde => "~",
            Tok::Amp => "&",
            Tok::Bar => "|",
            Tok::Eq => "=",
            Tok::Neq => "!=",
            Tok::Arrow => "->",
            Tok::Forall => "forall",
            Tok::Exists => "exists",
            Tok::Dep => "dep",
            _ => "",
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Token {
    pub tok: Tok,
    pub span: Span,
}

#[derive(Debug)]
pub(crate) struct LexError {
    pub message: String,
    pub span: Span,
}

/// Tokenizes `text`. `line` and `col` give the position of its first
/// character in the enclosing file. `#` starts a comment running to the end
/// of the line.
pub(crate) fn tokenize(text: &str, line: usize, col: usize) -> Result<Vec<Token>, LexError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let mut line = line;
    let mut col = col;
    while i < chars.len() {
        let c = chars[i];
        let start = col;
        let single = |tok: Tok, out: &mut Vec<Token>| {
            out.push(Token {
                tok,
                span: Span::new(line, start, start + 1),
            });
        };
        match c {
            '\n' => {
                line += 1;
                col = 1;
                i += 1;
                continue;
            }
            c if c.is_whitespace() => {}
            '#' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
                continue;
            }
            '(' => single(Tok::LParen, &mut out),
            ')' => single(Tok::RParen, &mut out),
            '{' => single(Tok::LBrace, &mut out),
            '}' => single(Tok::RBrace, &mut out),
            '[' => single(Tok::LBracket, &mut out),
            ']' => single(Tok::RBracket, &mut out),
            ',' => single(Tok::Comma, &mut out),
            ';' => single(Tok::Semi, &mut out),
            '.' => single(Tok::Dot, &mut out),
            '/' => single(Tok::Slash, &mut out),
            '~' | '¬' => single(Tok::Tilde, &mut out),
            '&' | '∧' => single(Tok::Amp, &mut out),
            '|' | '∨' => single(Tok::Bar, &mut out),
            '≠' => single(Tok::Neq, &mut out),
            '→' => single(Tok::Arrow, &mut out),
            '∀' => single(Tok::Forall, &mut out),
            '∃' => single(Tok::Exists, &mut out),
            '=' => single(Tok::Eq, &mut out),
            '!' | '-' => {
                let next = chars.get(i + 1).copied();
                let tok = match (c, next) {
                    ('!', Some('=')) => Tok::Neq,
                    ('-', Some('>')) => Tok::Arrow,
                    _ => {
                        return Err(LexError {
                            message: format!("unexpected character `{c}`"),
                            span: Span::new(line, start, start + 1),
                        })
                    }
                };
                out.push(Token {
                    tok,
                    span: Span::new(line, start, start + 2),
                });
                i += 2;
                col += 2;
                continue;
            }
            c if c.is_ascii_digit() => {
                let mut j = i;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                let digits: String = chars[i..j].iter().collect();
                let n = digits.parse().map_err(|_| LexError {
                    message: format!("number `{digits}` is too large"),
                    span: Span::new(line, start, start + (j - i)),
                })?;
                out.push(Token {
                    tok: Tok::Int(n),
                    span: Span::new(line, start, start + (j - i)),
                });
                col += j - i;
                i = j;
                continue;
            }
            c if c.is_alphabetic() || c == '_' => {
                let mut j = i;
                while j < chars.len()
                    && (chars[j].is_alphanumeric() || chars[j] == '_' || chars[j] == '\'')
                {
                    j += 1;
                }
                let word: String = chars[i..j].iter().collect();
                let tok = match word.as_str() {
                    "forall" => Tok::Forall,
                    "exists" => Tok::Exists,
                    "dep" => Tok::Dep,
                    _ => Tok::Ident(word),
                };
                out.push(Token {
                    tok,
                    span: Span::new(line, start, start + (j - i)),
                });
                col += j - i;
                i = j;
                continue;
            }
            other => {
                return Err(LexError {
                    message: format!("unexpected character `{other}`"),
                    span: Span::new(line, start, start + 1),
                })
            }
        }
        i += 1;
        col += 1;
    }
    out.push(Token {
        tok: Tok::Eof,
        span: Span::new(line, col, col),
    });
    Ok(out)
}
