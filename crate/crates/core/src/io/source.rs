use std::fmt;

/// Input text together with where it came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SourceText {
    pub text: String,
    pub origin: String,
}

impl SourceText {
    pub fn new(text: impl Into<String>, origin: impl Into<String>) -> Self {
        SourceText {
            text: text.into(),
            origin: origin.into(),
        }
    }

    pub fn inline(text: impl Into<String>) -> Self {
        Self::new(text, "<inline>")
    }
}

impl From<&str> for SourceText {
    fn from(text: &str) -> Self {
        SourceText::inline(text)
    }
}

/// A 1-based line with a half-open, 1-based column range (in characters).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Span {
    pub line: usize,
    pub col_start: usize,
    pub col_end: usize,
}

impl Span {
    pub fn new(line: usize, col_start: usize, col_end: usize) -> Self {
        Span {
            line,
            col_start,
            col_end: col_end.max(col_start),
        }
    }

    /// A span covering a whole line of `len` characters.
    pub fn line(line: usize, len: usize) -> Self {
        Span::new(line, 1, len + 1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Severity {
    Error,
    Warning,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Severity::Error => f.write_str("error"),
            Severity::Warning => f.write_str("warning"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub message: String,
    pub span: Span,
    pub origin: String,
}

impl Diagnostic {
    pub fn error(message: impl Into<String>, span: Span, origin: &str) -> Self {
        Diagnostic {
            severity: Severity::Error,
            message: message.into(),
            span,
            origin: origin.to_owned(),
        }
    }

    pub fn warning(message: impl Into<String>, span: Span, origin: &str) -> Self {
        Diagnostic {
            severity: Severity::Warning,
            ..Diagnostic::error(message, span, origin)
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:{}:{}: {}: {}",
            self.origin, self.span.line, self.span.col_start, self.severity, self.message
        )
    }
}
