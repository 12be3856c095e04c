use std::fmt;

use serde::Serialize;

/// Source position, 1-based line and column (columns count chars).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct Span {
    pub offset: usize,
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ParseError {
    #[error("{span}: lex error: {msg}")]
    Lex { span: Span, msg: String },
    #[error("{span}: syntax error: {msg}")]
    Syntax { span: Span, msg: String },
    #[error("{span}: semantic error: {msg}")]
    Semantic { span: Span, msg: String },
    #[error("{span}: bounds error: {msg}")]
    Bounds { span: Span, msg: String },
}

impl ParseError {
    pub fn span(&self) -> Span {
        match self {
            ParseError::Lex { span, .. }
            | ParseError::Syntax { span, .. }
            | ParseError::Semantic { span, .. }
            | ParseError::Bounds { span, .. } => *span,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            ParseError::Lex { msg, .. }
            | ParseError::Syntax { msg, .. }
            | ParseError::Semantic { msg, .. }
            | ParseError::Bounds { msg, .. } => msg,
        }
    }

    pub(crate) fn syntax(span: Span, msg: impl Into<String>) -> Self {
        ParseError::Syntax { span, msg: msg.into() }
    }

    pub(crate) fn semantic(span: Span, msg: impl Into<String>) -> Self {
        ParseError::Semantic { span, msg: msg.into() }
    }
}

pub type Result<T> = std::result::Result<T, ParseError>;
