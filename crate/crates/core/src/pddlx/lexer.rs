//! Tokenizer and s-expression reader.

use super::error::{ParseError, Result, Span};

const MAX_DEPTH: usize = 256;

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum SExpr {
    Atom(String, Span),
    List(Vec<SExpr>, Span),
}

impl SExpr {
    pub(crate) fn span(&self) -> Span {
        match self {
            SExpr::Atom(_, s) | SExpr::List(_, s) => *s,
        }
    }

    pub(crate) fn as_atom(&self) -> Option<&str> {
        match self {
            SExpr::Atom(a, _) => Some(a),
            SExpr::List(..) => None,
        }
    }

    pub(crate) fn as_list(&self) -> Option<&[SExpr]> {
        match self {
            SExpr::List(items, _) => Some(items),
            SExpr::Atom(..) => None,
        }
    }

    /// The head keyword of a list, if it starts with an atom.
    pub(crate) fn head(&self) -> Option<&str> {
        self.as_list().and_then(|l| l.first()).and_then(SExpr::as_atom)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Open,
    Close,
    Atom(String),
}

fn atom_char(c: char) -> bool {
    c.is_alphanumeric() || "-_?:.+*/<>=^!@".contains(c)
}

fn tokenize(src: &str) -> Result<Vec<(Tok, Span)>> {
    let mut out = Vec::new();
    let mut line = 1;
    let mut col = 1;
    let mut chars = src.char_indices().peekable();
    while let Some(&(off, c)) = chars.peek() {
        let span = Span { offset: off, line, col };
        if c == '\n' {
            chars.next();
            line += 1;
            col = 1;
        } else if c.is_whitespace() {
            chars.next();
            col += 1;
        } else if c == ';' {
            while let Some(&(_, c)) = chars.peek() {
                if c == '\n' {
                    break;
                }
                chars.next();
                col += 1;
            }
        } else if c == '(' {
            chars.next();
            col += 1;
            out.push((Tok::Open, span));
        } else if c == ')' {
            chars.next();
            col += 1;
            out.push((Tok::Close, span));
        } else if atom_char(c) {
            let mut s = String::new();
            while let Some(&(_, c)) = chars.peek() {
                if !atom_char(c) {
                    break;
                }
                s.push(c);
                chars.next();
                col += 1;
            }
            out.push((Tok::Atom(s), span));
        } else {
            return Err(ParseError::Lex { span, msg: format!("unexpected character {c:?}") });
        }
    }
    Ok(out)
}

/// Reads every top-level s-expression of `src`.
pub(crate) fn read_all(src: &str) -> Result<Vec<SExpr>> {
    let toks = tokenize(src)?;
    let mut stack: Vec<(Vec<SExpr>, Span)> = Vec::new();
    let mut top = Vec::new();
    for (tok, span) in toks {
        match tok {
            Tok::Open => {
                if stack.len() >= MAX_DEPTH {
                    return Err(ParseError::syntax(span, "nesting too deep"));
                }
                stack.push((Vec::new(), span));
            }
            Tok::Close => {
                let (items, open) = stack.pop().ok_or_else(|| ParseError::syntax(span, "unbalanced ')'"))?;
                let e = SExpr::List(items, open);
                match stack.last_mut() {
                    Some((parent, _)) => parent.push(e),
                    None => top.push(e),
                }
            }
            Tok::Atom(a) => {
                let e = SExpr::Atom(a, span);
                match stack.last_mut() {
                    Some((parent, _)) => parent.push(e),
                    None => top.push(e),
                }
            }
        }
    }
    if let Some((_, open)) = stack.last() {
        return Err(ParseError::syntax(*open, "unclosed '('"));
    }
    Ok(top)
}

/// Position of the end of `src`, used for errors about missing content.
pub(crate) fn end_span(src: &str) -> Span {
    let mut line = 1;
    let mut col = 1;
    for c in src.chars() {
        if c == '\n' {
            line += 1;
            col = 1;
        } else {
            col += 1;
        }
    }
    Span { offset: src.len(), line, col }
}

/// Decodes raw bytes, mapping invalid UTF-8 to a lex error at the bad byte.
pub(crate) fn decode(bytes: &[u8]) -> Result<&str> {
    std::str::from_utf8(bytes).map_err(|e| {
        let good = &bytes[..e.valid_up_to()];
        // valid prefix, so this cannot fail
        let prefix = std::str::from_utf8(good).unwrap_or("");
        ParseError::Lex { span: end_span(prefix), msg: "invalid UTF-8".into() }
    })
}

pub(crate) fn parse_number(s: &str) -> Option<f64> {
    match s {
        "inf" | "+inf" => return Some(f64::INFINITY),
        "-inf" => return Some(f64::NEG_INFINITY),
        _ => {}
    }
    let first = s.chars().next()?;
    if !(first.is_ascii_digit() || first == '-' || first == '+' || first == '.') {
        return None;
    }
    if !s.chars().all(|c| c.is_ascii_digit() || "+-.eE".contains(c)) {
        return None;
    }
    s.parse::<f64>().ok().filter(|v| v.is_finite())
}
