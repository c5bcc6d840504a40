//! Line tokenizer shared by both file grammars.

use super::diagnostic::{Diagnostic, DiagnosticCode, SourceSpan};

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    Colon,
    Comma,
    Arrow,
    Eq,
    Invalid(char),
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Colon => "`:`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Eq => "`=`".into(),
            Tok::Invalid(c) => format!("`{c}`"),
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Token {
    pub tok: Tok,
    pub col: usize,
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
}

/// Splits a source into logical lines: CRLF normalized, BOM and comments removed.
pub(crate) fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    let text = text.strip_prefix('\u{feff}').unwrap_or(text);
    text.split('\n').enumerate().map(|(i, raw)| {
        let raw = raw.strip_suffix('\r').unwrap_or(raw);
        let code = match raw.find('#') {
            Some(at) => &raw[..at],
            None => raw,
        };
        (i + 1, code)
    })
}

pub(crate) fn lex(line: &str) -> Vec<Token> {
    let chars: Vec<char> = line.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_alphabetic() {
            let start = i;
            i += 1;
            while i < chars.len() {
                let d = chars[i];
                if d == '-' && chars.get(i + 1) == Some(&'>') {
                    break;
                }
                if d.is_ascii_alphanumeric() || d == '_' || d == '-' {
                    i += 1;
                } else {
                    break;
                }
            }
            out.push(Token {
                tok: Tok::Ident(chars[start..i].iter().collect()),
                col,
            });
            continue;
        }
        let tok = match c {
            ':' => Tok::Colon,
            ',' => Tok::Comma,
            '=' => Tok::Eq,
            '-' if chars.get(i + 1) == Some(&'>') => {
                i += 1;
                Tok::Arrow
            }
            other => Tok::Invalid(other),
        };
        i += 1;
        out.push(Token { tok, col });
    }
    out
}

/// Cursor over the tokens of one line.
pub(crate) struct Cursor<'a> {
    file: &'a str,
    line: usize,
    toks: Vec<Token>,
    pos: usize,
    end_col: usize,
}

impl<'a> Cursor<'a> {
    pub fn new(file: &'a str, line: usize, text: &str) -> Self {
        Cursor {
            file,
            line,
            toks: lex(text),
            pos: 0,
            end_col: text.chars().count() + 1,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.toks.is_empty()
    }

    pub fn span_at(&self, col: usize) -> SourceSpan {
        SourceSpan::new(self.file, self.line, col)
    }

    /// Span of the next token, or of the end of the line.
    pub fn here(&self) -> SourceSpan {
        self.span_at(self.toks.get(self.pos).map_or(self.end_col, |t| t.col))
    }

    pub fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    pub fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    pub fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn unexpected(&self, expected: &str) -> Diagnostic {
        match self.toks.get(self.pos) {
            None => Diagnostic::error(
                DiagnosticCode::ExpectedIdentifier,
                self.here(),
                format!("expected {expected}, found end of line"),
            ),
            Some(Token {
                tok: Tok::Invalid(c),
                col,
            }) => Diagnostic::error(
                DiagnosticCode::InvalidCharacter,
                self.span_at(*col),
                format!("invalid character `{c}`; expected {expected}"),
            ),
            Some(t) => Diagnostic::error(
                DiagnosticCode::UnexpectedToken,
                self.span_at(t.col),
                format!("expected {expected}, found {}", t.tok.describe()),
            ),
        }
    }

    /// Consumes an identifier, returning it with its column.
    pub fn ident(&mut self, expected: &str) -> Result<(String, usize), Diagnostic> {
        match self.toks.get(self.pos) {
            Some(Token {
                tok: Tok::Ident(s),
                col,
            }) => {
                let out = (s.clone(), *col);
                self.pos += 1;
                Ok(out)
            }
            _ => Err(self.unexpected(expected)),
        }
    }

    pub fn expect(&mut self, tok: &Tok, expected: &str) -> Result<(), Diagnostic> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(self.unexpected(expected))
        }
    }

    pub fn keyword(&mut self, kw: &str) -> Result<(), Diagnostic> {
        match self.peek() {
            Some(Tok::Ident(s)) if s == kw => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.unexpected(&format!("`{kw}`"))),
        }
    }

    pub fn finish(&self) -> Result<(), Diagnostic> {
        match self.toks.get(self.pos) {
            None => Ok(()),
            Some(Token {
                tok: Tok::Invalid(c),
                col,
            }) => Err(Diagnostic::error(
                DiagnosticCode::InvalidCharacter,
                self.span_at(*col),
                format!("invalid character `{c}`"),
            )),
            Some(t) => Err(Diagnostic::error(
                DiagnosticCode::TrailingInput,
                self.span_at(t.col),
                format!("unexpected trailing {}", t.tok.describe()),
            )),
        }
    }
}
