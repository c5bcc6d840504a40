use std::fmt;

use serde::Serialize;

/// A 1-based position in a source file.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SourceSpan {
    pub file: String,
    pub line: usize,
    pub column: usize,
}

impl SourceSpan {
    pub fn new(file: impl Into<String>, line: usize, column: usize) -> Self {
        SourceSpan {
            file: file.into(),
            line,
            column,
        }
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.file, self.line, self.column)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

/// Stable identifiers for every diagnostic the parsers emit.
///
/// The string form (see [`DiagnosticCode::as_str`]) is part of the public
/// contract and does not change between releases.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DiagnosticCode {
    UnknownKeyword,
    UnexpectedToken,
    ExpectedIdentifier,
    InvalidCharacter,
    MissingParent,
    UnknownAttribute,
    DuplicateAttribute,
    TrailingInput,
    DuplicateProtocol,
    MissingProtocol,
    DuplicateRoles,
    MissingRoles,
    DuplicateRole,
    DuplicateState,
    DuplicateInitial,
    MissingInitial,
    MissingFinal,
    UndeclaredState,
    UnknownRole,
    SelfAddressed,
    RepeatedFlag,
}

impl DiagnosticCode {
    pub fn as_str(self) -> &'static str {
        use DiagnosticCode::*;
        match self {
            UnknownKeyword => "unknown-keyword",
            UnexpectedToken => "unexpected-token",
            ExpectedIdentifier => "expected-identifier",
            InvalidCharacter => "invalid-character",
            MissingParent => "missing-parent",
            UnknownAttribute => "unknown-attribute",
            DuplicateAttribute => "duplicate-attribute",
            TrailingInput => "trailing-input",
            DuplicateProtocol => "duplicate-protocol",
            MissingProtocol => "missing-protocol",
            DuplicateRoles => "duplicate-roles",
            MissingRoles => "missing-roles",
            DuplicateRole => "duplicate-role",
            DuplicateState => "duplicate-state",
            DuplicateInitial => "duplicate-initial",
            MissingInitial => "missing-initial",
            MissingFinal => "missing-final",
            UndeclaredState => "undeclared-state",
            UnknownRole => "unknown-role",
            SelfAddressed => "self-addressed",
            RepeatedFlag => "repeated-flag",
        }
    }
}

impl fmt::Display for DiagnosticCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for DiagnosticCode {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub severity: Severity,
    pub span: SourceSpan,
    pub message: String,
    pub code: DiagnosticCode,
}

impl Diagnostic {
    pub fn error(code: DiagnosticCode, span: SourceSpan, message: impl Into<String>) -> Self {
        Diagnostic {
            severity: Severity::Error,
            span,
            message: message.into(),
            code,
        }
    }

    pub fn warning(code: DiagnosticCode, span: SourceSpan, message: impl Into<String>) -> Self {
        Diagnostic {
            severity: Severity::Warning,
            span,
            message: message.into(),
            code,
        }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let level = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(
            f,
            "{}: {}[{}]: {}",
            self.span, level, self.code, self.message
        )
    }
}

/// Output of a parser: the best-effort value plus everything worth reporting.
#[derive(Debug, Clone)]
pub struct Parsed<T> {
    pub value: T,
    pub diagnostics: Vec<Diagnostic>,
}

impl<T> Parsed<T> {
    pub fn has_errors(&self) -> bool {
        self.diagnostics.iter().any(Diagnostic::is_error)
    }

    /// Returns the value if no error diagnostics were produced.
    pub fn into_result(self) -> crate::Result<T> {
        if self.has_errors() {
            Err(crate::Error::Parse(
                self.diagnostics
                    .into_iter()
                    .filter(Diagnostic::is_error)
                    .collect(),
            ))
        } else {
            Ok(self.value)
        }
    }
}
