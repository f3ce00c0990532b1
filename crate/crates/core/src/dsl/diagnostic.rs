use std::fmt;

use serde::Serialize;

use crate::model::ConstraintClass;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

/// Closed set of diagnostic codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DiagnosticCode {
    NoSchema,
    InvalidCharacter,
    UnterminatedString,
    InvalidEscape,
    InvalidInteger,
    UnexpectedToken,
    UnexpectedEnd,
    DuplicateSet,
    DuplicateFunction,
    DuplicateConstraint,
    ReservedIdentifier,
    MissingNameAttribute,
    MultipleNameAttributes,
    UnknownSet,
    UnknownFunction,
    BrokenComposition,
    AttributeInChain,
    DomainMismatch,
    CodomainMismatch,
    DegenerateIdentity,
    RefusedHbfp,
    RefusedLocal,
    UnboundHandle,
    TypeMismatch,
    DuplicateBinding,
}

impl DiagnosticCode {
    pub fn as_str(self) -> &'static str {
        use DiagnosticCode::*;
        match self {
            NoSchema => "no-schema",
            InvalidCharacter => "invalid-character",
            UnterminatedString => "unterminated-string",
            InvalidEscape => "invalid-escape",
            InvalidInteger => "invalid-integer",
            UnexpectedToken => "unexpected-token",
            UnexpectedEnd => "unexpected-end",
            DuplicateSet => "duplicate-set",
            DuplicateFunction => "duplicate-function",
            DuplicateConstraint => "duplicate-constraint",
            ReservedIdentifier => "reserved-identifier",
            MissingNameAttribute => "missing-name-attribute",
            MultipleNameAttributes => "multiple-name-attributes",
            UnknownSet => "unknown-set",
            UnknownFunction => "unknown-function",
            BrokenComposition => "broken-composition",
            AttributeInChain => "attribute-in-chain",
            DomainMismatch => "domain-mismatch",
            CodomainMismatch => "codomain-mismatch",
            DegenerateIdentity => "degenerate-identity",
            RefusedHbfp => "refused-hbfp",
            RefusedLocal => "refused-local",
            UnboundHandle => "unbound-handle",
            TypeMismatch => "type-mismatch",
            DuplicateBinding => "duplicate-binding",
        }
    }

    /// Lexical and syntactic codes, as opposed to semantic ones.
    pub fn is_syntactic(self) -> bool {
        use DiagnosticCode::*;
        matches!(
            self,
            NoSchema
                | InvalidCharacter
                | UnterminatedString
                | InvalidEscape
                | InvalidInteger
                | UnexpectedToken
                | UnexpectedEnd
        )
    }

    /// The refused classification carried by this code, if any.
    pub fn refused_class(self) -> Option<ConstraintClass> {
        match self {
            DiagnosticCode::RefusedHbfp => Some(ConstraintClass::Hbfp),
            DiagnosticCode::RefusedLocal => Some(ConstraintClass::Local),
            _ => None,
        }
    }
}

impl Serialize for DiagnosticCode {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.as_str())
    }
}

impl fmt::Display for DiagnosticCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub severity: Severity,
    /// 1-based.
    pub line: usize,
    /// 1-based, counted in characters.
    pub column: usize,
    pub code: DiagnosticCode,
    pub message: String,
}

impl Diagnostic {
    pub fn error(pos: Pos, code: DiagnosticCode, message: impl Into<String>) -> Self {
        Self {
            severity: Severity::Error,
            line: pos.line,
            column: pos.column,
            code,
            message: message.into(),
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let severity = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(
            f,
            "{}:{}: {}[{}]: {}",
            self.line, self.column, severity, self.code, self.message
        )
    }
}

/// A source position, 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
}

impl Pos {
    pub const START: Pos = Pos { line: 1, column: 1 };
}

/// Renders diagnostics one per line, prefixed with `path`.
pub fn render(path: &str, diagnostics: &[Diagnostic]) -> String {
    diagnostics
        .iter()
        .map(|d| format!("{path}:{d}\n"))
        .collect()
}
