use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Severity {
    Error,
    Warning,
}

/// Closed set of machine-readable issue codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum IssueCode {
    /// The document is not well-formed YAML/JSON, or is not a mapping.
    SyntaxError,
    /// The front-matter block has no closing `---` fence.
    UnterminatedFrontMatter,
    /// No `kind` field.
    MissingKind,
    /// A required field other than `kind` is absent or empty.
    MissingField,
    /// A field is present but has the wrong type or an unparseable value.
    InvalidField,
    /// A top-level field that is not part of the card format. Dropped.
    UnknownField,
    /// An attribute the registry does not define. Preserved verbatim.
    UnknownAttribute,
    /// A value outside its attribute's domain.
    DomainViolation,
    /// An attribute not applicable to the card's kind, or a card supplied in
    /// the wrong card-set slot.
    WrongKind,
    /// A repeated key in a document, or a repeated card id in a card set.
    DuplicateId,
    /// The card's schema major version differs from the registry's.
    IncompatibleSchemaVersion,
}

impl IssueCode {
    pub const ALL: [IssueCode; 11] = [
        IssueCode::SyntaxError,
        IssueCode::UnterminatedFrontMatter,
        IssueCode::MissingKind,
        IssueCode::MissingField,
        IssueCode::InvalidField,
        IssueCode::UnknownField,
        IssueCode::UnknownAttribute,
        IssueCode::DomainViolation,
        IssueCode::WrongKind,
        IssueCode::DuplicateId,
        IssueCode::IncompatibleSchemaVersion,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            IssueCode::SyntaxError => "SYNTAX_ERROR",
            IssueCode::UnterminatedFrontMatter => "UNTERMINATED_FRONT_MATTER",
            IssueCode::MissingKind => "MISSING_KIND",
            IssueCode::MissingField => "MISSING_FIELD",
            IssueCode::InvalidField => "INVALID_FIELD",
            IssueCode::UnknownField => "UNKNOWN_FIELD",
            IssueCode::UnknownAttribute => "UNKNOWN_ATTRIBUTE",
            IssueCode::DomainViolation => "DOMAIN_VIOLATION",
            IssueCode::WrongKind => "WRONG_KIND",
            IssueCode::DuplicateId => "DUPLICATE_ID",
            IssueCode::IncompatibleSchemaVersion => "INCOMPATIBLE_SCHEMA_VERSION",
        }
    }
}

impl fmt::Display for IssueCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationIssue {
    pub severity: Severity,
    pub code: IssueCode,
    /// Attribute id, top-level field name, or `@line:column` for syntax errors.
    pub path: String,
    pub message: String,
}

impl ValidationIssue {
    pub fn error(code: IssueCode, path: impl Into<String>, message: impl Into<String>) -> Self {
        ValidationIssue {
            severity: Severity::Error,
            code,
            path: path.into(),
            message: message.into(),
        }
    }

    pub fn warning(code: IssueCode, path: impl Into<String>, message: impl Into<String>) -> Self {
        ValidationIssue {
            severity: Severity::Warning,
            code,
            path: path.into(),
            message: message.into(),
        }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl fmt::Display for ValidationIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{}:{}: {sev}: {}", self.path, self.code, self.message)
    }
}

pub(crate) fn sort_issues(issues: &mut Vec<ValidationIssue>) {
    issues.sort_by(|a, b| (&a.path, a.code, &a.message).cmp(&(&b.path, b.code, &b.message)));
    issues.dedup_by(|a, b| a.path == b.path && a.code == b.code);
}

pub fn has_errors(issues: &[ValidationIssue]) -> bool {
    issues.iter().any(ValidationIssue::is_error)
}
