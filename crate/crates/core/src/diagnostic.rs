use alloc::string::String;
use core::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Severity {
    Warning,
    Error,
}

impl Severity {
    pub fn as_str(&self) -> &'static str {
        match self {
            Severity::Warning => "warning",
            Severity::Error => "error",
        }
    }
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A finding about one element (annotation, instance, relation, record).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    /// Id of the element the finding is about.
    pub subject: String,
    pub severity: Severity,
    /// Stable machine-readable code, e.g. `duplicate-id`.
    pub code: &'static str,
    pub message: String,
}

impl Diagnostic {
    pub fn error(subject: impl Into<String>, code: &'static str, message: impl Into<String>) -> Self {
        Diagnostic { subject: subject.into(), severity: Severity::Error, code, message: message.into() }
    }

    pub fn warning(subject: impl Into<String>, code: &'static str, message: impl Into<String>) -> Self {
        Diagnostic { subject: subject.into(), severity: Severity::Warning, code, message: message.into() }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} [{}]: {}", self.severity, self.subject, self.code, self.message)
    }
}

/// True if any diagnostic is an error.
pub fn has_errors(diags: &[Diagnostic]) -> bool {
    diags.iter().any(Diagnostic::is_error)
}
