//! Rejection evidence produced by every checker in the crate.

use std::fmt;

use crate::syntax::VarSet;

/// The rule whose premises failed. Every diagnostic names one of these.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rule {
    Ec,
    Cc,
    Var,
    Ob,
    Ar,
    Es,
    Sc,
    Tm,
    Ps,
    Fullness,
    Parse,
}

impl Rule {
    pub fn as_str(self) -> &'static str {
        match self {
            Rule::Ec => "ec",
            Rule::Cc => "cc",
            Rule::Var => "var",
            Rule::Ob => "ob",
            Rule::Ar => "ar",
            Rule::Es => "es",
            Rule::Sc => "sc",
            Rule::Tm => "tm",
            Rule::Ps => "ps",
            Rule::Fullness => "fullness",
            Rule::Parse => "parse",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Source,
    Target,
    Coh,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Source => "source",
            Side::Target => "target",
            Side::Coh => "coh",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DiagKind {
    NameOutOfOrder,
    EndpointTypeMismatch,
    UnboundVariable,
    /// The signature has no such index (always the case in Glob).
    UnknownIndex,
    IndexTypeIllFormed,
    /// The index context is of higher dimension than its type.
    WfViolation,
    SubstitutionMismatch,
    TypeMismatch,
    LengthMismatch,
    TargetNameMismatch,
    NotPs,
    NotFull {
        side: Side,
        missing: VarSet,
        extra: VarSet,
    },
    ParseError,
    UnknownName,
    ArityMismatch,
    DuplicateName,
}

impl DiagKind {
    pub fn rule(&self) -> Rule {
        match self {
            DiagKind::NameOutOfOrder | DiagKind::DuplicateName => Rule::Cc,
            DiagKind::EndpointTypeMismatch => Rule::Ar,
            DiagKind::UnboundVariable | DiagKind::UnknownName => Rule::Var,
            DiagKind::UnknownIndex
            | DiagKind::IndexTypeIllFormed
            | DiagKind::WfViolation
            | DiagKind::SubstitutionMismatch
            | DiagKind::TypeMismatch => Rule::Tm,
            DiagKind::LengthMismatch | DiagKind::TargetNameMismatch | DiagKind::ArityMismatch => {
                Rule::Sc
            }
            DiagKind::NotPs => Rule::Ps,
            DiagKind::NotFull { .. } => Rule::Fullness,
            DiagKind::ParseError => Rule::Parse,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            DiagKind::NameOutOfOrder => "NameOutOfOrder",
            DiagKind::EndpointTypeMismatch => "EndpointTypeMismatch",
            DiagKind::UnboundVariable => "UnboundVariable",
            DiagKind::UnknownIndex => "UnknownIndex",
            DiagKind::IndexTypeIllFormed => "IndexTypeIllFormed",
            DiagKind::WfViolation => "WfViolation",
            DiagKind::SubstitutionMismatch => "SubstitutionMismatch",
            DiagKind::TypeMismatch => "TypeMismatch",
            DiagKind::LengthMismatch => "LengthMismatch",
            DiagKind::TargetNameMismatch => "TargetNameMismatch",
            DiagKind::NotPs => "NotPs",
            DiagKind::NotFull { .. } => "NotFull",
            DiagKind::ParseError => "ParseError",
            DiagKind::UnknownName => "UnknownName",
            DiagKind::ArityMismatch => "ArityMismatch",
            DiagKind::DuplicateName => "DuplicateName",
        }
    }
}

/// A 1-based line/column position in a source file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Span {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct Diagnostic {
    pub kind: DiagKind,
    pub message: String,
    /// Rendered raw objects, when the failure is a comparison.
    pub expected: Option<String>,
    pub actual: Option<String>,
    pub span: Option<Span>,
    /// The nested failure this one cascades from.
    pub cause: Option<Box<Diagnostic>>,
}

impl Diagnostic {
    pub fn new(kind: DiagKind, message: impl Into<String>) -> Self {
        Diagnostic {
            kind,
            message: message.into(),
            expected: None,
            actual: None,
            span: None,
            cause: None,
        }
    }

    pub fn rule(&self) -> Rule {
        self.kind.rule()
    }

    pub fn expected_actual(
        mut self,
        expected: impl fmt::Display,
        actual: impl fmt::Display,
    ) -> Self {
        self.expected = Some(expected.to_string());
        self.actual = Some(actual.to_string());
        self
    }

    pub fn caused_by(mut self, cause: Diagnostic) -> Self {
        self.cause = Some(Box::new(cause));
        self
    }

    /// Attaches `span` unless a more precise one is already present.
    pub fn at(mut self, span: Span) -> Self {
        if self.span.is_none() {
            self.span = Some(span);
        }
        self
    }

    /// The innermost diagnostic of the cascade.
    pub fn root_cause(&self) -> &Diagnostic {
        let mut d = self;
        while let Some(c) = &d.cause {
            d = c;
        }
        d
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {}: {}",
            self.rule(),
            self.kind.name(),
            self.message
        )?;
        if let DiagKind::NotFull {
            side,
            missing,
            extra,
        } = &self.kind
        {
            write!(f, " (side {side}, missing {missing}, extra {extra})")?;
        }
        if let (Some(e), Some(a)) = (&self.expected, &self.actual) {
            write!(f, "\n  expected: {e}\n  actual:   {a}")?;
        }
        if let Some(c) = &self.cause {
            write!(f, "\n  caused by: {c}")?;
        }
        Ok(())
    }
}

pub type CheckResult<T> = Result<T, Diagnostic>;
