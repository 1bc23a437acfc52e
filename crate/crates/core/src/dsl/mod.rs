//! The `.exo` text format for universes and agents.
//!
//! ```text
//! universe "tiny" {
//!   states: home away;
//!   acts: go rest;
//!   initial: home;
//!   neutral_act: rest;
//!   transition home go away;
//!   ...
//!   classify positive: home;
//!   energy { initial: 10; per_step: 1; negative_penalty: 3; positive_reward: 2; cap: 20; }
//! }
//! agent "walker" in "tiny" {
//!   architecture: afs2a;
//!   represents home -> "at_home";
//!   goal: "at_home";
//!   predict "away" -> "at_home": go;
//! }
//! ```
//!
//! [`parse`] canonicalizes state and act order (sorted by name), so a parsed
//! document and the parse of its [`serialize`]d form compare equal.

mod lexer;
mod parser;
mod serialize;

use std::collections::BTreeMap;
use std::fmt;

pub use parser::{check, parse};
pub use serialize::serialize;

use crate::architectures::AgentArchitecture;
use crate::universe::Universe;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Span {
    pub line: usize,
    pub column: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiagnosticKind {
    Lexical,
    Syntactic,
    Referential,
    Semantic,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseDiagnostic {
    pub severity: Severity,
    pub kind: DiagnosticKind,
    pub message: String,
    pub line: usize,
    pub column: usize,
}

impl ParseDiagnostic {
    pub(crate) fn error(kind: DiagnosticKind, at: Span, message: impl Into<String>) -> Self {
        ParseDiagnostic { severity: Severity::Error, kind, message: message.into(), line: at.line, column: at.column }
    }

    pub(crate) fn warning(kind: DiagnosticKind, at: Span, message: impl Into<String>) -> Self {
        ParseDiagnostic { severity: Severity::Warning, kind, message: message.into(), line: at.line, column: at.column }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl fmt::Display for ParseDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let severity = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        let kind = match self.kind {
            DiagnosticKind::Lexical => "lexical",
            DiagnosticKind::Syntactic => "syntax",
            DiagnosticKind::Referential => "reference",
            DiagnosticKind::Semantic => "semantic",
        };
        write!(f, "{}:{}: {severity} [{kind}]: {}", self.line, self.column, self.message)
    }
}

/// A validated set of universes and the agents bound to them.
///
/// Equality is structural: spans and warnings are ignored.
#[derive(Debug, Clone, Default)]
pub struct SpecDocument {
    pub universes: Vec<Universe>,
    pub agents: Vec<AgentArchitecture>,
    /// Position of each `universe NAME` / `agent NAME` header, keyed by
    /// `"universe:NAME"` or `"agent:NAME"`.
    pub source_spans: BTreeMap<String, Span>,
    pub warnings: Vec<ParseDiagnostic>,
}

impl PartialEq for SpecDocument {
    fn eq(&self, other: &Self) -> bool {
        self.universes == other.universes && self.agents == other.agents
    }
}

impl SpecDocument {
    pub fn universe(&self, name: &str) -> Option<&Universe> {
        self.universes.iter().find(|u| u.name == name)
    }

    pub fn agent(&self, name: &str) -> Option<&AgentArchitecture> {
        self.agents.iter().find(|a| a.name == name)
    }

    /// The universe an agent is declared in.
    pub fn universe_of(&self, agent: &AgentArchitecture) -> Option<&Universe> {
        self.universe(&agent.universe)
    }
}
