//! Compliance Cards: machine-readable AI Act metadata for an AI project and
//! its component datasets and models, and the rules engine that classifies
//! the project and checks its obligations across all of its cards.
//!
//! The pipeline has two steps. Cards are gathered and validated
//! ([`io::load_card_set`]), then analysed against a rule table
//! ([`rules::analyze`]) to produce a [`rules::ComplianceReport`].

pub mod exec;
pub mod io;
pub mod model;
pub mod report;
pub mod rules;

pub use model::{
    baseline_registry, AttributeDefinition, AttributeId, AttributeRegistry, AttributeValue,
    CardKind, CardSet, ComplianceCard, TriState,
};

/// Engine version, reported alongside registry and rule-table versions.
pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");
