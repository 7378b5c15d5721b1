use serde::{Deserialize, Serialize};

use super::analyze::{analyze_checked, AnalysisOptions, ComplianceReport};
use super::table::{RuleTable, RuleTableError};
use crate::model::{AttributeId, AttributeRegistry, AttributeValue, CardKind, CardSet, CardSetError, ComplianceCard};

/// One edit applied to a copy of the card set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Mutation {
    Set {
        card_id: String,
        attribute: String,
        value: AttributeValue,
    },
    /// Swaps a card for another of the same kind, keeping its slot.
    ReplaceCard { card_id: String, card: ComplianceCard },
    RemoveCard { card_id: String },
    AddCard { card: ComplianceCard },
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WhatIfError {
    #[error("mutation {index}: no card with id `{card_id}` in the card set")]
    UnknownCard { index: usize, card_id: String },
    #[error("mutation {index}: attribute `{attribute}` is not defined by the registry")]
    UnknownAttribute { index: usize, attribute: String },
    #[error("mutation {index}: attribute `{attribute}` does not apply to {kind} card `{card_id}`")]
    WrongKind {
        index: usize,
        card_id: String,
        attribute: String,
        kind: CardKind,
    },
    #[error("mutation {index}: value `{value}` is outside the domain of `{attribute}`")]
    DomainViolation {
        index: usize,
        attribute: String,
        value: String,
    },
    #[error("mutation {index}: card `{card_id}` is a {found} card but replaces a {expected} card")]
    ReplaceKind {
        index: usize,
        card_id: String,
        expected: CardKind,
        found: CardKind,
    },
    #[error("mutation {index}: the project card cannot be removed or added")]
    ProjectSlot { index: usize },
    #[error("mutation {index}: {source}")]
    CardSet { index: usize, source: CardSetError },
    #[error(transparent)]
    Config(#[from] RuleTableError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WhatIfOutcome {
    pub baseline: ComplianceReport,
    pub mutated: ComplianceReport,
    /// Requirement ids whose status changed, in rule-table order.
    pub delta: Vec<String>,
}

/// Applies mutations in order to a copy of `set`. Every mutation is checked
/// against the registry and the evolving copy; the first offender is reported.
pub fn apply_mutations(
    set: &CardSet,
    mutations: &[Mutation],
    registry: &AttributeRegistry,
) -> Result<CardSet, WhatIfError> {
    let mut out = set.clone();
    for (index, m) in mutations.iter().enumerate() {
        let unknown_card = |card_id: &str| WhatIfError::UnknownCard { index, card_id: card_id.to_owned() };
        let set_err = |source| WhatIfError::CardSet { index, source };
        match m {
            Mutation::Set { card_id, attribute, value } => {
                let card = out.find_mut(card_id).ok_or_else(|| unknown_card(card_id))?;
                let def = registry.lookup(attribute).ok_or_else(|| WhatIfError::UnknownAttribute {
                    index,
                    attribute: attribute.clone(),
                })?;
                if !def.applies_to(card.kind) {
                    return Err(WhatIfError::WrongKind {
                        index,
                        card_id: card_id.clone(),
                        attribute: attribute.clone(),
                        kind: card.kind,
                    });
                }
                if !def.domain.admits(value) {
                    return Err(WhatIfError::DomainViolation {
                        index,
                        attribute: attribute.clone(),
                        value: value.to_string(),
                    });
                }
                let id: AttributeId = def.id.clone();
                card.set(id, value.clone());
            }
            Mutation::ReplaceCard { card_id, card } => {
                let existing = out.find(card_id).ok_or_else(|| unknown_card(card_id))?;
                if existing.kind != card.kind {
                    return Err(WhatIfError::ReplaceKind {
                        index,
                        card_id: card.card_id.clone(),
                        expected: existing.kind,
                        found: card.kind,
                    });
                }
                out.replace(card_id, card.clone()).map_err(set_err)?;
            }
            Mutation::RemoveCard { card_id } => {
                let existing = out.find(card_id).ok_or_else(|| unknown_card(card_id))?;
                if existing.kind == CardKind::Project {
                    return Err(WhatIfError::ProjectSlot { index });
                }
                out.remove(card_id);
            }
            Mutation::AddCard { card } => {
                if card.kind == CardKind::Project {
                    return Err(WhatIfError::ProjectSlot { index });
                }
                out.push(card.clone()).map_err(set_err)?;
            }
        }
    }
    Ok(out)
}

/// Analyses `set` and a mutated copy of it. `set` itself is not modified.
pub fn what_if(
    set: &CardSet,
    mutations: &[Mutation],
    table: &RuleTable,
    registry: &AttributeRegistry,
    options: AnalysisOptions,
) -> Result<WhatIfOutcome, WhatIfError> {
    table.check_against(registry)?;
    let mutated_set = apply_mutations(set, mutations, registry)?;
    let (baseline, mutated) = options.mode.join(
        || analyze_checked(set, table, registry, options),
        || analyze_checked(&mutated_set, table, registry, options),
    );
    let delta = baseline
        .results
        .iter()
        .zip(&mutated.results)
        .filter(|(a, b)| a.status != b.status)
        .map(|(a, _)| a.requirement_id.clone())
        .collect();
    Ok(WhatIfOutcome { baseline, mutated, delta })
}
