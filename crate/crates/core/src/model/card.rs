use std::collections::{BTreeMap, HashSet};

use super::{AttributeId, AttributeValue, CardKind};

/// One Compliance Card: a subject's identity plus its attribute-value map.
///
/// Unanswered values are never stored, so two cards that differ only in
/// whether an attribute was omitted or written as `null` compare equal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplianceCard {
    pub kind: CardKind,
    pub card_id: String,
    pub subject_name: String,
    pub schema_version: String,
    values: BTreeMap<AttributeId, AttributeValue>,
    /// Attributes the registry does not know (or does not allow on this kind),
    /// kept verbatim so they survive a parse/serialize round trip.
    unrecognized: BTreeMap<String, serde_json::Value>,
}

impl ComplianceCard {
    pub fn new(kind: CardKind, card_id: impl Into<String>, schema_version: impl Into<String>) -> Self {
        ComplianceCard {
            kind,
            card_id: card_id.into(),
            subject_name: String::new(),
            schema_version: schema_version.into(),
            values: BTreeMap::new(),
            unrecognized: BTreeMap::new(),
        }
    }

    pub fn with_subject(mut self, name: impl Into<String>) -> Self {
        self.subject_name = name.into();
        self
    }

    pub fn with(mut self, id: &str, value: AttributeValue) -> Self {
        self.set(AttributeId::new(id).expect("invalid attribute id"), value);
        self
    }

    pub fn get(&self, id: &str) -> &AttributeValue {
        static UNANSWERED: AttributeValue = AttributeValue::Unanswered;
        self.values.get(id).unwrap_or(&UNANSWERED)
    }

    /// Sets a value; `Unanswered` clears it. Returns the previous value.
    pub fn set(&mut self, id: AttributeId, value: AttributeValue) -> AttributeValue {
        let previous = if value.is_unanswered() {
            self.values.remove(&id)
        } else {
            self.values.insert(id, value)
        };
        previous.unwrap_or_default()
    }

    /// Answered values in id order.
    pub fn values(&self) -> impl Iterator<Item = (&AttributeId, &AttributeValue)> {
        self.values.iter()
    }

    pub fn answered_count(&self) -> usize {
        self.values.len()
    }

    pub fn unrecognized(&self) -> &BTreeMap<String, serde_json::Value> {
        &self.unrecognized
    }

    pub fn insert_unrecognized(&mut self, key: impl Into<String>, value: serde_json::Value) {
        self.unrecognized.insert(key.into(), value);
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CardSetError {
    #[error("card `{card_id}` has kind {found} but was supplied as a {expected} card")]
    WrongKind {
        card_id: String,
        expected: CardKind,
        found: CardKind,
    },
    #[error("card id `{0}` appears more than once in the card set")]
    DuplicateId(String),
    #[error("card id must not be empty")]
    EmptyId,
}

/// One Project card plus the Data and Model cards of its components.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CardSet {
    project: ComplianceCard,
    data: Vec<ComplianceCard>,
    models: Vec<ComplianceCard>,
}

impl CardSet {
    pub fn new(
        project: ComplianceCard,
        data: Vec<ComplianceCard>,
        models: Vec<ComplianceCard>,
    ) -> Result<CardSet, CardSetError> {
        let set = CardSet { project, data, models };
        set.check()?;
        Ok(set)
    }

    fn check(&self) -> Result<(), CardSetError> {
        let slots = std::iter::once((CardKind::Project, &self.project))
            .chain(self.data.iter().map(|c| (CardKind::Data, c)))
            .chain(self.models.iter().map(|c| (CardKind::Model, c)));
        let mut seen = HashSet::new();
        for (expected, card) in slots {
            if card.kind != expected {
                return Err(CardSetError::WrongKind {
                    card_id: card.card_id.clone(),
                    expected,
                    found: card.kind,
                });
            }
            if card.card_id.is_empty() {
                return Err(CardSetError::EmptyId);
            }
            if !seen.insert(card.card_id.as_str()) {
                return Err(CardSetError::DuplicateId(card.card_id.clone()));
            }
        }
        Ok(())
    }

    pub fn project(&self) -> &ComplianceCard {
        &self.project
    }

    pub fn data(&self) -> &[ComplianceCard] {
        &self.data
    }

    pub fn models(&self) -> &[ComplianceCard] {
        &self.models
    }

    pub fn components(&self, kind: CardKind) -> &[ComplianceCard] {
        match kind {
            CardKind::Project => std::slice::from_ref(&self.project),
            CardKind::Data => &self.data,
            CardKind::Model => &self.models,
        }
    }

    /// All cards in set order: project, data, models.
    pub fn cards(&self) -> impl Iterator<Item = &ComplianceCard> {
        std::iter::once(&self.project)
            .chain(self.data.iter())
            .chain(self.models.iter())
    }

    pub fn len(&self) -> usize {
        1 + self.data.len() + self.models.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn find(&self, card_id: &str) -> Option<&ComplianceCard> {
        self.cards().find(|c| c.card_id == card_id)
    }

    pub(crate) fn find_mut(&mut self, card_id: &str) -> Option<&mut ComplianceCard> {
        std::iter::once(&mut self.project)
            .chain(self.data.iter_mut())
            .chain(self.models.iter_mut())
            .find(|c| c.card_id == card_id)
    }

    /// Replaces the card with `card_id` by `replacement`, keeping its slot.
    pub(crate) fn replace(&mut self, card_id: &str, replacement: ComplianceCard) -> Result<(), CardSetError> {
        if let Some(slot) = self.find_mut(card_id) {
            *slot = replacement;
        }
        self.check()
    }

    pub(crate) fn remove(&mut self, card_id: &str) -> bool {
        let before = self.data.len() + self.models.len();
        self.data.retain(|c| c.card_id != card_id);
        self.models.retain(|c| c.card_id != card_id);
        before != self.data.len() + self.models.len()
    }

    pub(crate) fn push(&mut self, card: ComplianceCard) -> Result<(), CardSetError> {
        match card.kind {
            CardKind::Data => self.data.push(card),
            CardKind::Model => self.models.push(card),
            CardKind::Project => {
                return Err(CardSetError::WrongKind {
                    card_id: card.card_id,
                    expected: CardKind::Data,
                    found: CardKind::Project,
                })
            }
        }
        self.check()
    }
}
