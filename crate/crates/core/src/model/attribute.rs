use std::borrow::Borrow;
use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize};

use super::{ArticleRef, AttributeValue, CardKind, TriState};

/// Dotted-path attribute identifier: lowercase segments of `[a-z0-9_]`
/// joined by `.`, e.g. `data_governance.bias_examined`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct AttributeId(String);

impl AttributeId {
    pub fn new(id: impl Into<String>) -> Option<AttributeId> {
        let id = id.into();
        Self::is_valid(&id).then_some(AttributeId(id))
    }

    pub fn is_valid(id: &str) -> bool {
        !id.is_empty()
            && id.split('.').all(|seg| {
                !seg.is_empty()
                    && seg
                        .bytes()
                        .all(|b| b.is_ascii_lowercase() || b.is_ascii_digit() || b == b'_')
            })
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// The first path segment, which names the attribute's category group.
    pub fn group(&self) -> &str {
        self.0.split('.').next().unwrap_or(&self.0)
    }
}

impl fmt::Display for AttributeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl Borrow<str> for AttributeId {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl<'de> Deserialize<'de> for AttributeId {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        AttributeId::new(s.clone()).ok_or_else(|| {
            serde::de::Error::custom(format!(
                "invalid attribute id `{s}` (lowercase dotted path of [a-z0-9_] segments)"
            ))
        })
    }
}

/// Token vocabulary for choice and tag-set domains. Declaration order is kept
/// for display; membership is what matters for validation.
pub type Vocabulary = Vec<String>;

pub(crate) fn is_token(s: &str) -> bool {
    !s.is_empty()
        && s
            .bytes()
            .all(|b| b.is_ascii_lowercase() || b.is_ascii_digit() || b == b'_')
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Domain {
    Flag,
    Level,
    Choice { vocabulary: Vocabulary },
    TagSet { vocabulary: Vocabulary },
}

impl Domain {
    pub fn name(&self) -> &'static str {
        match self {
            Domain::Flag => "flag",
            Domain::Level => "level",
            Domain::Choice { .. } => "choice",
            Domain::TagSet { .. } => "tag_set",
        }
    }

    pub fn vocabulary(&self) -> Option<&[String]> {
        match self {
            Domain::Choice { vocabulary } | Domain::TagSet { vocabulary } => Some(vocabulary),
            _ => None,
        }
    }

    /// Whether `value` is a member of this domain. `Unanswered` belongs to every domain.
    pub fn admits(&self, value: &AttributeValue) -> bool {
        match (self, value) {
            (_, AttributeValue::Unanswered) => true,
            (Domain::Flag, AttributeValue::Flag(_)) => true,
            (Domain::Level, AttributeValue::Level(_)) => true,
            (Domain::Choice { vocabulary }, AttributeValue::Choice(t)) => vocabulary.contains(t),
            (Domain::TagSet { vocabulary }, AttributeValue::TagSet(tags)) => {
                tags.iter().all(|t| vocabulary.contains(t))
            }
            _ => false,
        }
    }

    /// Every value of the domain plus `Unanswered`. Tag sets enumerate the
    /// power set, so this is only practical for small vocabularies.
    pub fn enumerate(&self) -> Vec<AttributeValue> {
        let mut out = vec![AttributeValue::Unanswered];
        match self {
            Domain::Flag => out.extend([AttributeValue::Flag(false), AttributeValue::Flag(true)]),
            Domain::Level => out.extend(super::Level::all().map(AttributeValue::Level)),
            Domain::Choice { vocabulary } => {
                out.extend(vocabulary.iter().cloned().map(AttributeValue::Choice))
            }
            Domain::TagSet { vocabulary } => {
                let n = vocabulary.len().min(16);
                for mask in 0u32..(1 << n) {
                    let set: BTreeSet<String> = (0..n)
                        .filter(|i| mask & (1 << i) != 0)
                        .map(|i| vocabulary[i].clone())
                        .collect();
                    out.push(AttributeValue::TagSet(set));
                }
            }
        }
        out
    }
}

/// How an attribute value counts towards satisfying a requirement.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum SatisfactionRule {
    MustBeTrue,
    LevelAtLeast { threshold: u8 },
    ChoiceIn { accepted: Vec<String> },
    TagSetNonEmpty,
    AlwaysInformational,
}

impl SatisfactionRule {
    pub const DEFAULT_LEVEL_THRESHOLD: u8 = 3;

    pub fn compatible_with(&self, domain: &Domain) -> bool {
        match (self, domain) {
            (SatisfactionRule::AlwaysInformational, _) => true,
            (SatisfactionRule::MustBeTrue, Domain::Flag) => true,
            (SatisfactionRule::LevelAtLeast { threshold }, Domain::Level) => {
                *threshold <= super::Level::MAX
            }
            (SatisfactionRule::ChoiceIn { accepted }, Domain::Choice { vocabulary }) => {
                !accepted.is_empty() && accepted.iter().all(|t| vocabulary.contains(t))
            }
            (SatisfactionRule::TagSetNonEmpty, Domain::TagSet { .. }) => true,
            _ => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttributeDefinition {
    pub id: AttributeId,
    /// Table row this attribute belongs to.
    pub category: String,
    pub card_kinds: BTreeSet<CardKind>,
    pub domain: Domain,
    pub satisfaction: SatisfactionRule,
    #[serde(default)]
    pub dispositive: bool,
    pub articles: Vec<ArticleRef>,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub question: String,
}

impl AttributeDefinition {
    pub fn applies_to(&self, kind: CardKind) -> bool {
        self.card_kinds.contains(&kind)
    }
}

/// Value/domain type mismatch handed to [`satisfaction`]. Validation upstream
/// is expected to make this unreachable.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("value `{value}` is not compatible with the {domain} domain of `{attribute}`")]
pub struct TypeMismatch {
    pub attribute: AttributeId,
    pub domain: &'static str,
    pub value: String,
}

/// Evaluates `value` against the definition's satisfaction rule.
pub fn satisfaction(
    def: &AttributeDefinition,
    value: &AttributeValue,
) -> Result<TriState, TypeMismatch> {
    use AttributeValue as V;
    use SatisfactionRule as R;

    let mismatch = || TypeMismatch {
        attribute: def.id.clone(),
        domain: def.domain.name(),
        value: value.to_string(),
    };
    if !def.domain.admits(value) {
        return Err(mismatch());
    }
    let verdict = |ok: bool| if ok { TriState::Satisfied } else { TriState::Unsatisfied };
    Ok(match (&def.satisfaction, value) {
        (R::AlwaysInformational, _) => TriState::Satisfied,
        (_, V::Unanswered) => TriState::Unknown,
        (R::MustBeTrue, V::Flag(b)) => verdict(*b),
        (R::LevelAtLeast { threshold }, V::Level(l)) => verdict(l.get() >= *threshold),
        (R::ChoiceIn { accepted }, V::Choice(t)) => verdict(accepted.contains(t)),
        (R::TagSetNonEmpty, V::TagSet(tags)) => verdict(!tags.is_empty()),
        _ => return Err(mismatch()),
    })
}
