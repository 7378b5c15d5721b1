//! Card, attribute and value-domain types.

mod article;
mod attribute;
mod card;
mod registry;

pub use article::{ArticleRef, ArticleRefParseError};
pub use attribute::{
    satisfaction, AttributeDefinition, AttributeId, Domain, SatisfactionRule, Vocabulary,
};
pub use card::{CardSet, CardSetError, ComplianceCard};
pub use registry::{baseline_registry, AttributeRegistry, RegistryError, RegistryFile, RegistryMode};

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::de::{self, Deserializer, SeqAccess, Visitor};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

/// The three card types.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CardKind {
    Project,
    Data,
    Model,
}

impl CardKind {
    pub const ALL: [CardKind; 3] = [CardKind::Project, CardKind::Data, CardKind::Model];

    pub fn as_str(self) -> &'static str {
        match self {
            CardKind::Project => "project",
            CardKind::Data => "data",
            CardKind::Model => "model",
        }
    }
}

impl fmt::Display for CardKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CardKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "project" => Ok(CardKind::Project),
            "data" => Ok(CardKind::Data),
            "model" => Ok(CardKind::Model),
            other => Err(format!("unknown card kind `{other}` (expected project, data or model)")),
        }
    }
}

/// A confidence grade in `0..=4`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Level(u8);

impl Level {
    pub const MAX: u8 = 4;

    pub fn new(value: i64) -> Option<Level> {
        u8::try_from(value).ok().filter(|v| *v <= Self::MAX).map(Level)
    }

    pub fn get(self) -> u8 {
        self.0
    }

    pub fn all() -> impl Iterator<Item = Level> {
        (0..=Self::MAX).map(Level)
    }
}

/// A quantized attribute value.
///
/// In card documents and on the wire a value is written as a plain scalar:
/// `true`/`false` for flags, an integer for levels, a token string for
/// choices, a list of tokens for tag sets and `null` (or absence) for
/// unanswered.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub enum AttributeValue {
    Flag(bool),
    Level(Level),
    Choice(String),
    TagSet(BTreeSet<String>),
    #[default]
    Unanswered,
}

impl AttributeValue {
    pub fn is_unanswered(&self) -> bool {
        matches!(self, AttributeValue::Unanswered)
    }

    pub fn tags<I, S>(tags: I) -> AttributeValue
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        AttributeValue::TagSet(tags.into_iter().map(Into::into).collect())
    }

    pub fn choice(token: impl Into<String>) -> AttributeValue {
        AttributeValue::Choice(token.into())
    }

    pub fn level(value: u8) -> AttributeValue {
        AttributeValue::Level(Level::new(value.into()).expect("level out of range"))
    }
}

impl fmt::Display for AttributeValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AttributeValue::Flag(b) => write!(f, "{b}"),
            AttributeValue::Level(l) => write!(f, "{}", l.get()),
            AttributeValue::Choice(t) => f.write_str(t),
            AttributeValue::TagSet(tags) => {
                f.write_str("[")?;
                for (i, t) in tags.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    f.write_str(t)?;
                }
                f.write_str("]")
            }
            AttributeValue::Unanswered => f.write_str("unanswered"),
        }
    }
}

impl Serialize for AttributeValue {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            AttributeValue::Flag(b) => serializer.serialize_bool(*b),
            AttributeValue::Level(l) => serializer.serialize_u8(l.get()),
            AttributeValue::Choice(t) => serializer.serialize_str(t),
            AttributeValue::TagSet(tags) => {
                let mut seq = serializer.serialize_seq(Some(tags.len()))?;
                for t in tags {
                    seq.serialize_element(t)?;
                }
                seq.end()
            }
            AttributeValue::Unanswered => serializer.serialize_unit(),
        }
    }
}

impl<'de> Deserialize<'de> for AttributeValue {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct ValueVisitor;

        impl<'de> Visitor<'de> for ValueVisitor {
            type Value = AttributeValue;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a boolean, a level 0..=4, a token, a list of tokens or null")
            }

            fn visit_bool<E: de::Error>(self, v: bool) -> Result<Self::Value, E> {
                Ok(AttributeValue::Flag(v))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Self::Value, E> {
                Level::new(v)
                    .map(AttributeValue::Level)
                    .ok_or_else(|| E::custom(format!("level {v} outside 0..=4")))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Self::Value, E> {
                self.visit_i64(i64::try_from(v).unwrap_or(i64::MAX))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Self::Value, E> {
                Ok(AttributeValue::Choice(v.to_owned()))
            }

            fn visit_unit<E: de::Error>(self) -> Result<Self::Value, E> {
                Ok(AttributeValue::Unanswered)
            }

            fn visit_none<E: de::Error>(self) -> Result<Self::Value, E> {
                Ok(AttributeValue::Unanswered)
            }

            fn visit_some<D: Deserializer<'de>>(self, d: D) -> Result<Self::Value, D::Error> {
                AttributeValue::deserialize(d)
            }

            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<Self::Value, A::Error> {
                let mut tags = BTreeSet::new();
                while let Some(t) = seq.next_element::<String>()? {
                    tags.insert(t);
                }
                Ok(AttributeValue::TagSet(tags))
            }
        }

        deserializer.deserialize_any(ValueVisitor)
    }
}

/// Per-attribute satisfaction outcome. Ordered `Unsatisfied < Unknown < Satisfied`
/// so that aggregation is a minimum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TriState {
    Unsatisfied,
    Unknown,
    Satisfied,
}

impl TriState {
    /// Folds states by minimum; an empty input is vacuously satisfied.
    pub fn all<I: IntoIterator<Item = TriState>>(states: I) -> TriState {
        states.into_iter().min().unwrap_or(TriState::Satisfied)
    }
}

impl fmt::Display for TriState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TriState::Unsatisfied => "unsatisfied",
            TriState::Unknown => "unknown",
            TriState::Satisfied => "satisfied",
        })
    }
}
