use std::collections::HashSet;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::label::Applicability;
use crate::model::{ArticleRef, AttributeId, AttributeRegistry, CardKind, Domain};

const BUNDLED_RULES: &str = include_str!("../../data/rules.yaml");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckScope {
    ForProject,
    ForEachData,
    ForEachModel,
    CrossCard,
}

impl CheckScope {
    pub fn card_kind(self) -> Option<CardKind> {
        match self {
            CheckScope::ForProject => Some(CardKind::Project),
            CheckScope::ForEachData => Some(CardKind::Data),
            CheckScope::ForEachModel => Some(CardKind::Model),
            CheckScope::CrossCard => None,
        }
    }
}

/// Checks that need more than one attribute's satisfaction rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Builtin {
    /// Every component is intended for general purposes or for (at least)
    /// all of the project's intended purposes.
    PurposeCompatible,
    /// The project's `prohibited_practices` is answered and empty.
    NoProhibitedPractices,
    /// Classification did not have to assume any unanswered dispositive value.
    ClassificationComplete,
}

impl Builtin {
    pub fn as_str(self) -> &'static str {
        match self {
            Builtin::PurposeCompatible => "purpose_compatible",
            Builtin::NoProhibitedPractices => "no_prohibited_practices",
            Builtin::ClassificationComplete => "classification_complete",
        }
    }

    pub fn scope(self) -> CheckScope {
        match self {
            Builtin::PurposeCompatible => CheckScope::CrossCard,
            Builtin::NoProhibitedPractices | Builtin::ClassificationComplete => CheckScope::ForProject,
        }
    }
}

impl fmt::Display for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckTarget {
    Attribute(AttributeId),
    Builtin(Builtin),
}

impl fmt::Display for CheckTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CheckTarget::Attribute(id) => write!(f, "{id}"),
            CheckTarget::Builtin(b) => write!(f, "builtin:{b}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Check {
    pub scope: CheckScope,
    #[serde(flatten)]
    pub target: CheckTarget,
}

impl Check {
    pub fn attribute(scope: CheckScope, id: &str) -> Check {
        Check {
            scope,
            target: CheckTarget::Attribute(AttributeId::new(id).expect("invalid attribute id")),
        }
    }

    pub fn builtin(builtin: Builtin) -> Check {
        Check {
            scope: builtin.scope(),
            target: CheckTarget::Builtin(builtin),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Requirement {
    pub id: String,
    pub title: String,
    pub articles: Vec<ArticleRef>,
    pub applies_to: Applicability,
    pub checks: Vec<Check>,
    #[serde(default = "enabled_default", skip_serializing_if = "is_true")]
    pub enabled: bool,
}

fn enabled_default() -> bool {
    true
}

fn is_true(b: &bool) -> bool {
    *b
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RuleTableError {
    #[error("rule table document is malformed: {0}")]
    Parse(String),
    #[error("cannot read rule table {path}: {message}")]
    Io { path: String, message: String },
    #[error("requirement id `{0}` is not of the form R-[A-Z0-9-]+")]
    BadId(String),
    #[error("requirement `{0}` is defined more than once")]
    DuplicateId(String),
    #[error("requirement `{0}` has no checks")]
    NoChecks(String),
    #[error("requirement `{0}` cites no provisions")]
    NoArticles(String),
    #[error("requirement `{requirement}` references attribute `{attribute}` which the registry does not define")]
    UnknownAttribute { requirement: String, attribute: String },
    #[error("requirement `{requirement}`: attribute `{attribute}` does not apply to the cards its {scope:?} scope visits")]
    ScopeMismatch {
        requirement: String,
        attribute: String,
        scope: CheckScope,
    },
    #[error("requirement `{requirement}`: builtin `{builtin}` must use scope {expected:?}")]
    BuiltinScope {
        requirement: String,
        builtin: Builtin,
        expected: CheckScope,
    },
    #[error("requirement `{requirement}`: builtin `{builtin}` needs registry attribute `{attribute}` ({need})")]
    BuiltinPrerequisite {
        requirement: String,
        builtin: Builtin,
        attribute: &'static str,
        need: &'static str,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RuleTable {
    pub version: String,
    pub requirements: Vec<Requirement>,
}

impl RuleTable {
    /// Parses a rule table and checks it against `registry`.
    pub fn from_yaml(text: &str, registry: &AttributeRegistry) -> Result<RuleTable, RuleTableError> {
        let table: RuleTable =
            serde_yaml::from_str(text).map_err(|e| RuleTableError::Parse(e.to_string()))?;
        table.check_against(registry)?;
        Ok(table)
    }

    pub fn load(path: &Path, registry: &AttributeRegistry) -> Result<RuleTable, RuleTableError> {
        let text = std::fs::read_to_string(path).map_err(|e| RuleTableError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        RuleTable::from_yaml(&text, registry)
    }

    /// The bundled table, checked against `registry`.
    pub fn bundled(registry: &AttributeRegistry) -> Result<RuleTable, RuleTableError> {
        RuleTable::from_yaml(BUNDLED_RULES, registry)
    }

    pub fn active(&self) -> impl Iterator<Item = &Requirement> {
        self.requirements.iter().filter(|r| r.enabled)
    }

    pub fn get(&self, id: &str) -> Option<&Requirement> {
        self.requirements.iter().find(|r| r.id == id)
    }

    /// Static validation: ids, checks, attribute resolution and scope fit.
    pub fn check_against(&self, registry: &AttributeRegistry) -> Result<(), RuleTableError> {
        let mut ids = HashSet::new();
        for req in &self.requirements {
            let rid = || req.id.clone();
            let well_formed = req
                .id
                .strip_prefix("R-")
                .is_some_and(|rest| !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_uppercase() || b.is_ascii_digit() || b == b'-'));
            if !well_formed {
                return Err(RuleTableError::BadId(rid()));
            }
            if !ids.insert(req.id.as_str()) {
                return Err(RuleTableError::DuplicateId(rid()));
            }
            if req.checks.is_empty() {
                return Err(RuleTableError::NoChecks(rid()));
            }
            if req.articles.is_empty() {
                return Err(RuleTableError::NoArticles(rid()));
            }
            for check in &req.checks {
                match &check.target {
                    CheckTarget::Attribute(attr) => {
                        let def = registry.lookup(attr.as_str()).ok_or_else(|| RuleTableError::UnknownAttribute {
                            requirement: rid(),
                            attribute: attr.to_string(),
                        })?;
                        let fits = check.scope.card_kind().is_some_and(|k| def.applies_to(k));
                        if !fits {
                            return Err(RuleTableError::ScopeMismatch {
                                requirement: rid(),
                                attribute: attr.to_string(),
                                scope: check.scope,
                            });
                        }
                    }
                    CheckTarget::Builtin(b) => {
                        if check.scope != b.scope() {
                            return Err(RuleTableError::BuiltinScope {
                                requirement: rid(),
                                builtin: *b,
                                expected: b.scope(),
                            });
                        }
                        check_builtin_prerequisites(&req.id, *b, registry)?;
                    }
                }
            }
        }
        Ok(())
    }
}

fn check_builtin_prerequisites(requirement: &str, builtin: Builtin, registry: &AttributeRegistry) -> Result<(), RuleTableError> {
    let need = |attribute: &'static str, need: &'static str, ok: &dyn Fn(&crate::model::AttributeDefinition) -> bool| {
        match registry.lookup(attribute) {
            Some(def) if ok(def) => Ok(()),
            _ => Err(RuleTableError::BuiltinPrerequisite {
                requirement: requirement.to_owned(),
                builtin,
                attribute,
                need,
            }),
        }
    };
    match builtin {
        Builtin::PurposeCompatible => need(
            super::eval::INTENDED_PURPOSE,
            "a tag_set on project, data and model cards containing `general_purpose`",
            &|def| {
                CardKind::ALL.iter().all(|k| def.applies_to(*k))
                    && matches!(&def.domain, Domain::TagSet { vocabulary } if vocabulary.iter().any(|t| t == super::eval::GENERAL_PURPOSE))
            },
        ),
        Builtin::NoProhibitedPractices => need(
            super::classify::PROHIBITED_PRACTICES,
            "a tag_set on project cards",
            &|def| def.applies_to(CardKind::Project) && matches!(def.domain, Domain::TagSet { .. }),
        ),
        Builtin::ClassificationComplete => Ok(()),
    }
}
